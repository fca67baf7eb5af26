//! Approximation schemes for identical machines.
//!
//! For a threshold `T` the instance is scaled so that `T = 1`, deviations
//! are rounded down onto a geometric grid, and every machine is given a
//! threshold below which its jobs do not deviate. Each guess of how many
//! machines carry which threshold (an outline) yields a capacitated typed
//! instance; the exact capacity solver decides it. The EPTAS variant guesses
//! only power-of-two machine counts and makes up for the difference with
//! cloned machines and dummy jobs.

mod capacitated;
mod dual;
mod outline;
mod rounding;

pub use capacitated::{
    build_capacitated, build_capacitated_eptas, capacity_for, normalize_and_lift, EptasInstance, LiftReport,
};
pub use dual::{
    clamp_epsilon, eptas_dual_step, eptas_factor, max_epsilon, ptas_dual_step, ptas_factor, solve_eptas, solve_ptas,
    CapacitySolver, EptasDual, ExactCapacity, PtasDual, StepReport, Witness,
};
pub use outline::{
    enumerate_outlines, enumerate_restricted_outlines, outline_of, Outline, OutlineIter, RestrictedOutline,
};
pub use rounding::{round_deviations, scale_to_threshold, threshold_set, RoundedInstance, ThresholdSet};
