//! Robust makespan minimization under budgeted uncertainty.
//!
//! Jobs have a nominal time `p_bar` and a deviation `p_hat`; after a schedule
//! is fixed an adversary lets at most `gamma` jobs take `p_bar + p_hat`. The
//! crate provides:
//!
//! - [`objective`]: exact evaluation of the worst-case makespan,
//! - [`exact`]: scenario enumeration, brute force and branch-and-bound optima,
//!   and an exact decision procedure for typed machines with capacities,
//! - [`reduction`]: the dual approximation that turns any `c`-approximation
//!   for classical unrelated-machine scheduling into a `(c+1)`-approximation,
//! - [`ptas`]: the outline-guessing approximation schemes for identical machines,
//! - [`hardness`]: 3-SAT gap instances with `gamma = 1`,
//! - [`gen`] and [`suite`]: seeded instance generators and an experiment runner.
//!
//! All arithmetic is exact ([`value::Value`]).

pub mod error;
pub mod exact;
pub mod gen;
pub mod hardness;
pub mod io;
pub mod model;
pub mod objective;
pub mod ptas;
pub mod reduction;
mod search;
pub mod suite;
pub mod value;

pub use error::{Error, Result};
pub use model::{Instance, InstanceKind, Job, Scenario, Schedule};
pub use objective::{gamma_set, scenario_makespan, validate, worst_case_load, worst_case_makespan, Violation};
pub use value::{Rational, Value};
