use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{capacity_decision_exact, CapacitatedTypedInstance, DecisionOutcome, Limits, MachineType};
use crate::model::{Instance, InstanceKind, Schedule};
use crate::objective::worst_case_makespan;
use crate::ptas::capacitated::{build_capacitated, build_capacitated_eptas, normalize_and_lift, LiftReport};
use crate::ptas::outline::{enumerate_outlines, enumerate_restricted_outlines, Outline, RestrictedOutline};
use crate::ptas::rounding::{check_epsilon, round_deviations, scale_to_threshold, threshold_set, RoundedInstance};
use crate::reduction::{binary_search_solve, DualOutcome, DualProcedure, SearchResult};
use crate::value::{Rational, Value};

/// Decides a capacitated typed instance: accept with loads within
/// `(1 + slack)` times the capacities, or reject when no schedule fits the
/// capacities exactly.
pub trait CapacitySolver: Sync {
    fn name(&self) -> &str;
    fn decide(&self, instance: &CapacitatedTypedInstance, slack: &Rational) -> Result<DecisionOutcome>;
}

/// [`capacity_decision_exact`] behind a job-count limit.
#[derive(Clone, Debug, Default)]
pub struct ExactCapacity {
    pub limits: Limits,
}

impl CapacitySolver for ExactCapacity {
    fn name(&self) -> &str {
        "exact"
    }

    fn decide(&self, instance: &CapacitatedTypedInstance, slack: &Rational) -> Result<DecisionOutcome> {
        if instance.job_count() > self.limits.max_search_jobs {
            return Err(Error::SizeLimit(format!(
                "{} jobs exceed the capacity search limit of {}",
                instance.job_count(),
                self.limits.max_search_jobs
            )));
        }
        Ok(capacity_decision_exact(instance, slack))
    }
}

/// Largest epsilon the schemes run with.
pub fn max_epsilon() -> Rational {
    Rational::new(1.into(), 5.into())
}

/// `min(epsilon, 1/5)`; errors unless `epsilon > 0`.
pub fn clamp_epsilon(epsilon: &Rational) -> Result<Rational> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidInput(format!("epsilon {epsilon} must be positive")));
    }
    Ok(epsilon.clone().min(max_epsilon()))
}

/// `(1+eps)^3 + eps`.
pub fn ptas_factor(epsilon: &Rational) -> Rational {
    let g = Rational::one() + epsilon;
    &g * &g * &g + epsilon
}

/// `(1+eps)(1+2eps)^2 + eps`.
pub fn eptas_factor(epsilon: &Rational) -> Rational {
    let two = Rational::one() + epsilon + epsilon;
    (Rational::one() + epsilon) * &two * &two + epsilon
}

/// Which outline produced an accepted schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// No deviations to round: a single classical machine type was used.
    Classical,
    Outline(Outline),
    Restricted(RestrictedOutline, LiftReport),
}

#[derive(Clone, Debug)]
pub struct StepReport {
    pub outcome: DualOutcome,
    pub witness: Option<Witness>,
    /// Outlines handed to the capacity solver.
    pub candidates: usize,
    /// Rounded instance the outlines refer to, when rounding happened.
    pub rounded: Option<RoundedInstance>,
}

struct Prepared {
    epsilon: Rational,
    scaled: Instance,
}

fn prepare(instance: &Instance, threshold: &Rational, epsilon: &Rational) -> Result<Prepared> {
    if instance.kind() != InstanceKind::Identical {
        return Err(Error::Unsupported("the approximation schemes need identical machines".into()));
    }
    let epsilon = clamp_epsilon(epsilon)?;
    check_epsilon(&epsilon)?;
    Ok(Prepared {
        scaled: scale_to_threshold(instance, threshold)?,
        epsilon,
    })
}

/// Without deviations only nominal times matter: one machine type of
/// capacity 1 on the scaled instance.
fn classical_step<S: CapacitySolver + ?Sized>(
    instance: &Instance,
    prepared: &Prepared,
    solver: &S,
    factor: &Rational,
    threshold: &Rational,
) -> Result<StepReport> {
    let jobs = prepared.scaled.jobs().expect("identical");
    let times = jobs
        .iter()
        .map(|j| {
            let extra = if instance.gamma() > 0 { j.p_hat.clone() } else { Rational::zero() };
            Value::Finite(&j.p_bar + extra)
        })
        .collect();
    let cti = CapacitatedTypedInstance::new(
        jobs.len(),
        vec![MachineType {
            count: prepared.scaled.machine_count(),
            capacity: Rational::one(),
            times,
        }],
    )?;
    let outcome = match solver.decide(&cti, &prepared.epsilon)? {
        DecisionOutcome::RejectCertified => DualOutcome::Reject,
        DecisionOutcome::Accept(ts) => {
            if !cti.within(&ts, &prepared.epsilon) {
                return Err(Error::ContractViolation(format!("solver {} broke its slack", solver.name())));
            }
            let schedule = Schedule::new(ts.assignment);
            check_value(instance, &schedule, factor, threshold)?;
            DualOutcome::Accept(schedule)
        }
    };
    let accepted = outcome.is_accept();
    Ok(StepReport {
        outcome,
        witness: accepted.then_some(Witness::Classical),
        candidates: 1,
        rounded: None,
    })
}

fn check_value(instance: &Instance, schedule: &Schedule, factor: &Rational, threshold: &Rational) -> Result<()> {
    let value = worst_case_makespan(instance, schedule)?;
    let bound = Value::Finite(factor * threshold);
    if value > bound {
        return Err(Error::ContractViolation(format!("accepted schedule costs {value}, above {bound}")));
    }
    Ok(())
}

fn no_deviation(instance: &Instance) -> bool {
    instance.gamma() == 0 || instance.has_no_deviation()
}

/// Thresholds that can occur on this rounded instance.
fn relevant_thresholds(rounded: &RoundedInstance, epsilon: &Rational) -> Result<crate::ptas::ThresholdSet> {
    let deviations: Vec<Rational> = (0..rounded.instance().job_count())
        .map(|j| rounded.rounded_deviation(j).clone())
        .collect();
    Ok(threshold_set(epsilon, rounded.gamma())?.restricted_to(&deviations))
}

/// PTAS dual step on identical machines.
///
/// Scales by `T`, rounds deviations, and tries every outline over the
/// threshold set. All rejections certify `OPT > T`; an accepted schedule is
/// re-evaluated on the original instance and must cost at most
/// `((1+eps)^3 + eps) * T`. `epsilon` is clamped to `1/5`.
pub fn ptas_dual_step<S: CapacitySolver + ?Sized>(
    instance: &Instance,
    threshold: &Rational,
    epsilon: &Rational,
    solver: &S,
) -> Result<StepReport> {
    let prepared = prepare(instance, threshold, epsilon)?;
    let eps = &prepared.epsilon;
    let factor = ptas_factor(eps);
    if no_deviation(instance) {
        return classical_step(instance, &prepared, solver, &factor, threshold);
    }
    let rounded = round_deviations(&prepared.scaled, eps)?;
    let delta = relevant_thresholds(&rounded, eps)?;
    let outlines: Vec<Outline> = enumerate_outlines(instance.machine_count(), &delta).collect();
    let found = outlines
        .par_iter()
        .map(|outline| -> Result<Option<(Outline, Schedule)>> {
            let cti = build_capacitated(&rounded, outline, eps)?;
            match solver.decide(&cti, eps)? {
                DecisionOutcome::RejectCertified => Ok(None),
                DecisionOutcome::Accept(ts) => {
                    if !cti.within(&ts, eps) {
                        return Err(Error::ContractViolation(format!("solver {} broke its slack", solver.name())));
                    }
                    // typed machines are numbered threshold by threshold, like real ones
                    Ok(Some((outline.clone(), Schedule::new(ts.assignment))))
                }
            }
        })
        .find_map_first(|r| r.transpose());
    let candidates = outlines.len();
    let (outcome, witness) = match found.transpose()? {
        None => (DualOutcome::Reject, None),
        Some((outline, schedule)) => {
            check_value(instance, &schedule, &factor, threshold)?;
            (DualOutcome::Accept(schedule), Some(Witness::Outline(outline)))
        }
    };
    Ok(StepReport {
        outcome,
        witness,
        candidates,
        rounded: Some(rounded),
    })
}

/// EPTAS dual step: like [`ptas_dual_step`] over restricted outlines, with
/// cloned machines and dummy jobs, and [`normalize_and_lift`] on accept.
/// Accepted schedules cost at most `((1+eps)(1+2eps)^2 + eps) * T`.
pub fn eptas_dual_step<S: CapacitySolver + ?Sized>(
    instance: &Instance,
    threshold: &Rational,
    epsilon: &Rational,
    solver: &S,
) -> Result<StepReport> {
    let prepared = prepare(instance, threshold, epsilon)?;
    let eps = &prepared.epsilon;
    let factor = eptas_factor(eps);
    if no_deviation(instance) {
        return classical_step(instance, &prepared, solver, &factor, threshold);
    }
    let rounded = round_deviations(&prepared.scaled, eps)?;
    let delta = relevant_thresholds(&rounded, eps)?;
    let outlines = enumerate_restricted_outlines(instance.machine_count(), &delta);
    let found = outlines
        .par_iter()
        .map(|outline| -> Result<Option<(RestrictedOutline, Schedule, LiftReport)>> {
            let eptas = build_capacitated_eptas(&rounded, outline, eps)?;
            match solver.decide(&eptas.cti, eps)? {
                DecisionOutcome::RejectCertified => Ok(None),
                DecisionOutcome::Accept(ts) => {
                    let (schedule, report) = normalize_and_lift(&ts, &eptas, eps)?;
                    Ok(Some((outline.clone(), schedule, report)))
                }
            }
        })
        .find_map_first(|r| r.transpose());
    let candidates = outlines.len();
    let (outcome, witness) = match found.transpose()? {
        None => (DualOutcome::Reject, None),
        Some((outline, schedule, report)) => {
            let two = Rational::one() + eps + eps;
            let rounded_cost = worst_case_makespan(rounded.instance(), &schedule)?;
            if rounded_cost > Value::Finite(&two * &two) {
                return Err(Error::ContractViolation(format!(
                    "lifted schedule costs {rounded_cost} on the rounded instance"
                )));
            }
            check_value(instance, &schedule, &factor, threshold)?;
            (DualOutcome::Accept(schedule), Some(Witness::Restricted(outline, report)))
        }
    };
    Ok(StepReport {
        outcome,
        witness,
        candidates,
        rounded: Some(rounded),
    })
}

/// The PTAS dual step as a [`DualProcedure`].
#[derive(Clone, Debug)]
pub struct PtasDual<S = ExactCapacity> {
    pub epsilon: Rational,
    pub solver: S,
}

/// The EPTAS dual step as a [`DualProcedure`].
#[derive(Clone, Debug)]
pub struct EptasDual<S = ExactCapacity> {
    pub epsilon: Rational,
    pub solver: S,
}

impl<S: CapacitySolver> DualProcedure for PtasDual<S> {
    fn name(&self) -> String {
        format!("ptas[{}]", self.solver.name())
    }

    fn accept_factor(&self) -> Rational {
        ptas_factor(&self.epsilon.clone().min(max_epsilon()))
    }

    fn step(&self, instance: &Instance, threshold: &Rational) -> Result<DualOutcome> {
        Ok(ptas_dual_step(instance, threshold, &self.epsilon, &self.solver)?.outcome)
    }
}

impl<S: CapacitySolver> DualProcedure for EptasDual<S> {
    fn name(&self) -> String {
        format!("eptas[{}]", self.solver.name())
    }

    fn accept_factor(&self) -> Rational {
        eptas_factor(&self.epsilon.clone().min(max_epsilon()))
    }

    fn step(&self, instance: &Instance, threshold: &Rational) -> Result<DualOutcome> {
        Ok(eptas_dual_step(instance, threshold, &self.epsilon, &self.solver)?.outcome)
    }
}

/// Geometric search with the PTAS dual step and the exact capacity solver.
pub fn solve_ptas(instance: &Instance, epsilon: &Rational, delta: &Rational, limits: &Limits) -> Result<SearchResult> {
    clamp_epsilon(epsilon)?;
    let procedure = PtasDual {
        epsilon: epsilon.clone(),
        solver: ExactCapacity { limits: *limits },
    };
    binary_search_solve(instance, &procedure, delta)
}

/// Geometric search with the EPTAS dual step and the exact capacity solver.
pub fn solve_eptas(instance: &Instance, epsilon: &Rational, delta: &Rational, limits: &Limits) -> Result<SearchResult> {
    clamp_epsilon(epsilon)?;
    let procedure = EptasDual {
        epsilon: epsilon.clone(),
        solver: ExactCapacity { limits: *limits },
    };
    binary_search_solve(instance, &procedure, delta)
}
