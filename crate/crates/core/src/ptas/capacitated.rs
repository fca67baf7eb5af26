use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{CapacitatedTypedInstance, MachineType, TypedSchedule};
use crate::model::Schedule;
use crate::ptas::outline::{Outline, RestrictedOutline};
use crate::ptas::rounding::RoundedInstance;
use crate::value::{Rational, Value};

/// `1 - gamma * l + eps`.
pub fn capacity_for(threshold: &Rational, gamma: usize, epsilon: &Rational) -> Rational {
    Rational::one() - Rational::from_integer(BigInt::from(gamma)) * threshold + epsilon
}

/// Times of every job on a machine with threshold `l`: `p_bar + p_hat1 - l`
/// when `p_hat1 >= l`, else `p_bar`.
fn times_for(rounded: &RoundedInstance, threshold: &Rational) -> Vec<Value> {
    rounded
        .instance()
        .jobs()
        .expect("identical")
        .iter()
        .map(|job| {
            if job.p_hat >= *threshold {
                Value::Finite(&job.p_bar + &job.p_hat - threshold)
            } else {
                Value::Finite(job.p_bar.clone())
            }
        })
        .collect()
}

fn machine_type(rounded: &RoundedInstance, threshold: &Rational, count: usize, epsilon: &Rational) -> MachineType {
    MachineType {
        count,
        capacity: capacity_for(threshold, rounded.gamma(), epsilon),
        times: times_for(rounded, threshold),
    }
}

/// One machine type per threshold of `outline`.
pub fn build_capacitated(
    rounded: &RoundedInstance,
    outline: &Outline,
    epsilon: &Rational,
) -> Result<CapacitatedTypedInstance> {
    if outline.machines() != rounded.instance().machine_count() {
        return Err(Error::InvalidInput("outline does not cover every machine".into()));
    }
    let types = outline
        .thresholds
        .iter()
        .zip(&outline.counts)
        .map(|(t, &c)| machine_type(rounded, t, c, epsilon))
        .collect();
    CapacitatedTypedInstance::new(rounded.instance().job_count(), types)
}

/// A restricted-outline instance: original types `0..k`, cloned types
/// `k..2k`, regular jobs `0..n` followed by the dummy jobs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EptasInstance {
    pub cti: CapacitatedTypedInstance,
    pub thresholds: Vec<Rational>,
    pub regular_jobs: usize,
    pub dummy_jobs: usize,
}

impl EptasInstance {
    pub fn is_clone_type(&self, ty: usize) -> bool {
        ty >= self.thresholds.len()
    }

    pub fn threshold_of_type(&self, ty: usize) -> &Rational {
        &self.thresholds[ty % self.thresholds.len()]
    }
}

/// Original and cloned machines for every threshold, plus `2m' - m` dummy
/// jobs that fill a cloned machine exactly and cannot run on originals.
pub fn build_capacitated_eptas(
    rounded: &RoundedInstance,
    outline: &RestrictedOutline,
    epsilon: &Rational,
) -> Result<EptasInstance> {
    let m = rounded.instance().machine_count();
    let total = outline.total();
    if 2 * total < m || total > m {
        return Err(Error::InvalidInput(format!("restricted outline sum {total} outside [m/2, m] for m = {m}")));
    }
    let n = rounded.instance().job_count();
    let dummies = 2 * total - m;
    let mut types: Vec<MachineType> = outline
        .thresholds
        .iter()
        .zip(&outline.counts)
        .map(|(t, &c)| {
            let mut ty = machine_type(rounded, t, c, epsilon);
            ty.times.extend(std::iter::repeat_n(Value::Forbidden, dummies));
            ty
        })
        .collect();
    let clones: Vec<MachineType> = types
        .iter()
        .map(|ty| {
            let mut clone = ty.clone();
            clone.times.truncate(n);
            clone
                .times
                .extend(std::iter::repeat_n(Value::Finite(ty.capacity.clone()), dummies));
            clone
        })
        .collect();
    types.extend(clones);
    Ok(EptasInstance {
        cti: CapacitatedTypedInstance::new(n + dummies, types)?,
        thresholds: outline.thresholds.clone(),
        regular_jobs: n,
        dummy_jobs: dummies,
    })
}

/// What [`normalize_and_lift`] did, for verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    /// Regular jobs moved off machines carrying a dummy job.
    pub moved_jobs: usize,
    /// Typed machine behind each real machine.
    pub kept_machines: Vec<usize>,
    /// Threshold of each real machine.
    pub thresholds: Vec<Rational>,
    /// Capacity of each real machine.
    pub capacities: Vec<Rational>,
    /// Typed load of each real machine after normalization.
    pub loads: Vec<Value>,
}

/// Turns a schedule of an [`EptasInstance`] into a schedule of the rounded
/// instance.
///
/// Regular jobs sharing a cloned machine with a dummy job move to an
/// original machine of the same threshold, each original receiving at most
/// one such group (the least loaded first). Machines with a dummy job are
/// then dropped and the remaining `m` machines numbered in typed order.
/// Fails when the input exceeds `(1+eps) * c` somewhere, a dummy job sits
/// on an original, or the result would exceed `(1+2eps) * c`.
pub fn normalize_and_lift(
    typed: &TypedSchedule,
    eptas: &EptasInstance,
    epsilon: &Rational,
) -> Result<(Schedule, LiftReport)> {
    let cti = &eptas.cti;
    let types = cti.machine_types();
    let total_jobs = eptas.regular_jobs + eptas.dummy_jobs;
    if typed.assignment.len() != total_jobs || typed.assignment.iter().any(|&i| i >= types.len()) {
        return Err(Error::ContractViolation("typed schedule does not match the instance".into()));
    }
    if !cti.within(typed, epsilon) {
        return Err(Error::ContractViolation("typed schedule exceeds (1+eps) capacity".into()));
    }
    let mut dummy_on = vec![0usize; types.len()];
    for &i in &typed.assignment[eptas.regular_jobs..] {
        if !eptas.is_clone_type(types[i]) {
            return Err(Error::ContractViolation(format!("dummy job on original machine {i}")));
        }
        dummy_on[i] += 1;
    }
    if dummy_on.iter().any(|&d| d > 1) {
        return Err(Error::ContractViolation("two dummy jobs share a machine".into()));
    }

    let mut assignment = typed.assignment[..eptas.regular_jobs].to_vec();
    let mut loads = cti.loads(&TypedSchedule {
        assignment: assignment.clone(),
    });
    let mut receivers_used = vec![false; types.len()];
    let mut moved_jobs = 0;
    for source in 0..types.len() {
        if dummy_on[source] == 0 {
            continue;
        }
        let moving: Vec<usize> = (0..assignment.len()).filter(|&j| assignment[j] == source).collect();
        if moving.is_empty() {
            continue;
        }
        let original = types[source] - eptas.thresholds.len();
        let target = (0..types.len())
            .filter(|&i| types[i] == original && !receivers_used[i])
            .min_by(|&a, &b| loads[a].cmp(&loads[b]).then(a.cmp(&b)))
            .ok_or_else(|| Error::ContractViolation(format!("no free original machine for clone {source}")))?;
        receivers_used[target] = true;
        let shifted = std::mem::take(&mut loads[source]);
        loads[target] += &shifted;
        for &j in &moving {
            assignment[j] = target;
        }
        moved_jobs += moving.len();
    }

    let kept: Vec<usize> = (0..types.len()).filter(|&i| dummy_on[i] == 0).collect();
    let m = kept.len();
    let expected = cti.machine_count() - eptas.dummy_jobs;
    if m != expected {
        return Err(Error::ContractViolation(format!("{m} machines remain, expected {expected}")));
    }
    let bound = Rational::one() + epsilon * Rational::from_integer(2.into());
    let mut real = vec![usize::MAX; types.len()];
    for (r, &i) in kept.iter().enumerate() {
        real[i] = r;
        if loads[i] > Value::Finite(cti.capacity_of(i) * &bound) {
            return Err(Error::ContractViolation(format!("machine {i} exceeds (1+2eps) capacity after moves")));
        }
    }
    let schedule = Schedule::new(assignment.iter().map(|&i| real[i]).collect());
    if schedule.assignment.contains(&usize::MAX) {
        return Err(Error::ContractViolation("regular job left on a dropped machine".into()));
    }
    let report = LiftReport {
        moved_jobs,
        thresholds: kept.iter().map(|&i| eptas.threshold_of_type(types[i]).clone()).collect(),
        capacities: kept.iter().map(|&i| cti.capacity_of(i).clone()).collect(),
        loads: kept.iter().map(|&i| loads[i].clone()).collect(),
        kept_machines: kept,
    };
    Ok((schedule, report))
}
