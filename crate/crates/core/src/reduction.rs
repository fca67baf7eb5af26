//! Dual approximation through classical unrelated-machine scheduling.
//!
//! For a threshold `T`, a job whose deviation on machine `i` exceeds
//! `T / gamma` is charged its full deviated time there; every other job is
//! charged its nominal time. Any classical schedule of makespan `M` on this
//! instance has robust cost at most `M + T`, and an optimal robust schedule
//! of cost at most `T` has classical makespan at most `T`. A classical
//! subroutine with guarantee `c` therefore yields a robust `(c+1)`
//! dual step, which [`binary_search_solve`] turns into an approximation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{greedy_schedule, Limits};
use crate::model::{Instance, InstanceKind, Schedule};
use crate::objective::worst_case_makespan;
use crate::search::{Grid, PackingProblem, Weight};
use crate::value::{rational_to_f64, simplest_between, Rational, Value};

/// Classical (deviation-free) instance over the same jobs and machines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalInstance {
    structure: InstanceKind,
    /// `[machine][job]`.
    times: Vec<Vec<Value>>,
}

impl ClassicalInstance {
    pub fn new(structure: InstanceKind, times: Vec<Vec<Value>>) -> Result<Self> {
        if times.is_empty() || times[0].is_empty() {
            return Err(Error::InvalidInput("classical instance needs machines and jobs".into()));
        }
        let n = times[0].len();
        if times.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput("ragged processing matrix".into()));
        }
        if structure == InstanceKind::Identical && times.iter().any(|row| row != &times[0]) {
            return Err(Error::InvalidInput("identical machines need equal rows".into()));
        }
        Ok(ClassicalInstance { structure, times })
    }

    pub fn structure(&self) -> InstanceKind {
        self.structure
    }

    pub fn machine_count(&self) -> usize {
        self.times.len()
    }

    pub fn job_count(&self) -> usize {
        self.times[0].len()
    }

    pub fn time(&self, machine: usize, job: usize) -> &Value {
        &self.times[machine][job]
    }

    pub fn times(&self) -> &[Vec<Value>] {
        &self.times
    }

    /// Classical makespan; `Forbidden` if a job sits on a forbidden machine.
    pub fn makespan(&self, schedule: &Schedule) -> Result<Value> {
        if schedule.job_count() != self.job_count() {
            return Err(Error::InvalidSchedule("assignment length differs from job count".into()));
        }
        let mut loads = vec![Value::zero(); self.machine_count()];
        for (j, &i) in schedule.assignment.iter().enumerate() {
            if i >= loads.len() {
                return Err(Error::InvalidSchedule(format!("job {j} on unknown machine {i}")));
            }
            loads[i] += &self.times[i][j];
        }
        Ok(loads.into_iter().max().unwrap_or_else(Value::zero))
    }
}

/// `p_ij = p_bar_ij + p_hat_ij` when `p_hat_ij > T / gamma`, else `p_bar_ij`.
///
/// With `gamma = 0` the nominal times are returned unchanged. Identical
/// machines stay identical. A uniform source stays uniform exactly when the
/// threshold splits no job between fast and slow machines; otherwise the
/// result is tagged unrelated.
pub fn build_classical(instance: &Instance, threshold: &Rational) -> ClassicalInstance {
    let gamma = instance.gamma();
    let (m, n) = (instance.machine_count(), instance.job_count());
    let cut = (gamma > 0).then(|| Value::Finite(threshold / Rational::from_integer(BigInt::from(gamma))));
    let mut big = vec![vec![false; n]; m];
    let times: Vec<Vec<Value>> = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let nominal = instance.nominal(i, j);
                    let deviation = instance.deviation(i, j);
                    if deviation.is_forbidden() {
                        return Value::Forbidden;
                    }
                    match &cut {
                        Some(cut) if deviation > *cut => {
                            big[i][j] = true;
                            &nominal + &deviation
                        }
                        _ => nominal,
                    }
                })
                .collect()
        })
        .collect();
    let structure = match instance.kind() {
        InstanceKind::Identical => InstanceKind::Identical,
        InstanceKind::Uniform if (0..n).all(|j| (0..m).all(|i| big[i][j] == big[0][j])) => InstanceKind::Uniform,
        _ => InstanceKind::Unrelated,
    };
    ClassicalInstance { structure, times }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CmaxOutcome {
    /// A schedule with makespan at most `c * T`.
    Accept(Schedule),
    /// Certifies that every schedule has makespan above `T`.
    Reject,
}

/// A classical dual approximation with guarantee factor `c >= 1`.
pub trait CmaxSubroutine: Sync {
    fn name(&self) -> &str;
    fn factor(&self) -> Rational;
    fn decide(&self, instance: &ClassicalInstance, threshold: &Rational) -> Result<CmaxOutcome>;
}

/// Greedy list scheduling on identical machines (`c = 2`).
///
/// Rejects when some job alone exceeds `T` or the average load exceeds `T`;
/// otherwise the greedy makespan is at most `avg + max <= 2T`.
pub fn list_schedule_identical(instance: &ClassicalInstance, threshold: &Rational) -> Result<CmaxOutcome> {
    if instance.structure() != InstanceKind::Identical {
        return Err(Error::Unsupported("list scheduling needs identical machines".into()));
    }
    let m = instance.machine_count();
    let times = &instance.times[0];
    let t = Value::Finite(threshold.clone());
    if times.iter().any(|p| *p > t) {
        return Ok(CmaxOutcome::Reject);
    }
    let total: Value = times.iter().sum();
    if total > t.scale(&Rational::from_integer(BigInt::from(m))) {
        return Ok(CmaxOutcome::Reject);
    }
    let mut loads = vec![Value::zero(); m];
    let mut assignment = Vec::with_capacity(times.len());
    for p in times {
        let (i, _) = loads
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
            .expect("m >= 1");
        loads[i] += p;
        assignment.push(i);
    }
    let makespan = loads.into_iter().max().expect("m >= 1");
    if makespan > t.scale(&Rational::from_integer(2.into())) {
        debug_assert!(false, "greedy bound violated");
        return Ok(CmaxOutcome::Reject);
    }
    Ok(CmaxOutcome::Accept(Schedule::new(assignment)))
}

fn packing<W: Weight>(ci: &ClassicalInstance, cap: W, conv: impl Fn(&Rational) -> W) -> PackingProblem<W> {
    let m = ci.machine_count();
    // machines with equal rows are interchangeable
    let class = (0..m)
        .map(|i| (0..=i).find(|&k| ci.times[k] == ci.times[i]).expect("k = i matches"))
        .collect();
    PackingProblem {
        capacity: vec![cap; m],
        times: ci
            .times
            .iter()
            .map(|row| row.iter().map(|v| v.as_finite().map(&conv)).collect())
            .collect(),
        class,
    }
}

/// Exact decision "is there a schedule of makespan at most `T`" (`c = 1`).
pub fn exact_subroutine(instance: &ClassicalInstance, threshold: &Rational, limits: &Limits) -> Result<CmaxOutcome> {
    if instance.job_count() > limits.max_search_jobs {
        return Err(Error::SizeLimit(format!(
            "{} jobs exceed the exact search limit of {}",
            instance.job_count(),
            limits.max_search_jobs
        )));
    }
    let grid = Grid::new(instance.times.iter().flatten(), &[threshold]);
    let found = if grid.fits_i128() {
        packing(instance, grid.small(threshold), |r| grid.small(r)).solve()
    } else {
        packing(instance, grid.big(threshold), |r| grid.big(r)).solve()
    };
    Ok(match found {
        Some(a) => CmaxOutcome::Accept(Schedule::new(a)),
        None => CmaxOutcome::Reject,
    })
}

#[derive(Clone, Debug, Default)]
pub struct ExactSubroutine {
    pub limits: Limits,
}

impl CmaxSubroutine for ExactSubroutine {
    fn name(&self) -> &str {
        "exact"
    }

    fn factor(&self) -> Rational {
        Rational::one()
    }

    fn decide(&self, instance: &ClassicalInstance, threshold: &Rational) -> Result<CmaxOutcome> {
        exact_subroutine(instance, threshold, &self.limits)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ListScheduling;

impl CmaxSubroutine for ListScheduling {
    fn name(&self) -> &str {
        "list"
    }

    fn factor(&self) -> Rational {
        Rational::from_integer(2.into())
    }

    fn decide(&self, instance: &ClassicalInstance, threshold: &Rational) -> Result<CmaxOutcome> {
        list_schedule_identical(instance, threshold)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualOutcome {
    /// A schedule whose robust cost is within the procedure's factor of `T`.
    Accept(Schedule),
    /// Certifies `OPT > T`.
    Reject,
}

impl DualOutcome {
    pub fn is_accept(&self) -> bool {
        matches!(self, DualOutcome::Accept(_))
    }
}

/// Robust dual step: either a schedule of cost at most `factor * T` or a
/// proof that the optimum exceeds `T`.
pub trait DualProcedure: Sync {
    fn name(&self) -> String;
    fn accept_factor(&self) -> Rational;
    fn step(&self, instance: &Instance, threshold: &Rational) -> Result<DualOutcome>;
}

/// One dual step through [`build_classical`] and a classical subroutine.
///
/// The subroutine's schedule is re-evaluated on both instances; a breach of
/// `c * T` or `(c+1) * T` is reported as a contract violation.
pub fn dual_step<S: CmaxSubroutine + ?Sized>(instance: &Instance, threshold: &Rational, sub: &S) -> Result<DualOutcome> {
    if !threshold.is_positive() {
        return Err(Error::InvalidInput("threshold must be positive".into()));
    }
    let classical = build_classical(instance, threshold);
    match sub.decide(&classical, threshold)? {
        CmaxOutcome::Reject => Ok(DualOutcome::Reject),
        CmaxOutcome::Accept(schedule) => {
            let c = sub.factor();
            let makespan = classical.makespan(&schedule)?;
            if makespan > Value::Finite(&c * threshold) {
                return Err(Error::ContractViolation(format!(
                    "subroutine {} accepted with makespan {makespan} above {} * {}",
                    sub.name(),
                    Value::Finite(c),
                    Value::Finite(threshold.clone())
                )));
            }
            let robust = worst_case_makespan(instance, &schedule)?;
            let bound = Value::Finite((c + Rational::one()) * threshold);
            if robust > bound {
                return Err(Error::ContractViolation(format!("robust cost {robust} above {bound}")));
            }
            Ok(DualOutcome::Accept(schedule))
        }
    }
}

/// [`dual_step`] packaged as a [`DualProcedure`] with factor `c + 1`.
#[derive(Clone, Debug, Default)]
pub struct RobustDual<S>(pub S);

impl<S: CmaxSubroutine> DualProcedure for RobustDual<S> {
    fn name(&self) -> String {
        format!("dual[{}]", self.0.name())
    }

    fn accept_factor(&self) -> Rational {
        self.0.factor() + Rational::one()
    }

    fn step(&self, instance: &Instance, threshold: &Rational) -> Result<DualOutcome> {
        dual_step(instance, threshold, &self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchStep {
    pub threshold: Rational,
    pub accepted: bool,
    /// Robust cost of the accepted schedule.
    pub value: Option<Value>,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub schedule: Schedule,
    /// Robust cost of `schedule`, recomputed from scratch.
    pub value: Value,
    /// Smallest accepted threshold, or the greedy upper bound if none was.
    pub threshold: Rational,
    pub lower_bound: Rational,
    pub upper_bound: Rational,
    pub log: Vec<SearchStep>,
}

/// `max(max_j min_i (p_bar_ij + p_hat_ij), sum_j min_i p_bar_ij / m)`, where
/// the deviation term is dropped when `gamma = 0`.
pub fn lower_bound(instance: &Instance) -> Rational {
    let (m, n) = (instance.machine_count(), instance.job_count());
    let mut single = Rational::zero();
    let mut nominal_sum = Rational::zero();
    for j in 0..n {
        let allowed = || (0..m).filter(|&i| instance.is_allowed(i, j));
        let cheapest_alone = allowed()
            .map(|i| {
                if instance.gamma() > 0 {
                    instance.deviated(i, j)
                } else {
                    instance.nominal(i, j)
                }
            })
            .min()
            .and_then(Value::into_finite)
            .expect("every job has an allowed machine");
        let cheapest_nominal = allowed()
            .map(|i| instance.nominal(i, j))
            .min()
            .and_then(Value::into_finite)
            .expect("every job has an allowed machine");
        single = single.max(cheapest_alone);
        nominal_sum += cheapest_nominal;
    }
    single.max(nominal_sum / Rational::from_integer(BigInt::from(m)))
}

fn only_one_schedule(instance: &Instance) -> bool {
    let m = instance.machine_count();
    (0..instance.job_count()).all(|j| (0..m).filter(|&i| instance.is_allowed(i, j)).count() == 1)
}

/// A threshold strictly between `lo` and `hi`, close to their geometric mean
/// and with a small denominator.
fn next_threshold(lo: &Rational, hi: &Rational, delta: &Rational) -> Rational {
    let eta = rational_to_f64(delta) / 8.0;
    let mean = (rational_to_f64(lo) * rational_to_f64(hi)).sqrt();
    let window = (Rational::from_float(mean * (1.0 - eta)), Rational::from_float(mean * (1.0 + eta)));
    if let (Some(a), Some(b)) = window {
        let a = a.max(lo.clone());
        let b = b.min(hi.clone());
        if a < b {
            return simplest_between(&a, &b);
        }
    }
    (lo + hi) / Rational::from_integer(2.into())
}

/// Geometric search over thresholds.
///
/// Starts from `[lower_bound, greedy value]`, tests the lower bound first,
/// then repeatedly tests a threshold near the geometric mean of the largest
/// rejected and smallest accepted threshold until their ratio is at most
/// `1 + delta`. Returns the best schedule seen; its cost is at most
/// `factor * (1 + delta) * OPT`.
pub fn binary_search_solve<P: DualProcedure + ?Sized>(
    instance: &Instance,
    procedure: &P,
    delta: &Rational,
) -> Result<SearchResult> {
    if !delta.is_positive() {
        return Err(Error::InvalidInput("precision delta must be positive".into()));
    }
    let (greedy, upper) = greedy_schedule(instance);
    let upper = upper.into_finite().expect("greedy value is finite");
    let lower = lower_bound(instance);
    let mut best_schedule = greedy;
    let mut best_value = Value::Finite(upper.clone());
    let mut log = Vec::new();
    let mut hi = upper.clone();

    if upper <= lower || lower.is_zero() || only_one_schedule(instance) {
        // the greedy schedule meets a lower bound, or there is nothing to choose
        debug_assert!(!lower.is_zero() || upper.is_zero());
        let value = worst_case_makespan(instance, &best_schedule)?;
        return Ok(SearchResult {
            schedule: best_schedule,
            value,
            threshold: hi,
            lower_bound: lower,
            upper_bound: upper,
            log,
        });
    }

    let mut record = |t: &Rational, outcome: DualOutcome, log: &mut Vec<SearchStep>| -> Result<bool> {
        Ok(match outcome {
            DualOutcome::Accept(schedule) => {
                let value = worst_case_makespan(instance, &schedule)?;
                log.push(SearchStep {
                    threshold: t.clone(),
                    accepted: true,
                    value: Some(value.clone()),
                });
                if value < best_value {
                    best_value = value;
                    best_schedule = schedule;
                }
                true
            }
            DualOutcome::Reject => {
                log.push(SearchStep {
                    threshold: t.clone(),
                    accepted: false,
                    value: None,
                });
                false
            }
        })
    };

    let ratio_limit = Rational::one() + delta;
    if record(&lower, procedure.step(instance, &lower)?, &mut log)? {
        hi = lower.clone();
    } else {
        let mut lo = lower.clone();
        while &hi / &lo > ratio_limit {
            let t = next_threshold(&lo, &hi, delta);
            if record(&t, procedure.step(instance, &t)?, &mut log)? {
                hi = t;
            } else {
                lo = t;
            }
        }
    }
    let value = worst_case_makespan(instance, &best_schedule)?;
    debug_assert_eq!(value, best_value);
    Ok(SearchResult {
        schedule: best_schedule,
        value,
        threshold: hi,
        lower_bound: lower,
        upper_bound: upper,
        log,
    })
}
