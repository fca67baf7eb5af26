//! Exact desk-scale oracles.
//!
//! These solvers are exponential and meant for small instances: they provide
//! the optimum values that every approximation in the crate is checked
//! against, and the exact capacity decision procedure plugged into the
//! approximation schemes.

mod capacity;
mod scenarios;

pub use capacity::{capacity_decision_exact, CapacitatedTypedInstance, DecisionOutcome, MachineType, TypedSchedule};
pub use scenarios::{adversary_argmax, enumerate_scenarios, ScenarioIter};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::model::{Instance, InstanceKind, Schedule};
use crate::objective::worst_case_makespan;
use crate::search::{Grid, RobustProblem, Weight};
use crate::value::{Rational, Value};

/// Size budgets for the exponential routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for which scenarios are enumerated.
    pub max_scenario_jobs: usize,
    /// Largest `m^n` brute force will enumerate.
    pub max_bruteforce_schedules: u64,
    /// Largest job count accepted by the search-based decision procedures.
    pub max_search_jobs: usize,
    /// Largest variable count handed to the SAT oracle.
    pub max_sat_variables: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_scenario_jobs: 20,
            max_bruteforce_schedules: 2_000_000,
            max_search_jobs: 40,
            max_sat_variables: 20,
        }
    }
}

/// Optimum by enumerating all `m^n` assignments in lexicographic order
/// (job 0 most significant). The first optimal assignment wins ties.
pub fn optimal_bruteforce(instance: &Instance, limits: &Limits) -> Result<(Schedule, Value)> {
    let n = instance.job_count();
    let m = instance.machine_count();
    let total = (m as u64).checked_pow(n as u32);
    if total.is_none_or(|t| t > limits.max_bruteforce_schedules) {
        return Err(Error::SizeLimit(format!(
            "{m}^{n} schedules exceed the brute-force limit of {}",
            limits.max_bruteforce_schedules
        )));
    }
    let mut assignment = vec![0usize; n];
    let mut best: Option<(Schedule, Value)> = None;
    loop {
        let schedule = Schedule::new(assignment.clone());
        if let Ok(value) = worst_case_makespan(instance, &schedule) {
            if best.as_ref().is_none_or(|(_, b)| value < *b) {
                best = Some((schedule, value));
            }
        }
        // odometer increment, last job fastest
        let mut k = n;
        loop {
            if k == 0 {
                return best.ok_or_else(|| Error::InvalidInput("instance has no feasible schedule".into()));
            }
            k -= 1;
            assignment[k] += 1;
            if assignment[k] < m {
                break;
            }
            assignment[k] = 0;
        }
    }
}

fn robust_problem<W: Weight>(instance: &Instance, conv: impl Fn(&Rational) -> W) -> RobustProblem<W> {
    let (p_bar, p_hat) = instance.matrices();
    let map = |mat: Vec<Vec<Value>>| {
        mat.iter()
            .map(|row| row.iter().map(|v| v.as_finite().map(&conv)).collect())
            .collect()
    };
    RobustProblem {
        gamma: instance.gamma(),
        nominal: map(p_bar),
        deviation: map(p_hat),
        symmetric: instance.kind() == InstanceKind::Identical,
    }
}

fn grid_for(instance: &Instance) -> Grid {
    let (p_bar, p_hat) = instance.matrices();
    Grid::new(p_bar.iter().flatten().chain(p_hat.iter().flatten()), &[])
}

fn with_problem<T>(
    instance: &Instance,
    run_small: impl FnOnce(&RobustProblem<i128>) -> (Vec<usize>, i128),
    run_big: impl FnOnce(&RobustProblem<BigInt>) -> (Vec<usize>, BigInt),
    finish: impl FnOnce(Vec<usize>, Rational) -> T,
) -> T {
    let grid = grid_for(instance);
    if grid.fits_i128() {
        let (a, v) = run_small(&robust_problem(instance, |r| grid.small(r)));
        finish(a, grid.back(v))
    } else {
        let (a, v) = run_big(&robust_problem(instance, |r| grid.big(r)));
        finish(a, grid.back(v))
    }
}

/// Optimum by depth-first branch-and-bound.
///
/// Jobs are branched in order of largest processing time; on identical
/// machines a job may only open the first empty machine. Branches whose
/// partial worst-case load reaches the incumbent, or that leave some job
/// without a machine below the incumbent, are cut.
pub fn optimal_bnb(instance: &Instance) -> (Schedule, Value) {
    with_problem(
        instance,
        |p| p.solve(),
        |p| p.solve(),
        |a, v| {
            let schedule = Schedule::new(a);
            debug_assert_eq!(worst_case_makespan(instance, &schedule).ok(), Some(Value::Finite(v.clone())));
            (schedule, Value::Finite(v))
        },
    )
}

/// Greedy schedule: jobs by largest processing time, each onto the machine
/// where its resulting worst-case load is smallest.
pub fn greedy_schedule(instance: &Instance) -> (Schedule, Value) {
    with_problem(
        instance,
        |p| p.greedy_default(),
        |p| p.greedy_default(),
        |a, v| (Schedule::new(a), Value::Finite(v)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::int;

    fn ident(m: usize, pairs: &[(i64, i64)], gamma: usize) -> Instance {
        Instance::identical_from_pairs(m, pairs.iter().map(|&(a, b)| (int(a), int(b))), gamma).unwrap()
    }

    #[test]
    fn bruteforce_examples() {
        let inst = ident(2, &[(1, 0), (1, 0), (2, 0)], 0);
        let (s, v) = optimal_bruteforce(&inst, &Limits::default()).unwrap();
        assert_eq!(v, Value::int(2));
        // lexicographically first optimum
        assert_eq!(s.assignment, vec![0, 0, 1]);

        let one = ident(1, &[(1, 2), (3, 4)], 1);
        let (s, v) = optimal_bruteforce(&one, &Limits::default()).unwrap();
        assert_eq!(s.assignment, vec![0, 0]);
        assert_eq!(v, Value::int(8));

        let inst = ident(3, &[(1, 1), (1, 1), (1, 1)], 1);
        let (s, v) = optimal_bruteforce(&inst, &Limits::default()).unwrap();
        assert_eq!(v, Value::int(2));
        let mut a = s.assignment;
        a.sort();
        assert_eq!(a, vec![0, 1, 2]);
    }

    #[test]
    fn bruteforce_limit() {
        let inst = ident(3, &[(1, 1); 8], 1);
        let limits = Limits {
            max_bruteforce_schedules: 100,
            ..Limits::default()
        };
        assert!(matches!(optimal_bruteforce(&inst, &limits), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn bnb_examples() {
        let single = ident(3, &[(2, 5)], 1);
        assert_eq!(optimal_bnb(&single).1, Value::int(7));
        let inst = ident(3, &[(1, 1), (1, 1), (1, 1)], 1);
        assert_eq!(optimal_bnb(&inst).1, Value::int(2));
        // classical P||Cmax: 3,3,2,2,2 on 2 machines -> 6
        let classical = ident(2, &[(3, 0), (3, 0), (2, 0), (2, 0), (2, 0)], 2);
        assert_eq!(optimal_bnb(&classical).1, Value::int(6));
    }

    #[test]
    fn bnb_unrelated_respects_forbidden() {
        let p_bar = vec![
            vec![Value::int(1), Value::Forbidden, Value::int(5)],
            vec![Value::int(4), Value::int(2), Value::int(1)],
        ];
        let p_hat = vec![
            vec![Value::int(1), Value::zero(), Value::int(1)],
            vec![Value::zero(), Value::int(3), Value::int(1)],
        ];
        let inst = Instance::unrelated(p_bar, p_hat, 1).unwrap();
        let (s, v) = optimal_bnb(&inst);
        let (_, bf) = optimal_bruteforce(&inst, &Limits::default()).unwrap();
        assert_eq!(v, bf);
        assert_eq!(worst_case_makespan(&inst, &s).unwrap(), v);
    }

    #[test]
    fn greedy_is_feasible_upper_bound() {
        let inst = ident(2, &[(3, 1), (3, 2), (2, 2), (2, 0), (2, 1)], 1);
        let (s, v) = greedy_schedule(&inst);
        assert_eq!(worst_case_makespan(&inst, &s).unwrap(), v);
        assert!(v >= optimal_bnb(&inst).1);
    }
}
