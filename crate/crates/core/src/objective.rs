//! Evaluation of the robust objective.
//!
//! For a fixed set of jobs on a machine the adversary's best response is to
//! let the `gamma` jobs with the largest deviations deviate, so the worst-case
//! load is the nominal sum plus those deviations. No scenario enumeration is
//! needed to evaluate a schedule.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Instance, Scenario, Schedule};
use crate::value::Value;

/// First invariant a schedule breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongLength { expected: usize, actual: usize },
    MachineOutOfRange { job: usize, machine: usize, machines: usize },
    Forbidden { job: usize, machine: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongLength { expected, actual } => {
                write!(f, "assignment has {actual} entries, expected {expected}")
            }
            Violation::MachineOutOfRange { job, machine, machines } => {
                write!(f, "job {job} assigned to machine {machine}, but there are only {machines} machines")
            }
            Violation::Forbidden { job, machine } => {
                write!(f, "job {job} is forbidden on machine {machine}")
            }
        }
    }
}

pub fn validate(instance: &Instance, schedule: &Schedule) -> Result<(), Violation> {
    let n = instance.job_count();
    let m = instance.machine_count();
    if schedule.job_count() != n {
        return Err(Violation::WrongLength {
            expected: n,
            actual: schedule.job_count(),
        });
    }
    for (job, &machine) in schedule.assignment.iter().enumerate() {
        if machine >= m {
            return Err(Violation::MachineOutOfRange { job, machine, machines: m });
        }
        if !instance.is_allowed(machine, job) {
            return Err(Violation::Forbidden { job, machine });
        }
    }
    Ok(())
}

fn checked(instance: &Instance, schedule: &Schedule) -> Result<()> {
    validate(instance, schedule).map_err(|v| Error::InvalidSchedule(v.to_string()))
}

/// The (at most) `gamma` jobs of `jobs` with the largest deviation on
/// `machine`, ties broken towards the lower job index. Returned ascending.
pub fn gamma_set(instance: &Instance, machine: usize, jobs: &[usize]) -> Result<Vec<usize>> {
    instance.check_machine(machine)?;
    for &j in jobs {
        instance.check_job(j)?;
    }
    let gamma = instance.gamma();
    let mut picked: Vec<usize> = if jobs.len() <= gamma {
        jobs.to_vec()
    } else {
        let mut keyed: Vec<(Value, usize)> = jobs
            .iter()
            .map(|&j| (instance.deviation(machine, j), j))
            .collect();
        keyed.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        keyed.into_iter().take(gamma).map(|(_, j)| j).collect()
    };
    picked.sort_unstable();
    picked.dedup();
    Ok(picked)
}

/// Nominal sum plus the deviations of [`gamma_set`]; `Forbidden` when any job
/// cannot run on `machine`.
pub fn worst_case_load(instance: &Instance, machine: usize, jobs: &[usize]) -> Result<Value> {
    let top = gamma_set(instance, machine, jobs)?;
    if jobs.iter().any(|&j| !instance.is_allowed(machine, j)) {
        return Ok(Value::Forbidden);
    }
    let nominal: Value = jobs.iter().map(|&j| instance.nominal(machine, j)).sum();
    let deviation: Value = top.iter().map(|&j| instance.deviation(machine, j)).sum();
    Ok(nominal + deviation)
}

/// Worst-case load of every machine under `schedule`.
pub fn machine_loads(instance: &Instance, schedule: &Schedule) -> Result<Vec<Value>> {
    checked(instance, schedule)?;
    schedule
        .machine_jobs(instance.machine_count())
        .iter()
        .enumerate()
        .map(|(i, jobs)| worst_case_load(instance, i, jobs))
        .collect()
}

/// `C_Γ(σ)`: the largest worst-case machine load.
pub fn worst_case_makespan(instance: &Instance, schedule: &Schedule) -> Result<Value> {
    Ok(machine_loads(instance, schedule)?
        .into_iter()
        .max()
        .unwrap_or_else(Value::zero))
}

/// Makespan when exactly the jobs of `scenario` deviate.
pub fn scenario_makespan(instance: &Instance, schedule: &Schedule, scenario: &Scenario) -> Result<Value> {
    checked(instance, schedule)?;
    if scenario.len() > instance.gamma() {
        return Err(Error::BudgetExceeded {
            deviating: scenario.len(),
            gamma: instance.gamma(),
        });
    }
    for &j in &scenario.deviating {
        instance.check_job(j)?;
    }
    let mut loads = vec![Value::zero(); instance.machine_count()];
    for (j, &i) in schedule.assignment.iter().enumerate() {
        loads[i] += &instance.nominal(i, j);
        if scenario.contains(j) {
            loads[i] += &instance.deviation(i, j);
        }
    }
    Ok(loads.into_iter().max().unwrap_or_else(Value::zero))
}

/// Makespan under nominal times only.
pub fn nominal_makespan(instance: &Instance, schedule: &Schedule) -> Result<Value> {
    scenario_makespan(instance, schedule, &Scenario::none())
}
