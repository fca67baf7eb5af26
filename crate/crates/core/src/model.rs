//! Robust scheduling instances, schedules and scenarios.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::value::{Rational, Value};

/// Machine environment of an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Identical,
    Uniform,
    Unrelated,
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstanceKind::Identical => "identical",
            InstanceKind::Uniform => "uniform",
            InstanceKind::Unrelated => "unrelated",
        })
    }
}

/// Nominal and deviation time of a job on identical or uniform machines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job {
    pub p_bar: Rational,
    pub p_hat: Rational,
}

impl Job {
    pub fn new(p_bar: Rational, p_hat: Rational) -> Self {
        Job { p_bar, p_hat }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Layout {
    Identical {
        machines: usize,
        jobs: Vec<Job>,
    },
    Uniform {
        speeds: Vec<Rational>,
        jobs: Vec<Job>,
    },
    /// Matrices indexed `[machine][job]`.
    Unrelated {
        p_bar: Vec<Vec<Value>>,
        p_hat: Vec<Vec<Value>>,
    },
}

/// A robust makespan instance: jobs, machines, and the deviation budget `gamma`.
///
/// Construction validates that `n >= 1`, `m >= 1`, all values are
/// non-negative, speeds are positive, and every job has at least one machine
/// where both its nominal and deviation times are finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    gamma: usize,
    layout: Layout,
}

fn check_jobs(jobs: &[Job]) -> Result<()> {
    if jobs.is_empty() {
        return Err(Error::InvalidInput("instance has no jobs".into()));
    }
    for (j, job) in jobs.iter().enumerate() {
        if job.p_bar.is_negative() || job.p_hat.is_negative() {
            return Err(Error::InvalidInput(format!("job {j} has a negative time")));
        }
    }
    Ok(())
}

impl Instance {
    pub fn identical(machines: usize, jobs: Vec<Job>, gamma: usize) -> Result<Self> {
        if machines == 0 {
            return Err(Error::InvalidInput("instance has no machines".into()));
        }
        check_jobs(&jobs)?;
        Ok(Instance {
            gamma,
            layout: Layout::Identical { machines, jobs },
        })
    }

    /// Convenience constructor from `(p_bar, p_hat)` pairs.
    pub fn identical_from_pairs(
        machines: usize,
        pairs: impl IntoIterator<Item = (Rational, Rational)>,
        gamma: usize,
    ) -> Result<Self> {
        let jobs = pairs.into_iter().map(|(a, b)| Job::new(a, b)).collect();
        Self::identical(machines, jobs, gamma)
    }

    pub fn uniform(speeds: Vec<Rational>, jobs: Vec<Job>, gamma: usize) -> Result<Self> {
        if speeds.is_empty() {
            return Err(Error::InvalidInput("instance has no machines".into()));
        }
        if let Some(i) = speeds.iter().position(|s| !s.is_positive()) {
            return Err(Error::InvalidInput(format!("speed of machine {i} must be positive")));
        }
        check_jobs(&jobs)?;
        Ok(Instance {
            gamma,
            layout: Layout::Uniform { speeds, jobs },
        })
    }

    /// Unrelated instance from `[machine][job]` matrices.
    pub fn unrelated(p_bar: Vec<Vec<Value>>, p_hat: Vec<Vec<Value>>, gamma: usize) -> Result<Self> {
        let m = p_bar.len();
        if m == 0 {
            return Err(Error::InvalidInput("instance has no machines".into()));
        }
        if p_hat.len() != m {
            return Err(Error::InvalidInput(format!(
                "p_bar has {m} rows but p_hat has {}",
                p_hat.len()
            )));
        }
        let n = p_bar[0].len();
        if n == 0 {
            return Err(Error::InvalidInput("instance has no jobs".into()));
        }
        for (i, (a, b)) in p_bar.iter().zip(&p_hat).enumerate() {
            if a.len() != n || b.len() != n {
                return Err(Error::InvalidInput(format!("row {i} does not have {n} entries")));
            }
        }
        for j in 0..n {
            if !(0..m).any(|i| p_bar[i][j].is_finite() && p_hat[i][j].is_finite()) {
                return Err(Error::InvalidInput(format!("job {j} is forbidden on every machine")));
            }
        }
        Ok(Instance {
            gamma,
            layout: Layout::Unrelated { p_bar, p_hat },
        })
    }

    pub fn kind(&self) -> InstanceKind {
        match self.layout {
            Layout::Identical { .. } => InstanceKind::Identical,
            Layout::Uniform { .. } => InstanceKind::Uniform,
            Layout::Unrelated { .. } => InstanceKind::Unrelated,
        }
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    /// Same jobs and machines with a different budget.
    pub fn with_gamma(&self, gamma: usize) -> Instance {
        Instance {
            gamma,
            layout: self.layout.clone(),
        }
    }

    pub fn job_count(&self) -> usize {
        match &self.layout {
            Layout::Identical { jobs, .. } | Layout::Uniform { jobs, .. } => jobs.len(),
            Layout::Unrelated { p_bar, .. } => p_bar[0].len(),
        }
    }

    pub fn machine_count(&self) -> usize {
        match &self.layout {
            Layout::Identical { machines, .. } => *machines,
            Layout::Uniform { speeds, .. } => speeds.len(),
            Layout::Unrelated { p_bar, .. } => p_bar.len(),
        }
    }

    /// Per-job times for identical and uniform instances.
    pub fn jobs(&self) -> Option<&[Job]> {
        match &self.layout {
            Layout::Identical { jobs, .. } | Layout::Uniform { jobs, .. } => Some(jobs),
            Layout::Unrelated { .. } => None,
        }
    }

    pub fn speeds(&self) -> Option<&[Rational]> {
        match &self.layout {
            Layout::Uniform { speeds, .. } => Some(speeds),
            _ => None,
        }
    }

    /// Nominal time of `job` on `machine` (`p_bar_j / s_i` for uniform machines).
    pub fn nominal(&self, machine: usize, job: usize) -> Value {
        match &self.layout {
            Layout::Identical { jobs, .. } => Value::Finite(jobs[job].p_bar.clone()),
            Layout::Uniform { speeds, jobs } => Value::Finite(&jobs[job].p_bar / &speeds[machine]),
            Layout::Unrelated { p_bar, .. } => p_bar[machine][job].clone(),
        }
    }

    /// Deviation of `job` on `machine`.
    pub fn deviation(&self, machine: usize, job: usize) -> Value {
        match &self.layout {
            Layout::Identical { jobs, .. } => Value::Finite(jobs[job].p_hat.clone()),
            Layout::Uniform { speeds, jobs } => Value::Finite(&jobs[job].p_hat / &speeds[machine]),
            Layout::Unrelated { p_hat, .. } => p_hat[machine][job].clone(),
        }
    }

    /// `true` when both times of `job` on `machine` are finite.
    pub fn is_allowed(&self, machine: usize, job: usize) -> bool {
        match &self.layout {
            Layout::Unrelated { p_bar, p_hat } => {
                p_bar[machine][job].is_finite() && p_hat[machine][job].is_finite()
            }
            _ => true,
        }
    }

    /// Nominal plus deviation, the time of `job` on `machine` when it deviates.
    pub fn deviated(&self, machine: usize, job: usize) -> Value {
        &self.nominal(machine, job) + &self.deviation(machine, job)
    }

    /// `true` when every deviation is zero.
    pub fn has_no_deviation(&self) -> bool {
        match &self.layout {
            Layout::Identical { jobs, .. } | Layout::Uniform { jobs, .. } => {
                jobs.iter().all(|j| j.p_hat.is_zero())
            }
            Layout::Unrelated { p_hat, p_bar } => p_hat
                .iter()
                .flatten()
                .zip(p_bar.iter().flatten())
                .all(|(h, b)| h.is_zero() || b.is_forbidden() || h.is_forbidden()),
        }
    }

    /// Multiplies every time by `factor` (which must be positive).
    pub fn scaled(&self, factor: &Rational) -> Instance {
        assert!(factor.is_positive(), "scale factor must be positive");
        let scale_jobs = |jobs: &[Job]| {
            jobs.iter()
                .map(|j| Job::new(&j.p_bar * factor, &j.p_hat * factor))
                .collect()
        };
        let layout = match &self.layout {
            Layout::Identical { machines, jobs } => Layout::Identical {
                machines: *machines,
                jobs: scale_jobs(jobs),
            },
            Layout::Uniform { speeds, jobs } => Layout::Uniform {
                speeds: speeds.clone(),
                jobs: scale_jobs(jobs),
            },
            Layout::Unrelated { p_bar, p_hat } => {
                let scale = |mat: &[Vec<Value>]| {
                    mat.iter()
                        .map(|row| row.iter().map(|v| v.scale(factor)).collect())
                        .collect()
                };
                Layout::Unrelated {
                    p_bar: scale(p_bar),
                    p_hat: scale(p_hat),
                }
            }
        };
        Instance {
            gamma: self.gamma,
            layout,
        }
    }

    /// Identical instance with the same nominal times and replaced deviations.
    pub fn with_identical_deviations(&self, p_hat: &[Rational]) -> Result<Instance> {
        match &self.layout {
            Layout::Identical { machines, jobs } if jobs.len() == p_hat.len() => {
                let jobs = jobs
                    .iter()
                    .zip(p_hat)
                    .map(|(j, h)| Job::new(j.p_bar.clone(), h.clone()))
                    .collect();
                Instance::identical(*machines, jobs, self.gamma)
            }
            Layout::Identical { .. } => Err(Error::InvalidInput("deviation vector has wrong length".into())),
            _ => Err(Error::Unsupported("identical machines required".into())),
        }
    }

    /// Expands into explicit `[machine][job]` matrices (nominal, deviation).
    pub fn matrices(&self) -> (Vec<Vec<Value>>, Vec<Vec<Value>>) {
        let (m, n) = (self.machine_count(), self.job_count());
        let p_bar = (0..m).map(|i| (0..n).map(|j| self.nominal(i, j)).collect()).collect();
        let p_hat = (0..m).map(|i| (0..n).map(|j| self.deviation(i, j)).collect()).collect();
        (p_bar, p_hat)
    }

    pub(crate) fn check_machine(&self, machine: usize) -> Result<()> {
        let machines = self.machine_count();
        if machine >= machines {
            return Err(Error::MachineOutOfRange { machine, machines });
        }
        Ok(())
    }

    pub(crate) fn check_job(&self, job: usize) -> Result<()> {
        let jobs = self.job_count();
        if job >= jobs {
            return Err(Error::JobOutOfRange { job, jobs });
        }
        Ok(())
    }
}

/// Total assignment of jobs to machines: `assignment[j]` is the machine of job `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Schedule {
    pub assignment: Vec<usize>,
}

impl Schedule {
    pub fn new(assignment: Vec<usize>) -> Self {
        Schedule { assignment }
    }

    pub fn job_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn machine_of(&self, job: usize) -> usize {
        self.assignment[job]
    }

    /// Jobs grouped by machine, each list ascending. Entries beyond `machines`
    /// are ignored, so call [`crate::objective::validate`] first.
    pub fn machine_jobs(&self, machines: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); machines];
        for (j, &i) in self.assignment.iter().enumerate() {
            if i < machines {
                out[i].push(j);
            }
        }
        out
    }
}

/// The set of jobs taking their deviated time.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scenario {
    pub deviating: BTreeSet<usize>,
}

impl Scenario {
    pub fn none() -> Self {
        Scenario::default()
    }

    pub fn new(deviating: impl IntoIterator<Item = usize>) -> Self {
        Scenario {
            deviating: deviating.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.deviating.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deviating.is_empty()
    }

    pub fn contains(&self, job: usize) -> bool {
        self.deviating.contains(&job)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::int;

    #[test]
    fn rejects_degenerate_instances() {
        assert!(Instance::identical(0, vec![Job::new(int(1), int(1))], 1).is_err());
        assert!(Instance::identical(2, vec![], 1).is_err());
        assert!(Instance::uniform(vec![int(0)], vec![Job::new(int(1), int(0))], 0).is_err());
        let row = vec![Value::Forbidden, Value::int(1)];
        let hat = vec![Value::zero(), Value::zero()];
        // job 0 forbidden everywhere
        assert!(Instance::unrelated(vec![row], vec![hat], 1).is_err());
    }

    #[test]
    fn uniform_access_divides_by_speed() {
        let inst = Instance::uniform(vec![int(1), int(2)], vec![Job::new(int(4), int(2))], 1).unwrap();
        assert_eq!(inst.nominal(1, 0), Value::int(2));
        assert_eq!(inst.deviation(1, 0), Value::int(1));
        assert_eq!(inst.nominal(0, 0), Value::int(4));
    }
}
