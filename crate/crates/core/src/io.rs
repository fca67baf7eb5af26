//! JSON files for instances and schedules.
//!
//! ```json
//! { "kind": "identical", "gamma": 1, "machines": 2,
//!   "jobs": [{"p_bar": "3/2", "p_hat": 1}] }
//! ```
//!
//! Uniform instances carry `"speeds"` instead of `"machines"`; unrelated ones
//! carry `"p_bar_matrix"` / `"p_hat_matrix"` indexed `[machine][job]`, where
//! `"inf"` marks a forbidden assignment. Rationals are written as `"num/den"`
//! strings; integers are accepted on input.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, InstanceKind, Job, Schedule};
use crate::value::{Rational, Value};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    kind: InstanceKind,
    gamma: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    machines: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    speeds: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    jobs: Option<Vec<JobFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p_bar_matrix: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p_hat_matrix: Option<Vec<Vec<Value>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobFile {
    p_bar: Value,
    p_hat: Value,
}

fn finite(v: Value, what: &str) -> Result<Rational> {
    v.into_finite()
        .ok_or_else(|| Error::InvalidInput(format!("{what} must be finite")))
}

fn parse_jobs(jobs: Option<Vec<JobFile>>) -> Result<Vec<Job>> {
    let jobs = jobs.ok_or_else(|| Error::InvalidInput("missing \"jobs\"".into()))?;
    jobs.into_iter()
        .map(|j| Ok(Job::new(finite(j.p_bar, "p_bar")?, finite(j.p_hat, "p_hat")?)))
        .collect()
}

impl TryFrom<InstanceFile> for Instance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Instance> {
        match f.kind {
            InstanceKind::Identical => {
                let m = f
                    .machines
                    .ok_or_else(|| Error::InvalidInput("identical instance needs \"machines\"".into()))?;
                Instance::identical(m, parse_jobs(f.jobs)?, f.gamma)
            }
            InstanceKind::Uniform => {
                let speeds = f
                    .speeds
                    .ok_or_else(|| Error::InvalidInput("uniform instance needs \"speeds\"".into()))?
                    .into_iter()
                    .map(|s| finite(s, "speed"))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(m) = f.machines {
                    if m != speeds.len() {
                        return Err(Error::InvalidInput("\"machines\" disagrees with \"speeds\"".into()));
                    }
                }
                Instance::uniform(speeds, parse_jobs(f.jobs)?, f.gamma)
            }
            InstanceKind::Unrelated => {
                let (Some(p_bar), Some(p_hat)) = (f.p_bar_matrix, f.p_hat_matrix) else {
                    return Err(Error::InvalidInput(
                        "unrelated instance needs \"p_bar_matrix\" and \"p_hat_matrix\"".into(),
                    ));
                };
                Instance::unrelated(p_bar, p_hat, f.gamma)
            }
        }
    }
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        let jobs = inst.jobs().map(|jobs| {
            jobs.iter()
                .map(|j| JobFile {
                    p_bar: Value::Finite(j.p_bar.clone()),
                    p_hat: Value::Finite(j.p_hat.clone()),
                })
                .collect()
        });
        let mut file = InstanceFile {
            kind: inst.kind(),
            gamma: inst.gamma(),
            machines: None,
            speeds: None,
            jobs,
            p_bar_matrix: None,
            p_hat_matrix: None,
        };
        match inst.kind() {
            InstanceKind::Identical => file.machines = Some(inst.machine_count()),
            InstanceKind::Uniform => {
                file.speeds = inst
                    .speeds()
                    .map(|s| s.iter().cloned().map(Value::Finite).collect());
            }
            InstanceKind::Unrelated => {
                let (p_bar, p_hat) = inst.matrices();
                file.p_bar_matrix = Some(p_bar);
                file.p_hat_matrix = Some(p_hat);
            }
        }
        file
    }
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
    file.try_into()
}

/// Pretty JSON with a fixed field order, so equal instances give equal bytes.
pub fn instance_to_json(instance: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from(instance)).expect("instance serializes")
}

pub fn schedule_from_json(text: &str) -> Result<Schedule> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
}

pub fn schedule_to_json(schedule: &Schedule) -> String {
    serde_json::to_string(schedule).expect("schedule serializes")
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    instance_from_json(&fs::read_to_string(path)?)
}

pub fn write_instance(path: impl AsRef<Path>, instance: &Instance) -> Result<()> {
    fs::write(path, instance_to_json(instance) + "\n")?;
    Ok(())
}

pub fn read_schedule(path: impl AsRef<Path>) -> Result<Schedule> {
    schedule_from_json(&fs::read_to_string(path)?)
}
