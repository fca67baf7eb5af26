//! Experiment runner: solves generated instances with a list of solvers,
//! optionally against the branch-and-bound optimum, and writes CSV or JSON.
//!
//! Independent (instance, solver) pairs run in parallel; the environment
//! variable `ROBUST_SCHED_THREADS` caps the number of worker threads. Every
//! reported value is recomputed from the returned schedule.

use std::fmt::Write as _;
use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{greedy_schedule, optimal_bnb, optimal_bruteforce, Limits};
use crate::gen::{generate_nth, GeneratorConfig};
use crate::model::{Instance, InstanceKind, Schedule};
use crate::objective::worst_case_makespan;
use crate::ptas::{solve_eptas, solve_ptas};
use crate::reduction::{binary_search_solve, ExactSubroutine, ListScheduling, RobustDual, SearchResult};
use crate::value::{rational_serde, rational_to_f64, Rational, Value};

pub const THREADS_ENV: &str = "ROBUST_SCHED_THREADS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subroutine {
    /// List scheduling on identical machines, the exact solver otherwise.
    #[default]
    Auto,
    Exact,
    List,
}

fn default_delta() -> Rational {
    Rational::new(1.into(), 100.into())
}

fn default_epsilon() -> Rational {
    Rational::new(1.into(), 5.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "algo", rename_all = "kebab-case")]
pub enum SolverSpec {
    /// Brute force over all assignments.
    Exact,
    Bnb,
    Greedy,
    Approx3 {
        #[serde(default)]
        subroutine: Subroutine,
        #[serde(default = "default_delta", with = "rational_serde")]
        delta: Rational,
    },
    Ptas {
        #[serde(default = "default_epsilon", with = "rational_serde")]
        epsilon: Rational,
        #[serde(default = "default_delta", with = "rational_serde")]
        delta: Rational,
    },
    Eptas {
        #[serde(default = "default_epsilon", with = "rational_serde")]
        epsilon: Rational,
        #[serde(default = "default_delta", with = "rational_serde")]
        delta: Rational,
    },
}

impl SolverSpec {
    pub fn name(&self) -> String {
        match self {
            SolverSpec::Exact => "exact".into(),
            SolverSpec::Bnb => "bnb".into(),
            SolverSpec::Greedy => "greedy".into(),
            SolverSpec::Approx3 { subroutine, .. } => match subroutine {
                Subroutine::Auto => "approx3".into(),
                Subroutine::Exact => "approx3-exact".into(),
                Subroutine::List => "approx3-list".into(),
            },
            SolverSpec::Ptas { .. } => "ptas".into(),
            SolverSpec::Eptas { .. } => "eptas".into(),
        }
    }

    pub fn epsilon(&self) -> Option<&Rational> {
        match self {
            SolverSpec::Ptas { epsilon, .. } | SolverSpec::Eptas { epsilon, .. } => Some(epsilon),
            _ => None,
        }
    }

    pub fn delta(&self) -> Option<&Rational> {
        match self {
            SolverSpec::Approx3 { delta, .. } | SolverSpec::Ptas { delta, .. } | SolverSpec::Eptas { delta, .. } => {
                Some(delta)
            }
            _ => None,
        }
    }
}

/// A solver's answer; `value` is recomputed from `schedule`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub schedule: Schedule,
    pub value: Value,
    pub search: Option<SearchResult>,
}

pub fn solve(spec: &SolverSpec, instance: &Instance, limits: &Limits) -> Result<Solution> {
    let (schedule, search) = match spec {
        SolverSpec::Exact => (optimal_bruteforce(instance, limits)?.0, None),
        SolverSpec::Bnb => (optimal_bnb(instance).0, None),
        SolverSpec::Greedy => (greedy_schedule(instance).0, None),
        SolverSpec::Approx3 { subroutine, delta } => {
            let list = match subroutine {
                Subroutine::Auto => instance.kind() == InstanceKind::Identical,
                Subroutine::Exact => false,
                Subroutine::List => true,
            };
            let r = if list {
                binary_search_solve(instance, &RobustDual(ListScheduling), delta)?
            } else {
                binary_search_solve(instance, &RobustDual(ExactSubroutine { limits: *limits }), delta)?
            };
            (r.schedule.clone(), Some(r))
        }
        SolverSpec::Ptas { epsilon, delta } => {
            let r = solve_ptas(instance, epsilon, delta, limits)?;
            (r.schedule.clone(), Some(r))
        }
        SolverSpec::Eptas { epsilon, delta } => {
            let r = solve_eptas(instance, epsilon, delta, limits)?;
            (r.schedule.clone(), Some(r))
        }
    };
    let value = worst_case_makespan(instance, &schedule)?;
    if let Some(r) = &search {
        if r.value != value {
            return Err(Error::ContractViolation(format!("search reported {} but schedule costs {value}", r.value)));
        }
    }
    Ok(Solution { schedule, value, search })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteEntry {
    pub generator: GeneratorConfig,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub instances: Vec<SuiteEntry>,
    pub solvers: Vec<SolverSpec>,
    /// Compute the optimum by branch-and-bound for the ratio column.
    #[serde(default)]
    pub oracle: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub instance_id: String,
    pub family: String,
    pub jobs: usize,
    pub machines: usize,
    pub gamma: usize,
    pub solver: String,
    pub epsilon: Option<Value>,
    pub delta: Option<Value>,
    pub value: Option<Value>,
    pub opt: Option<Value>,
    pub ratio: Option<Value>,
    /// `ok`, or the error that stopped the solver.
    pub status: String,
    pub wall_ms: f64,
}

/// Fixed CSV header. Every column except `wall_ms` is reproducible.
pub const CSV_COLUMNS: [&str; 16] = [
    "instance_id",
    "family",
    "jobs",
    "machines",
    "gamma",
    "solver",
    "epsilon",
    "delta",
    "value",
    "value_decimal",
    "opt",
    "opt_decimal",
    "ratio",
    "ratio_decimal",
    "status",
    "wall_ms",
];

/// The suite's instances with their ids, in configuration order.
pub fn suite_instances(config: &SuiteConfig) -> Result<Vec<(String, String, Instance)>> {
    let mut out = Vec::new();
    for entry in &config.instances {
        let g = &entry.generator;
        for k in 0..entry.count {
            let id = format!("{}-s{}-{:04}", g.family.name(), g.seed, k);
            out.push((id, g.family.name().to_string(), generate_nth(g, k as u64)?));
        }
    }
    let mut ids: Vec<&String> = out.iter().map(|(id, _, _)| id).collect();
    ids.sort();
    ids.dedup();
    if ids.len() != out.len() {
        return Err(Error::InvalidInput("two suite entries share family and seed".into()));
    }
    Ok(out)
}

/// Thread pool honouring `ROBUST_SCHED_THREADS` when it holds a positive integer.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            builder = builder.num_threads(n);
        }
    }
    builder
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start thread pool: {e}")))
}

pub fn run_suite(config: &SuiteConfig, limits: &Limits) -> Result<Vec<ExperimentRecord>> {
    let instances = suite_instances(config)?;
    let pool = thread_pool()?;
    pool.install(|| {
        let optima: Vec<Option<Value>> = instances
            .par_iter()
            .map(|(_, _, inst)| {
                (config.oracle && inst.job_count() <= limits.max_search_jobs).then(|| optimal_bnb(inst).1)
            })
            .collect();
        let pairs: Vec<(usize, &SolverSpec)> = (0..instances.len())
            .flat_map(|k| config.solvers.iter().map(move |s| (k, s)))
            .collect();
        let mut records: Vec<ExperimentRecord> = pairs
            .par_iter()
            .map(|&(k, spec)| {
                let (id, family, inst) = &instances[k];
                let start = Instant::now();
                let outcome = solve(spec, inst, limits);
                let wall_ms = start.elapsed().as_secs_f64() * 1000.0;
                let opt = optima[k].clone();
                let (value, status) = match outcome {
                    Ok(sol) => (Some(sol.value), "ok".to_string()),
                    Err(e) => (None, format!("error: {e}")),
                };
                let ratio = match (&value, &opt) {
                    (Some(Value::Finite(v)), Some(Value::Finite(o))) if !o.is_zero() => Some(Value::Finite(v / o)),
                    (Some(Value::Finite(v)), Some(Value::Finite(o))) if v.is_zero() && o.is_zero() => {
                        Some(Value::Finite(Rational::one()))
                    }
                    _ => None,
                };
                let status = match &ratio {
                    Some(r) if *r < Value::Finite(Rational::one()) => "error: value below the optimum".to_string(),
                    _ => status,
                };
                ExperimentRecord {
                    instance_id: id.clone(),
                    family: family.clone(),
                    jobs: inst.job_count(),
                    machines: inst.machine_count(),
                    gamma: inst.gamma(),
                    solver: spec.name(),
                    epsilon: spec.epsilon().cloned().map(Value::Finite),
                    delta: spec.delta().cloned().map(Value::Finite),
                    value,
                    opt,
                    ratio,
                    status,
                    wall_ms,
                }
            })
            .collect();
        records.sort_by(|a, b| (&a.instance_id, &a.solver).cmp(&(&b.instance_id, &b.solver)));
        Ok(records)
    })
}

fn opt_text(v: &Option<Value>) -> String {
    v.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

fn decimal(v: &Option<Value>) -> String {
    match v {
        Some(Value::Finite(r)) => format!("{:.6}", rational_to_f64(r)),
        Some(Value::Forbidden) => "inf".into(),
        None => String::new(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = CSV_COLUMNS.join(",");
    out.push('\n');
    for r in records {
        let fields = [
            r.instance_id.clone(),
            r.family.clone(),
            r.jobs.to_string(),
            r.machines.to_string(),
            r.gamma.to_string(),
            r.solver.clone(),
            opt_text(&r.epsilon),
            opt_text(&r.delta),
            opt_text(&r.value),
            decimal(&r.value),
            opt_text(&r.opt),
            decimal(&r.opt),
            opt_text(&r.ratio),
            decimal(&r.ratio),
            r.status.clone(),
            format!("{:.3}", r.wall_ms),
        ];
        let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn records_to_json(records: &[ExperimentRecord]) -> Result<String> {
    Ok(serde_json::to_string_pretty(records)?)
}

/// Whitespace-separated decimal columns for gnuplot, `?` marking missing data.
pub fn gnuplot_columns(records: &[ExperimentRecord]) -> String {
    let mut out = String::from("# index jobs machines gamma value opt ratio wall_ms solver instance_id\n");
    let col = |v: &Option<Value>| {
        let d = decimal(v);
        if d.is_empty() {
            "?".to_string()
        } else {
            d
        }
    };
    for (k, r) in records.iter().enumerate() {
        let _ = writeln!(
            out,
            "{k} {} {} {} {} {} {} {:.3} {} {}",
            r.jobs,
            r.machines,
            r.gamma,
            col(&r.value),
            col(&r.opt),
            col(&r.ratio),
            r.wall_ms,
            r.solver,
            r.instance_id
        );
    }
    out
}
