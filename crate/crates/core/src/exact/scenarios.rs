use crate::error::{Error, Result};
use crate::exact::Limits;
use crate::model::{Instance, Scenario, Schedule};
use crate::objective::scenario_makespan;
use crate::value::Value;

/// Every subset of `0..n` with at most `gamma` elements, by size and then
/// lexicographically.
#[derive(Clone, Debug)]
pub struct ScenarioIter {
    n: usize,
    max_size: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for ScenarioIter {
    type Item = Scenario;

    fn next(&mut self) -> Option<Scenario> {
        let combo = self.current.take()?;
        let out = Scenario::new(combo.iter().copied());
        self.current = advance(combo, self.n, self.max_size);
        Some(out)
    }
}

fn advance(mut combo: Vec<usize>, n: usize, max_size: usize) -> Option<Vec<usize>> {
    let k = combo.len();
    // rightmost position that can still move up
    for pos in (0..k).rev() {
        if combo[pos] < n - (k - pos) {
            combo[pos] += 1;
            for q in pos + 1..k {
                combo[q] = combo[q - 1] + 1;
            }
            return Some(combo);
        }
    }
    (k < max_size).then(|| (0..k + 1).collect())
}

pub fn enumerate_scenarios(n: usize, gamma: usize, limits: &Limits) -> Result<ScenarioIter> {
    if n > limits.max_scenario_jobs {
        return Err(Error::SizeLimit(format!(
            "scenario enumeration over {n} jobs exceeds the limit of {}",
            limits.max_scenario_jobs
        )));
    }
    Ok(ScenarioIter {
        n,
        max_size: gamma.min(n),
        current: Some(Vec::new()),
    })
}

/// A worst scenario for `schedule`, found by enumeration; the first one in
/// enumeration order wins ties.
pub fn adversary_argmax(instance: &Instance, schedule: &Schedule, limits: &Limits) -> Result<(Scenario, Value)> {
    let mut best: Option<(Scenario, Value)> = None;
    for scenario in enumerate_scenarios(instance.job_count(), instance.gamma(), limits)? {
        let value = scenario_makespan(instance, schedule, &scenario)?;
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((scenario, value));
        }
    }
    Ok(best.expect("the empty scenario is always enumerated"))
}
