use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::Schedule;
use crate::objective::{gamma_set, worst_case_makespan};
use crate::ptas::rounding::{RoundedInstance, ThresholdSet};
use crate::value::{Rational, Value};

/// Number of machines per threshold; sums to the machine count.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Outline {
    pub thresholds: Vec<Rational>,
    pub counts: Vec<usize>,
}

impl Outline {
    pub fn machines(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Threshold of each machine, machines numbered threshold by threshold.
    pub fn machine_thresholds(&self) -> Vec<Rational> {
        self.thresholds
            .iter()
            .zip(&self.counts)
            .flat_map(|(t, &c)| std::iter::repeat_n(t.clone(), c))
            .collect()
    }

    /// Counts of the per-machine thresholds `t` over `delta`.
    pub fn from_machine_thresholds(delta: &ThresholdSet, t: &[Rational]) -> Result<Outline> {
        let mut counts = vec![0; delta.len()];
        for value in t {
            let k = delta
                .values()
                .binary_search(value)
                .map_err(|_| Error::InvalidInput(format!("threshold {value} not in the threshold set")))?;
            counts[k] += 1;
        }
        Ok(Outline {
            thresholds: delta.values().to_vec(),
            counts,
        })
    }

    /// Rounds every count down to zero or a power of two.
    pub fn restrict(&self) -> RestrictedOutline {
        RestrictedOutline {
            thresholds: self.thresholds.clone(),
            counts: self.counts.iter().map(|&c| power_floor(c)).collect(),
        }
    }
}

fn power_floor(c: usize) -> usize {
    if c == 0 {
        0
    } else {
        1 << c.ilog2()
    }
}

/// Threshold of every machine under `schedule` on the rounded instance:
/// zero when the machine holds at most `gamma` jobs, otherwise the smallest
/// rounded deviation among its deviating jobs.
pub fn outline_of(rounded: &RoundedInstance, schedule: &Schedule) -> Result<Vec<Rational>> {
    let inst = rounded.instance();
    let cost = worst_case_makespan(inst, schedule)?;
    if cost > Value::Finite(Rational::one()) {
        return Err(Error::InvalidInput(format!("outline needs cost at most 1, got {cost}")));
    }
    let gamma = inst.gamma();
    schedule
        .machine_jobs(inst.machine_count())
        .iter()
        .enumerate()
        .map(|(i, jobs)| {
            if jobs.len() <= gamma {
                return Ok(Rational::zero());
            }
            let chosen = gamma_set(inst, i, jobs)?;
            Ok(chosen
                .iter()
                .map(|&j| rounded.rounded_deviation(j).clone())
                .min()
                .unwrap_or_else(Rational::zero))
        })
        .collect()
}

/// All count vectors over `delta` summing to `m`, starting at `(m, 0, ..)`
/// and decreasing lexicographically.
pub fn enumerate_outlines(m: usize, delta: &ThresholdSet) -> OutlineIter {
    let k = delta.len();
    let first = (k > 0).then(|| {
        let mut c = vec![0; k];
        c[0] = m;
        c
    });
    OutlineIter {
        thresholds: delta.values().to_vec(),
        current: if k == 0 && m == 0 { Some(Vec::new()) } else { first },
    }
}

#[derive(Clone, Debug)]
pub struct OutlineIter {
    thresholds: Vec<Rational>,
    current: Option<Vec<usize>>,
}

impl Iterator for OutlineIter {
    type Item = Outline;

    fn next(&mut self) -> Option<Outline> {
        let counts = self.current.take()?;
        let k = counts.len();
        if k >= 2 {
            if let Some(i) = (0..k - 1).rev().find(|&i| counts[i] > 0) {
                let mut next = counts.clone();
                next[i] -= 1;
                let rest: usize = next[i + 1..].iter().sum::<usize>() + 1;
                next[i + 1..].iter_mut().for_each(|c| *c = 0);
                next[i + 1] = rest;
                self.current = Some(next);
            }
        }
        Some(Outline {
            thresholds: self.thresholds.clone(),
            counts,
        })
    }
}

/// Per-threshold machine counts, each zero or a power of two.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RestrictedOutline {
    pub thresholds: Vec<Rational>,
    pub counts: Vec<usize>,
}

impl RestrictedOutline {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Every restricted outline over `delta` with `m/2 <= sum <= m`, in
/// lexicographic order of the count vectors. Empty when none exists.
pub fn enumerate_restricted_outlines(m: usize, delta: &ThresholdSet) -> Vec<RestrictedOutline> {
    let mut allowed = vec![0];
    let mut p = 1;
    while p <= m {
        allowed.push(p);
        p *= 2;
    }
    let mut out = Vec::new();
    let mut counts = vec![0; delta.len()];
    fill(0, 0, m, &allowed, &mut counts, &mut |c| {
        if 2 * c.iter().sum::<usize>() >= m {
            out.push(RestrictedOutline {
                thresholds: delta.values().to_vec(),
                counts: c.to_vec(),
            });
        }
    });
    out
}

fn fill(pos: usize, sum: usize, m: usize, allowed: &[usize], counts: &mut [usize], emit: &mut impl FnMut(&[usize])) {
    if pos == counts.len() {
        emit(counts);
        return;
    }
    for &a in allowed {
        if sum + a > m {
            break;
        }
        counts[pos] = a;
        fill(pos + 1, sum + a, m, allowed, counts, emit);
    }
    counts[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Instance;
    use crate::ptas::rounding::{round_deviations, threshold_set};
    use crate::value::{int, ratio};

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn delta(k: usize) -> ThresholdSet {
        // eps = 1/8 gives enough grid points
        let full = threshold_set(&ratio(1, 8), 1).unwrap();
        full.restricted_to(&full.values()[..k])
    }

    #[test]
    fn outline_enumeration() {
        let got: Vec<Vec<usize>> = enumerate_outlines(3, &delta(2)).map(|o| o.counts).collect();
        assert_eq!(got, vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
        assert_eq!(enumerate_outlines(1, &delta(5)).count(), 5);
        for m in 0..5 {
            for k in 1..5 {
                let all: Vec<_> = enumerate_outlines(m, &delta(k)).collect();
                assert_eq!(all.len(), binomial(m + k - 1, k - 1));
                assert!(all.iter().all(|o| o.machines() == m));
                let mut uniq = all.clone();
                uniq.dedup();
                assert_eq!(uniq.len(), all.len());
            }
        }
    }

    #[test]
    fn restricted_enumeration() {
        let all = enumerate_restricted_outlines(10, &delta(3));
        assert!(all.iter().all(|o| (5..=10).contains(&o.total())));
        let values: std::collections::BTreeSet<usize> = all.iter().flat_map(|o| o.counts.clone()).collect();
        assert_eq!(values.into_iter().collect::<Vec<_>>(), vec![0, 1, 2, 4, 8]);
        assert_eq!(power_floor(5), 4);
        // restriction of every outline is enumerated
        for m in 1..7 {
            let d = delta(3);
            let restricted = enumerate_restricted_outlines(m, &d);
            for o in enumerate_outlines(m, &d) {
                assert!(restricted.contains(&o.restrict()), "m={m} {:?}", o.counts);
            }
        }
    }

    #[test]
    fn outline_examples() {
        let eps = ratio(1, 2);
        // two jobs, gamma 3: fewer than gamma
        let inst = Instance::identical_from_pairs(1, [(int(0), ratio(1, 4)), (int(0), ratio(1, 4))], 3).unwrap();
        let r = round_deviations(&inst, &eps).unwrap();
        assert_eq!(outline_of(&r, &Schedule::new(vec![0, 0])).unwrap(), vec![int(0)]);

        // rounded deviations (0.75, 0.5, 0.5) with gamma 2 would cost 1.25
        let inst = Instance::identical_from_pairs(
            1,
            [(int(0), ratio(3, 4)), (int(0), ratio(1, 2)), (int(0), ratio(1, 2))],
            2,
        )
        .unwrap();
        let r = round_deviations(&inst.scaled(&ratio(1, 2)), &ratio(1, 2)).unwrap();
        // scaled: 0.375, 0.25, 0.25 all on the gamma = 2 grid
        assert_eq!(r.rounded_deviation(0), &ratio(3, 8));
        assert_eq!(outline_of(&r, &Schedule::new(vec![0, 0, 0])).unwrap(), vec![ratio(1, 4)]);

        let heavy = Instance::identical_from_pairs(1, [(int(1), int(1))], 1).unwrap();
        let costly = round_deviations(&heavy, &ratio(1, 2)).unwrap();
        assert!(outline_of(&costly, &Schedule::new(vec![0])).is_err());
    }
}
