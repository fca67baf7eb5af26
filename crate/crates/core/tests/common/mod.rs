//! Test-side oracles, written without the library's evaluation code.
#![allow(dead_code)]

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robust_sched::{Instance, InstanceKind, Job, Rational, Schedule, Value};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Non-negative rational `k / d` with `k <= max * d` and `d` in 1..=4.
pub fn random_rational(rng: &mut impl Rng, max: i64) -> Rational {
    let d = rng.random_range(1..=4i64);
    rat(rng.random_range(0..=max * d), d)
}

pub fn random_identical(rng: &mut impl Rng, n: usize, m: usize, gamma: usize) -> Instance {
    let jobs = (0..n)
        .map(|_| Job::new(random_rational(rng, 6), random_rational(rng, 6)))
        .collect();
    Instance::identical(m, jobs, gamma).unwrap()
}

pub fn random_instance(rng: &mut impl Rng, kind: InstanceKind, n: usize, m: usize, gamma: usize) -> Instance {
    match kind {
        InstanceKind::Identical => random_identical(rng, n, m, gamma),
        InstanceKind::Uniform => {
            let speeds = (0..m).map(|_| rat(rng.random_range(1..=4), rng.random_range(1..=2))).collect();
            let jobs = (0..n)
                .map(|_| Job::new(random_rational(rng, 6), random_rational(rng, 6)))
                .collect();
            Instance::uniform(speeds, jobs, gamma).unwrap()
        }
        InstanceKind::Unrelated => {
            let mut p_bar = vec![vec![Value::zero(); n]; m];
            let mut p_hat = vec![vec![Value::zero(); n]; m];
            for j in 0..n {
                let keep = rng.random_range(0..m);
                for i in 0..m {
                    if i != keep && rng.random_bool(0.15) {
                        p_bar[i][j] = Value::Forbidden;
                        p_hat[i][j] = Value::Forbidden;
                    } else {
                        p_bar[i][j] = Value::Finite(random_rational(rng, 6));
                        p_hat[i][j] = Value::Finite(random_rational(rng, 6));
                    }
                }
            }
            Instance::unrelated(p_bar, p_hat, gamma).unwrap()
        }
    }
}

pub fn random_kind(rng: &mut impl Rng) -> InstanceKind {
    [InstanceKind::Identical, InstanceKind::Uniform, InstanceKind::Unrelated][rng.random_range(0..3)]
}

fn entry(v: Value) -> Option<Rational> {
    v.into_finite()
}

/// Random schedule using allowed machines only.
pub fn random_schedule(rng: &mut impl Rng, inst: &Instance) -> Schedule {
    let m = inst.machine_count();
    Schedule::new(
        (0..inst.job_count())
            .map(|j| {
                let allowed: Vec<usize> = (0..m).filter(|&i| inst.is_allowed(i, j)).collect();
                allowed[rng.random_range(0..allowed.len())]
            })
            .collect(),
    )
}

/// Max over every deviating set of size at most gamma, by bitmask.
pub fn enumerated_worst_case(inst: &Instance, sched: &Schedule) -> Option<Rational> {
    let (n, m, gamma) = (inst.job_count(), inst.machine_count(), inst.gamma());
    let mut best: Option<Rational> = None;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize > gamma {
            continue;
        }
        let mut loads = vec![Rational::zero(); m];
        for j in 0..n {
            let i = sched.assignment[j];
            loads[i] += entry(inst.nominal(i, j))?;
            if mask >> j & 1 == 1 {
                loads[i] += entry(inst.deviation(i, j))?;
            }
        }
        let worst = loads.into_iter().max().unwrap();
        if best.as_ref().is_none_or(|b| worst > *b) {
            best = Some(worst);
        }
    }
    best
}

/// Worst case per machine by sorting deviations.
pub fn sorted_worst_case(inst: &Instance, assignment: &[usize]) -> Option<Rational> {
    let m = inst.machine_count();
    let mut nominal = vec![Rational::zero(); m];
    let mut devs: Vec<Vec<Rational>> = vec![Vec::new(); m];
    for (j, &i) in assignment.iter().enumerate() {
        nominal[i] += entry(inst.nominal(i, j))?;
        devs[i].push(entry(inst.deviation(i, j))?);
    }
    (0..m)
        .map(|i| {
            let mut d = devs[i].clone();
            d.sort_by(|a, b| b.cmp(a));
            &nominal[i] + d.iter().take(inst.gamma()).sum::<Rational>()
        })
        .max()
}

/// Calls `f` on every assignment in `m^n`.
pub fn for_each_assignment(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    let mut a = vec![0usize; n];
    loop {
        f(&a);
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            a[k] += 1;
            if a[k] < m {
                break;
            }
            a[k] = 0;
        }
    }
}

/// Brute-force robust optimum and one optimal assignment.
pub fn brute_opt(inst: &Instance) -> (Vec<usize>, Rational) {
    let mut best: Option<(Vec<usize>, Rational)> = None;
    for_each_assignment(inst.job_count(), inst.machine_count(), |a| {
        if let Some(v) = sorted_worst_case(inst, a) {
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some((a.to_vec(), v));
            }
        }
    });
    best.unwrap()
}

/// Classical times: nominal plus deviation where the deviation exceeds `t / gamma`.
pub fn classical_times(inst: &Instance, t: &Rational) -> Vec<Vec<Option<Rational>>> {
    let gamma = inst.gamma();
    (0..inst.machine_count())
        .map(|i| {
            (0..inst.job_count())
                .map(|j| {
                    let bar = entry(inst.nominal(i, j))?;
                    let hat = entry(inst.deviation(i, j))?;
                    if gamma > 0 && &hat * Rational::from_integer(gamma.into()) > *t {
                        Some(bar + hat)
                    } else {
                        Some(bar)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn classical_makespan(times: &[Vec<Option<Rational>>], assignment: &[usize]) -> Option<Rational> {
    let mut loads = vec![Rational::zero(); times.len()];
    for (j, &i) in assignment.iter().enumerate() {
        loads[i] += times[i][j].clone()?;
    }
    loads.into_iter().max()
}

pub fn classical_opt(times: &[Vec<Option<Rational>>]) -> Rational {
    let mut best: Option<Rational> = None;
    for_each_assignment(times[0].len(), times.len(), |a| {
        if let Some(v) = classical_makespan(times, a) {
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
    });
    best.unwrap()
}
