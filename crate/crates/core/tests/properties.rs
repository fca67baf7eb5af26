mod common;

use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;
use robust_sched::exact::{
    capacity_decision_exact, optimal_bnb, optimal_bruteforce, CapacitatedTypedInstance, Limits, MachineType,
    TypedSchedule,
};
use robust_sched::gen::seeded_formula;
use robust_sched::hardness::{encode, sat_decide, schedule_from_assignment};
use robust_sched::ptas::{outline_of, round_deviations, scale_to_threshold, threshold_set};
use robust_sched::reduction::{build_classical, dual_step, DualOutcome, ExactSubroutine};
use robust_sched::suite::{solve, SolverSpec};
use robust_sched::{gamma_set, worst_case_makespan, Instance, InstanceKind, Rational, Schedule, Value};

fn instance_from(seed: u64, n: usize, m: usize, gamma: usize) -> Instance {
    let mut r = rng(seed);
    let kind = random_kind(&mut r);
    random_instance(&mut r, kind, n, m, gamma)
}

fn plain_makespan(inst: &Instance, sched: &Schedule, deviate: bool) -> Rational {
    let mut loads = vec![Rational::zero(); inst.machine_count()];
    for (j, &i) in sched.assignment.iter().enumerate() {
        loads[i] += inst.nominal(i, j).into_finite().unwrap();
        if deviate {
            loads[i] += inst.deviation(i, j).into_finite().unwrap();
        }
    }
    loads.into_iter().max().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn worst_case_grows_with_gamma(seed: u64, n in 1usize..=7, m in 1usize..=3) {
        let inst = instance_from(seed, n, m, 0);
        let sched = random_schedule(&mut rng(seed ^ 1), &inst);
        let mut last = Value::zero();
        for g in 0..=n + 1 {
            let v = worst_case_makespan(&inst.with_gamma(g), &sched).unwrap();
            prop_assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn extreme_gammas_are_classical(seed: u64, n in 1usize..=7, m in 1usize..=3) {
        let inst = instance_from(seed, n, m, 0);
        let sched = random_schedule(&mut rng(seed ^ 2), &inst);
        let none = worst_case_makespan(&inst, &sched).unwrap();
        prop_assert_eq!(none, Value::Finite(plain_makespan(&inst, &sched, false)));
        for g in [n, n + 3] {
            let all = worst_case_makespan(&inst.with_gamma(g), &sched).unwrap();
            prop_assert_eq!(all, Value::Finite(plain_makespan(&inst, &sched, true)));
        }
    }

    #[test]
    fn gamma_set_takes_largest_deviations(seed: u64, n in 1usize..=8, m in 1usize..=3, gamma in 0usize..=4) {
        let inst = instance_from(seed, n, m, gamma);
        let sched = random_schedule(&mut rng(seed ^ 3), &inst);
        for (i, jobs) in sched.machine_jobs(m).iter().enumerate() {
            let set = gamma_set(&inst, i, jobs).unwrap();
            prop_assert_eq!(set.len(), jobs.len().min(gamma));
            for &a in &set {
                prop_assert!(jobs.contains(&a));
                for &b in jobs.iter().filter(|b| !set.contains(b)) {
                    prop_assert!(inst.deviation(i, a) >= inst.deviation(i, b));
                }
            }
        }
    }

    #[test]
    fn evaluation_is_repeatable(seed: u64, n in 1usize..=8, m in 1usize..=3, gamma in 0usize..=3) {
        let inst = instance_from(seed, n, m, gamma);
        let sched = random_schedule(&mut rng(seed ^ 4), &inst);
        prop_assert_eq!(worst_case_makespan(&inst, &sched).unwrap(), worst_case_makespan(&inst, &sched).unwrap());
    }

    #[test]
    fn capacity_decision_matches_enumeration(seed: u64, n in 0usize..=6, types in 1usize..=3) {
        let mut r = rng(seed);
        let machine_types: Vec<MachineType> = (0..types)
            .map(|_| MachineType {
                count: r.random_range(1..=2),
                capacity: random_rational(&mut r, 6) + rat(1, 4),
                times: (0..n)
                    .map(|_| if r.random_bool(0.1) { Value::Forbidden } else { Value::Finite(random_rational(&mut r, 4)) })
                    .collect(),
            })
            .collect();
        let cti = CapacitatedTypedInstance::new(n, machine_types.clone()).unwrap();
        let m = cti.machine_count();
        let mut feasible = false;
        for_each_assignment(n, m, |a| {
            feasible |= cti.within(&TypedSchedule { assignment: a.to_vec() }, &Rational::zero());
        });
        let outcome = capacity_decision_exact(&cti, &Rational::zero());
        prop_assert_eq!(outcome.is_accept(), feasible);
        if let robust_sched::exact::DecisionOutcome::Accept(s) = &outcome {
            prop_assert!(cti.within(s, &Rational::zero()));
        }

        let factor = rat(r.random_range(1..=7), r.random_range(1..=3));
        let scaled = CapacitatedTypedInstance::new(
            n,
            machine_types
                .into_iter()
                .map(|t| MachineType {
                    capacity: &t.capacity * &factor,
                    times: t.times.iter().map(|v| match v {
                        Value::Finite(x) => Value::Finite(x * &factor),
                        Value::Forbidden => Value::Forbidden,
                    }).collect(),
                    ..t
                })
                .collect(),
        )
        .unwrap();
        prop_assert_eq!(capacity_decision_exact(&scaled, &Rational::zero()).is_accept(), feasible);
    }

    #[test]
    fn classical_transformation_claims(seed: u64, n in 1usize..=6, m in 1usize..=3, gamma in 0usize..=3, r in 1i64..=12) {
        let inst = instance_from(seed, n, m, gamma);
        let (opt_a, opt) = brute_opt(&inst);
        let t = &opt * rat(r, 6) + rat(1, 8);
        let times = classical_times(&inst, &t);
        if opt <= t {
            prop_assert!(classical_makespan(&times, &opt_a).unwrap() <= t);
            let step = dual_step(&inst, &t, &ExactSubroutine::default()).unwrap();
            prop_assert!(step.is_accept());
        }
        let sched = random_schedule(&mut rng(seed ^ 5), &inst);
        let robust = sorted_worst_case(&inst, &sched.assignment).unwrap();
        prop_assert!(robust <= classical_makespan(&times, &sched.assignment).unwrap() + &t);
    }

    #[test]
    fn outline_entries_lie_in_threshold_set(seed: u64, n in 1usize..=7, m in 1usize..=3, gamma in 1usize..=3, e in 0usize..3) {
        let mut r = rng(seed);
        let base = random_identical(&mut r, n, m, gamma);
        let (_, opt) = brute_opt(&base);
        prop_assume!(!opt.is_zero());
        let eps = [rat(1, 5), rat(1, 10), rat(1, 2)][e].clone();
        let rounded = round_deviations(&scale_to_threshold(&base, &opt).unwrap(), &eps).unwrap();
        let delta = threshold_set(&eps, gamma).unwrap();
        for _ in 0..10 {
            let sched = random_schedule(&mut r, rounded.instance());
            if let Ok(t) = outline_of(&rounded, &sched) {
                prop_assert!(t.iter().all(|v| delta.contains(v)));
            }
        }
    }

    #[test]
    fn forward_construction_costs_one(seed: u64, vars in 1usize..=8, clauses in 1usize..=10) {
        let f = seeded_formula(seed, vars, clauses);
        let r = encode(&f).unwrap();
        if let Some(a) = sat_decide(&f, &Limits::default()).unwrap() {
            let s = schedule_from_assignment(&r, &a).unwrap();
            prop_assert_eq!(worst_case_makespan(&r.instance, &s).unwrap(), Value::int(1));
        }
    }

    #[test]
    fn solver_values_are_reevaluated(seed: u64, n in 1usize..=6, m in 1usize..=3, gamma in 0usize..=3) {
        let mut r = rng(seed);
        let inst = random_identical(&mut r, n, m, gamma);
        let specs: Vec<SolverSpec> = serde_json::from_str(
            r#"[{"algo": "exact"}, {"algo": "bnb"}, {"algo": "greedy"}, {"algo": "approx3"}, {"algo": "ptas"}, {"algo": "eptas"}]"#,
        )
        .unwrap();
        for spec in &specs {
            let sol = solve(spec, &inst, &Limits::default()).unwrap();
            let oracle = sorted_worst_case(&inst, &sol.schedule.assignment).unwrap();
            prop_assert_eq!(&sol.value, &Value::Finite(oracle));
        }
    }
}

#[test]
fn bnb_matches_bruteforce() {
    let mut r = rng(11);
    for k in 0..500 {
        let kind = random_kind(&mut r);
        let n = r.random_range(1..=8);
        let m = r.random_range(1..=3);
        let gamma = r.random_range(0..=3);
        let inst = random_instance(&mut r, kind, n, m, gamma);
        let (_, brute) = optimal_bruteforce(&inst, &Limits::default()).unwrap();
        let (s, bnb) = optimal_bnb(&inst);
        assert_eq!(brute, bnb, "instance {k}");
        assert_eq!(worst_case_makespan(&inst, &s).unwrap(), bnb);
        assert_eq!(Value::Finite(brute_opt(&inst).1), bnb);
    }
}

#[test]
fn uniform_kept_only_without_split_jobs() {
    let mut r = rng(12);
    let mut kept = 0;
    for _ in 0..200 {
        let n = r.random_range(1..=6);
        let m = r.random_range(1..=3);
        let gamma = r.random_range(1..=3);
        let inst = random_instance(&mut r, InstanceKind::Uniform, n, m, gamma);
        let t = random_rational(&mut r, 8) + rat(1, 2);
        let ci = build_classical(&inst, &t);
        let times = classical_times(&inst, &t);
        let split = (0..n).any(|j| {
            let big: Vec<bool> = (0..m).map(|i| times[i][j] != inst.nominal(i, j).into_finite()).collect();
            big.iter().any(|&b| b) && !big.iter().all(|&b| b)
        });
        if split {
            assert_eq!(ci.structure(), InstanceKind::Unrelated);
        } else {
            kept += 1;
            assert_eq!(ci.structure(), InstanceKind::Uniform);
            let speeds = inst.speeds().unwrap();
            for j in 0..n {
                let work = times[0][j].clone().unwrap() * &speeds[0];
                for (row, speed) in times.iter().zip(speeds) {
                    assert_eq!(row[j].clone().unwrap() * speed, work);
                }
            }
        }
    }
    assert!(kept > 0);
}

/// Clause deviations equal `T / gamma` at `T = 1`, so no job counts as big
/// and every machine's classical load can be kept at 1: the step accepts
/// satisfiable and unsatisfiable formulas alike, with a schedule of robust
/// cost at most 2.
#[test]
fn gap_instances_accept_at_threshold_one() {
    let one = Rational::one();
    for seed in 0..60 {
        let f = seeded_formula(seed, 1 + seed as usize % 4, 2 + seed as usize % 9);
        let r = encode(&f).unwrap();
        match dual_step(&r.instance, &one, &ExactSubroutine::default()).unwrap() {
            DualOutcome::Accept(s) => {
                assert!(worst_case_makespan(&r.instance, &s).unwrap() <= Value::int(2));
            }
            DualOutcome::Reject => panic!("formula {seed} rejected at T = 1"),
        }
    }
}

#[test]
fn optimal_gap_schedules_separate_variable_jobs() {
    for seed in 0..80 {
        let f = seeded_formula(seed, 1 + seed as usize % 5, 1 + seed as usize % 7);
        let r = encode(&f).unwrap();
        let (s, v) = optimal_bnb(&r.instance);
        if v != Value::int(1) {
            continue;
        }
        let n0 = f.variable_count();
        for jobs in s.machine_jobs(r.instance.machine_count()) {
            let vars = jobs.iter().filter(|&&j| j < n0).count();
            assert!(vars == 0 || jobs.len() == 1, "formula {seed}: machine mixes a variable job with others");
        }
    }
}
