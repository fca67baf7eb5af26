//! Shared fixtures for the criterion benches.

use robust_sched::gen::{generate, seeded_formula, Family, GeneratorConfig};
use robust_sched::hardness::{encode, ReductionInstance};
use robust_sched::Instance;

/// Identical-machine instances with exactly `jobs` jobs and `machines` machines.
pub fn identical(seed: u64, jobs: usize, machines: usize, gamma: usize, count: usize) -> Vec<Instance> {
    let mut config = GeneratorConfig::new(seed, Family::IdenticalUniformRandom, [jobs, jobs], [machines, machines]);
    config.gamma = [gamma, gamma];
    generate(&config, count).expect("valid generator config")
}

pub fn unrelated(seed: u64, jobs: usize, machines: usize, gamma: usize, count: usize) -> Vec<Instance> {
    let mut config = GeneratorConfig::new(seed, Family::UnrelatedRandom, [jobs, jobs], [machines, machines]);
    config.gamma = [gamma, gamma];
    generate(&config, count).expect("valid generator config")
}

pub fn sat_gap(seed: u64, variables: usize, clauses: usize) -> ReductionInstance {
    encode(&seeded_formula(seed, variables, clauses)).expect("at least one variable")
}
