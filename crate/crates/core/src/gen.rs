//! Seeded instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardness::{encode, CnfFormula, Literal};
use crate::model::{Instance, Job};
use crate::value::{Rational, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Identical machines, independent integer `p_bar` and `p_hat`.
    IdenticalUniformRandom,
    /// Identical machines, `p_hat` a random quarter-multiple of `p_bar`.
    IdenticalCorrelated,
    /// Unrelated machines with random matrices and occasional forbidden entries.
    UnrelatedRandom,
    /// Uniform machines with integer speeds 1 to 4.
    UniformSpeeds,
    /// Gap instance of a random 3-CNF formula; the job range gives the
    /// variable count and the machine range the clause count.
    SatGap,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::IdenticalUniformRandom,
        Family::IdenticalCorrelated,
        Family::UnrelatedRandom,
        Family::UniformSpeeds,
        Family::SatGap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::IdenticalUniformRandom => "identical-uniform-random",
            Family::IdenticalCorrelated => "identical-correlated",
            Family::UnrelatedRandom => "unrelated-random",
            Family::UniformSpeeds => "uniform-speeds",
            Family::SatGap => "sat-gap",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown family `{s}`")))
    }
}

/// Inclusive integer ranges are written `[min, max]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub family: Family,
    pub jobs: [usize; 2],
    pub machines: [usize; 2],
    #[serde(default = "default_gamma")]
    pub gamma: [usize; 2],
    /// Range of the nominal times; deviations are drawn from `[0, max]`.
    #[serde(default = "default_values")]
    pub values: [u64; 2],
}

fn default_gamma() -> [usize; 2] {
    [0, 3]
}

fn default_values() -> [u64; 2] {
    [1, 10]
}

impl GeneratorConfig {
    pub fn new(seed: u64, family: Family, jobs: [usize; 2], machines: [usize; 2]) -> Self {
        GeneratorConfig {
            seed,
            family,
            jobs,
            machines,
            gamma: default_gamma(),
            values: default_values(),
        }
    }

    fn check(&self) -> Result<()> {
        let bad = |what: &str, r: [u64; 2]| {
            Err(Error::InvalidInput(format!("{what} range [{}, {}] is empty or invalid", r[0], r[1])))
        };
        let widen = |r: [usize; 2]| [r[0] as u64, r[1] as u64];
        if self.jobs[0] > self.jobs[1] || self.jobs[1] == 0 {
            return bad("job", widen(self.jobs));
        }
        if self.machines[0] > self.machines[1] || self.machines[1] == 0 {
            return bad("machine", widen(self.machines));
        }
        if self.gamma[0] > self.gamma[1] {
            return bad("gamma", widen(self.gamma));
        }
        if self.values[0] > self.values[1] || self.values[1] == 0 {
            return bad("value", self.values);
        }
        if self.family == Family::SatGap && self.jobs[0] == 0 {
            return bad("variable", widen(self.jobs));
        }
        Ok(())
    }
}

fn rng_for(config: &GeneratorConfig, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    rng
}

/// Instance number `index` of the stream defined by `config`.
pub fn generate_nth(config: &GeneratorConfig, index: u64) -> Result<Instance> {
    config.check()?;
    let mut rng = rng_for(config, index);
    let mut pick = |r: [usize; 2]| rng.random_range(r[0]..=r[1]);
    let n = pick(config.jobs).max(1);
    let m = pick(config.machines).max(1);
    let gamma = pick(config.gamma);
    let [lo, hi] = config.values;
    let int = |v: u64| Rational::from_integer(v.into());
    match config.family {
        Family::IdenticalUniformRandom => {
            let jobs = (0..n)
                .map(|_| Job::new(int(rng.random_range(lo..=hi)), int(rng.random_range(0..=hi))))
                .collect();
            Instance::identical(m, jobs, gamma)
        }
        Family::IdenticalCorrelated => {
            let jobs = (0..n)
                .map(|_| {
                    let p_bar = int(rng.random_range(lo..=hi));
                    let p_hat = &p_bar * Rational::new(rng.random_range(0u64..=4).into(), 4u64.into());
                    Job::new(p_bar, p_hat)
                })
                .collect();
            Instance::identical(m, jobs, gamma)
        }
        Family::UniformSpeeds => {
            let speeds = (0..m).map(|_| int(rng.random_range(1..=4))).collect();
            let jobs = (0..n)
                .map(|_| Job::new(int(rng.random_range(lo..=hi)), int(rng.random_range(0..=hi))))
                .collect();
            Instance::uniform(speeds, jobs, gamma)
        }
        Family::UnrelatedRandom => {
            let mut p_bar = vec![vec![Value::zero(); n]; m];
            let mut p_hat = vec![vec![Value::zero(); n]; m];
            for j in 0..n {
                let keep = rng.random_range(0..m);
                for i in 0..m {
                    if i != keep && rng.random_bool(0.1) {
                        p_bar[i][j] = Value::Forbidden;
                        p_hat[i][j] = Value::Forbidden;
                    } else {
                        p_bar[i][j] = Value::Finite(int(rng.random_range(lo..=hi)));
                        p_hat[i][j] = Value::Finite(int(rng.random_range(0..=hi)));
                    }
                }
            }
            Instance::unrelated(p_bar, p_hat, gamma)
        }
        Family::SatGap => {
            let clauses = m;
            Ok(encode(&random_formula(&mut rng, n, clauses))?.instance)
        }
    }
}

/// The first `count` instances of the stream.
pub fn generate(config: &GeneratorConfig, count: usize) -> Result<Vec<Instance>> {
    (0..count as u64).map(|i| generate_nth(config, i)).collect()
}

/// Uniformly random 3-CNF formula: every literal picks a variable and a sign.
pub fn random_formula(rng: &mut impl Rng, variables: usize, clauses: usize) -> CnfFormula {
    let mut lit = || Literal {
        var: rng.random_range(0..variables),
        positive: rng.random_bool(0.5),
    };
    let list = (0..clauses).map(|_| [lit(), lit(), lit()]).collect();
    CnfFormula::new(variables, list).expect("variables drawn in range")
}

/// [`random_formula`] from a seed.
pub fn seeded_formula(seed: u64, variables: usize, clauses: usize) -> CnfFormula {
    random_formula(&mut ChaCha8Rng::seed_from_u64(seed), variables, clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::instance_to_json;
    use crate::model::InstanceKind;

    #[test]
    fn deterministic() {
        for family in Family::ALL {
            let config = GeneratorConfig::new(1, family, [2, 6], [1, 3]);
            let a: Vec<String> = generate(&config, 5).unwrap().iter().map(instance_to_json).collect();
            let b: Vec<String> = generate(&config, 5).unwrap().iter().map(instance_to_json).collect();
            assert_eq!(a, b);
            let other = GeneratorConfig { seed: 2, ..config };
            let c: Vec<String> = generate(&other, 5).unwrap().iter().map(instance_to_json).collect();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn families_and_ranges() {
        let mut config = GeneratorConfig::new(7, Family::IdenticalCorrelated, [3, 5], [2, 2]);
        config.gamma = [0, 0];
        for inst in generate(&config, 10).unwrap() {
            assert_eq!(inst.kind(), InstanceKind::Identical);
            assert_eq!(inst.gamma(), 0);
            assert!((3..=5).contains(&inst.job_count()));
            assert_eq!(inst.machine_count(), 2);
            for j in inst.jobs().unwrap() {
                assert!(j.p_hat <= j.p_bar);
            }
        }
        let sat = GeneratorConfig::new(3, Family::SatGap, [3, 3], [4, 4]);
        let inst = generate_nth(&sat, 0).unwrap();
        assert_eq!(inst.machine_count(), 6);
        assert_eq!(inst.job_count(), 7);
        assert_eq!(inst.gamma(), 1);
        let un = GeneratorConfig::new(3, Family::UnrelatedRandom, [4, 4], [3, 3]);
        for inst in generate(&un, 10).unwrap() {
            assert!((0..4).all(|j| (0..3).any(|i| inst.is_allowed(i, j))));
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        let config = GeneratorConfig::new(1, Family::UniformSpeeds, [5, 2], [1, 3]);
        assert!(generate_nth(&config, 0).is_err());
        let config = GeneratorConfig::new(1, Family::UniformSpeeds, [1, 2], [0, 0]);
        assert!(generate_nth(&config, 0).is_err());
        assert!("nope".parse::<Family>().is_err());
        assert_eq!("sat-gap".parse::<Family>().unwrap(), Family::SatGap);
    }

    #[test]
    fn config_json() {
        let config: GeneratorConfig =
            serde_json::from_str(r#"{"seed": 4, "family": "uniform-speeds", "jobs": [1, 4], "machines": [2, 3]}"#)
                .unwrap();
        assert_eq!(config.gamma, [0, 3]);
        assert!(serde_json::from_str::<GeneratorConfig>(r#"{"seed": 4, "bogus": 1}"#).is_err());
    }
}
