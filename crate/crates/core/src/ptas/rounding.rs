use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{Instance, InstanceKind};
use crate::value::Rational;

/// Divides every nominal and deviation time by `threshold`.
pub fn scale_to_threshold(instance: &Instance, threshold: &Rational) -> Result<Instance> {
    if !threshold.is_positive() {
        return Err(Error::InvalidInput("threshold must be positive".into()));
    }
    Ok(instance.scaled(&threshold.recip()))
}

pub(crate) fn check_epsilon(epsilon: &Rational) -> Result<()> {
    if !epsilon.is_positive() || *epsilon >= Rational::one() {
        return Err(Error::InvalidInput(format!("epsilon {epsilon} outside (0, 1)")));
    }
    Ok(())
}

fn base(epsilon: &Rational, gamma: usize) -> Result<Rational> {
    if gamma == 0 {
        return Err(Error::InvalidInput("deviation rounding needs gamma >= 1".into()));
    }
    check_epsilon(epsilon)?;
    Ok(epsilon / Rational::from_integer(BigInt::from(gamma)))
}

/// Largest grid point `base * (1+eps)^i` not above `value`, or zero below `base`.
fn round_down(value: &Rational, base: &Rational, growth: &Rational) -> Rational {
    if value < base {
        return Rational::zero();
    }
    let mut point = base.clone();
    loop {
        let next = &point * growth;
        if next > *value {
            return point;
        }
        point = next;
    }
}

/// An identical instance whose deviations are rounded down onto the grid
/// `{0} ∪ {eps/gamma * (1+eps)^i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundedInstance {
    original: Instance,
    rounded: Instance,
    epsilon: Rational,
}

impl RoundedInstance {
    /// The instance before rounding.
    pub fn original(&self) -> &Instance {
        &self.original
    }

    /// Same nominal times, rounded deviations.
    pub fn instance(&self) -> &Instance {
        &self.rounded
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn gamma(&self) -> usize {
        self.rounded.gamma()
    }

    pub fn rounded_deviation(&self, job: usize) -> &Rational {
        &self.rounded.jobs().expect("identical")[job].p_hat
    }

    /// `true` if `value` is zero or of the form `eps/gamma * (1+eps)^i`.
    pub fn on_grid(&self, value: &Rational) -> bool {
        if value.is_zero() {
            return true;
        }
        let base = &self.epsilon / Rational::from_integer(BigInt::from(self.gamma()));
        round_down(value, &base, &(Rational::one() + &self.epsilon)) == *value
    }
}

/// Rounds every deviation down onto the grid; nominal times are kept.
///
/// Accepts any `epsilon` in `(0, 1)`; the approximation drivers clamp it
/// further.
pub fn round_deviations(instance: &Instance, epsilon: &Rational) -> Result<RoundedInstance> {
    if instance.kind() != InstanceKind::Identical {
        return Err(Error::Unsupported("deviation rounding needs identical machines".into()));
    }
    let base = base(epsilon, instance.gamma())?;
    let growth = Rational::one() + epsilon;
    let p_hat: Vec<Rational> = instance
        .jobs()
        .expect("identical")
        .iter()
        .map(|j| round_down(&j.p_hat, &base, &growth))
        .collect();
    Ok(RoundedInstance {
        original: instance.clone(),
        rounded: instance.with_identical_deviations(&p_hat)?,
        epsilon: epsilon.clone(),
    })
}

/// Candidate per-machine thresholds, ascending: `0` and every grid point
/// `eps/gamma * (1+eps)^i` up to `1/gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdSet {
    values: Vec<Rational>,
}

impl ThresholdSet {
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.values.binary_search(value).is_ok()
    }

    /// Keeps zero and the thresholds that occur among `deviations`.
    ///
    /// A machine's threshold is one of its rounded deviations (or zero), so
    /// outlines over the restricted set still cover every schedule.
    pub fn restricted_to(&self, deviations: &[Rational]) -> ThresholdSet {
        ThresholdSet {
            values: self
                .values
                .iter()
                .filter(|v| v.is_zero() || deviations.contains(v))
                .cloned()
                .collect(),
        }
    }
}

pub fn threshold_set(epsilon: &Rational, gamma: usize) -> Result<ThresholdSet> {
    let base = base(epsilon, gamma)?;
    let cap = Rational::from_integer(BigInt::from(gamma)).recip();
    let growth = Rational::one() + epsilon;
    let mut values = vec![Rational::zero()];
    let mut point = base;
    while point <= cap {
        let next = &point * &growth;
        values.push(point);
        point = next;
    }
    Ok(ThresholdSet { values })
}
