//! Exact non-negative rationals with a distinguished `Forbidden` marker.
//!
//! Every processing time, threshold and objective value in this crate is a
//! [`Value`]. Arithmetic is exact: comparisons such as `p_hat > T / gamma` are
//! never subject to rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Arbitrary precision rational used for all finite quantities.
pub type Rational = BigRational;

/// Shorthand for `n / d` as a [`Rational`].
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A processing time: either a finite non-negative rational or `Forbidden`.
///
/// `Forbidden` orders strictly above every finite value and absorbs addition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Finite(Rational),
    Forbidden,
}

impl Value {
    pub fn zero() -> Self {
        Value::Finite(Rational::zero())
    }

    pub fn int(n: u64) -> Self {
        Value::Finite(Rational::from_integer(BigInt::from(n)))
    }

    /// `n / d`; panics on a zero denominator.
    pub fn ratio(n: u64, d: u64) -> Self {
        assert!(d != 0, "zero denominator");
        Value::Finite(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Wraps a rational, rejecting negative numbers.
    pub fn finite(r: Rational) -> Result<Self, Error> {
        if r.is_negative() {
            return Err(Error::InvalidInput(format!("negative value {r}")));
        }
        Ok(Value::Finite(r))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Value::Finite(_))
    }

    pub fn is_forbidden(&self) -> bool {
        matches!(self, Value::Forbidden)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Value::Finite(r) if r.is_zero())
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            Value::Finite(r) => Some(r),
            Value::Forbidden => None,
        }
    }

    pub fn into_finite(self) -> Option<Rational> {
        match self {
            Value::Finite(r) => Some(r),
            Value::Forbidden => None,
        }
    }

    /// `self - other`, or `None` when either side is forbidden or the result
    /// would be negative.
    pub fn checked_sub(&self, other: &Value) -> Option<Value> {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) if a >= b => Some(Value::Finite(a - b)),
            _ => None,
        }
    }

    /// Multiplies by a non-negative rational. `Forbidden` stays `Forbidden`.
    pub fn scale(&self, factor: &Rational) -> Value {
        debug_assert!(!factor.is_negative());
        match self {
            Value::Finite(r) => Value::Finite(r * factor),
            Value::Forbidden => Value::Forbidden,
        }
    }

    /// Decimal approximation, `inf` for forbidden.
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Finite(r) => rational_to_f64(r),
            Value::Forbidden => f64::INFINITY,
        }
    }
}

impl Default for Value {
    fn default() -> Self {
        Value::zero()
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        debug_assert!(!r.is_negative());
        Value::Finite(r)
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => a.cmp(b),
            (Value::Finite(_), Value::Forbidden) => Ordering::Less,
            (Value::Forbidden, Value::Finite(_)) => Ordering::Greater,
            (Value::Forbidden, Value::Forbidden) => Ordering::Equal,
        }
    }
}

impl Add<&Value> for &Value {
    type Output = Value;
    fn add(self, rhs: &Value) -> Value {
        match (self, rhs) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Forbidden,
        }
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        &self + &rhs
    }
}

impl AddAssign<&Value> for Value {
    fn add_assign(&mut self, rhs: &Value) {
        match (&mut *self, rhs) {
            (Value::Finite(a), Value::Finite(b)) => *a += b,
            _ => *self = Value::Forbidden,
        }
    }
}

impl Mul<&Rational> for &Value {
    type Output = Value;
    fn mul(self, rhs: &Rational) -> Value {
        self.scale(rhs)
    }
}

impl std::iter::Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        let mut acc = Value::zero();
        for v in iter {
            acc += &v;
        }
        acc
    }
}

impl<'a> std::iter::Sum<&'a Value> for Value {
    fn sum<I: Iterator<Item = &'a Value>>(iter: I) -> Value {
        let mut acc = Value::zero();
        for v in iter {
            acc += v;
        }
        acc
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(r) => write!(f, "{}", format_rational(r)),
            Value::Forbidden => f.write_str("inf"),
        }
    }
}

/// Serde adapter for plain rationals, written like finite [`Value`]s.
pub mod rational_serde {
    use super::{Rational, Value};
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        Value::Finite(r.clone()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        Value::deserialize(d)?
            .into_finite()
            .ok_or_else(|| de::Error::custom("expected a finite rational"))
    }
}

/// Renders a rational as `num/den` (always with an explicit denominator).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den`, an integer, or a plain decimal such as `0.75`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse rational {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| bad())?
        };
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let frac = BigInt::from_str(frac).map_err(|_| bad())?;
        let frac = Rational::new(frac, den);
        let whole = Rational::from_integer(whole.abs());
        let r = whole + frac;
        return Ok(if negative { -r } else { r });
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

impl FromStr for Value {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") {
            return Ok(Value::Forbidden);
        }
        Value::finite(parse_rational(t)?)
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

struct ValueVisitor;

impl Visitor<'_> for ValueVisitor {
    type Value = Value;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a non-negative rational \"num/den\", an integer, or \"inf\"")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Value, E> {
        v.parse().map_err(E::custom)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Value, E> {
        Ok(Value::int(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Value, E> {
        if v < 0 {
            return Err(E::custom(format!("negative value {v}")));
        }
        Ok(Value::int(v as u64))
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(ValueVisitor)
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // Ratio::to_f64 gives up on huge operands; shift both sides down first.
    let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
    let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// The rational with the smallest denominator in the open interval `(lo, hi)`.
///
/// Requires `0 <= lo < hi`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi && !lo.is_negative());
    let fl = lo.floor();
    // An integer strictly inside the interval wins outright.
    let candidate = &fl + Rational::one();
    if &candidate < hi {
        return candidate;
    }
    // Both ends share the integer part; recurse on the reciprocal of the
    // fractional parts (the interval flips).
    let a = lo - &fl;
    let b = hi - &fl;
    if a.is_zero() {
        // (0, b) with b <= 1: 1/k for the smallest k with 1/k < b.
        let k = (b.recip().floor()) + Rational::one();
        return fl + k.recip();
    }
    fl + simplest_between(&b.recip(), &a.recip()).recip()
}

/// Least common multiple of the denominators of the given rationals.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
