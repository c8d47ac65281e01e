//! Numeric backends.
//!
//! Exact rationals carry every characterization and digraph computation that
//! can hit boundary ties. `f64` is used where eigenvectors force it; the float
//! backend threads explicit relative tolerances through its comparisons while
//! the exact backend ignores them.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Relative tolerance for `a_ji * a_ij = 1` on the float backend.
pub const TAU_RECIP: f64 = 1e-12;
/// Relative tolerance for consistency triples on the float backend.
pub const TAU_CONS: f64 = 1e-9;
/// One-sided slack favoring edge inclusion in `G(A, w)` on the float backend.
pub const TAU_EDGE: f64 = 1e-9;
/// Convergence tolerance for the Perron power iteration.
pub const TAU_PERRON: f64 = 1e-12;
/// Absolute slack (relative to the matrix entry) used when comparing float
/// approximation errors in dominance tests.
pub const TAU_DOMINANCE: f64 = 1e-12;

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for the rational backend.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(numer: i64, denom: i64) -> Self;
    /// Exact backend converts the binary value exactly; `None` for non-finite input.
    fn from_f64(x: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn from_rational(r: &Rational) -> Self;

    /// Nearby value with a short representation (small denominators on the
    /// exact backend).
    fn approximate(x: f64) -> Option<Self> {
        Self::from_f64(x)
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            self.clone() - other.clone()
        } else {
            other.clone() - self.clone()
        }
    }

    /// `|self - other| <= rel_tol * max(|self|, |other|)`; plain equality when exact.
    fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool;

    /// `self >= rhs * (1 - slack)`; plain `>=` when exact.
    fn ge_slack(&self, rhs: &Self, slack: f64) -> bool;

    /// `self <= rhs + abs_slack`; plain `<=` when exact.
    fn le_within(&self, rhs: &Self, abs_slack: f64) -> bool;

    fn to_json(&self) -> serde_json::Value;

    fn min_of<'a, I: IntoIterator<Item = &'a Self>>(it: I) -> Option<Self> {
        it.into_iter()
            .fold(None, |acc: Option<&Self>, x| match acc {
                Some(m) if m <= x => Some(m),
                _ => Some(x),
            })
            .cloned()
    }

    fn max_of<'a, I: IntoIterator<Item = &'a Self>>(it: I) -> Option<Self> {
        it.into_iter()
            .fold(None, |acc: Option<&Self>, x| match acc {
                Some(m) if m >= x => Some(m),
                _ => Some(x),
            })
            .cloned()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rational(r: &Rational) -> Self {
        Scalar::to_f64(r)
    }

    fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        (self - other).abs() <= rel_tol * self.abs().max(other.abs())
    }

    fn ge_slack(&self, rhs: &Self, slack: f64) -> bool {
        *self >= rhs * (1.0 - slack)
    }

    fn le_within(&self, rhs: &Self, abs_slack: f64) -> bool {
        *self <= rhs + abs_slack
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // numerator or denominator overflowed f64; fall back to logs
            let n = self.numer().abs();
            let d = self.denom();
            let sign = if self.is_negative() { -1.0 } else { 1.0 };
            sign * (bigint_ln(&n) - bigint_ln(d)).exp()
        })
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn approximate(x: f64) -> Option<Self> {
        approximate_rational(x, 1_000_000)
    }

    fn approx_eq(&self, other: &Self, _rel_tol: f64) -> bool {
        self == other
    }

    fn ge_slack(&self, rhs: &Self, _slack: f64) -> bool {
        self >= rhs
    }

    fn le_within(&self, rhs: &Self, _abs_slack: f64) -> bool {
        self <= rhs
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

fn bigint_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 900;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Best rational approximation of `x` with denominator at most `max_denom`.
pub fn approximate_rational(x: f64, max_denom: i64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let r: Ratio<i64> = Ratio::approximate_float(x)?;
    let r = if *r.denom() > max_denom {
        limit_denominator(x, max_denom)?
    } else {
        r
    };
    Some(Ratio::new(
        BigInt::from(*r.numer()),
        BigInt::from(*r.denom()),
    ))
}

fn limit_denominator(x: f64, max_denom: i64) -> Option<Ratio<i64>> {
    // continued-fraction convergents
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > i64::MAX as f64 / 4.0 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_denom {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    (k1 != 0).then(|| Ratio::new(h1, k1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_comparisons_ignore_slack() {
        let a = Rational::from_ratio(1, 3);
        let b = Rational::from_ratio(2, 6);
        assert!(a.approx_eq(&b, 0.0));
        let c = Rational::from_ratio(1, 3) + Rational::from_ratio(1, 1_000_000_000_000);
        assert!(!a.ge_slack(&c, 0.5));
    }

    #[test]
    fn float_edge_slack_is_one_sided() {
        let lhs = 1.0 - 1e-12;
        assert!(lhs.ge_slack(&1.0, TAU_EDGE));
        assert!(!lhs.ge_slack(&1.0, 0.0));
        assert!(!(0.9f64).ge_slack(&1.0, TAU_EDGE));
    }

    #[test]
    fn min_max_helpers() {
        let v = [3.0, 1.0, 2.0];
        assert_eq!(f64::min_of(&v), Some(1.0));
        assert_eq!(f64::max_of(&v), Some(3.0));
        assert_eq!(f64::min_of(&[] as &[f64]), None);
    }

    #[test]
    fn rational_approximation() {
        let r = approximate_rational(2f64.powf(1.0 / 6.0), 1_000_000).unwrap();
        assert!((Scalar::to_f64(&r) - 2f64.powf(1.0 / 6.0)).abs() < 1e-10);
        assert!(r.denom() <= &BigInt::from(1_000_000));
        assert_eq!(
            approximate_rational(0.5, 10),
            Some(Rational::from_ratio(1, 2))
        );
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = BigInt::from(10).pow(400);
        let r = Ratio::new(big.clone() * 3, big);
        assert!((Scalar::to_f64(&r) - 3.0).abs() < 1e-9);
    }
}
