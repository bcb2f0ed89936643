//! Coordinate scalars.
//!
//! All geometry in this crate is generic over [`Scalar`]. The exact instance
//! is [`Rational`] (arbitrary precision); `f64` is provided for quick
//! experiments but gives no exactness guarantees, so every certificate and
//! predicate is only sound over `Rational`.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static
{
    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Parses `num/den` or an integer.
    fn parse_coord(text: &str) -> Option<Self>;

    /// Whether arithmetic on this scalar is exact.
    fn is_exact() -> bool;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Canonical textual form, stable across runs.
    fn canonical(&self) -> String {
        self.to_string()
    }
}

impl Scalar for Rational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn parse_coord(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n).ok()?;
                let d = BigInt::from_str(d).ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n, d))
            }
            None => BigInt::from_str(text).ok().map(BigRational::from_integer),
        }
    }

    fn is_exact() -> bool {
        true
    }
}

impl Scalar for f64 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn parse_coord(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((n, d)) => {
                let n: f64 = n.parse().ok()?;
                let d: f64 = d.parse().ok()?;
                if d == 0.0 {
                    return None;
                }
                Some(n / d)
            }
            None => text.parse().ok(),
        }
    }

    fn is_exact() -> bool {
        false
    }
}

pub(crate) fn is_positive<S: Scalar>(x: &S) -> bool {
    *x > S::zero()
}

pub(crate) fn is_nonneg<S: Scalar>(x: &S) -> bool {
    *x >= S::zero()
}

/// `1/n` as a scalar.
pub(crate) fn recip_count<S: Scalar>(n: usize) -> S {
    S::one() / S::from_int(n as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_in_lowest_terms() {
        let q = Rational::parse_coord("6/4").unwrap();
        assert_eq!(q.to_string(), "3/2");
        assert_eq!(Rational::parse_coord("-2").unwrap().to_string(), "-2");
        assert_eq!(Rational::parse_coord("3/-6").unwrap().to_string(), "-1/2");
        assert!(Rational::parse_coord("1/0").is_none());
        assert!(Rational::parse_coord("x").is_none());
    }

    #[test]
    fn float_instance_parses() {
        assert_eq!(f64::parse_coord("1/4"), Some(0.25));
        assert!(!f64::is_exact());
    }
}
