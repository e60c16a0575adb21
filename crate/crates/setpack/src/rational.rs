//! Exact nonnegative rational numbers.
//!
//! Densities, bounds, and cycle means are all ratios of modest integers, so
//! every value in this crate is kept as an exact fraction and compared with
//! `==`. Floating point exists only as an explicit display approximation.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// An exact nonnegative rational, always in lowest terms.
///
/// Invariants: numerator >= 0, denominator > 0, gcd(numerator, denominator)
/// = 1. The text form is `p/q`, or just `p` when the denominator is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i128>);

impl Rational {
    /// 0/1.
    pub fn zero() -> Self {
        Rational(Ratio::from_integer(0))
    }

    /// 1/1.
    pub fn one() -> Self {
        Rational(Ratio::from_integer(1))
    }

    /// Builds `numer/denom` in lowest terms.
    ///
    /// Panics if `denom` is zero; the unsigned arguments make negative
    /// values unrepresentable at the call site.
    pub fn new(numer: u64, denom: u64) -> Self {
        assert!(denom != 0, "rational with zero denominator");
        Rational(Ratio::new(i128::from(numer), i128::from(denom)))
    }

    /// Builds from signed parts, for internal callers that have already
    /// established nonnegativity (e.g. a cycle mean, which is a mean of 0/1
    /// edge weights).
    pub(crate) fn from_signed(numer: i128, denom: i128) -> Self {
        assert!(denom != 0, "rational with zero denominator");
        let r = Ratio::new(numer, denom);
        assert!(*r.numer() >= 0, "negative rational {r}");
        Rational(r)
    }

    /// Numerator of the reduced form.
    pub fn numer(&self) -> u64 {
        u64::try_from(*self.0.numer()).expect("numerator fits u64")
    }

    /// Denominator of the reduced form.
    pub fn denom(&self) -> u64 {
        u64::try_from(*self.0.denom()).expect("denominator fits u64")
    }

    /// Nearest `f64`, for display only.
    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom() == &1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational { input: s.to_string() };
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let numer: u64 = num_str.trim().parse().map_err(|_| bad())?;
        let denom: u64 = den_str.trim().parse().map_err(|_| bad())?;
        if denom == 0 {
            return Err(bad());
        }
        Ok(Rational::new(numer, denom))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let r = Rational::new(4, 28);
        assert_eq!(r.numer(), 1);
        assert_eq!(r.denom(), 7);
        assert_eq!(r, Rational::new(1, 7));
    }

    #[test]
    fn displays_as_p_over_q() {
        assert_eq!(Rational::new(1, 7).to_string(), "1/7");
        assert_eq!(Rational::new(8, 45).to_string(), "8/45");
        assert_eq!(Rational::one().to_string(), "1");
        assert_eq!(Rational::zero().to_string(), "0");
    }

    #[test]
    fn parses_its_own_display() {
        for r in [
            Rational::new(1, 7),
            Rational::new(12, 17),
            Rational::new(3, 88),
            Rational::one(),
            Rational::zero(),
        ] {
            assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
        }
    }

    #[test]
    fn rejects_malformed_literals() {
        for s in ["", "/", "1/", "/7", "1/0", "-1/7", "a/b", "1.5"] {
            assert!(s.parse::<Rational>().is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn orders_exactly() {
        assert!(Rational::new(1, 7) < Rational::new(8, 45));
        assert!(Rational::new(8, 45) < Rational::new(2, 11));
        assert!(Rational::new(2, 11) < Rational::new(3, 16));
        assert!(Rational::new(3, 16) < Rational::new(1, 4));
    }

    #[test]
    fn float_view_matches() {
        assert_eq!(Rational::new(1, 4).to_f64(), 0.25);
        assert_eq!(Rational::new(1, 2).to_f64(), 0.5);
    }
}
