//! Exact rational exponents of `n`.
//!
//! Every scaling quantity in the process (`S_Γ`, `S_{A,Γ}`, extension-series
//! steps, the edge density `p`) is a power of `n`. Comparisons such as
//! "scaling is exactly one" decide case splits, so they are kept rational.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;

/// A power `n^r` represented by the exact rational `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScalingExponent(Ratio<i64>);

impl ScalingExponent {
    pub const ZERO: ScalingExponent = ScalingExponent(Ratio::new_raw(0, 1));

    /// Builds `numer/denom` in lowest terms. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        ScalingExponent(Ratio::new(numer, denom))
    }

    pub fn integer(value: i64) -> Self {
        ScalingExponent(Ratio::from_integer(value))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn is_positive(&self) -> bool {
        self.numer() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.numer() < 0
    }

    pub fn as_ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// Numeric value of `n^self`.
    pub fn eval(&self, n: f64) -> f64 {
        n.powf(self.to_f64())
    }

    /// Multiplies by an integer count (e.g. edges times the density exponent).
    pub fn scale(&self, k: i64) -> Self {
        ScalingExponent(self.0 * k)
    }
}

impl Default for ScalingExponent {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<Ratio<i64>> for ScalingExponent {
    fn from(r: Ratio<i64>) -> Self {
        ScalingExponent(r)
    }
}

impl Add for ScalingExponent {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ScalingExponent(self.0 + rhs.0)
    }
}

impl Sub for ScalingExponent {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ScalingExponent(self.0 - rhs.0)
    }
}

impl Neg for ScalingExponent {
    type Output = Self;
    fn neg(self) -> Self {
        ScalingExponent(-self.0)
    }
}

impl Mul<i64> for ScalingExponent {
    type Output = Self;
    fn mul(self, rhs: i64) -> Self {
        self.scale(rhs)
    }
}

impl std::iter::Sum for ScalingExponent {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for ScalingExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for ScalingExponent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad exponent {s:?}: {e}"))
        };
        match s.split_once('/') {
            Some((a, b)) => {
                let d = parse(b)?;
                if d == 0 {
                    return Err(format!("bad exponent {s:?}: zero denominator"));
                }
                Ok(ScalingExponent::new(parse(a)?, d))
            }
            None => Ok(ScalingExponent::integer(parse(s)?)),
        }
    }
}
