//! Exact rationals and the scalar abstraction shared by the exact solver and
//! the floating-point census prefilter.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serializer;

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator. `Display` writes `p/q`, or just `k` for integers.
pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| Error::arg(format!("`{s}` is not a rational")))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Field operations the last-visit solver needs.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// `1 / d` for a positive integer `d`.
    fn recip_of(d: usize) -> Self;

    fn magnitude(&self) -> f64;
}

impl Scalar for Rational {
    fn recip_of(d: usize) -> Self {
        Rational::new(BigInt::one(), BigInt::from(d))
    }

    fn magnitude(&self) -> f64 {
        to_f64(&self.abs())
    }
}

impl Scalar for f64 {
    fn recip_of(d: usize) -> Self {
        1.0 / d as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

/// Serde helper writing a rational in its `p/q` wire form.
pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

pub fn serialize_rationals<S: Serializer>(
    rs: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(ToString::to_string))
}
