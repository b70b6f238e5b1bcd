//! Number types the exact-capable solvers are generic over.
//!
//! `f64` compares with [`FEASIBILITY_TOL`] slack; [`Rational`] compares
//! exactly. Converting an `f64` to a rational goes through its shortest
//! round-trip decimal form, so `0.1` becomes exactly `1/10`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::config::FEASIBILITY_TOL;

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
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
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Comparison slack: zero for exact types.
    fn tolerance() -> Self;
    fn abs(&self) -> Self;
    /// `None` when the type cannot represent the result exactly.
    fn cos(&self) -> Option<Self>;
    fn render(&self) -> String;

    fn from_usize(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).abs() <= Self::tolerance()
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
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
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn tolerance() -> Self {
        FEASIBILITY_TOL
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn cos(&self) -> Option<Self> {
        Some(f64::cos(*self))
    }
    fn render(&self) -> String {
        format!("{self}")
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
    fn from_f64(x: f64) -> Self {
        decimal_to_rational(x)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn tolerance() -> Self {
        Zero::zero()
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn cos(&self) -> Option<Self> {
        None
    }
    fn render(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Exact rational value of the shortest decimal that round-trips to `x`.
///
/// Panics on non-finite input; callers validate finiteness first.
pub fn decimal_to_rational(x: f64) -> Rational {
    assert!(x.is_finite(), "cannot convert {x} to a rational");
    let text = format!("{x}");
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.as_str()),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let mut numer: BigInt = format!("{int_part}{frac_part}").parse().expect("decimal digits");
    if negative {
        numer = -numer;
    }
    let denom = num::pow(BigInt::from(10u32), frac_part.len());
    BigRational::new(numer, denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_conversion_is_exact() {
        assert_eq!(decimal_to_rational(0.1), Rational::from_ratio(1, 10));
        assert_eq!(decimal_to_rational(-2.5), Rational::from_ratio(-5, 2));
        assert_eq!(decimal_to_rational(96.0), Rational::from_ratio(96, 1));
        assert_eq!(decimal_to_rational(1e-20), Rational::from_ratio(1, 1) / decimal_to_rational(1e20));
    }

    #[test]
    fn render_integers_and_fractions() {
        assert_eq!(Rational::from_ratio(6, 6).render(), "1");
        assert_eq!(Rational::from_ratio(2, 12).render(), "1/6");
        assert!(<Rational as Scalar>::cos(&Rational::from_ratio(1, 2)).is_none());
    }
}
