use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::biquad::BiQuadElem;
use crate::float::SurdTerms;
use crate::quad::QuadElem;
use crate::rational::Rational;

/// Exact ordered ring: what orbit enumeration and product checks need.
pub trait Scalar:
    Clone
    + Eq
    + Hash
    + Ord
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `None` when the ring cannot hold the value (a fraction in the integers).
    fn from_rational(r: &Rational) -> Option<Self>;
    fn signum(&self) -> i32;
    fn to_f64(&self) -> f64;
    /// The value as a rational, when it is one.
    fn as_rational(&self) -> Option<Rational>;

    fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    /// Plain double-precision estimate without the exact sign guarantee of `to_f64`.
    fn approx(&self) -> f64 {
        self.to_f64()
    }
}

/// A [`Scalar`] with exact division.
pub trait Field: Scalar + Div<Output = Self> {
    fn inv(&self) -> Option<Self>;
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        r.to_integer()
    }
    fn signum(&self) -> i32 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(Rational::from_int(self.clone()))
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_int(v)
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(r.clone())
    }
    fn signum(&self) -> i32 {
        Rational::signum(self)
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        Rational::inv(self)
    }
}

impl Scalar for QuadElem {
    fn zero() -> Self {
        QuadElem::from_int(0)
    }
    fn one() -> Self {
        QuadElem::from_int(1)
    }
    fn from_i64(v: i64) -> Self {
        QuadElem::from_int(v)
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(QuadElem::rational(r.clone()))
    }
    fn signum(&self) -> i32 {
        QuadElem::signum(self)
    }
    fn to_f64(&self) -> f64 {
        QuadElem::to_f64(self)
    }
    fn as_rational(&self) -> Option<Rational> {
        QuadElem::as_rational(self).cloned()
    }
    fn approx(&self) -> f64 {
        self.a().to_f64() + self.b().to_f64() * (self.d() as f64).sqrt()
    }
}

impl Field for QuadElem {
    fn inv(&self) -> Option<Self> {
        QuadElem::inv(self)
    }
}

impl Scalar for BiQuadElem {
    fn zero() -> Self {
        BiQuadElem::from_int(0)
    }
    fn one() -> Self {
        BiQuadElem::from_int(1)
    }
    fn from_i64(v: i64) -> Self {
        BiQuadElem::from_int(v)
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(BiQuadElem::rational(r.clone()))
    }
    fn signum(&self) -> i32 {
        BiQuadElem::signum(self)
    }
    fn to_f64(&self) -> f64 {
        BiQuadElem::to_f64(self)
    }
    fn as_rational(&self) -> Option<Rational> {
        BiQuadElem::as_rational(self)
    }
    fn approx(&self) -> f64 {
        self.terms().iter().map(|(c, r)| c.to_f64() * (*r as f64).sqrt()).sum()
    }
}

impl Field for BiQuadElem {
    fn inv(&self) -> Option<Self> {
        BiQuadElem::inv(self)
    }
}
