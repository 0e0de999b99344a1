use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use exact_arith::Field;

/// `re + i im` over an exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Complex<F> {
    pub re: F,
    pub im: F,
}

impl<F: Field> Complex<F> {
    pub fn new(re: F, im: F) -> Self {
        Complex { re, im }
    }

    pub fn real(re: F) -> Self {
        Complex { re, im: F::zero() }
    }

    pub fn zero() -> Self {
        Complex::real(F::zero())
    }

    pub fn one() -> Self {
        Complex::real(F::one())
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn abs2(&self) -> F {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, c: &F) -> Self {
        Complex::new(self.re.clone() * c.clone(), self.im.clone() * c.clone())
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.abs2().inv()?;
        Some(self.conj().scale(&n))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.clone() * other.inv()?)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.approx(), self.im.approx())
    }
}

impl<F: Field> Add for Complex<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl<F: Field> Sub for Complex<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}

impl<F: Field> Mul for Complex<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Complex::new(
            self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(),
            self.re * o.im + self.im * o.re,
        )
    }
}

impl<F: Field> Neg for Complex<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }
}

impl<F: fmt::Display> fmt::Display for Complex<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}
