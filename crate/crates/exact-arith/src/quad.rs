use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::ArithError;
use crate::float::{to_float, SurdTerms};
use crate::rational::Rational;
use crate::squarefree::squarefree_split;

/// `a + b*sqrt(d)` with `d` square-free. Rational values carry `d = 1`, `b = 0`.
#[derive(Clone)]
pub struct QuadElem {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadElem {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self, ArithError> {
        if d == 0 {
            return Err(ArithError::BadRadicand(0));
        }
        let (k, r) = squarefree_split(d);
        let b = b * Rational::from_int(k);
        Ok(if r == 1 {
            QuadElem::rational(a + b)
        } else if b.is_zero() {
            QuadElem::rational(a)
        } else {
            QuadElem { a, b, d: r }
        })
    }

    pub fn rational(a: Rational) -> Self {
        QuadElem {
            a,
            b: Rational::zero(),
            d: 1,
        }
    }

    pub fn from_int(v: i64) -> Self {
        QuadElem::rational(Rational::from_int(v))
    }

    /// `sqrt(q)` for a non-negative rational `q`.
    pub fn sqrt_of(q: &Rational) -> Result<Self, ArithError> {
        match q.signum() {
            0 => return Ok(QuadElem::from_int(0)),
            -1 => return Err(ArithError::BadRadicand(-1)),
            _ => {}
        }
        // sqrt(p/q) = sqrt(p*q)/q
        let pq = q.numer() * q.denom();
        let pq: u64 = pq
            .try_into()
            .map_err(|_| ArithError::Parse(format!("radicand too large: {q}")))?;
        QuadElem::new(
            Rational::zero(),
            Rational::new(1, q.denom().clone()),
            pq,
        )
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadElem {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d,
        }
    }

    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &(&self.b * &self.b) * &Rational::from_int(self.d)
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm().inv()?;
        Some(QuadElem {
            a: &self.a * &n,
            b: -(&self.b * &n),
            d: self.d,
        })
    }

    fn common_d(&self, other: &Self) -> Result<u64, ArithError> {
        match (self.d, other.d) {
            (1, e) | (e, 1) => Ok(e),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(ArithError::IncompatibleField(x, y)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.common_d(other)?;
        Ok(QuadElem::raw(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.common_d(other)?;
        let dr = Rational::from_int(d);
        let a = &self.a * &other.a + &(&self.b * &other.b) * &dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(QuadElem::raw(a, b, d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        let inv = other.inv().ok_or(ArithError::DivisionByZero)?;
        self.checked_mul(&inv)
    }

    // d already square-free; only the b = 0 collapse is needed.
    fn raw(a: Rational, b: Rational, d: u64) -> Self {
        if b.is_zero() || d == 1 {
            QuadElem::rational(if d == 1 { a + b } else { a })
        } else {
            QuadElem { a, b, d }
        }
    }

    pub fn signum(&self) -> i32 {
        quad_sign(self)
    }

    pub fn to_f64(&self) -> f64 {
        to_float(self, 64)
    }
}

impl SurdTerms for QuadElem {
    fn terms(&self) -> Vec<(Rational, u64)> {
        let mut t = vec![(self.a.clone(), 1)];
        if !self.b.is_zero() {
            t.push((self.b.clone(), self.d));
        }
        t
    }

    fn sign(&self) -> i32 {
        quad_sign(self)
    }
}

/// Exact product; errors when both factors are irrational over different radicands.
pub fn quad_mul(x: &QuadElem, y: &QuadElem) -> Result<QuadElem, ArithError> {
    x.checked_mul(y)
}

/// Exact sign of `a + b sqrt(d)` by comparing `a^2` with `d b^2`.
pub fn quad_sign(x: &QuadElem) -> i32 {
    let sa = x.a.signum();
    let sb = x.b.signum();
    if sb == 0 || sa == sb {
        return if sa == 0 { sb } else { sa };
    }
    if sa == 0 {
        return sb;
    }
    let a2 = &x.a * &x.a;
    let db2 = &(&x.b * &x.b) * &Rational::from_int(x.d);
    match a2.cmp(&db2) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => unreachable!("square-free radicand"),
    }
}

impl PartialEq for QuadElem {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.d == other.d
    }
}

impl Eq for QuadElem {}

impl Hash for QuadElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        self.d.hash(state);
    }
}

impl PartialOrd for QuadElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadElem {
    /// Value order; panics on incompatible radicands.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum().cmp(&0)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            if self.b.signum() > 0 {
                write!(f, "+")?;
            }
        }
        write!(f, "{}*sqrt({})", self.b, self.d)
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rational> for QuadElem {
    fn from(r: Rational) -> Self {
        QuadElem::rational(r)
    }
}

impl From<i64> for QuadElem {
    fn from(v: i64) -> Self {
        QuadElem::from_int(v)
    }
}

impl Add for QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: QuadElem) -> QuadElem {
        self.checked_add(&rhs).expect("QuadElem add")
    }
}

impl Sub for QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: QuadElem) -> QuadElem {
        self.checked_sub(&rhs).expect("QuadElem sub")
    }
}

impl Mul for QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: QuadElem) -> QuadElem {
        self.checked_mul(&rhs).expect("QuadElem mul")
    }
}

impl Div for QuadElem {
    type Output = QuadElem;
    fn div(self, rhs: QuadElem) -> QuadElem {
        self.checked_div(&rhs).expect("QuadElem div")
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -&self
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }
}


impl std::str::FromStr for QuadElem {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let b: crate::biquad::BiQuadElem = s.parse()?;
        b.to_quad().ok_or_else(|| {
            let (d1, d2) = b.bases();
            ArithError::IncompatibleField(d1, d2)
        })
    }
}
