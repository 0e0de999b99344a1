use std::fmt;
use std::sync::Arc;

use exact_arith::{BigInt, Rational};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::form::{check_same, GramForm, LorentzError};
use crate::linalg::Vec4;

/// Coordinates in the basis `e1..e4` together with the form they live in.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    pub coords: Vec4<Rational>,
    pub form: Arc<GramForm>,
}

impl LatticeVector {
    pub fn new(coords: Vec4<Rational>, form: Arc<GramForm>) -> Self {
        LatticeVector { coords, form }
    }

    pub fn from_ints(c: [i64; 4], form: Arc<GramForm>) -> Self {
        LatticeVector::new(c.map(Rational::from_int), form)
    }

    pub fn from_big(c: &Vec4<BigInt>, form: Arc<GramForm>) -> Self {
        LatticeVector::new(c.clone().map(Rational::from_int), form)
    }

    pub fn is_lattice_member(&self) -> bool {
        self.coords.iter().all(Rational::is_integer)
    }

    pub fn is_primitive(&self) -> bool {
        match self.integer_coords() {
            Some(c) => content(&c) == BigInt::from(1),
            None => false,
        }
    }

    pub fn integer_coords(&self) -> Option<Vec4<BigInt>> {
        let v: Vec<BigInt> = self.coords.iter().filter_map(Rational::to_integer).collect();
        (v.len() == 4).then(|| [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
    }

    pub fn dot(&self, other: &LatticeVector) -> Result<Rational, LorentzError> {
        lorentz_product(self, other)
    }

    pub fn scaled(&self, c: &Rational) -> LatticeVector {
        LatticeVector::new(self.coords.clone().map(|x| &x * c), self.form.clone())
    }

    pub fn plus(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector::new(
            std::array::from_fn(|i| &self.coords[i] + &other.coords[i]),
            self.form.clone(),
        )
    }

    pub fn minus(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector::new(
            std::array::from_fn(|i| &self.coords[i] - &other.coords[i]),
            self.form.clone(),
        )
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coords;
        write!(f, "[{},{},{},{}]", c[0], c[1], c[2], c[3])
    }
}

/// `u^T J v`, exact.
pub fn lorentz_product(u: &LatticeVector, v: &LatticeVector) -> Result<Rational, LorentzError> {
    check_same(&u.form, &v.form)?;
    Ok(u.form.dot(&u.coords, &v.coords))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormClass {
    Timelike,
    Lightlike,
    Spacelike,
}

pub fn norm_class(v: &LatticeVector) -> (NormClass, Rational) {
    let q = v.form.dot(&v.coords, &v.coords);
    let class = match q.signum() {
        1 => NormClass::Timelike,
        0 => NormClass::Lightlike,
        _ => NormClass::Spacelike,
    };
    (class, q)
}

fn content(c: &Vec4<BigInt>) -> BigInt {
    c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides out the content and orients so that `v . D > 0`; vectors orthogonal
/// to `D` get their first nonzero coordinate positive instead.
pub fn primitive_reduce(v: &LatticeVector) -> Result<LatticeVector, LorentzError> {
    let c = v.integer_coords().ok_or(LorentzError::NotIntegral)?;
    let g = content(&c);
    if g.is_zero() {
        return Err(LorentzError::ZeroVector);
    }
    let mut r: Vec4<BigInt> = c.map(|x| x / &g);
    let d: Vec4<BigInt> = [1, 1, 1, 1].map(BigInt::from);
    let s = v.form.dot(&r, &d);
    let flip = if s.is_zero() {
        r.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()).unwrap_or(false)
    } else {
        s.is_negative()
    };
    if flip {
        r = r.map(|x| -x);
    }
    Ok(LatticeVector::from_big(&r, v.form.clone()))
}
