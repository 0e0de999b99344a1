use std::sync::Arc;

use exact_arith::{BigInt, Rational, Scalar};
use thiserror::Error;

use crate::linalg::{Mat4, Vec4};
use crate::vector::LatticeVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LorentzError {
    #[error("4n - 2 must be an integer, got n = {0}")]
    NonIntegralGram(Rational),
    #[error("n must be positive, got {0}")]
    NonPositive(Rational),
    #[error("vectors belong to different forms (n = {0} and n = {1})")]
    MismatchedForms(Rational, Rational),
    #[error("operation needs integer coordinates")]
    NotIntegral,
    #[error("zero vector")]
    ZeroVector,
    #[error("operation needs integer n, got {0}")]
    NonIntegerN(Rational),
}

/// Gram matrix `J_n`: diagonal -2, off-diagonal 2, except entry (3,4) = 4n - 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GramForm {
    n: Rational,
    a: i64,
}

impl GramForm {
    pub fn new(n: Rational) -> Result<Arc<Self>, LorentzError> {
        if n.signum() <= 0 {
            return Err(LorentzError::NonPositive(n));
        }
        let a = &(&n * &Rational::from_int(4)) - &Rational::from_int(2);
        let a = a
            .to_integer()
            .ok_or_else(|| LorentzError::NonIntegralGram(n.clone()))?;
        let a: i64 = a.try_into().map_err(|_| LorentzError::NonIntegralGram(n.clone()))?;
        Ok(Arc::new(GramForm { n, a }))
    }

    pub fn integer(n: i64) -> Arc<Self> {
        GramForm::new(Rational::from_int(n)).expect("positive integer n")
    }

    pub fn n(&self) -> &Rational {
        &self.n
    }

    /// `n` as an integer when it is one.
    pub fn n_int(&self) -> Option<i64> {
        self.n.to_integer().and_then(|v| v.try_into().ok())
    }

    /// The (3,4) entry `4n - 2`.
    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn matrix_i64(&self) -> [[i64; 4]; 4] {
        let a = self.a;
        [[-2, 2, 2, 2], [2, -2, 2, 2], [2, 2, -2, a], [2, 2, a, -2]]
    }

    pub fn matrix<T: Scalar>(&self) -> Mat4<T> {
        self.matrix_i64().map(|r| r.map(T::from_i64))
    }

    pub fn dot<T: Scalar>(&self, u: &Vec4<T>, v: &Vec4<T>) -> T {
        let j = self.matrix_i64();
        let mut s = T::zero();
        for i in 0..4 {
            if u[i].is_zero() {
                continue;
            }
            let mut row = T::zero();
            for k in 0..4 {
                row = row + T::from_i64(j[i][k]) * v[k].clone();
            }
            s = s + u[i].clone() * row;
        }
        s
    }

    pub fn dot_int(&self, u: &Vec4<BigInt>, v: &Vec4<BigInt>) -> BigInt {
        self.dot(u, v)
    }
}

/// The fixed vectors used throughout: basis, `E`, `D`, `h`, `v1`, `v2`, `s0`.
#[derive(Debug, Clone)]
pub struct FrameVectors {
    pub e: [LatticeVector; 4],
    /// `E = e1 + e2`, the point at infinity of the strip picture.
    pub big_e: LatticeVector,
    /// `D = e1 + e2 + e3 + e4`, timelike, used for orientation.
    pub d: LatticeVector,
    pub h: LatticeVector,
    pub v1: LatticeVector,
    pub v2: LatticeVector,
    pub s0: LatticeVector,
}

impl FrameVectors {
    pub fn new(form: &Arc<GramForm>) -> Self {
        let mk = |c: [Rational; 4]| LatticeVector::new(c, form.clone());
        let i = |c: [i64; 4]| mk(c.map(Rational::from_int));
        let n = form.n().clone();
        FrameVectors {
            e: [
                i([1, 0, 0, 0]),
                i([0, 1, 0, 0]),
                i([0, 0, 1, 0]),
                i([0, 0, 0, 1]),
            ],
            big_e: i([1, 1, 0, 0]),
            d: i([1, 1, 1, 1]),
            h: i([-1, 1, 0, 0]),
            v1: mk([n.clone(), n, Rational::from_int(1), Rational::from_int(-1)]),
            v2: i([0, 0, -1, 1]),
            s0: i([0, -1, 1, 0]),
        }
    }
}

pub(crate) fn check_same(a: &GramForm, b: &GramForm) -> Result<(), LorentzError> {
    if a != b {
        return Err(LorentzError::MismatchedForms(a.n().clone(), b.n().clone()));
    }
    Ok(())
}
