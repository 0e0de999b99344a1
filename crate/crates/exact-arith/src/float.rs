use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;
use crate::squarefree::isqrt;

/// A finite sum `sum c_i sqrt(r_i)` with an exactly known sign.
pub trait SurdTerms {
    fn terms(&self) -> Vec<(Rational, u64)>;
    fn sign(&self) -> i32;
}

/// Converts a surd sum to `f64`.
///
/// Each square root is evaluated as a fixed-point big integer with at least
/// `precision_bits` fractional bits. The working precision doubles until the
/// accumulated truncation error is below `2^-(precision_bits + 2)` relative to
/// the result, so cancellation between terms cannot leak into the answer.
pub fn to_float<T: SurdTerms + ?Sized>(x: &T, precision_bits: u32) -> f64 {
    assert!(precision_bits >= 53, "precision_bits must be at least 53");
    if x.sign() == 0 {
        return 0.0;
    }
    let terms = x.terms();
    let mut bits = precision_bits + 8;
    loop {
        let scale = BigInt::one() << bits;
        let mut approx = BigRational::zero();
        let mut err = BigRational::zero();
        for (c, r) in &terms {
            if c.is_zero() {
                continue;
            }
            if *r == 1 {
                approx += c.inner();
                continue;
            }
            let s = isqrt(&(BigInt::from(*r) << (2 * bits)));
            approx += c.inner() * BigRational::new(s, scale.clone());
            err += c.inner().abs() / BigRational::from_integer(scale.clone());
        }
        let margin = BigRational::from_integer(BigInt::one() << (precision_bits + 2));
        if err.is_zero() || approx.abs() > err * margin {
            return approx.to_f64().unwrap_or(f64::NAN);
        }
        if bits > 1 << 16 {
            return approx.to_f64().unwrap_or(f64::NAN);
        }
        bits *= 2;
    }
}

impl SurdTerms for Rational {
    fn terms(&self) -> Vec<(Rational, u64)> {
        vec![(self.clone(), 1)]
    }

    fn sign(&self) -> i32 {
        self.signum()
    }
}
