use std::sync::Arc;

use crate::form::{GramForm, LorentzError};
use crate::vector::LatticeVector;

/// Whether `x^T J x` avoids the value 4 mod 8 on all of `(Z/4)^4`.
///
/// Every entry of `J_n` is even, so `Q(x + 4z) = Q(x) + 8(...) + 16 Q(z)` and
/// `Q mod 8` depends only on `x mod 4`: 256 residues cover the whole lattice.
/// A `true` result therefore rules out norm -4 (equivalently 4 mod 8) vectors.
pub fn mod8_obstruction(form: &GramForm) -> Result<bool, LorentzError> {
    if form.n_int().is_none() {
        return Err(LorentzError::NonIntegerN(form.n().clone()));
    }
    let j = form.matrix_i64();
    for idx in 0..256u32 {
        let x: [i64; 4] = std::array::from_fn(|k| ((idx >> (2 * k)) & 3) as i64);
        if quad_value(&j, &x).rem_euclid(8) == 4 {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn quad_value(j: &[[i64; 4]; 4], x: &[i64; 4]) -> i64 {
    let mut s = 0;
    for i in 0..4 {
        for k in 0..4 {
            s += x[i] * j[i][k] * x[k];
        }
    }
    s
}

/// Exhaustive search for an integer vector with `v.v = target` and all
/// `|coords| <= coeff_bound`; shells of growing sup-norm are scanned in turn,
/// so the witness returned has the smallest possible sup-norm.
pub fn represents_norm(form: &Arc<GramForm>, target: i64, coeff_bound: i64) -> Option<LatticeVector> {
    assert!(coeff_bound >= 1, "coeff_bound must be at least 1");
    let j = form.matrix_i64();
    for r in 0..=coeff_bound {
        for x0 in -r..=r {
            for x1 in -r..=r {
                for x2 in -r..=r {
                    for x3 in -r..=r {
                        let x = [x0, x1, x2, x3];
                        if x.iter().map(|c| c.abs()).max() != Some(r) {
                            continue;
                        }
                        if quad_value(&j, &x) == target {
                            return Some(LatticeVector::from_ints(x, form.clone()));
                        }
                    }
                }
            }
        }
    }
    None
}
