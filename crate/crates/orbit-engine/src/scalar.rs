use exact_arith::{BiQuadElem, BigInt, Field, QuadElem, Rational, Scalar};
use lorentz_core::linalg::{inverse, map_mat, Mat4};
use num_traits::ToPrimitive;

/// Scalars the engine can run over: integers for lattice presets, surd fields for blends.
pub trait OrbitScalar: Scalar {
    /// Exact inverse, `None` when singular or not representable in `Self`.
    fn invert(m: &Mat4<Self>) -> Option<Mat4<Self>>;

    /// Small-integer view for fast exact products.
    fn small(&self) -> Option<i64> {
        None
    }
}

impl OrbitScalar for BigInt {
    fn invert(m: &Mat4<Self>) -> Option<Mat4<Self>> {
        let q: Mat4<Rational> = map_mat(m, |x| Rational::from_int(x.clone()));
        let inv = inverse(&q)?;
        let out: Vec<BigInt> = inv.iter().flatten().filter_map(|x| x.to_integer()).collect();
        (out.len() == 16).then(|| std::array::from_fn(|i| std::array::from_fn(|j| out[4 * i + j].clone())))
    }

    fn small(&self) -> Option<i64> {
        self.to_i64().filter(|v| v.unsigned_abs() < (1 << 40))
    }
}

fn field_invert<F: Field>(m: &Mat4<F>) -> Option<Mat4<F>> {
    inverse(m)
}

impl OrbitScalar for Rational {
    fn invert(m: &Mat4<Self>) -> Option<Mat4<Self>> {
        field_invert(m)
    }
}

impl OrbitScalar for QuadElem {
    fn invert(m: &Mat4<Self>) -> Option<Mat4<Self>> {
        field_invert(m)
    }
}

impl OrbitScalar for BiQuadElem {
    fn invert(m: &Mat4<Self>) -> Option<Mat4<Self>> {
        field_invert(m)
    }
}
