use exact_arith::{BiQuadElem, Rational, Scalar};
use lorentz_core::linalg::{bilinear, inverse, mat_mul, transpose, Mat4, Vec4};

use crate::BlendError;

pub type Std = BiQuadElem;

/// Gram matrix of inversive coordinates `(co-curvature, curvature, b x, b y)`.
pub fn standard_gram() -> Mat4<Std> {
    let i = Std::from_i64;
    [
        [i(0), i(1), i(0), i(0)],
        [i(1), i(0), i(0), i(0)],
        [i(0), i(0), i(-2), i(0)],
        [i(0), i(0), i(0), i(-2)],
    ]
}

/// The point at infinity of the standard frame; `v . E = 4 * curvature`.
pub fn standard_infinity() -> Vec4<Std> {
    [4, 0, 0, 0].map(Std::from_i64)
}

pub fn std_dot(u: &Vec4<Std>, v: &Vec4<Std>) -> Std {
    bilinear(&standard_gram(), u, v)
}

/// The vertical line `x = c` with normal pointing to `+x`.
pub fn vertical_line(c: &Std) -> Vec4<Std> {
    [Std::from_i64(2) * c.clone(), Std::zero(), Std::one(), Std::zero()]
}

pub fn sqrt_std(n: &Rational) -> Result<Std, BlendError> {
    Std::sqrt_of(n).map_err(|e| BlendError::Arith(e.to_string()))
}

/// Change of basis from `Lambda_n` coordinates to inversive coordinates.
///
/// Columns are the images of `e1..e4`: the line `y = 0`, the line `y = 2`,
/// the unit circle at `i` and the unit circle at `2 sqrt n + i`, oriented so
/// the strip lies on the positive side of both lines.
pub fn embed_standard(n: &Rational) -> Result<Mat4<Std>, BlendError> {
    if n.signum() <= 0 {
        return Err(BlendError::BadParameter(format!("n must be positive, got {n}")));
    }
    let r = sqrt_std(n)?;
    let i = Std::from_i64;
    let four_n = Std::from_rational(&(n.clone() * Rational::from_int(4))).expect("rational");
    Ok([
        [i(0), i(4), i(0), four_n],
        [i(0), i(0), i(1), i(1)],
        [i(0), i(0), i(0), i(2) * r],
        [i(-1), i(1), i(1), i(1)],
    ])
}

/// `M^T J_std M`, which must equal the lattice Gram matrix.
pub fn pulled_back_gram(m: &Mat4<Std>) -> Mat4<Std> {
    mat_mul(&transpose(m), &mat_mul(&standard_gram(), m))
}

/// Conjugates lattice matrices into the standard frame.
pub struct Embedding {
    pub n: Rational,
    pub forward: Mat4<Std>,
    pub backward: Mat4<Std>,
}

impl Embedding {
    pub fn new(n: &Rational) -> Result<Self, BlendError> {
        let forward = embed_standard(n)?;
        let backward = inverse(&forward).ok_or_else(|| BlendError::BadParameter("singular embedding".into()))?;
        Ok(Embedding { n: n.clone(), forward, backward })
    }

    pub fn matrix(&self, g: &Mat4<Std>) -> Mat4<Std> {
        mat_mul(&self.forward, &mat_mul(g, &self.backward))
    }

    pub fn vector(&self, v: &Vec4<Std>) -> Vec4<Std> {
        lorentz_core::linalg::mat_vec(&self.forward, v)
    }
}
