use exact_arith::{BiQuadElem, Field, Rational};
use isometry_catalog::Catalog;
use lorentz_core::linalg::{identity, kernel, map_mat, mat_mul, mat_sub, mat_scale, Mat4, Vec4};

use crate::complex::Complex;
use crate::frame::{BoundaryFrame, BoundaryPoint};
use crate::GeomError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Holomorphic,
    /// `z -> (a conj(z) + b) / (c conj(z) + d)`.
    AntiHolomorphic,
}

/// A 2x2 complex matrix acting by linear fractional maps, possibly after conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoebiusMap<F> {
    pub m: [[Complex<F>; 2]; 2],
    pub orientation: Orientation,
}

impl<F: Field> MoebiusMap<F> {
    pub fn new(m: [[Complex<F>; 2]; 2], orientation: Orientation) -> Result<Self, GeomError> {
        let map = MoebiusMap { m, orientation };
        if map.det().is_zero() {
            return Err(GeomError::Degenerate("zero determinant".into()));
        }
        Ok(map)
    }

    /// Half turn about the geodesic from `a` to `b`: `[[a+b, -2ab], [2, -(a+b)]]`.
    pub fn rotation(a: &BoundaryPoint<F>, b: &BoundaryPoint<F>) -> Result<Self, GeomError> {
        let (a, b) = (a.z(), b.z());
        if a == b {
            return Err(GeomError::Coincident);
        }
        let s = a.clone() + b.clone();
        let two = Complex::real(F::from_i64(2));
        MoebiusMap::new(
            [[s.clone(), -(two.clone() * a * b)], [two, -s]],
            Orientation::Holomorphic,
        )
    }

    /// Hyperbolic translation fixing `a` and `b` with multiplier `lambda`.
    pub fn translation(lambda: &F, a: &BoundaryPoint<F>, b: &BoundaryPoint<F>) -> Result<Self, GeomError> {
        let one = F::one();
        if *lambda == one || *lambda == -one.clone() {
            return Err(GeomError::Degenerate("|lambda| = 1".into()));
        }
        let (a, b) = (a.z(), b.z());
        if a == b {
            return Err(GeomError::Coincident);
        }
        let l = Complex::real(lambda.clone());
        let lm1 = Complex::real(lambda.clone() - one);
        MoebiusMap::new(
            [
                [l.clone() * a.clone() - b.clone(), -(lm1.clone() * a.clone() * b.clone())],
                [lm1, a - l * b],
            ],
            Orientation::Holomorphic,
        )
    }

    /// `z -> c + 1 / conj(z - c)`, inversion in the unit circle about `c`.
    pub fn inversion(c: &Complex<F>) -> Self {
        let one = Complex::one();
        MoebiusMap {
            m: [[c.clone(), one.clone() - c.clone() * c.conj()], [one, -c.conj()]],
            orientation: Orientation::AntiHolomorphic,
        }
    }

    pub fn det(&self) -> Complex<F> {
        let [[a, b], [c, d]] = &self.m;
        a.clone() * d.clone() - b.clone() * c.clone()
    }

    pub fn trace(&self) -> Complex<F> {
        self.m[0][0].clone() + self.m[1][1].clone()
    }

    pub fn negated(&self) -> Self {
        MoebiusMap {
            m: self.m.clone().map(|r| r.map(|x| -x)),
            orientation: self.orientation,
        }
    }

    /// `None` is the point at infinity, both as input and as output.
    pub fn apply(&self, z: Option<&Complex<F>>) -> Option<Complex<F>> {
        let [[a, b], [c, d]] = &self.m;
        let Some(z) = z else {
            return a.div(c);
        };
        let w = match self.orientation {
            Orientation::Holomorphic => z.clone(),
            Orientation::AntiHolomorphic => z.conj(),
        };
        let num = a.clone() * w.clone() + b.clone();
        let den = c.clone() * w + d.clone();
        num.div(&den)
    }

    pub fn apply_f64(&self, z: (f64, f64)) -> Option<(f64, f64)> {
        let f = |c: &Complex<F>| c.to_f64();
        let [[a, b], [c, d]] = &self.m;
        let (a, b, c, d) = (f(a), f(b), f(c), f(d));
        let w = match self.orientation {
            Orientation::Holomorphic => z,
            Orientation::AntiHolomorphic => (z.0, -z.1),
        };
        let mul = |p: (f64, f64), q: (f64, f64)| (p.0 * q.0 - p.1 * q.1, p.0 * q.1 + p.1 * q.0);
        let num = mul(a, w);
        let num = (num.0 + b.0, num.1 + b.1);
        let den = mul(c, w);
        let den = (den.0 + d.0, den.1 + d.1);
        let n2 = den.0 * den.0 + den.1 * den.1;
        (n2 > 0.0).then(|| ((num.0 * den.0 + num.1 * den.1) / n2, (num.1 * den.0 - num.0 * den.1) / n2))
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        let o = match self.orientation {
            Orientation::Holomorphic => other.m.clone(),
            Orientation::AntiHolomorphic => other.m.clone().map(|r| r.map(|x| x.conj())),
        };
        let s = &self.m;
        let m = std::array::from_fn(|i| {
            std::array::from_fn(|k| s[i][0].clone() * o[0][k].clone() + s[i][1].clone() * o[1][k].clone())
        });
        let orientation = if self.orientation == other.orientation {
            Orientation::Holomorphic
        } else {
            Orientation::AntiHolomorphic
        };
        MoebiusMap { m, orientation }
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.m.clone();
        let adj = [[d, -b], [-c, a]];
        let m = match self.orientation {
            Orientation::Holomorphic => adj,
            Orientation::AntiHolomorphic => adj.map(|r| r.map(|x| x.conj())),
        };
        MoebiusMap { m, orientation: self.orientation }
    }

    /// Identity as a map: a scalar matrix.
    pub fn is_identity(&self) -> bool {
        let [[a, b], [c, d]] = &self.m;
        self.orientation == Orientation::Holomorphic && b.is_zero() && c.is_zero() && a == d
    }
}

/// Data of the orientation-preserving companion of the `n = 21` glide.
#[derive(Debug, Clone)]
pub struct GlideAxis {
    pub lambda: BiQuadElem,
    /// `S = R_s3 T` on lattice coordinates.
    pub matrix: Mat4<BiQuadElem>,
    /// Eigenvectors for `lambda` and `1/lambda`.
    pub attracting: Vec4<BiQuadElem>,
    pub repelling: Vec4<BiQuadElem>,
    pub frame: BoundaryFrame<BiQuadElem>,
}

/// The map `sigma` of `S = R_s3 T` at `n = 21`, built from the eigenvectors of `S`.
pub fn sigma_n21() -> Result<(MoebiusMap<BiQuadElem>, GlideAxis), GeomError> {
    let cat = Catalog::embedded();
    let extra = cat.glide_extra();
    let n: Rational = extra.n.parse().map_err(|_| GeomError::Degenerate("glide n".into()))?;
    let preset = cat.preset(&n)?;
    let lift = |name: &str| -> Result<Mat4<BiQuadElem>, GeomError> {
        let g = preset.get(name).ok_or_else(|| GeomError::Degenerate(format!("missing {name}")))?;
        Ok(map_mat(&g.iso.matrix, BiQuadElem::from_quad))
    };
    let matrix = mat_mul(&lift(&extra.reflection)?, &lift("T")?);
    let lambda: BiQuadElem = extra
        .lambda
        .parse()
        .map_err(|_| GeomError::Degenerate("glide lambda".into()))?;
    let eigvec = |l: &BiQuadElem| -> Result<Vec4<BiQuadElem>, GeomError> {
        let shifted = mat_sub(&matrix, &mat_scale(l, &identity()));
        let k = kernel(&shifted);
        if k.len() != 1 {
            return Err(GeomError::Degenerate(format!("eigenspace of {l} has dimension {}", k.len())));
        }
        Ok(k[0].clone())
    };
    let inv = lambda.inv().ok_or_else(|| GeomError::Degenerate("lambda = 0".into()))?;
    let attracting = eigvec(&lambda)?;
    let repelling = eigvec(&inv)?;
    let frame = BoundaryFrame::<BiQuadElem>::new(&preset.form)?;
    let a = frame.point(&attracting)?;
    let b = frame.point(&repelling)?;
    // the half turn about the axis flips the sign of the multiplier
    let sigma = MoebiusMap::translation(&-lambda.clone(), &a, &b)?.negated();
    Ok((
        sigma,
        GlideAxis { lambda, matrix, attracting, repelling, frame },
    ))
}
