use exact_arith::{BigInt, Field, Rational};
use lorentz_core::linalg::{
    bilinear, det, identity, inverse, mat_add, mat_mul, mat_scale, mat_sub, mat_vec, outer_j,
    transpose, Mat4, Vec4,
};
use lorentz_core::GramForm;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsometryError {
    #[error("mirror must be spacelike (m.m < 0), got m.m = {0}")]
    NotSpacelike(String),
    #[error("rotation endpoints must be lightlike")]
    NotLightlike,
    #[error("rotation endpoints must satisfy A.B != 0")]
    DegenerateEndpoints,
    #[error("inversion center must be timelike (P.P > 0), got {0}")]
    NotTimelike(String),
    #[error("matrix does not preserve the form")]
    FormNotPreserved,
    #[error("matrix has irrational entries")]
    SurdResidue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsometryKind<F> {
    Reflection { mirror: Vec4<F> },
    Rotation { a: Vec4<F>, b: Vec4<F> },
    PointInversion { p: Vec4<F> },
    Glide,
    Composite,
}

impl<F> IsometryKind<F> {
    pub fn tag(&self) -> &'static str {
        match self {
            IsometryKind::Reflection { .. } => "reflection",
            IsometryKind::Rotation { .. } => "rotation",
            IsometryKind::PointInversion { .. } => "point_inversion",
            IsometryKind::Glide => "glide",
            IsometryKind::Composite => "composite",
        }
    }
}

/// A 4x4 matrix acting on column coordinates, with `M^T J M = J` checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isometry<F> {
    pub matrix: Mat4<F>,
    pub kind: IsometryKind<F>,
    pub det: F,
}

impl<F: Field> Isometry<F> {
    /// `x -> x - 2 (n.x / n.n) n`.
    pub fn reflection(j: &Mat4<F>, mirror: &Vec4<F>) -> Result<Self, IsometryError> {
        let mm = bilinear(j, mirror, mirror);
        if mm.signum() >= 0 {
            return Err(IsometryError::NotSpacelike(mm.to_string()));
        }
        let c = F::from_i64(-2) / mm;
        let m = mat_add(&identity(), &mat_scale(&c, &outer_j(mirror, j, mirror)));
        Isometry::from_matrix(j, m, IsometryKind::Reflection { mirror: mirror.clone() })
    }

    /// Rotation by pi about the geodesic with ideal endpoints `a`, `b`:
    /// `x -> 2((a.x) b + (b.x) a)/(a.b) - x`.
    pub fn rotation_pi(j: &Mat4<F>, a: &Vec4<F>, b: &Vec4<F>) -> Result<Self, IsometryError> {
        if !bilinear(j, a, a).is_zero() || !bilinear(j, b, b).is_zero() {
            return Err(IsometryError::NotLightlike);
        }
        let ab = bilinear(j, a, b);
        if ab.is_zero() {
            return Err(IsometryError::DegenerateEndpoints);
        }
        let c = F::from_i64(2) / ab;
        let sym = mat_add(&outer_j(b, j, a), &outer_j(a, j, b));
        let m = mat_sub(&mat_scale(&c, &sym), &identity());
        Isometry::from_matrix(
            j,
            m,
            IsometryKind::Rotation {
                a: a.clone(),
                b: b.clone(),
            },
        )
    }

    /// The antipodal map about a timelike point: `x -> 2 (P.x / P.P) P - x`.
    pub fn point_inversion(j: &Mat4<F>, p: &Vec4<F>) -> Result<Self, IsometryError> {
        let pp = bilinear(j, p, p);
        if pp.signum() <= 0 {
            return Err(IsometryError::NotTimelike(pp.to_string()));
        }
        let c = F::from_i64(2) / pp;
        let m = mat_sub(&mat_scale(&c, &outer_j(p, j, p)), &identity());
        Isometry::from_matrix(j, m, IsometryKind::PointInversion { p: p.clone() })
    }

    pub fn from_matrix(j: &Mat4<F>, matrix: Mat4<F>, kind: IsometryKind<F>) -> Result<Self, IsometryError> {
        if !preserves(&matrix, j) {
            return Err(IsometryError::FormNotPreserved);
        }
        let d = det(&matrix);
        assert_eq!(d.clone() * d.clone(), F::one(), "isometry determinant squares to 1");
        Ok(Isometry { matrix, kind, det: d })
    }

    pub fn apply(&self, v: &Vec4<F>) -> Vec4<F> {
        mat_vec(&self.matrix, v)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Isometry<F>) -> Isometry<F> {
        let matrix = mat_mul(&self.matrix, &other.matrix);
        Isometry {
            matrix,
            kind: IsometryKind::Composite,
            det: self.det.clone() * other.det.clone(),
        }
    }

    /// `M^{-1} = J^{-1} M^T J`, computed directly by elimination.
    pub fn inverse_matrix(&self) -> Mat4<F> {
        inverse(&self.matrix).expect("isometries are invertible")
    }

    pub fn is_involution(&self) -> bool {
        mat_mul(&self.matrix, &self.matrix) == identity()
    }

    /// Entries as rationals; fails if any entry keeps a surd part.
    pub fn rational_matrix(&self) -> Result<Mat4<Rational>, IsometryError> {
        let mut out: Mat4<Rational> = identity();
        for i in 0..4 {
            for k in 0..4 {
                out[i][k] = self.matrix[i][k].as_rational().ok_or(IsometryError::SurdResidue)?;
            }
        }
        Ok(out)
    }

    /// Entries as integers, when integral.
    pub fn integer_matrix(&self) -> Option<Mat4<BigInt>> {
        let r = self.rational_matrix().ok()?;
        let mut out: Mat4<BigInt> = identity();
        for i in 0..4 {
            for k in 0..4 {
                out[i][k] = r[i][k].to_integer()?;
            }
        }
        Some(out)
    }

    /// Same isometry with entries mapped into another field.
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Isometry<G> {
        let mv = |v: &Vec4<F>| -> Vec4<G> { std::array::from_fn(|i| f(&v[i])) };
        let kind = match &self.kind {
            IsometryKind::Reflection { mirror } => IsometryKind::Reflection { mirror: mv(mirror) },
            IsometryKind::Rotation { a, b } => IsometryKind::Rotation { a: mv(a), b: mv(b) },
            IsometryKind::PointInversion { p } => IsometryKind::PointInversion { p: mv(p) },
            IsometryKind::Glide => IsometryKind::Glide,
            IsometryKind::Composite => IsometryKind::Composite,
        };
        Isometry {
            matrix: std::array::from_fn(|i| std::array::from_fn(|k| f(&self.matrix[i][k]))),
            kind,
            det: f(&self.det),
        }
    }
}

pub fn preserves<F: Field>(m: &Mat4<F>, j: &Mat4<F>) -> bool {
    mat_mul(&transpose(m), &mat_mul(j, m)) == *j
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryReport {
    pub form_ok: bool,
    pub lattice_ok: bool,
    pub orthochronous_ok: bool,
}

impl SymmetryReport {
    pub fn all_ok(&self) -> bool {
        self.form_ok && self.lattice_ok && self.orthochronous_ok
    }
}

/// Checks an isometry against `J_n`: form preserved, `M` and `M^{-1}` integral,
/// and `(M D).D > 0` for `D = [1,1,1,1]`.
pub fn verify_symmetry<F: Field>(iso: &Isometry<F>, form: &GramForm) -> SymmetryReport {
    let j: Mat4<F> = form.matrix();
    let d: Vec4<F> = [1, 1, 1, 1].map(F::from_i64);
    check_symmetry(iso, &j, &d)
}

/// [`verify_symmetry`] for an arbitrary Gram matrix and timelike reference vector.
pub fn check_symmetry<F: Field>(iso: &Isometry<F>, j: &Mat4<F>, timelike: &Vec4<F>) -> SymmetryReport {
    let form_ok = preserves(&iso.matrix, j);
    let integral = |m: &Mat4<F>| {
        m.iter()
            .flatten()
            .all(|x| x.as_rational().map(|r| r.is_integer()).unwrap_or(false))
    };
    let lattice_ok = integral(&iso.matrix) && inverse(&iso.matrix).map(|m| integral(&m)).unwrap_or(false);
    let md = mat_vec(&iso.matrix, timelike);
    let orthochronous_ok = bilinear(j, &md, timelike).signum() > 0;
    SymmetryReport {
        form_ok,
        lattice_ok,
        orthochronous_ok,
    }
}
