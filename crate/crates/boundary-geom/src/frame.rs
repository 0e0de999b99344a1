use std::sync::Arc;

use exact_arith::{BiQuadElem, Field, QuadElem, Rational};
use lorentz_core::linalg::{add, bilinear, map_vec, Mat4, Vec4};
use lorentz_core::{GramForm, LatticeVector};

use crate::complex::Complex;
use crate::GeomError;

/// Scale of the boundary metric: `e3` becomes the unit circle at `i`.
pub const DELTA: i64 = 4;

/// A field that can hold `sqrt(n)` for the lattice parameter.
pub trait Surd: Field {
    fn sqrt_rational(q: &Rational) -> Option<Self>;
    fn try_mul(&self, other: &Self) -> Option<Self>;
}

impl Surd for QuadElem {
    fn sqrt_rational(q: &Rational) -> Option<Self> {
        QuadElem::sqrt_of(q).ok()
    }
    fn try_mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(other).ok()
    }
}

impl Surd for BiQuadElem {
    fn sqrt_rational(q: &Rational) -> Option<Self> {
        BiQuadElem::sqrt_of(q).ok()
    }
    fn try_mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(other).ok()
    }
}

/// `nx x + ny y = offset`, with `(nx, ny)` a unit normal pointing into the
/// half plane the vector bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineData<F> {
    pub normal: Complex<F>,
    pub offset: F,
}

impl<F: Field> LineData<F> {
    /// `Some(x)` for a vertical line `x = const`.
    pub fn vertical_at(&self) -> Option<F> {
        (self.normal.im.is_zero()).then(|| self.offset.clone() / self.normal.re.clone())
    }

    /// `Some(y)` for a horizontal line `y = const`.
    pub fn horizontal_at(&self) -> Option<F> {
        (self.normal.re.is_zero()).then(|| self.offset.clone() / self.normal.im.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircleShape<F> {
    Circle { center: Complex<F>, radius: F },
    Line(LineData<F>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryCircle<F> {
    /// Signed; zero for lines. Negative when the vector bounds the outside of the disk.
    pub curvature: F,
    pub shape: CircleShape<F>,
    pub source: Vec4<F>,
    /// Sign of `v.E`, or `+1` for lines.
    pub orientation: i32,
}

impl<F: Field> BoundaryCircle<F> {
    pub fn center(&self) -> Option<&Complex<F>> {
        match &self.shape {
            CircleShape::Circle { center, .. } => Some(center),
            CircleShape::Line(_) => None,
        }
    }

    pub fn line(&self) -> Option<&LineData<F>> {
        match &self.shape {
            CircleShape::Line(l) => Some(l),
            CircleShape::Circle { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPoint<F> {
    pub x: F,
    pub y: F,
    pub source: Vec4<F>,
}

impl<F: Field> BoundaryPoint<F> {
    pub fn z(&self) -> Complex<F> {
        Complex::new(self.x.clone(), self.y.clone())
    }
}

/// The strip frame of one lattice, with vectors over a field holding `sqrt(n)`.
#[derive(Debug, Clone)]
pub struct BoundaryFrame<F> {
    form: Arc<GramForm>,
    gram: Mat4<F>,
    sqrt_n: F,
    e1: Vec4<F>,
    big_e: Vec4<F>,
    v1: Vec4<F>,
    /// `e1 + e3`, the boundary point `0`.
    origin: Vec4<F>,
}

fn lit<F: Field>(c: [i64; 4]) -> Vec4<F> {
    c.map(F::from_i64)
}

impl<F: Surd> BoundaryFrame<F> {
    pub fn new(form: &Arc<GramForm>) -> Result<Self, GeomError> {
        let n = form.n().clone();
        let sqrt_n = F::sqrt_rational(&n).ok_or(GeomError::Field)?;
        let nf = F::from_rational(&n).ok_or(GeomError::Field)?;
        Ok(BoundaryFrame {
            form: form.clone(),
            gram: form.matrix(),
            sqrt_n,
            e1: lit([1, 0, 0, 0]),
            big_e: lit([1, 1, 0, 0]),
            v1: [nf.clone(), nf, F::one(), -F::one()],
            origin: lit([1, 0, 1, 0]),
        })
    }

    pub fn form(&self) -> &Arc<GramForm> {
        &self.form
    }

    pub fn gram(&self) -> &Mat4<F> {
        &self.gram
    }

    pub fn sqrt_n(&self) -> &F {
        &self.sqrt_n
    }

    pub fn infinity(&self) -> &Vec4<F> {
        &self.big_e
    }

    pub fn dot(&self, u: &Vec4<F>, v: &Vec4<F>) -> F {
        bilinear(&self.gram, u, v)
    }

    pub fn lift(&self, v: &LatticeVector) -> Result<Vec4<F>, GeomError> {
        let c: Option<Vec<F>> = v.coords.iter().map(F::from_rational).collect();
        let c = c.ok_or(GeomError::Field)?;
        Ok([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()])
    }

    /// Co-curvature, curvature, curvature times center (x, y), for the normalization of `v`.
    ///
    /// These are the coordinates in which the form becomes `2 c0 c1 - 2 c2^2 - 2 c3^2`.
    pub fn inversive(&self, v: &Vec4<F>) -> Result<[F; 4], GeomError> {
        let four = F::from_i64(DELTA);
        let bx = self.dot(v, &self.v1) / (four.clone().try_mul(&self.sqrt_n).ok_or(GeomError::Field)?);
        Ok([
            self.dot(v, &self.origin),
            self.dot(v, &self.big_e) / four,
            bx,
            self.dot(v, &self.e1) / F::from_i64(2),
        ])
    }

    /// Circle or line of a spacelike vector; vectors of norm other than `-2` are rescaled.
    pub fn circle(&self, v: &Vec4<F>) -> Result<BoundaryCircle<F>, GeomError> {
        let vv = self.dot(v, v);
        if vv.signum() >= 0 {
            return Err(GeomError::NotSpacelike(vv.to_string()));
        }
        // sqrt(2 / -v.v) brings the vector to norm -2
        let k = vv.as_rational().ok_or(GeomError::Field)?;
        let s = F::sqrt_rational(&(Rational::from_int(-2) / k)).ok_or(GeomError::Field)?;
        let [c0, b, bx, by] = self.inversive(v)?;
        let mul = |x: &F| x.try_mul(&s).ok_or(GeomError::Field);
        if b.is_zero() {
            return Ok(BoundaryCircle {
                curvature: F::zero(),
                shape: CircleShape::Line(LineData {
                    normal: Complex::new(mul(&bx)?, mul(&by)?),
                    offset: mul(&(c0 / F::from_i64(2)))?,
                }),
                source: v.clone(),
                orientation: 1,
            });
        }
        let curvature = mul(&b)?;
        let radius = F::one() / curvature.clone();
        let radius = if radius.signum() < 0 { -radius } else { radius };
        Ok(BoundaryCircle {
            shape: CircleShape::Circle {
                center: Complex::new(bx / b.clone(), by / b.clone()),
                radius,
            },
            orientation: b.signum(),
            curvature,
            source: v.clone(),
        })
    }

    pub fn point(&self, a: &Vec4<F>) -> Result<BoundaryPoint<F>, GeomError> {
        let aa = self.dot(a, a);
        if !aa.is_zero() {
            return Err(GeomError::NotLightlike(aa.to_string()));
        }
        let ae = self.dot(a, &self.big_e);
        if ae.is_zero() {
            return Err(GeomError::AtInfinity);
        }
        let den = self.sqrt_n.try_mul(&ae).ok_or(GeomError::Field)?;
        Ok(BoundaryPoint {
            x: self.dot(a, &self.v1) / den,
            y: F::from_i64(2) * self.dot(a, &self.e1) / ae,
            source: a.clone(),
        })
    }

    /// Squared boundary distance `delta^2 (A.B) / ((A.E)(B.E))`.
    pub fn distance2(&self, a: &Vec4<F>, b: &Vec4<F>) -> Result<F, GeomError> {
        for p in [a, b] {
            let pp = self.dot(p, p);
            if !pp.is_zero() {
                return Err(GeomError::NotLightlike(pp.to_string()));
            }
        }
        let ae = self.dot(a, &self.big_e);
        let be = self.dot(b, &self.big_e);
        if ae.is_zero() || be.is_zero() {
            return Err(GeomError::AtInfinity);
        }
        let d2 = F::from_i64(DELTA * DELTA);
        Ok(d2 * self.dot(a, b) / (ae * be))
    }

    /// Signed distance `delta (A.n) / (sqrt(-2 n.n) A.E)` from a point to a line.
    pub fn point_line_distance(&self, a: &Vec4<F>, line: &Vec4<F>) -> Result<F, GeomError> {
        let le = self.dot(line, &self.big_e);
        if !le.is_zero() {
            return Err(GeomError::NotLine(le.to_string()));
        }
        let nn = self.dot(line, line);
        let k = (F::from_i64(-2) * nn.clone()).as_rational().ok_or(GeomError::Field)?;
        if k.signum() <= 0 {
            return Err(GeomError::NotSpacelike(nn.to_string()));
        }
        let root = F::sqrt_rational(&k).ok_or(GeomError::Field)?;
        let ae = self.dot(a, &self.big_e);
        if ae.is_zero() {
            return Err(GeomError::AtInfinity);
        }
        let den = root.try_mul(&ae).ok_or(GeomError::Field)?;
        Ok(F::from_i64(DELTA) * self.dot(a, line) / den)
    }

    /// `u + v` for tangent norm `-2` vectors.
    pub fn tangency_point(&self, u: &Vec4<F>, v: &Vec4<F>) -> Result<Vec4<F>, GeomError> {
        let minus_two = F::from_i64(-2);
        for w in [u, v] {
            let ww = self.dot(w, w);
            if ww != minus_two {
                return Err(GeomError::NotSpacelike(ww.to_string()));
            }
        }
        let uv = self.dot(u, v);
        if uv != F::from_i64(2) {
            return Err(GeomError::NotTangent(uv.to_string()));
        }
        Ok(add(u, v))
    }
}

fn frame_of(v: &LatticeVector) -> Result<(BoundaryFrame<QuadElem>, Vec4<QuadElem>), GeomError> {
    let f = BoundaryFrame::new(&v.form)?;
    let x = f.lift(v)?;
    Ok((f, x))
}

pub fn circle_of(v: &LatticeVector) -> Result<BoundaryCircle<QuadElem>, GeomError> {
    let (f, x) = frame_of(v)?;
    f.circle(&x)
}

pub fn point_of(a: &LatticeVector) -> Result<BoundaryPoint<QuadElem>, GeomError> {
    let (f, x) = frame_of(a)?;
    f.point(&x)
}

pub fn boundary_distance(a: &LatticeVector, b: &LatticeVector) -> Result<QuadElem, GeomError> {
    let (f, x) = frame_of(a)?;
    f.distance2(&x, &f.lift(b)?)
}

pub fn point_line_distance(a: &LatticeVector, line: &LatticeVector) -> Result<QuadElem, GeomError> {
    let (f, x) = frame_of(a)?;
    f.point_line_distance(&x, &f.lift(line)?)
}

pub fn tangency_point(u: &LatticeVector, v: &LatticeVector) -> Result<LatticeVector, GeomError> {
    let (f, x) = frame_of(u)?;
    f.tangency_point(&x, &f.lift(v)?)?;
    Ok(u.plus(v))
}

/// Hyperbolic distance `arcosh(|u.v| / (|u| |v|))` between disjoint planes;
/// `None` when the planes meet. Diagnostic only.
pub fn plane_gap(u: &LatticeVector, v: &LatticeVector) -> Option<f64> {
    let j: Mat4<f64> = u.form.matrix_i64().map(|r| r.map(|x| x as f64));
    let uf = map_vec(&u.coords, Rational::to_f64);
    let vf = map_vec(&v.coords, Rational::to_f64);
    let dot = |a: &Vec4<f64>, b: &Vec4<f64>| -> f64 {
        (0..4).map(|i| (0..4).map(|k| a[i] * j[i][k] * b[k]).sum::<f64>()).sum()
    };
    let (uu, vv) = (dot(&uf, &uf), dot(&vf, &vf));
    if uu >= 0.0 || vv >= 0.0 {
        return None;
    }
    let c = dot(&uf, &vf).abs() / (uu * vv).sqrt();
    (c >= 1.0).then(|| c.acosh())
}
