use std::cmp::Ordering;

use exact_arith::{BigInt, QuadElem, Rational, Scalar};
use glue_blend::{BlendDescriptor, BlendedGroup, Embedding, Std};
use lorentz_core::linalg::Vec4;
use orbit_engine::Packing;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// An exact number: a rational as `"p/q"`, an element of `Q(sqrt d)` as
/// `{a, b, d}`, or a biquadratic element by its four coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExactValue {
    Rational(String),
    Quad { a: String, b: String, d: u64 },
    BiQuad { c: [String; 4], d1: u64, d2: u64 },
}

impl ExactValue {
    pub fn from_std(x: &Std) -> Self {
        if let Some(r) = x.as_rational() {
            return ExactValue::Rational(r.to_string());
        }
        if let Some(q) = x.to_quad() {
            return ExactValue::Quad {
                a: q.a().to_string(),
                b: q.b().to_string(),
                d: q.d(),
            };
        }
        let (d1, d2) = x.bases();
        ExactValue::BiQuad {
            c: x.coeffs_in(d1, d2).map(|c| c.to_string()),
            d1,
            d2,
        }
    }

    pub fn to_std(&self) -> Result<Std, CliError> {
        let rational = |s: &str| s.parse::<Rational>().map_err(|_| CliError::BadInput(format!("not a rational: {s:?}")));
        match self {
            ExactValue::Rational(s) => Ok(Std::rational(rational(s)?)),
            ExactValue::Quad { a, b, d } => {
                let q = QuadElem::new(rational(a)?, rational(b)?, *d).map_err(|e| CliError::BadInput(e.to_string()))?;
                Ok(Std::from_quad(&q))
            }
            ExactValue::BiQuad { c, d1, d2 } => {
                let c = [rational(&c[0])?, rational(&c[1])?, rational(&c[2])?, rational(&c[3])?];
                Std::new(*d1, *d2, c).map_err(|e| CliError::BadInput(e.to_string()))
            }
        }
    }

    pub fn to_f64(&self) -> Result<f64, CliError> {
        Ok(self.to_std()?.to_f64())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Center {
    pub x: ExactValue,
    pub y: ExactValue,
}

/// The line `normal . p = offset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineData {
    pub normal: [ExactValue; 2],
    pub offset: ExactValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleRecord {
    /// Lattice coordinates (frame "lattice") or inversive coordinates (frame "standard").
    pub vec: [String; 4],
    pub curvature: ExactValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Center>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<ExactValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<LineData>,
    pub integer_curvature: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Lattice,
    Standard,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blend: Option<BlendDescriptor>,
    pub label: String,
    pub frame: Frame,
    pub delta: i64,
    pub bound: String,
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete_up_to: Option<String>,
    pub perspective: String,
    /// x positions of the two strip walls.
    pub walls: [ExactValue; 2],
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackingDocument {
    pub meta: Meta,
    pub circles: Vec<CircleRecord>,
}

/// Exact geometry of a norm -2 vector in inversive coordinates.
pub fn circle_record(vec: [String; 4], v: &Vec4<Std>) -> CircleRecord {
    let curvature = v[1].clone();
    let integer_curvature = curvature.as_rational().is_some_and(|r| r.is_integer());
    let (center, radius, line) = match curvature.inv() {
        Some(k) => (
            Some(Center {
                x: ExactValue::from_std(&(v[2].clone() * k.clone())),
                y: ExactValue::from_std(&(v[3].clone() * k.clone())),
            }),
            Some(ExactValue::from_std(&k)),
            None,
        ),
        None => (
            None,
            None,
            Some(LineData {
                normal: [ExactValue::from_std(&v[2]), ExactValue::from_std(&v[3])],
                offset: ExactValue::from_std(&(v[0].clone() / Std::from_i64(2))),
            }),
        ),
    };
    CircleRecord {
        vec,
        curvature: ExactValue::from_std(&curvature),
        center,
        radius,
        line,
        integer_curvature,
    }
}

fn cmp_exact(a: &Std, b: &Std) -> Ordering {
    (a.clone() - b.clone()).signum().cmp(&0)
}

/// Lines first (by normal, then offset), then circles by curvature, x, y.
fn canonical_key(v: &Vec4<Std>) -> (u8, [Std; 3]) {
    if v[1].is_zero() {
        (0, [v[2].clone(), v[3].clone(), v[0].clone()])
    } else {
        let k = v[1].inv().expect("nonzero curvature");
        (1, [v[1].clone(), v[2].clone() * k.clone(), v[3].clone() * k])
    }
}

fn sorted(mut rows: Vec<([String; 4], Vec4<Std>)>) -> Vec<CircleRecord> {
    let mut keyed: Vec<_> = rows.drain(..).map(|(s, v)| (canonical_key(&v), s, v)).collect();
    keyed.sort_by(|(ka, sa, _), (kb, sb, _)| {
        ka.0.cmp(&kb.0)
            .then_with(|| {
                ka.1.iter()
                    .zip(&kb.1)
                    .map(|(x, y)| cmp_exact(x, y))
                    .find(|o| *o != Ordering::Equal)
                    .unwrap_or(Ordering::Equal)
            })
            .then_with(|| sa.cmp(sb))
    });
    keyed.into_iter().map(|(_, s, v)| circle_record(s, &v)).collect()
}

fn wall_x(mirror: &Vec4<Std>) -> Std {
    // x = c is (2c, 0, 1, 0) up to scale
    mirror[0].clone() / (Std::from_i64(2) * mirror[2].clone())
}

/// Document for the orbit of a catalog group, vectors in lattice coordinates.
pub fn lattice_document(n: &Rational, packing: &Packing<BigInt>) -> Result<PackingDocument, CliError> {
    let emb = Embedding::new(n).map_err(|e| CliError::BadInput(e.to_string()))?;
    let rows = packing
        .vectors()
        .map(|v| {
            let std = emb.vector(&v.clone().map(|x| Std::rational(Rational::from_int(x))));
            (v.clone().map(|x| x.to_string()), std)
        })
        .collect();
    let root = Std::sqrt_of(n).map_err(|e| CliError::BadInput(e.to_string()))?;
    let circles = sorted(rows);
    Ok(PackingDocument {
        meta: Meta {
            n: Some(n.to_string()),
            blend: None,
            label: packing.group.label.clone(),
            frame: Frame::Lattice,
            delta: packing.group.delta(),
            bound: packing.bound.to_string(),
            complete: packing.complete,
            complete_up_to: packing.complete_up_to.as_ref().map(|r| r.to_string()),
            perspective: "strip".into(),
            walls: [ExactValue::Rational("0".into()), ExactValue::from_std(&root)],
            count: circles.len(),
        },
        circles,
    })
}

/// Document for a blended group, vectors in inversive coordinates.
pub fn blend_document(desc: &BlendDescriptor, group: &BlendedGroup, packing: &Packing<Std>) -> PackingDocument {
    let rows = packing.vectors().map(|v| (v.clone().map(|x| x.to_string()), v.clone())).collect();
    let (lo, hi) = group.wall_mirrors();
    let circles = sorted(rows);
    PackingDocument {
        meta: Meta {
            n: None,
            blend: Some(desc.clone()),
            label: group.label.clone(),
            frame: Frame::Standard,
            delta: packing.group.delta(),
            bound: packing.bound.to_string(),
            complete: packing.complete,
            complete_up_to: packing.complete_up_to.as_ref().map(|r| r.to_string()),
            perspective: "strip".into(),
            walls: [ExactValue::from_std(&wall_x(&lo)), ExactValue::from_std(&wall_x(&hi))],
            count: circles.len(),
        },
        circles,
    }
}

impl PackingDocument {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: PackingDocument = serde_json::from_str(text).map_err(|e| CliError::BadInput(format!("packing document: {e}")))?;
        doc.validate()?;
        Ok(doc)
    }

    /// Inversive coordinates of every circle, in document order.
    pub fn inversive(&self) -> Result<Vec<Vec4<Std>>, CliError> {
        match self.meta.frame {
            Frame::Standard => {
                let p = |s: &String| s.parse::<Std>().map_err(|e| CliError::BadInput(format!("{s:?}: {e}")));
                self.circles
                    .iter()
                    .map(|c| Ok([p(&c.vec[0])?, p(&c.vec[1])?, p(&c.vec[2])?, p(&c.vec[3])?]))
                    .collect()
            }
            Frame::Lattice => {
                let n = self.lattice_n()?;
                let emb = Embedding::new(&n).map_err(|e| CliError::BadInput(e.to_string()))?;
                let p = |s: &String| {
                    s.parse::<Rational>()
                        .map(Std::rational)
                        .map_err(|_| CliError::BadInput(format!("not a rational: {s:?}")))
                };
                self.circles
                    .iter()
                    .map(|c| Ok(emb.vector(&[p(&c.vec[0])?, p(&c.vec[1])?, p(&c.vec[2])?, p(&c.vec[3])?])))
                    .collect()
            }
        }
    }

    fn lattice_n(&self) -> Result<Rational, CliError> {
        let n = self.meta.n.as_ref().ok_or_else(|| CliError::BadInput("lattice document without n".into()))?;
        n.parse().map_err(|_| CliError::BadInput(format!("bad n {n:?}")))
    }

    /// Checks the stored geometry against the vectors and the count.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.meta.count != self.circles.len() {
            return Err(CliError::BadInput(format!("meta.count {} but {} circles", self.meta.count, self.circles.len())));
        }
        if self.meta.perspective != "strip" {
            return Err(CliError::BadInput(format!("unknown perspective {:?}", self.meta.perspective)));
        }
        for w in &self.meta.walls {
            w.to_std()?;
        }
        for (i, v) in self.inversive()?.iter().enumerate() {
            let want = circle_record(self.circles[i].vec.clone(), v);
            if want != self.circles[i] {
                return Err(CliError::BadInput(format!("circle {i} does not match its vector")));
            }
        }
        Ok(())
    }
}
