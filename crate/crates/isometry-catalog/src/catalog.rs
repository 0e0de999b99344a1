use std::path::Path;
use std::sync::Arc;

use exact_arith::{BiQuadElem, BigInt, QuadElem, Rational};
use lorentz_core::linalg::{Mat4, Vec4};
use lorentz_core::{primitive_reduce, FrameVectors, GramForm, LatticeVector, LorentzError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::isometry::{verify_symmetry, Isometry, IsometryError, IsometryKind};

const EMBEDDED: &str = include_str!("../data/catalog.json");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog has no preset for n = {0}")]
    UnknownN(String),
    #[error("catalog parse error: {0}")]
    Parse(String),
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("generator {name} at n = {n}: {source}")]
    Construction {
        n: String,
        name: String,
        source: IsometryError,
    },
    #[error("generator {name} at n = {n} fails verification: {detail}")]
    Verification { n: String, name: String, detail: String },
    #[error("generator {name} at n = {n} disagrees with the {formula} construction: table {table}, formula {computed}")]
    FormulaMismatch {
        n: String,
        name: String,
        formula: String,
        table: String,
        computed: String,
    },
    #[error("{0}")]
    Formula(String),
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    pub fn value(&self) -> Result<QuadElem, CatalogError> {
        match self {
            Entry::Int(v) => Ok(QuadElem::from_int(*v)),
            Entry::Text(s) => s.parse().map_err(|e| CatalogError::Parse(format!("{s}: {e}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Endpoint {
    pub name: String,
    pub vector: Vec<Entry>,
}

/// Printed data in the complex plane, kept as text for cross-validation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CData {
    Circle { center: [String; 2], radius: String },
    Line { axis: String, at: String },
    Points { points: Vec<[String; 2]> },
    Glide,
}

impl CData {
    /// Evaluates a printed expression; `sqrt(n)` refers to the preset's `n`.
    pub fn eval(text: &str, n: &Rational) -> Result<BiQuadElem, CatalogError> {
        let t = text.replace("sqrt(n)", &format!("sqrt({n})"));
        t.parse().map_err(|e| CatalogError::Parse(format!("{text}: {e}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenRecord {
    pub name: String,
    #[serde(rename = "type")]
    pub type_tag: Option<u8>,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoints: Option<Vec<Endpoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
    pub cdata: CData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Discrepancy {
    pub name: String,
    pub printed: serde_json::Value,
    pub note: String,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresetRecord {
    pub n: String,
    #[serde(default = "yes")]
    pub common: bool,
    pub generators: Vec<GenRecord>,
    #[serde(default)]
    pub discrepancies: Vec<Discrepancy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlideExtra {
    pub n: String,
    pub reflection: String,
    pub lambda: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Extras {
    pub glide: GlideExtra,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogFile {
    pub common: Vec<GenRecord>,
    pub presets: Vec<PresetRecord>,
    pub extras: Extras,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// One of the four generators shared by every `n`.
    Common,
    /// Row `row` (0-based) of the per-`n` table.
    Table { n: String, row: usize },
    /// Produced by a general construction rather than read from a table.
    Formula(String),
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub type_tag: Option<u8>,
    pub iso: Isometry<QuadElem>,
    pub provenance: Provenance,
    pub cdata: Option<CData>,
    /// Named lattice data (mirror, endpoints, center) as printed after correction.
    pub data: Vec<(String, Vec4<QuadElem>)>,
}

/// Generators of the packing group for one `n`, seed `e1`.
#[derive(Debug, Clone)]
pub struct GeneratorPreset {
    pub n: Rational,
    pub form: Arc<GramForm>,
    pub generators: Vec<Generator>,
    pub seed: LatticeVector,
    pub notes: String,
    pub discrepancies: Vec<Discrepancy>,
}

impl GeneratorPreset {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn get(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name == name)
    }

    /// Integer matrices of all generators (every catalog generator is integral).
    pub fn integer_matrices(&self) -> Vec<Mat4<BigInt>> {
        self.generators
            .iter()
            .map(|g| g.iso.integer_matrix().expect("verified generators are integral"))
            .collect()
    }

    /// Indices of the two strip walls `x = 0` and `x = sqrt n`.
    pub fn wall_indices(&self) -> Option<(usize, usize)> {
        Some((self.index_of("R_v1")?, self.index_of("R_v2")?))
    }

    pub fn frame(&self) -> FrameVectors {
        FrameVectors::new(&self.form)
    }

    /// Copy with the generators in a different order (used by determinism checks).
    pub fn permuted(&self, order: &[usize]) -> GeneratorPreset {
        let mut p = self.clone();
        p.generators = order.iter().map(|&i| self.generators[i].clone()).collect();
        p
    }
}

#[derive(Debug, Clone)]
pub struct Catalog {
    file: CatalogFile,
}

impl Catalog {
    pub fn embedded() -> Self {
        Catalog::from_json(EMBEDDED).expect("embedded catalog parses")
    }

    pub fn embedded_json() -> &'static str {
        EMBEDDED
    }

    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        let file: CatalogFile = serde_json::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))?;
        Ok(Catalog { file })
    }

    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Catalog::from_json(&text)
    }

    pub fn file(&self) -> &CatalogFile {
        &self.file
    }

    pub fn records(&self) -> &[PresetRecord] {
        &self.file.presets
    }

    pub fn record(&self, n: &Rational) -> Option<&PresetRecord> {
        self.file
            .presets
            .iter()
            .find(|p| p.n.parse::<Rational>().map(|v| &v == n).unwrap_or(false))
    }

    pub fn preset_n(&self, n: i64) -> Result<GeneratorPreset, CatalogError> {
        self.preset(&Rational::from_int(n))
    }

    /// Builds, verifies and formula-checks the preset for `n`.
    pub fn preset(&self, n: &Rational) -> Result<GeneratorPreset, CatalogError> {
        let rec = self.record(n).ok_or_else(|| CatalogError::UnknownN(n.to_string()))?;
        let form = GramForm::new(n.clone())?;
        let frame = FrameVectors::new(&form);
        let j: Mat4<QuadElem> = form.matrix();
        let mut gens = Vec::new();
        if rec.common {
            for g in &self.file.common {
                let fname = g.frame.as_deref().unwrap_or("");
                let v = match fname {
                    "h" => &frame.h,
                    "v1" => &frame.v1,
                    "v2" => &frame.v2,
                    "s0" => &frame.s0,
                    other => return Err(CatalogError::Parse(format!("unknown frame vector {other}"))),
                };
                let mirror: Vec4<QuadElem> = v.coords.clone().map(QuadElem::rational);
                let iso = Isometry::reflection(&j, &mirror).map_err(|source| CatalogError::Construction {
                    n: rec.n.clone(),
                    name: g.name.clone(),
                    source,
                })?;
                gens.push(Generator {
                    name: g.name.clone(),
                    type_tag: g.type_tag,
                    iso,
                    provenance: Provenance::Common,
                    cdata: Some(g.cdata.clone()),
                    data: vec![(fname.to_string(), mirror)],
                });
            }
        }
        for (row, g) in rec.generators.iter().enumerate() {
            gens.push(build_generator(&rec.n, row, g, &j)?);
        }
        for g in &gens {
            let rep = verify_symmetry(&g.iso, &form);
            if !rep.all_ok() {
                return Err(CatalogError::Verification {
                    n: rec.n.clone(),
                    name: g.name.clone(),
                    detail: format!("{rep:?}"),
                });
            }
        }
        let preset = GeneratorPreset {
            n: n.clone(),
            seed: frame.e[0].clone(),
            form,
            generators: gens,
            notes: rec.notes.clone().unwrap_or_default(),
            discrepancies: rec.discrepancies.clone(),
        };
        check_formulas(&preset, rec)?;
        Ok(preset)
    }

    /// Integer `n` values with a preset, in file order.
    pub fn integer_ns(&self) -> Vec<i64> {
        self.file
            .presets
            .iter()
            .filter_map(|p| p.n.parse::<i64>().ok())
            .collect()
    }

    pub fn glide_extra(&self) -> &GlideExtra {
        &self.file.extras.glide
    }
}

fn parse_vec(entries: &[Entry]) -> Result<Vec4<QuadElem>, CatalogError> {
    if entries.len() != 4 {
        return Err(CatalogError::Parse(format!("vector needs 4 entries, got {}", entries.len())));
    }
    Ok([
        entries[0].value()?,
        entries[1].value()?,
        entries[2].value()?,
        entries[3].value()?,
    ])
}

fn build_generator(n: &str, row: usize, g: &GenRecord, j: &Mat4<QuadElem>) -> Result<Generator, CatalogError> {
    let cons = |source| CatalogError::Construction {
        n: n.to_string(),
        name: g.name.clone(),
        source,
    };
    let missing = |what: &str| CatalogError::Parse(format!("{} at n = {n}: missing {what}", g.name));
    let (iso, data) = match g.kind.as_str() {
        "reflection" => {
            let v = parse_vec(g.vector.as_ref().ok_or_else(|| missing("vector"))?)?;
            (Isometry::reflection(j, &v).map_err(cons)?, vec![("mirror".to_string(), v)])
        }
        "point_inversion" => {
            let v = parse_vec(g.vector.as_ref().ok_or_else(|| missing("vector"))?)?;
            (Isometry::point_inversion(j, &v).map_err(cons)?, vec![("center".to_string(), v)])
        }
        "rotation" => {
            let ends = g.endpoints.as_ref().ok_or_else(|| missing("endpoints"))?;
            if ends.len() != 2 {
                return Err(missing("two endpoints"));
            }
            let a = parse_vec(&ends[0].vector)?;
            let b = parse_vec(&ends[1].vector)?;
            let iso = Isometry::rotation_pi(j, &a, &b).map_err(cons)?;
            (iso, vec![(ends[0].name.clone(), a), (ends[1].name.clone(), b)])
        }
        "glide" => {
            let m = g.matrix.as_ref().ok_or_else(|| missing("matrix"))?;
            if m.len() != 4 || m.iter().any(|r| r.len() != 4) {
                return Err(CatalogError::Parse("glide matrix must be 4x4".into()));
            }
            let mat: Mat4<QuadElem> = std::array::from_fn(|i| std::array::from_fn(|k| QuadElem::from_int(m[i][k])));
            (Isometry::from_matrix(j, mat, IsometryKind::Glide).map_err(cons)?, vec![])
        }
        other => return Err(CatalogError::Parse(format!("unknown generator kind {other}"))),
    };
    if iso.rational_matrix().is_err() {
        return Err(cons(IsometryError::SurdResidue));
    }
    Ok(Generator {
        name: g.name.clone(),
        type_tag: g.type_tag,
        iso,
        provenance: Provenance::Table {
            n: n.to_string(),
            row,
        },
        cdata: Some(g.cdata.clone()),
        data,
    })
}

fn rational_vec(v: &Vec4<QuadElem>) -> Option<Vec4<Rational>> {
    let r: Vec<Rational> = v.iter().filter_map(|x| x.as_rational().cloned()).collect();
    (r.len() == 4).then(|| [r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone()])
}

fn check_formulas(p: &GeneratorPreset, rec: &PresetRecord) -> Result<(), CatalogError> {
    let Some(n) = p.form.n_int() else { return Ok(()) };
    for (g, r) in p.generators.iter().skip(if rec.common { 4 } else { 0 }).zip(&rec.generators) {
        let Some(tag) = &r.formula else { continue };
        let (want, idx) = match tag.as_str() {
            "s1" | "s2" => {
                let all = general_s1_s2(n)?;
                let v = all.into_iter().find(|(k, _)| k == tag).map(|(_, v)| v);
                (v.ok_or_else(|| CatalogError::Formula(format!("no {tag} for n = {n}")))?, 0)
            }
            t if t.starts_with("q1:") => {
                let idx: usize = t[3..].parse().map_err(|_| CatalogError::Parse(t.to_string()))?;
                (q1_formula(n)?, idx)
            }
            other => return Err(CatalogError::Parse(format!("unknown formula tag {other}"))),
        };
        let table = rational_vec(&g.data[idx].1)
            .ok_or_else(|| CatalogError::Formula(format!("{} has surd entries", g.name)))?;
        let table = primitive_reduce(&LatticeVector::new(table, p.form.clone()))?;
        if table != want {
            return Err(CatalogError::FormulaMismatch {
                n: n.to_string(),
                name: g.name.clone(),
                formula: tag.clone(),
                table: table.to_string(),
                computed: want.to_string(),
            });
        }
    }
    Ok(())
}

/// The general `s1`, `s2` mirrors by residue of `n` (primitive, oriented).
///
/// Odd `n`: `Q0' = [4-n, -n, 2, 2]`, `s1 = (Q0' - E)/2`, `Q0 = [(1-n)/2, (1-n)/2, 1, 1]`,
/// `s2 = n Q0 - v2`. Even `n`: `Q0 = [1-n, 1-n, 2, 2]`, `Q0' = [2-n/2, -n/2, 1, 1]`,
/// `s1 = Q0' - E` (n = 2 mod 4) or `(Q0 - E)/2` (n = 0 mod 4), `s2 = (n/2) Q0' - v2`;
/// at `n = 12` the smaller `s2 = (3 Q0' - v2)/2` is used.
pub fn general_s1_s2(n: i64) -> Result<Vec<(String, LatticeVector)>, CatalogError> {
    if n < 4 {
        return Err(CatalogError::Formula(format!("general s1/s2 need n >= 4, got {n}")));
    }
    let form = GramForm::integer(n);
    let q = |v: [Rational; 4]| LatticeVector::new(v, form.clone());
    let r = |a: i64, b: i64| Rational::new(a, b);
    let e = q([r(1, 1), r(1, 1), r(0, 1), r(0, 1)]);
    let v2 = q([r(0, 1), r(0, 1), r(-1, 1), r(1, 1)]);
    let half = r(1, 2);
    let (s1, s2) = if n % 2 == 1 {
        let q0p = q([r(4 - n, 1), r(-n, 1), r(2, 1), r(2, 1)]);
        let s1 = q0p.minus(&e).scaled(&half);
        let q0 = q([r(1 - n, 2), r(1 - n, 2), r(1, 1), r(1, 1)]);
        let s2 = q0.scaled(&r(n, 1)).minus(&v2);
        (s1, s2)
    } else {
        let q0 = q([r(1 - n, 1), r(1 - n, 1), r(2, 1), r(2, 1)]);
        let q0p = q([r(2 - n / 2, 1), r(-n / 2, 1), r(1, 1), r(1, 1)]);
        let s1 = if n % 4 == 2 { q0p.minus(&e) } else { q0.minus(&e).scaled(&half) };
        let s2 = if n == 12 {
            q0p.scaled(&r(3, 1)).minus(&v2).scaled(&half)
        } else {
            q0p.scaled(&r(n / 2, 1)).minus(&v2)
        };
        (s1, s2)
    };
    Ok(vec![
        ("s1".to_string(), primitive_reduce(&s1)?),
        ("s2".to_string(), primitive_reduce(&s2)?),
    ])
}

/// The cusp `Q1 = [-n^2+25, -n^2+9, 2n+10, 2n-6]` for `n = 3 mod 4`, primitive.
pub fn q1_formula(n: i64) -> Result<LatticeVector, CatalogError> {
    if n.rem_euclid(4) != 3 {
        return Err(CatalogError::Formula(format!("Q1 construction needs n = 3 mod 4, got {n}")));
    }
    let form = GramForm::integer(n);
    let v = LatticeVector::from_ints([-n * n + 25, -n * n + 9, 2 * n + 10, 2 * n - 6], form);
    Ok(primitive_reduce(&v)?)
}

/// The printed glide generator of the `n = 21` group.
pub fn glide_n21() -> Isometry<QuadElem> {
    let p = Catalog::embedded().preset_n(21).expect("n = 21 preset");
    p.get("T").expect("glide T in catalog").iso.clone()
}
