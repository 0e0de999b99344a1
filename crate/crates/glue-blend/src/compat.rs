use exact_arith::Rational;
use isometry_catalog::preserves;
use std::collections::HashSet;

use lorentz_core::linalg::{mat_vec, Vec4};
use orbit_engine::{check_packing_property, enumerate_orbit, OrbitConfig, OrbitGroup, Packing};

use crate::blend::{BlendedGroup, Join, SliceMode};
use crate::embed::{standard_gram, std_dot, Std};
use exact_arith::Scalar;

/// A reflection face meeting a wall in a way the surrogate does not accept.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleIssue {
    pub generator: String,
    pub wall: String,
    /// Cosine of the angle between the face and the wall.
    pub cos: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SampleOutcome {
    Packing {
        members: usize,
        pairs: usize,
        min_product: f64,
        complete: bool,
    },
    /// Two orbit circles overlap.
    Overlap { a: String, b: String, product: f64, members: usize },
    Failed(String),
}

/// Result of the compatibility surrogate.
///
/// The notion has no formal definition; the rules used are: every generator
/// preserves the standard form; a face meeting a glued wall is orthogonal to
/// it or repeated on the other side; a face meeting a new mirror meets it at
/// an angle `pi/k`; and an orbit sample is a packing.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityReport {
    pub nonpreserving: Vec<String>,
    pub faces_checked: usize,
    pub angle_issues: Vec<AngleIssue>,
    pub sample: SampleOutcome,
}

impl CompatibilityReport {
    pub fn form_preserved(&self) -> bool {
        self.nonpreserving.is_empty()
    }

    pub fn ok(&self) -> bool {
        self.form_preserved() && self.angle_issues.is_empty() && matches!(self.sample, SampleOutcome::Packing { .. })
    }
}

/// `cos` of the angle between two spacelike planes, `None` if they do not meet.
fn meeting_cos(f: &[Std; 4], w: &[Std; 4]) -> Option<f64> {
    let fw = std_dot(f, w);
    let ff = std_dot(f, f);
    let ww = std_dot(w, w);
    let gap = fw.clone() * fw.clone() - ff.clone() * ww.clone();
    (gap.signum() < 0).then(|| fw.to_f64() / (ff.to_f64() * ww.to_f64()).sqrt())
}

fn coxeter(cos: f64) -> bool {
    let c = cos.abs();
    (2..=64).any(|k| (c - (std::f64::consts::PI / k as f64).cos()).abs() < 1e-9)
}

fn vec_text(v: &[Std; 4]) -> String {
    format!("[{},{},{},{}]", v[0], v[1], v[2], v[3])
}

/// Runs the compatibility surrogate; the orbit sample is taken to `bound`
/// with at most `max_frontier` nodes per layer.
pub fn check_compatibility(blend: &BlendedGroup, bound: &Rational, max_frontier: usize) -> CompatibilityReport {
    let gram = standard_gram();
    let nonpreserving = blend
        .generators
        .iter()
        .filter(|g| !preserves(&g.matrix, &gram))
        .map(|g| g.name.clone())
        .collect();
    let mut faces_checked = 0;
    let mut angle_issues = Vec::new();
    for join in &blend.joins {
        let (wall, name, glued) = match join {
            Join::Glued { wall, .. } => (wall, "glued wall", true),
            Join::Shifted { wall, .. } => (wall, "shifted wall", false),
            Join::Sliced { mode: SliceMode::Reflect, face, .. } => (face, "slice mirror", false),
            Join::Sliced { .. } => continue,
        };
        for g in &blend.generators {
            let Some(m) = &g.mirror else { continue };
            let Some(cos) = meeting_cos(m, wall) else { continue };
            if cos.abs() > 1.0 - 1e-12 {
                // the wall itself
                continue;
            }
            faces_checked += 1;
            let accepted = if glued {
                std_dot(m, wall).is_zero()
                    || blend.generators.iter().any(|o| o.side != g.side && o.matrix == g.matrix)
            } else {
                coxeter(cos)
            };
            if !accepted {
                angle_issues.push(AngleIssue {
                    generator: g.name.clone(),
                    wall: name.into(),
                    cos,
                });
            }
        }
    }
    let sample = sample_orbit(blend, bound, max_frontier);
    CompatibilityReport {
        nonpreserving,
        faces_checked,
        angle_issues,
        sample,
    }
}

fn sample_orbit(blend: &BlendedGroup, bound: &Rational, max_frontier: usize) -> SampleOutcome {
    let group = match blend.to_group() {
        Ok(g) => g,
        Err(e) => return SampleOutcome::Failed(e.to_string()),
    };
    let cfg = OrbitConfig {
        max_frontier,
        escalate: None,
        ..OrbitConfig::new(bound.clone())
    };
    let packing = match enumerate_orbit(&group, &cfg) {
        Ok(p) => p,
        Err(e) => {
            // the engine gives up on groups that are not discrete; look for the overlap directly
            return match overlap_search(&group, bound, max_frontier) {
                Some((a, b, product, members)) => SampleOutcome::Overlap {
                    a: vec_text(&a),
                    b: vec_text(&b),
                    product,
                    members,
                },
                None => SampleOutcome::Failed(e.to_string()),
            };
        }
    };
    let report = check_packing_property(&packing);
    let vectors: Vec<_> = packing.vectors().collect();
    match report.violations.iter().find(|v| v.overlap) {
        Some(v) => {
            let at = |x: &orbit_engine::Vertex| vec_text(&group.translate(x.power, vectors[x.member]));
            SampleOutcome::Overlap {
                a: at(&v.a),
                b: at(&v.b),
                product: v.product.parse::<Std>().map(|p| p.to_f64()).unwrap_or(f64::NAN),
                members: packing.len(),
            }
        }
        None => SampleOutcome::Packing {
            members: packing.len(),
            pairs: report.pairs,
            min_product: report.min_product,
            complete: packing.complete,
        },
    }
}

fn float_dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[1] + a[1] * b[0] - 2.0 * a[2] * b[2] - 2.0 * a[3] * b[3]
}

/// Breadth-first search over strip representatives (no escalation, no
/// pruning beyond `|curvature| <= bound`) for two distinct circles with
/// product below 2. Stops after `cap` circles.
pub fn overlap_search(group: &OrbitGroup<Std>, bound: &Rational, cap: usize) -> Option<(Vec4<Std>, Vec4<Std>, f64, usize)> {
    let limit = (bound.clone() * Rational::from_int(group.delta())).to_f64() + 1e-9;
    let two = Std::from_i64(2);
    let (wlo, whi) = group.walls();
    let lower = group.wall_matrix(false).clone();
    let mut seen: HashSet<Vec4<Std>> = HashSet::new();
    let mut found: Vec<(Vec4<Std>, [f64; 4])> = Vec::new();
    let mut frontier: Vec<Vec4<Std>> = Vec::new();
    let mut admit = |w: Vec4<Std>, found: &mut Vec<(Vec4<Std>, [f64; 4])>| -> Result<bool, (Vec4<Std>, Vec4<Std>, f64)> {
        if group.height(&w).to_f64().abs() > limit || !seen.insert(w.clone()) {
            return Ok(false);
        }
        for k in -1..=1 {
            let t = group.translate(k, &w);
            let tf = t.clone().map(|x| x.to_f64());
            for (o, of) in found.iter() {
                if float_dot(&tf, of) < 2.0 + 1e-6 && *o != t {
                    let p = group.dot(o, &t);
                    if (p.clone() - two.clone()).signum() < 0 {
                        return Err((o.clone(), t, p.to_f64()));
                    }
                }
            }
        }
        let wf = w.clone().map(|x| x.to_f64());
        found.push((w, wf));
        Ok(true)
    };
    for s in group.seeds() {
        let w = group.fold(s).0;
        match admit(w.clone(), &mut found) {
            Ok(true) => frontier.push(w),
            Ok(false) => {}
            Err((a, b, p)) => return Some((a, b, p, found.len())),
        }
    }
    while !frontier.is_empty() && found.len() < cap {
        let mut next = Vec::new();
        for v in &frontier {
            for u in [v.clone(), mat_vec(&lower, v)] {
                for (gi, g) in group.generators().iter().enumerate() {
                    if gi == wlo || gi == whi {
                        continue;
                    }
                    let w = group.fold(&mat_vec(&g.matrix, &u)).0;
                    match admit(w.clone(), &mut found) {
                        Ok(true) => next.push(w),
                        Ok(false) => {}
                        Err((a, b, p)) => return Some((a, b, p, found.len())),
                    }
                    if found.len() >= cap {
                        return None;
                    }
                }
            }
        }
        frontier = next;
    }
    None
}

/// Whether each member's curvature is an integer.
pub fn curvature_integrality(packing: &Packing<Std>) -> Vec<bool> {
    packing
        .vectors()
        .map(|v| {
            let curvature = v[1].clone();
            curvature.as_rational().map_or(false, |r| r.is_integer())
        })
        .collect()
}
