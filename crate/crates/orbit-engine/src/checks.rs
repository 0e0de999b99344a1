use std::collections::HashSet;

use exact_arith::{Rational, Scalar};
use lorentz_core::linalg::{mat_mul, mat_vec, Vec4};
use rayon::prelude::*;

use crate::enumerate::{enumerate_orbit, Letter, OrbitConfig, Packing};
use crate::scalar::OrbitScalar;

/// A member of the packing, possibly translated by `T^power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub member: usize,
    pub power: i64,
}

struct Extended<S> {
    verts: Vec<Vertex>,
    vecs: Vec<Vec4<S>>,
    jv: Vec<Vec4<S>>,
    small: Vec<Option<([i64; 4], [i64; 4])>>,
    chart: Vec<[f64; 4]>,
}

fn small4<S: OrbitScalar>(v: &Vec4<S>) -> Option<[i64; 4]> {
    Some([v[0].small()?, v[1].small()?, v[2].small()?, v[3].small()?])
}

fn float_product(a: &[f64; 4], b: &[f64; 4]) -> (f64, f64) {
    let terms = [a[0] * b[1], a[1] * b[0], -2.0 * a[2] * b[2], -2.0 * a[3] * b[3]];
    (terms.iter().sum(), terms.iter().map(|t| t.abs()).sum())
}

impl<S: OrbitScalar> Extended<S> {
    fn build(p: &Packing<S>, reach: i64) -> Self {
        let g = &p.group;
        let mut verts = Vec::new();
        let mut vecs = Vec::new();
        for (i, m) in p.members.iter().enumerate() {
            verts.push(Vertex { member: i, power: 0 });
            vecs.push(m.vector.clone());
        }
        for k in (1..=reach).flat_map(|k| [k, -k]) {
            for (i, m) in p.members.iter().enumerate() {
                let w = g.translate(k, &m.vector);
                if w == m.vector {
                    continue;
                }
                verts.push(Vertex { member: i, power: k });
                vecs.push(w);
            }
        }
        let jv: Vec<Vec4<S>> = vecs.par_iter().map(|v| mat_vec(g.gram(), v)).collect();
        let small = vecs
            .iter()
            .zip(&jv)
            .map(|(v, w)| Some((small4(v)?, small4(w)?)))
            .collect();
        let chart = vecs.par_iter().map(|v| g.chart_of(v)).collect();
        Extended {
            verts,
            vecs,
            jv,
            small,
            chart,
        }
    }

    fn exact(&self, a: usize, b: usize) -> S {
        if let (Some((u, _)), Some((_, w))) = (&self.small[a], &self.small[b]) {
            let s: i128 = (0..4).map(|i| u[i] as i128 * w[i] as i128).sum();
            if let Ok(v) = i64::try_from(s) {
                return S::from_i64(v);
            }
        }
        let (u, w) = (&self.vecs[a], &self.jv[b]);
        (0..4).fold(S::zero(), |acc, i| acc + u[i].clone() * w[i].clone())
    }

    fn is_small(&self, a: usize, b: usize) -> bool {
        self.small[a].is_some() && self.small[b].is_some()
    }
}

/// Number of translates needed on each side so that every circle that can
/// touch the window is present.
fn reach<S: OrbitScalar>(p: &Packing<S>) -> i64 {
    let g = &p.group;
    let mut rmax: f64 = 0.0;
    let mut shift: Option<f64> = None;
    for m in &p.members {
        let c = g.chart_of(&m.vector);
        if c[1].abs() < 1e-12 {
            continue;
        }
        rmax = rmax.max(1.0 / c[1].abs());
        if shift.is_none() {
            let t = g.chart_of(&g.translate(1, &m.vector));
            let d = (t[2] / t[1] - c[2] / c[1]).hypot(t[3] / t[1] - c[3] / c[1]);
            shift = Some(d);
        }
    }
    match shift {
        Some(d) if d > 0.0 => ((1.0 + 2.0 * rmax / d).ceil() as i64 + 1).clamp(1, 64),
        _ => 0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairViolation {
    pub a: Vertex,
    pub b: Vertex,
    pub product: String,
    /// `true` when the product is below 2 (the circles overlap); otherwise
    /// the product is not an even integer.
    pub overlap: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackingReport {
    pub pairs: usize,
    pub exact_pairs: usize,
    pub float_certified_pairs: usize,
    pub violations: Vec<PairViolation>,
    pub min_product: f64,
}

impl PackingReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn is_even_integer<S: Scalar>(x: &S) -> bool {
    x.as_rational()
        .and_then(|r| r.to_integer())
        .map(|i| (i % exact_arith::BigInt::from(2)) == exact_arith::BigInt::from(0))
        .unwrap_or(false)
}

/// Checks every pair of window members, and every member against translates
/// of the window, for `u . v >= 2` (even integers when the group is integral).
///
/// Products are exact; for non-integral groups pairs whose float product
/// clears 2 by a wide relative margin are counted as float certified.
pub fn check_packing_property<S: OrbitScalar>(p: &Packing<S>) -> PackingReport {
    let k = reach(p);
    let ext = Extended::build(p, k);
    let w = p.members.len();
    let two = S::from_i64(2);
    let integral = p.group.integral();
    let rows: Vec<(usize, usize, usize, f64, Vec<PairViolation>)> = (0..w)
        .into_par_iter()
        .map(|a| {
            let (mut pairs, mut exact, mut floats, mut minp) = (0, 0, 0, f64::INFINITY);
            let mut bad = Vec::new();
            for b in 0..ext.verts.len() {
                let vb = ext.verts[b];
                if (vb.power == 0 && b <= a) || vb.power < 0 || ext.vecs[a] == ext.vecs[b] {
                    continue;
                }
                pairs += 1;
                let (fp, scale) = float_product(&ext.chart[a], &ext.chart[b]);
                minp = minp.min(fp);
                if !ext.is_small(a, b) && !integral && fp - 2.0 > 1e-9 * (scale + 1.0) {
                    floats += 1;
                    continue;
                }
                exact += 1;
                let x = ext.exact(a, b);
                let overlap = (x.clone() - two.clone()).signum() < 0;
                if overlap || (integral && !is_even_integer(&x)) {
                    bad.push(PairViolation {
                        a: ext.verts[a],
                        b: vb,
                        product: x.to_string(),
                        overlap,
                    });
                }
            }
            (pairs, exact, floats, minp, bad)
        })
        .collect();
    let mut report = PackingReport {
        pairs: 0,
        exact_pairs: 0,
        float_certified_pairs: 0,
        violations: Vec::new(),
        min_product: f64::INFINITY,
    };
    for (pairs, exact, floats, minp, bad) in rows {
        report.pairs += pairs;
        report.exact_pairs += exact;
        report.float_certified_pairs += floats;
        report.min_product = report.min_product.min(minp);
        report.violations.extend(bad);
    }
    report
}

/// Tangency graph on the window members and their translates: an edge joins
/// two vertices whose product is exactly 2.
#[derive(Debug, Clone)]
pub struct TangencyGraph {
    pub vertices: Vec<Vertex>,
    pub adjacency: Vec<Vec<usize>>,
}

impl TangencyGraph {
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Index of the untranslated copy of a member.
    pub fn vertex_of(&self, member: usize) -> usize {
        member
    }

    /// Three vertices forming a 4-clique with `v`, if any.
    pub fn clique_through(&self, v: usize) -> Option<[usize; 3]> {
        let nb = &self.adjacency[v];
        for (i, &a) in nb.iter().enumerate() {
            for (j, &b) in nb.iter().enumerate().skip(i + 1) {
                if !self.adjacent(a, b) {
                    continue;
                }
                for &c in nb.iter().skip(j + 1) {
                    if self.adjacent(a, c) && self.adjacent(b, c) {
                        return Some([a, b, c]);
                    }
                }
            }
        }
        None
    }
}

fn graph_of<S: OrbitScalar>(ext: &Extended<S>) -> TangencyGraph {
    let two = S::from_i64(2);
    let n = ext.verts.len();
    let adjacency: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut out = Vec::new();
            for b in 0..n {
                if a == b || ext.vecs[a] == ext.vecs[b] {
                    continue;
                }
                let hit = if ext.is_small(a, b) {
                    ext.exact(a, b) == two
                } else {
                    let (fp, scale) = float_product(&ext.chart[a], &ext.chart[b]);
                    (fp - 2.0).abs() <= 1e-9 * (scale + 1.0) && ext.exact(a, b) == two
                };
                if hit {
                    out.push(b);
                }
            }
            out
        })
        .collect();
    TangencyGraph {
        vertices: ext.verts.clone(),
        adjacency,
    }
}

pub fn tangency_graph<S: OrbitScalar>(p: &Packing<S>) -> TangencyGraph {
    graph_of(&Extended::build(p, reach(p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleStatus {
    /// A 4-clique through the circle exists among window members and translates.
    Clique,
    /// The seed's cluster, carried along the circle's provenance word, is a 4-clique.
    Transport,
    /// No certificate, but possible partners exceed the curvature bound.
    NearBoundary,
    Failed,
}

#[derive(Debug, Clone)]
pub struct ApollonianReport {
    pub status: Vec<CircleStatus>,
    /// For each seed, the members/translates completing its cluster (if found).
    pub seed_clusters: Vec<Option<[Vertex; 3]>>,
}

impl ApollonianReport {
    pub fn count(&self, s: CircleStatus) -> usize {
        self.status.iter().filter(|&&x| x == s).count()
    }

    pub fn verified(&self) -> usize {
        self.count(CircleStatus::Clique) + self.count(CircleStatus::Transport)
    }

    pub fn failures(&self) -> Vec<usize> {
        (0..self.status.len()).filter(|&i| self.status[i] == CircleStatus::Failed).collect()
    }

    pub fn ok(&self) -> bool {
        !self.status.contains(&CircleStatus::Failed)
    }
}

/// Ratio used to call a circle "near the boundary": its curvature times this
/// exceeds the enumeration bound.
pub const NEAR_BOUNDARY_RATIO: i64 = 4;

/// Decides for every member whether it lies in four mutually tangent circles.
pub fn check_apollonian_property<S: OrbitScalar>(p: &Packing<S>) -> ApollonianReport {
    let g = &p.group;
    let ext = Extended::build(p, reach(p));
    let graph = graph_of(&ext);
    let w = p.members.len();
    let cliques: Vec<Option<[usize; 3]>> = (0..w).into_par_iter().map(|i| graph.clique_through(i)).collect();
    let seed_rep = |s: usize| {
        p.members.iter().position(|m| {
            m.seed == s && m.word.iter().all(|l| matches!(l, Letter::Fold { .. })) && m.representative
        })
    };
    let nseeds = g.seeds().len();
    let clusters: Vec<Option<(usize, [usize; 3])>> = (0..nseeds)
        .map(|s| {
            if !p.has_provenance {
                return None;
            }
            let r = seed_rep(s)?;
            cliques[r].map(|c| (r, c))
        })
        .collect();
    let two = S::from_i64(2);
    let num = S::from_rational(&Rational::from_int(p.bound.numer().clone() * g.delta())).expect("integer");
    let den = S::from_rational(&Rational::from_int(p.bound.denom().clone())).expect("integer");
    let status: Vec<CircleStatus> = (0..w)
        .into_par_iter()
        .map(|i| {
            if cliques[i].is_some() {
                return CircleStatus::Clique;
            }
            let m = &p.members[i];
            if let Some(Some((r, c))) = clusters.get(m.seed) {
                let base = p.word_matrix(*r);
                if let Some(inv) = S::invert(&base) {
                    let h = mat_mul(&p.word_matrix(i), &inv);
                    let mut quad = vec![m.vector.clone()];
                    if mat_vec(&h, &p.members[*r].vector) == m.vector {
                        quad.extend(c.iter().map(|&k| mat_vec(&h, &ext.vecs[k])));
                        let tangent = (0..4).all(|a| (a + 1..4).all(|b| g.dot(&quad[a], &quad[b]) == two));
                        if tangent {
                            return CircleStatus::Transport;
                        }
                    }
                }
            }
            let height = g.height(&m.vector);
            let scaled = height * S::from_i64(NEAR_BOUNDARY_RATIO) * den.clone();
            if (scaled - num.clone()).signum() > 0 {
                CircleStatus::NearBoundary
            } else {
                CircleStatus::Failed
            }
        })
        .collect();
    ApollonianReport {
        status,
        seed_clusters: clusters
            .into_iter()
            .map(|c| c.map(|(_, k)| k.map(|x| ext.verts[x])))
            .collect(),
    }
}

/// True iff every vector of `p` is in the orbit of the seeds of its group.
///
/// Orbit packings pass trivially; the check matters for packings assembled
/// by other means (e.g. a direct lattice search).
pub fn transitivity_check<S: OrbitScalar>(p: &Packing<S>) -> bool {
    if p.members.is_empty() {
        return true;
    }
    let g = &p.group;
    let top = p
        .members
        .iter()
        .map(|m| g.height(&m.vector).approx() / g.delta() as f64)
        .fold(0.0, f64::max);
    let bound = Rational::from_int(top.ceil() as i64 + 1);
    let Ok(orbit) = enumerate_orbit(g, &OrbitConfig::new(bound)) else {
        return false;
    };
    let reps: HashSet<&Vec4<S>> = orbit.vectors().collect();
    p.members.iter().all(|m| reps.contains(&g.fold(&m.vector).0))
}
