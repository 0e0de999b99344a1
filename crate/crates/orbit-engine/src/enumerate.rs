use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use exact_arith::Rational;
use lorentz_core::linalg::{identity, mat_mul, mat_vec, Mat4, Vec4};
use rayon::prelude::*;

use crate::group::{OrbitError, OrbitGroup};
use crate::scalar::OrbitScalar;

#[derive(Debug, Clone)]
pub struct OrbitConfig {
    /// Bound on curvature, i.e. on `v . E / delta`.
    pub bound: Rational,
    pub max_frontier: usize,
    /// Expand children with curvature in `(bound, 2 bound]` once more before pruning.
    pub grace: bool,
    /// Largest factor for bound escalation: the search is rerun at `f * bound`
    /// for `f = 1, 2, 4, ...` and cut back to `bound` until two consecutive
    /// cuts agree. `None` runs a single pass.
    pub escalate: Option<u32>,
}

impl OrbitConfig {
    pub fn new(bound: impl Into<Rational>) -> Self {
        OrbitConfig {
            bound: bound.into(),
            max_frontier: 10_000_000,
            grace: true,
            escalate: Some(64),
        }
    }

    /// One pass, no escalation.
    pub fn single_pass(bound: impl Into<Rational>) -> Self {
        OrbitConfig {
            escalate: None,
            ..OrbitConfig::new(bound)
        }
    }
}

/// One step of a provenance word, in the order applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    /// `g T^power` after an optional lower-wall reflection.
    Apply { generator: usize, pre_reflect: bool, power: i64 },
    /// `T^shift`, then the upper-wall reflection if `reflect`.
    Fold { shift: i64, reflect: bool },
    /// Upper-wall reflection moving a representative into the second half of the window.
    Mirror,
}

#[derive(Debug, Clone)]
pub struct Member<S> {
    pub vector: Vec4<S>,
    /// Word carrying `seeds[seed]` to `vector`.
    pub word: Vec<Letter>,
    pub seed: usize,
    /// Canonical strip representative (as opposed to its mirror image).
    pub representative: bool,
}

impl<S> Member<S> {
    /// Number of non-wall generators in the provenance word.
    pub fn word_length(&self) -> usize {
        self.word.iter().filter(|l| matches!(l, Letter::Apply { .. })).count()
    }
}

/// Orbit members with curvature at most `bound` whose centers lie in one
/// translation period of the strip (both closing walls included), plus lines.
#[derive(Debug, Clone)]
pub struct Packing<S> {
    pub group: Arc<OrbitGroup<S>>,
    pub members: Vec<Member<S>>,
    pub bound: Rational,
    pub complete: bool,
    pub complete_up_to: Option<Rational>,
    /// Whether member words are meaningful (false for packings built from bare vectors).
    pub has_provenance: bool,
}

struct Candidate<S> {
    vector: Vec4<S>,
    parent: usize,
    rank: usize,
    pre: bool,
    power: i64,
    shift: i64,
    reflect: bool,
    grace: bool,
    generator: usize,
}

struct Node<S> {
    vector: Vec4<S>,
    word: Vec<Letter>,
    seed: usize,
    grace: bool,
}

fn fold_letter(shift: i64, reflect: bool) -> Option<Letter> {
    (shift != 0 || reflect).then_some(Letter::Fold { shift, reflect })
}

impl<S: OrbitScalar> OrbitGroup<S> {
    /// `x <= delta * bound` for `x = v . E`.
    fn within(&self, x: &S, bound: &Rational) -> bool {
        let num = S::from_rational(&Rational::from_int(bound.numer().clone() * self.delta())).expect("integer");
        let den = S::from_rational(&Rational::from_int(bound.denom().clone())).expect("integer");
        (num - x.clone() * den).signum() >= 0
    }

    fn children(&self, v: &Vec4<S>, bound: &Rational, wide: Option<&Rational>) -> Result<Vec<(Vec4<S>, usize, bool, i64, bool)>, OrbitError> {
        let (nil, nil2) = self.nilpotent();
        let reach = wide.unwrap_or(bound);
        let mut out = Vec::new();
        let lower = mat_vec(self.wall_matrix(false), v);
        let starts: Vec<(bool, Vec4<S>)> = if lower == *v { vec![(false, v.clone())] } else { vec![(false, v.clone()), (true, lower)] };
        let (wlo, whi) = self.walls();
        for (gi, g) in self.generators().iter().enumerate() {
            if gi == wlo || gi == whi {
                continue;
            }
            let p = mat_vec(&g.inverse, self.infinity());
            for (pre, u) in &starts {
                let c0 = self.dot(u, &p);
                let c1 = self.dot(&mat_vec(nil, u), &p);
                let c2 = self.dot(&mat_vec(nil2, u), &p);
                let f = |k: i64| -> S {
                    c0.clone() + S::from_i64(k) * c1.clone() + S::from_i64(k * (k - 1) / 2) * c2.clone()
                };
                let powers: Vec<i64> = match c2.signum() {
                    0 => {
                        if !c1.is_zero() {
                            return Err(OrbitError::Unbounded(g.name.clone()));
                        }
                        if self.within(&c0, reach) { vec![0] } else { vec![] }
                    }
                    s if s < 0 => return Err(OrbitError::Unbounded(g.name.clone())),
                    _ => {
                        let est = 0.5 - c1.approx() / c2.approx();
                        let mut kv = if est.is_finite() { est.round() as i64 } else { 0 };
                        let mut fv = f(kv);
                        loop {
                            let down = f(kv - 1);
                            if (down.clone() - fv.clone()).signum() < 0 {
                                kv -= 1;
                                fv = down;
                                continue;
                            }
                            let up = f(kv + 1);
                            if (up.clone() - fv.clone()).signum() < 0 {
                                kv += 1;
                                fv = up;
                                continue;
                            }
                            break;
                        }
                        if !self.within(&fv, reach) {
                            vec![]
                        } else {
                            let (mut lo, mut hi) = (kv, kv);
                            while self.within(&f(lo - 1), reach) {
                                lo -= 1;
                            }
                            while self.within(&f(hi + 1), reach) {
                                hi += 1;
                            }
                            (lo..=hi).collect()
                        }
                    }
                };
                for k in powers {
                    let w = mat_vec(&g.matrix, &self.translate(k, u));
                    out.push((w, gi, *pre, k, self.within(&f(k), bound)));
                }
            }
        }
        Ok(out)
    }

    /// Product of a provenance word as a matrix.
    pub fn word_matrix(&self, word: &[Letter]) -> Mat4<S> {
        let mut m = identity();
        for l in word {
            let step = match *l {
                Letter::Apply { generator, pre_reflect, power } => {
                    let t = mat_mul(&self.generators()[generator].matrix, &self.translation_power(power));
                    if pre_reflect {
                        mat_mul(&t, self.wall_matrix(false))
                    } else {
                        t
                    }
                }
                Letter::Fold { shift, reflect } => {
                    let t = self.translation_power(shift);
                    if reflect {
                        mat_mul(self.wall_matrix(true), &t)
                    } else {
                        t
                    }
                }
                Letter::Mirror => self.wall_matrix(true).clone(),
            };
            m = mat_mul(&step, &m);
        }
        m
    }
}

/// Breadth-first enumeration of the orbit of the seeds up to `cfg.bound`.
///
/// Output order is canonical (by `v . E`, then coordinates) and independent
/// of generator order and thread count. Some members are only reachable
/// through words passing above the bound; see [`OrbitConfig::escalate`].
pub fn enumerate_orbit<S: OrbitScalar>(group: &Arc<OrbitGroup<S>>, cfg: &OrbitConfig) -> Result<Packing<S>, OrbitError> {
    let Some(max) = cfg.escalate else {
        return single_pass(group, cfg);
    };
    let mut prev: Option<Packing<S>> = None;
    let mut f = 1u32;
    loop {
        let wide = OrbitConfig {
            bound: cfg.bound.clone() * Rational::from_int(f as i64),
            escalate: None,
            ..cfg.clone()
        };
        let mut run = single_pass(group, &wide)?;
        run.members.retain(|m| group.within(&group.height(&m.vector), &cfg.bound));
        run.bound = cfg.bound.clone();
        if !run.complete {
            run.complete_up_to = None;
            return Ok(run);
        }
        run.complete_up_to = Some(cfg.bound.clone());
        if let Some(p) = prev {
            let same = p.members.len() == run.members.len()
                && p.members.iter().zip(&run.members).all(|(a, b)| a.vector == b.vector);
            if same {
                return Ok(p);
            }
        }
        if f >= max {
            run.complete = false;
            run.complete_up_to = None;
            return Ok(run);
        }
        prev = Some(run);
        f *= 2;
    }
}

fn single_pass<S: OrbitScalar>(group: &Arc<OrbitGroup<S>>, cfg: &OrbitConfig) -> Result<Packing<S>, OrbitError> {
    let g = group.as_ref();
    let minus_two = S::from_i64(-2);
    let wide = Rational::from_int(2) * cfg.bound.clone();
    let mut index: HashMap<Vec4<S>, usize> = HashMap::new();
    let mut nodes: Vec<Node<S>> = Vec::new();
    let mut grace_seen: HashSet<Vec4<S>> = HashSet::new();
    let mut frontier: Vec<usize> = Vec::new();
    let mut seeds: Vec<(Vec4<S>, usize, Vec<Letter>)> = Vec::new();
    for (i, s) in g.seeds().iter().enumerate() {
        let (w, shift, reflect) = g.fold(s);
        if !g.within(&g.height(&w), &cfg.bound) {
            continue;
        }
        seeds.push((w, i, fold_letter(shift, reflect).into_iter().collect()));
    }
    seeds.sort_by(|a, b| a.0.cmp(&b.0));
    for (w, i, word) in seeds {
        if index.contains_key(&w) {
            continue;
        }
        index.insert(w.clone(), nodes.len());
        frontier.push(nodes.len());
        nodes.push(Node { vector: w, word, seed: i, grace: false });
    }
    let mut complete = true;
    while !frontier.is_empty() {
        if frontier.len() > cfg.max_frontier || nodes.len() > cfg.max_frontier {
            complete = false;
            break;
        }
        let expanded: Vec<Result<Vec<Candidate<S>>, OrbitError>> = frontier
            .par_iter()
            .enumerate()
            .map(|(pos, &ni)| {
                let node = &nodes[ni];
                let wide_opt = (cfg.grace && !node.grace).then_some(&wide);
                let kids = g.children(&node.vector, &cfg.bound, wide_opt)?;
                Ok(kids
                    .into_iter()
                    .filter_map(|(w, gi, pre, power, inside)| {
                        let (f, shift, reflect) = g.fold(&w);
                        (inside || (cfg.grace && !node.grace)).then(|| Candidate {
                            vector: f,
                            parent: pos,
                            rank: g.name_rank(gi),
                            pre,
                            power,
                            shift,
                            reflect,
                            grace: !inside,
                            generator: gi,
                        })
                    })
                    .collect())
            })
            .collect();
        let mut cands = Vec::new();
        for e in expanded {
            cands.extend(e?);
        }
        cands.par_sort_by(|a, b| {
            a.vector
                .cmp(&b.vector)
                .then(a.parent.cmp(&b.parent))
                .then(a.rank.cmp(&b.rank))
                .then(a.pre.cmp(&b.pre))
                .then(a.power.cmp(&b.power))
        });
        cands.dedup_by(|b, a| a.vector == b.vector);
        let mut next = Vec::new();
        for c in cands {
            if index.contains_key(&c.vector) {
                continue;
            }
            if c.grace {
                if !grace_seen.insert(c.vector.clone()) {
                    continue;
                }
            } else if g.dot(&c.vector, &c.vector) != minus_two {
                return Err(OrbitError::NormDrift(format!("{:?}", c.vector), g.dot(&c.vector, &c.vector).to_string()));
            }
            let parent = &nodes[frontier[c.parent]];
            let mut word = parent.word.clone();
            word.push(Letter::Apply {
                generator: c.generator,
                pre_reflect: c.pre,
                power: c.power,
            });
            word.extend(fold_letter(c.shift, c.reflect));
            let seed = parent.seed;
            if !c.grace {
                index.insert(c.vector.clone(), nodes.len());
            }
            next.push(nodes.len());
            nodes.push(Node {
                vector: c.vector,
                word,
                seed,
                grace: c.grace,
            });
        }
        frontier = next;
    }
    let mut members: Vec<Member<S>> = Vec::new();
    let mut present: HashSet<Vec4<S>> = HashSet::new();
    for node in nodes.into_iter().filter(|n| !n.grace) {
        present.insert(node.vector.clone());
        members.push(Member {
            vector: node.vector,
            word: node.word,
            seed: node.seed,
            representative: true,
        });
    }
    let upper = g.wall_matrix(true);
    let mut mirrors = Vec::new();
    for m in &members {
        if g.height(&m.vector).is_zero() {
            continue;
        }
        let w = mat_vec(upper, &m.vector);
        if !present.contains(&w) {
            let mut word = m.word.clone();
            word.push(Letter::Mirror);
            mirrors.push(Member {
                vector: w,
                word,
                seed: m.seed,
                representative: false,
            });
        }
    }
    for m in mirrors {
        if present.insert(m.vector.clone()) {
            members.push(m);
        }
    }
    sort_members(g, &mut members);
    Ok(Packing {
        group: group.clone(),
        members,
        bound: cfg.bound.clone(),
        complete,
        complete_up_to: complete.then(|| cfg.bound.clone()),
        has_provenance: true,
    })
}

fn sort_members<S: OrbitScalar>(g: &OrbitGroup<S>, members: &mut [Member<S>]) {
    let mut keyed: Vec<(S, usize)> = members.iter().enumerate().map(|(i, m)| (g.height(&m.vector), i)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| members[a.1].vector.cmp(&members[b.1].vector)));
    let order: Vec<usize> = keyed.into_iter().map(|(_, i)| i).collect();
    let sorted: Vec<Member<S>> = order.iter().map(|&i| members[i].clone()).collect();
    members.clone_from_slice(&sorted);
}

impl<S: OrbitScalar> Packing<S> {
    /// Packing from explicit vectors (no provenance); duplicates are rejected.
    pub fn from_vectors(group: &Arc<OrbitGroup<S>>, vectors: Vec<Vec4<S>>, bound: Rational) -> Result<Self, OrbitError> {
        let mut seen = HashSet::new();
        let mut members = Vec::new();
        for v in vectors {
            if !seen.insert(v.clone()) {
                return Err(OrbitError::Duplicate(format!("{v:?}")));
            }
            let representative = group.fold(&v).0 == v;
            members.push(Member {
                vector: v,
                word: Vec::new(),
                seed: 0,
                representative,
            });
        }
        sort_members(group, &mut members);
        Ok(Packing {
            group: group.clone(),
            members,
            bound,
            complete: true,
            complete_up_to: None,
            has_provenance: false,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vec4<S>> {
        self.members.iter().map(|m| &m.vector)
    }

    pub fn representatives(&self) -> impl Iterator<Item = &Member<S>> {
        self.members.iter().filter(|m| m.representative)
    }

    pub fn contains(&self, v: &Vec4<S>) -> bool {
        self.members.iter().any(|m| &m.vector == v)
    }

    /// `T^k` image of every member, for neighbourhood checks across the window edge.
    pub fn translated(&self, k: i64) -> Vec<Vec4<S>> {
        self.members.iter().map(|m| self.group.translate(k, &m.vector)).collect()
    }

    /// Matrix of a member's provenance word (maps its seed to it).
    pub fn word_matrix(&self, member: usize) -> Mat4<S> {
        self.group.word_matrix(&self.members[member].word)
    }
}
