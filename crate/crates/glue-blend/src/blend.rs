use std::fmt;
use std::sync::Arc;

use exact_arith::{Rational, Scalar};
use isometry_catalog::{GeneratorPreset, IsometryKind};
use lorentz_core::linalg::{identity, kernel, mat_mul, mat_scale, mat_sub, mat_vec, map_mat, map_vec, outer_j, Mat4, Vec4};
use orbit_engine::{enumerate_orbit, GroupSpec, OrbitConfig, OrbitGroup};
use serde::{Deserialize, Serialize};

use crate::embed::{sqrt_std, standard_gram, standard_infinity, std_dot, vertical_line, Embedding, Std};
use crate::BlendError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Face {
    V1,
    V2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SliceMode {
    Fill,
    Reflect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    /// Introduced by a shift or a slice.
    Added,
}

#[derive(Debug, Clone)]
pub struct BlendGenerator {
    pub name: String,
    pub matrix: Mat4<Std>,
    /// Mirror vector for reflections.
    pub mirror: Option<Vec4<Std>>,
    /// Endpoints of the axis of a rotation by pi.
    pub axis: Option<(Vec4<Std>, Vec4<Std>)>,
    pub side: Side,
    /// Which preset (or operation) the generator came from.
    pub origin: String,
}

/// One modification applied to the base preset(s).
#[derive(Debug, Clone)]
pub enum Join {
    /// Two strips share the wall `wall`; its reflection was dropped on both sides.
    Glued { face: Face, wall: Vec4<Std> },
    /// `R_v1` (mirror `removed`) was replaced by the reflection in `wall`.
    Shifted { offset: Rational, removed: Vec4<Std>, wall: Vec4<Std> },
    /// `dropped` lists rotations whose axis lies in the face.
    Sliced { mode: SliceMode, face: Vec4<Std>, dropped: Vec<String> },
}

/// A packing group given by generators in the standard frame.
#[derive(Debug, Clone)]
pub struct BlendedGroup {
    pub label: String,
    pub generators: Vec<BlendGenerator>,
    /// Indices of the two parallel wall reflections.
    pub walls: (usize, usize),
    pub seeds: Vec<Vec4<Std>>,
    pub joins: Vec<Join>,
    /// The presets used, with the side they sit on.
    pub sources: Vec<(Side, Rational)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceRejection {
    pub reason: String,
    /// An orbit member crossing the face, with its product against the face.
    pub witness: Option<(String, f64)>,
}

impl fmt::Display for SliceRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.reason)?;
        if let Some((v, p)) = &self.witness {
            write!(f, " (member {v}, product {p})")?;
        }
        Ok(())
    }
}

fn lift_quad(m: &Mat4<exact_arith::QuadElem>) -> Mat4<Std> {
    map_mat(m, Std::from_quad)
}

/// Reflection in the hyperplane orthogonal to `mirror` under `gram`.
pub fn reflection_in(gram: &Mat4<Std>, mirror: &Vec4<Std>) -> Result<Mat4<Std>, BlendError> {
    let mm = lorentz_core::linalg::bilinear(gram, mirror, mirror);
    if mm.signum() >= 0 {
        return Err(BlendError::BadParameter(format!("mirror has norm {mm}, expected negative")));
    }
    let c = Std::from_i64(2) / mm;
    Ok(mat_sub(&identity(), &mat_scale(&c, &outer_j(mirror, gram, mirror))))
}

/// `v1 + offset sqrt(n) E` in lattice coordinates: the line `x = -offset`.
pub fn shifted_mirror(preset: &GeneratorPreset, offset: &Rational) -> Result<Vec4<Std>, BlendError> {
    let frame = preset.frame();
    let r = sqrt_std(&preset.n)? * Std::from_rational(offset).expect("rational");
    let v1 = map_vec(&frame.v1.coords, |x| Std::from_rational(x).expect("rational"));
    let e = map_vec(&frame.big_e.coords, |x| Std::from_rational(x).expect("rational"));
    Ok(std::array::from_fn(|i| v1[i].clone() + r.clone() * e[i].clone()))
}

fn parallel(u: &Vec4<Std>, v: &Vec4<Std>) -> bool {
    (0..4).all(|i| (0..4).all(|k| u[i].clone() * v[k].clone() == u[k].clone() * v[i].clone()))
}

impl BlendedGroup {
    /// The preset's own group carried into the standard frame, seeded with `e1`.
    pub fn from_preset(preset: &GeneratorPreset) -> Result<Self, BlendError> {
        let emb = Embedding::new(&preset.n)?;
        let origin = format!("n={}", preset.n);
        let generators = preset
            .generators
            .iter()
            .map(|g| {
                let mirror = match &g.iso.kind {
                    IsometryKind::Reflection { mirror } => Some(emb.vector(&map_vec(mirror, Std::from_quad))),
                    _ => None,
                };
                let axis = match &g.iso.kind {
                    IsometryKind::Rotation { a, b } => {
                        Some((emb.vector(&map_vec(a, Std::from_quad)), emb.vector(&map_vec(b, Std::from_quad))))
                    }
                    _ => None,
                };
                BlendGenerator {
                    name: g.name.clone(),
                    matrix: emb.matrix(&lift_quad(&g.iso.matrix)),
                    mirror,
                    axis,
                    side: Side::Left,
                    origin: origin.clone(),
                }
            })
            .collect();
        let walls = preset
            .wall_indices()
            .ok_or_else(|| BlendError::MissingGenerator(preset.n.to_string(), "R_v1/R_v2".into()))?;
        let seed = emb.vector(&map_vec(&preset.seed.coords, |x| Std::from_rational(x).expect("rational")));
        Ok(BlendedGroup {
            label: origin,
            generators,
            walls,
            seeds: vec![seed],
            joins: Vec::new(),
            sources: vec![(Side::Left, preset.n.clone())],
        })
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn wall_mirrors(&self) -> (Vec4<Std>, Vec4<Std>) {
        let m = |i: usize| self.generators[i].mirror.clone().expect("walls are reflections");
        (m(self.walls.0), m(self.walls.1))
    }

    /// Conjugates every generator, mirror and seed by the involution or change of frame `c`.
    fn conjugate(&mut self, c: &Mat4<Std>, c_inv: &Mat4<Std>) {
        for g in &mut self.generators {
            g.matrix = mat_mul(c, &mat_mul(&g.matrix, c_inv));
            g.mirror = g.mirror.as_ref().map(|m| mat_vec(c, m));
            g.axis = g.axis.as_ref().map(|(a, b)| (mat_vec(c, a), mat_vec(c, b)));
        }
        self.seeds = self.seeds.iter().map(|s| mat_vec(c, s)).collect();
    }

    fn relabel(&mut self, side: Side, prefix: &str) {
        for g in &mut self.generators {
            g.side = side;
            g.name = format!("{prefix}{}", g.name);
        }
        for s in &mut self.sources {
            s.0 = side;
        }
    }

    /// Drops the named generators; the walls must not be among them.
    fn remove(&mut self, names: &[String]) {
        let wall_names = (self.generators[self.walls.0].name.clone(), self.generators[self.walls.1].name.clone());
        self.generators.retain(|g| !names.contains(&g.name));
        self.walls = (
            self.index_of(&wall_names.0).expect("walls are kept"),
            self.index_of(&wall_names.1).expect("walls are kept"),
        );
    }

    /// Orbit group over the standard frame.
    pub fn to_group(&self) -> Result<Arc<OrbitGroup<Std>>, BlendError> {
        // both walls are vertical lines; scale them to the form (2x, 0, 1, 0)
        let unit = |m: Vec4<Std>| -> Vec4<Std> {
            if m[2].is_zero() {
                return m;
            }
            let c = m[2].clone();
            m.map(|x| x / c.clone())
        };
        let (lo, hi) = self.wall_mirrors();
        let (lo, hi) = (unit(lo), unit(hi));
        let chart = std::array::from_fn(|i| std::array::from_fn(|k| if i == k { 1.0 } else { 0.0 }));
        let spec = GroupSpec {
            label: self.label.clone(),
            gram: standard_gram(),
            infinity: standard_infinity(),
            delta: 4,
            generators: self.generators.iter().map(|g| (g.name.clone(), g.matrix.clone())).collect(),
            walls: self.walls,
            mirrors: (lo, hi),
            seeds: self.seeds.clone(),
            chart,
            integral: false,
        };
        Ok(Arc::new(OrbitGroup::new(spec)?))
    }
}

/// Replaces `R_v1` by the reflection in the line `x = -offset`.
pub fn shift_wall(preset: &GeneratorPreset, offset: &Rational) -> Result<BlendedGroup, BlendError> {
    if offset.is_zero() {
        return Err(BlendError::BadParameter("offset 0 reproduces R_v1".into()));
    }
    let mut g = BlendedGroup::from_preset(preset)?;
    let emb = Embedding::new(&preset.n)?;
    let lattice_mirror = shifted_mirror(preset, offset)?;
    let lattice_gram: Mat4<Std> = preset.form.matrix();
    let lattice_matrix = reflection_in(&lattice_gram, &lattice_mirror)?;
    let matrix = emb.matrix(&lattice_matrix);
    let wall = vertical_line(&-Std::from_rational(offset).expect("rational"));
    if !parallel(&emb.vector(&lattice_mirror), &wall) || matrix != reflection_in(&standard_gram(), &wall)? {
        return Err(BlendError::Arith("shifted mirror does not land on x = -offset".into()));
    }
    let i = g.walls.0;
    let removed = g.generators[i].mirror.clone().expect("R_v1 is a reflection");
    g.generators[i] = BlendGenerator {
        name: "R_v1'".into(),
        matrix,
        mirror: Some(wall.clone()),
        axis: None,
        side: Side::Added,
        origin: format!("shift {offset}"),
    };
    g.label = format!("n={} shifted by {offset}", preset.n);
    g.joins.push(Join::Shifted {
        offset: offset.clone(),
        removed,
        wall,
    });
    Ok(g)
}

fn flip_x() -> Mat4<Std> {
    let mut f = identity::<Std>();
    f[2][2] = Std::from_i64(-1);
    f
}

/// The anti-holomorphic map `z -> s - conj(z)` in inversive coordinates.
fn mirror_at(s: &Std) -> Mat4<Std> {
    let i = Std::from_i64;
    [
        [i(1), s.clone() * s.clone(), i(-2) * s.clone(), i(0)],
        [i(0), i(1), i(0), i(0)],
        [i(0), s.clone(), i(-1), i(0)],
        [i(0), i(0), i(0), i(1)],
    ]
}

/// Glues the strips of two presets along a common wall.
///
/// For `V1` the left strip is flipped to `[-sqrt n_l, 0]` and both `R_v1`
/// are dropped. For `V2` the right strip is mirrored onto
/// `[sqrt n_l, sqrt n_l + sqrt n_r]` and both `R_v2` are dropped.
pub fn glue(left: &GeneratorPreset, right: &GeneratorPreset, face: Face) -> Result<BlendedGroup, BlendError> {
    let mut l = BlendedGroup::from_preset(left)?;
    let mut r = BlendedGroup::from_preset(right)?;
    let root_l = sqrt_std(&left.n)?;
    let root_r = sqrt_std(&right.n)?;
    let (drop, keep, shared) = match face {
        Face::V1 => {
            let f = flip_x();
            l.conjugate(&f, &f);
            (0, 1, vertical_line(&Std::zero()))
        }
        Face::V2 => {
            let a = mirror_at(&(root_l.clone() + root_r));
            r.conjugate(&a, &a);
            (1, 0, vertical_line(&root_l))
        }
    };
    l.relabel(Side::Left, "L.");
    r.relabel(Side::Right, "R.");
    let pick = |g: &BlendedGroup, w: usize| if w == 0 { g.walls.0 } else { g.walls.1 };
    let (l_drop, r_drop) = (pick(&l, drop), pick(&r, drop));
    let (l_keep, r_keep) = (pick(&l, keep), pick(&r, keep));
    let mut generators = Vec::new();
    let mut walls = (usize::MAX, usize::MAX);
    for (i, g) in l.generators.into_iter().enumerate() {
        if i == l_drop {
            continue;
        }
        if i == l_keep {
            walls.0 = generators.len();
        }
        generators.push(g);
    }
    for (i, g) in r.generators.into_iter().enumerate() {
        if i == r_drop {
            continue;
        }
        if i == r_keep {
            walls.1 = generators.len();
        }
        generators.push(g);
    }
    // e1 is the line y = 0, common to both strips under either gluing
    let seed = l.seeds[0].clone();
    debug_assert_eq!(seed, r.seeds[0]);
    let tag = match face {
        Face::V1 => "v1",
        Face::V2 => "v2",
    };
    Ok(BlendedGroup {
        label: format!("glue n={} | n={} on {tag}", left.n, right.n),
        generators,
        walls,
        seeds: vec![seed],
        joins: vec![Join::Glued { face, wall: shared }],
        sources: vec![(Side::Left, left.n.clone()), (Side::Right, right.n.clone())],
    })
}

/// The plane through the two endpoints of a rotation generator, orthogonal
/// to the mirror `h` of `R_h`, in standard coordinates (norm -2, positive curvature).
pub fn ghost_face(preset: &GeneratorPreset, rotation: &str) -> Result<Vec4<Std>, BlendError> {
    let g = preset
        .get(rotation)
        .ok_or_else(|| BlendError::MissingGenerator(preset.n.to_string(), rotation.into()))?;
    let IsometryKind::Rotation { a, b } = &g.iso.kind else {
        return Err(BlendError::BadParameter(format!("{rotation} is not a rotation")));
    };
    let frame = preset.frame();
    let gram: Mat4<Rational> = preset.form.matrix();
    let rational = |v: &Vec4<exact_arith::QuadElem>| -> Result<Vec4<Rational>, BlendError> {
        let out: Vec<Rational> = v.iter().filter_map(|x| x.as_rational().cloned()).collect();
        (out.len() == 4)
            .then(|| [out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()])
            .ok_or_else(|| BlendError::BadParameter("rotation endpoints are not rational".into()))
    };
    let rows = [rational(a)?, rational(b)?, frame.h.coords.clone()];
    let mut system: Mat4<Rational> = std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero()));
    for (k, row) in rows.iter().enumerate() {
        system[k] = mat_vec(&gram, row);
    }
    let basis = kernel(&system);
    if basis.len() != 1 {
        return Err(BlendError::BadParameter(format!("{} planes through the endpoints", basis.len())));
    }
    let emb = Embedding::new(&preset.n)?;
    let face = emb.vector(&map_vec(&basis[0], |x| Std::from_rational(x).expect("rational")));
    normalize_face(&face)
}

/// Scales a spacelike vector to norm -2 and orients it to positive curvature
/// (lines: first nonzero coordinate positive).
pub fn normalize_face(face: &Vec4<Std>) -> Result<Vec4<Std>, BlendError> {
    let k = std_dot(face, face);
    if k.signum() >= 0 {
        return Err(BlendError::BadParameter(format!("face has norm {k}, not a circle or line")));
    }
    let k = k
        .as_rational()
        .ok_or_else(|| BlendError::BadParameter("face norm is irrational".into()))?;
    let c = sqrt_std(&(Rational::from_int(-2) / k))?;
    let mut out = Vec::with_capacity(4);
    for x in face {
        out.push(c.checked_mul(x).map_err(|e| BlendError::Arith(e.to_string()))?);
    }
    let mut v: Vec4<Std> = [out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()];
    let height = std_dot(&v, &standard_infinity());
    let sign = if height.is_zero() {
        v.iter().find(|x| !x.is_zero()).map(|x| x.signum()).unwrap_or(1)
    } else {
        height.signum()
    };
    if sign < 0 {
        v = v.map(|x| -x);
    }
    Ok(v)
}

/// Adds a ghost face to a group: as a new seed circle (`Fill`) or as a new
/// mirror (`Reflect`).
///
/// The orbit of the current group is enumerated to `bound` and the face is
/// rejected when it crosses a member: product in `(-2, 2)` for a mirror, or
/// below 2 for a filled circle, which must also be disjoint.
pub fn slice(group: &BlendedGroup, face: &Vec4<Std>, mode: SliceMode, bound: &Rational) -> Result<BlendedGroup, BlendError> {
    let face = normalize_face(face)?;
    let reject = |reason: String, witness: Option<(String, f64)>| BlendError::Rejected(SliceRejection { reason, witness });
    for g in &group.generators {
        if let Some(m) = &g.mirror {
            if parallel(m, &face) {
                return Err(reject(format!("face is the mirror of {}", g.name), None));
            }
        }
    }
    // a rotation whose axis lies in the face swaps the two halves of the
    // domain; slicing off one half discards it
    let mut group = group.clone();
    let dropped: Vec<String> = group
        .generators
        .iter()
        .filter(|g| g.axis.as_ref().is_some_and(|(a, b)| std_dot(a, &face).is_zero() && std_dot(b, &face).is_zero()))
        .map(|g| g.name.clone())
        .collect();
    group.remove(&dropped);
    let orbit_group = group.to_group()?;
    let mut cfg = OrbitConfig::new(bound.clone());
    cfg.escalate = Some(4);
    let packing = enumerate_orbit(&orbit_group, &cfg)?;
    let mut members: Vec<Vec4<Std>> = Vec::new();
    for k in -1..=1 {
        members.extend(packing.translated(k));
    }
    if members.iter().any(|m| parallel(m, &face)) {
        return Err(reject("face is already a circle of the packing".into(), None));
    }
    let two = Std::from_i64(2);
    let products: Vec<Std> = members.iter().map(|m| std_dot(m, &face)).collect();
    let crossing = |lo: Option<&Std>| {
        products.iter().position(|p| {
            let below = (p.clone() - two.clone()).signum() < 0;
            below && lo.map_or(true, |lo| (p.clone() - lo.clone()).signum() > 0)
        })
    };
    let mut face = face;
    let hit = match mode {
        SliceMode::Reflect => crossing(Some(&-two.clone())),
        SliceMode::Fill => {
            // a filled line may need the other orientation
            let first = crossing(None);
            if first.is_some() && std_dot(&face, &standard_infinity()).is_zero() && products.iter().all(|p| (p.clone() + two.clone()).signum() <= 0) {
                face = face.map(|x| -x);
                None
            } else {
                first
            }
        }
    };
    if let Some(i) = hit {
        let v = &members[i];
        let text = format!("[{},{},{},{}]", v[0], v[1], v[2], v[3]);
        return Err(reject("face crosses a circle of the packing".into(), Some((text, products[i].to_f64()))));
    }
    let mut out = group;
    match mode {
        SliceMode::Fill => out.seeds.push(face.clone()),
        SliceMode::Reflect => {
            let matrix = reflection_in(&standard_gram(), &face)?;
            out.generators.push(BlendGenerator {
                name: "R_ghost".into(),
                matrix,
                mirror: Some(face.clone()),
                axis: None,
                side: Side::Added,
                origin: "slice".into(),
            });
        }
    }
    let tag = match mode {
        SliceMode::Fill => "filled",
        SliceMode::Reflect => "reflected",
    };
    out.label = format!("{} {tag}", out.label);
    out.joins.push(Join::Sliced { mode, face, dropped });
    Ok(out)
}

/// `slice` applied to a preset's own group.
pub fn slice_ghost(preset: &GeneratorPreset, face: &Vec4<Std>, mode: SliceMode, bound: &Rational) -> Result<BlendedGroup, BlendError> {
    slice(&BlendedGroup::from_preset(preset)?, face, mode, bound)
}
