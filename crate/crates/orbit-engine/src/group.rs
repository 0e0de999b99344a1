use exact_arith::{BigInt, Rational, Scalar};
use isometry_catalog::GeneratorPreset;
use lorentz_core::linalg::{bilinear, identity, mat_add, mat_mul, mat_scale, mat_sub, mat_vec, neg, transpose, Mat4, Vec4};
use thiserror::Error;

use crate::scalar::OrbitScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("generator {0} does not preserve the form")]
    NotIsometry(String),
    #[error("generator {0} has no inverse over the working ring")]
    NotInvertible(String),
    #[error("wall setup: {0}")]
    Walls(String),
    #[error("seed {0} is not a norm -2 vector")]
    BadSeed(usize),
    #[error("generator {0} fixes the point at infinity but does not normalize the wall translation")]
    Unsupported(String),
    #[error("curvature is unbounded below along a translation orbit (generator {0})")]
    Unbounded(String),
    #[error("enumerated vector {0} has norm {1}, expected -2")]
    NormDrift(String, String),
    #[error("the group has no generators outside the walls")]
    Empty,
    #[error("duplicate vector {0}")]
    Duplicate(String),
    #[error("preset for n = {0} has no strip walls")]
    NoWalls(String),
}

#[derive(Debug, Clone)]
pub struct GroupGenerator<S> {
    pub name: String,
    pub matrix: Mat4<S>,
    pub inverse: Mat4<S>,
}

/// A discrete group acting on a Lorentz space, with two parallel wall
/// reflections through the point at infinity.
///
/// The walls generate the translation `T`; the strip between them is the
/// window in which orbit representatives are kept.
#[derive(Debug, Clone)]
pub struct OrbitGroup<S> {
    pub label: String,
    j: Mat4<S>,
    infinity: Vec4<S>,
    delta: i64,
    generators: Vec<GroupGenerator<S>>,
    walls: (usize, usize),
    mirrors: (Vec4<S>, Vec4<S>),
    seeds: Vec<Vec4<S>>,
    chart: [[f64; 4]; 4],
    integral: bool,
    // unipotent translation data: T = I + N, oriented so the strip coordinate grows
    nil: Mat4<S>,
    nil2: Mat4<S>,
    period_num: S,
    period_den: S,
    name_rank: Vec<usize>,
}

pub struct GroupSpec<S> {
    pub label: String,
    pub gram: Mat4<S>,
    /// Null vector playing the point at infinity; `v . infinity = delta * curvature`.
    pub infinity: Vec4<S>,
    pub delta: i64,
    pub generators: Vec<(String, Mat4<S>)>,
    pub walls: (usize, usize),
    pub mirrors: (Vec4<S>, Vec4<S>),
    pub seeds: Vec<Vec4<S>>,
    /// Float map to inversive coordinates `(co-curvature, curvature, curvature*x, curvature*y)`.
    pub chart: [[f64; 4]; 4],
    /// Whether pair products must be even integers.
    pub integral: bool,
}

fn binom2(k: i64) -> i64 {
    k * (k - 1) / 2
}

fn parallel<S: Scalar>(u: &Vec4<S>, v: &Vec4<S>) -> bool {
    (0..4).all(|i| (0..4).all(|k| u[i].clone() * v[k].clone() == u[k].clone() * v[i].clone()))
}

impl<S: OrbitScalar> OrbitGroup<S> {
    pub fn new(spec: GroupSpec<S>) -> Result<Self, OrbitError> {
        let GroupSpec {
            label,
            gram: j,
            infinity,
            delta,
            generators,
            walls,
            mirrors,
            seeds,
            chart,
            integral,
        } = spec;
        // generators repeating an earlier matrix are merged (keeping the smaller name)
        let mut gens = Vec::new();
        let mut remap = vec![usize::MAX; generators.len()];
        for (i, (name, m)) in generators.into_iter().enumerate() {
            if mat_mul(&transpose(&m), &mat_mul(&j, &m)) != j {
                return Err(OrbitError::NotIsometry(name));
            }
            if let Some(p) = gens.iter().position(|g: &GroupGenerator<S>| g.matrix == m) {
                if gens[p].name > name {
                    gens[p].name = name;
                }
                remap[i] = p;
                continue;
            }
            let inverse = S::invert(&m).ok_or_else(|| OrbitError::NotInvertible(name.clone()))?;
            remap[i] = gens.len();
            gens.push(GroupGenerator { name, matrix: m, inverse });
        }
        let walls = (
            *remap.get(walls.0).ok_or_else(|| OrbitError::Walls("bad lower wall index".into()))?,
            *remap.get(walls.1).ok_or_else(|| OrbitError::Walls("bad upper wall index".into()))?,
        );
        if walls.0 == walls.1 {
            return Err(OrbitError::Walls("walls coincide".into()));
        }
        let dot = |u: &Vec4<S>, v: &Vec4<S>| bilinear(&j, u, v);
        let (mut lo, mut hi) = mirrors;
        for (w, m) in [(walls.0, &lo), (walls.1, &hi)] {
            let r = &gens[w].matrix;
            if mat_vec(r, m) != neg(m) || mat_mul(r, r) != identity() {
                return Err(OrbitError::Walls(format!("{} is not the reflection in its mirror", gens[w].name)));
            }
            if !dot(m, &infinity).is_zero() {
                return Err(OrbitError::Walls(format!("mirror of {} misses the point at infinity", gens[w].name)));
            }
        }
        if dot(&lo, &hi).signum() < 0 {
            lo = neg(&lo);
        }
        let sum: Vec4<S> = std::array::from_fn(|i| lo[i].clone() + hi[i].clone());
        if sum.iter().all(|x| x.is_zero()) || !parallel(&sum, &infinity) {
            return Err(OrbitError::Walls("walls are not parallel lines".into()));
        }
        let pivot = (0..4).find(|&i| !infinity[i].is_zero()).expect("nonzero infinity");
        if sum[pivot].signum() * infinity[pivot].signum() < 0 {
            lo = neg(&lo);
            hi = neg(&hi);
        }
        let r_lo = &gens[walls.0].matrix;
        let r_hi = &gens[walls.1].matrix;
        let mut t = mat_mul(r_hi, r_lo);
        let probe = {
            let je = mat_vec(&j, &infinity);
            let i = (0..4).find(|&i| !je[i].is_zero()).expect("form is nondegenerate");
            let mut x: Vec4<S> = std::array::from_fn(|k| if k == i { S::one() } else { S::zero() });
            if dot(&x, &infinity).signum() < 0 {
                x = neg(&x);
            }
            x
        };
        let mut nil = mat_sub(&t, &identity());
        let mut period_num = dot(&mat_vec(&nil, &probe), &lo);
        if period_num.signum() < 0 {
            t = mat_mul(r_lo, r_hi);
            nil = mat_sub(&t, &identity());
            period_num = dot(&mat_vec(&nil, &probe), &lo);
        }
        if period_num.is_zero() {
            return Err(OrbitError::Walls("wall translation is trivial".into()));
        }
        let period_den = dot(&probe, &infinity);
        let nil2 = mat_mul(&nil, &nil);
        if mat_mul(&nil2, &nil).iter().flatten().any(|x| !x.is_zero()) {
            return Err(OrbitError::Walls("wall product is not parabolic".into()));
        }
        for i in 0..4 {
            let b: Vec4<S> = std::array::from_fn(|k| if k == i { S::one() } else { S::zero() });
            if dot(&mat_vec(&nil, &b), &lo) * period_den.clone() != period_num.clone() * dot(&b, &infinity) {
                return Err(OrbitError::Walls("translation is not uniform across the strip".into()));
            }
        }
        let minus_two = S::from_i64(-2);
        for (i, s) in seeds.iter().enumerate() {
            if dot(s, s) != minus_two {
                return Err(OrbitError::BadSeed(i));
            }
        }
        if gens.len() <= 2 {
            return Err(OrbitError::Empty);
        }
        let mut names: Vec<(String, usize)> = gens.iter().enumerate().map(|(i, g)| (g.name.clone(), i)).collect();
        names.sort();
        let mut name_rank = vec![0; gens.len()];
        for (r, (_, i)) in names.iter().enumerate() {
            name_rank[*i] = r;
        }
        let t_inv = mat_sub(&mat_add(&identity(), &mat_scale(&S::from_i64(binom2(-1)), &nil2)), &nil);
        for (i, g) in gens.iter().enumerate() {
            let p = mat_vec(&g.inverse, &infinity);
            let fixed = parallel(&p, &infinity);
            if fixed && i != walls.0 && i != walls.1 {
                let conj = mat_mul(&g.matrix, &mat_mul(&t, &g.inverse));
                if conj != t && conj != t_inv {
                    return Err(OrbitError::Unsupported(g.name.clone()));
                }
            }
        }
        Ok(OrbitGroup {
            label,
            j,
            infinity,
            delta,
            generators: gens,
            walls,
            mirrors: (lo, hi),
            seeds,
            chart,
            integral,
            nil,
            nil2,
            period_num,
            period_den,
            name_rank,
        })
    }

    pub fn gram(&self) -> &Mat4<S> {
        &self.j
    }

    pub fn infinity(&self) -> &Vec4<S> {
        &self.infinity
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn generators(&self) -> &[GroupGenerator<S>] {
        &self.generators
    }

    pub fn walls(&self) -> (usize, usize) {
        self.walls
    }

    /// Wall normals oriented so the strip is where both products are nonnegative.
    pub fn mirrors(&self) -> &(Vec4<S>, Vec4<S>) {
        &self.mirrors
    }

    pub fn seeds(&self) -> &[Vec4<S>] {
        &self.seeds
    }

    pub fn chart(&self) -> &[[f64; 4]; 4] {
        &self.chart
    }

    pub fn integral(&self) -> bool {
        self.integral
    }

    pub(crate) fn name_rank(&self, g: usize) -> usize {
        self.name_rank[g]
    }

    pub fn dot(&self, u: &Vec4<S>, v: &Vec4<S>) -> S {
        bilinear(&self.j, u, v)
    }

    /// `v . E`, i.e. `delta` times the curvature.
    pub fn height(&self, v: &Vec4<S>) -> S {
        self.dot(v, &self.infinity)
    }

    pub fn nilpotent(&self) -> (&Mat4<S>, &Mat4<S>) {
        (&self.nil, &self.nil2)
    }

    /// `T^k = I + kN + C(k,2) N^2`.
    pub fn translation_power(&self, k: i64) -> Mat4<S> {
        mat_add(
            &mat_add(&identity(), &mat_scale(&S::from_i64(k), &self.nil)),
            &mat_scale(&S::from_i64(binom2(k)), &self.nil2),
        )
    }

    pub fn translate(&self, k: i64, v: &Vec4<S>) -> Vec4<S> {
        if k == 0 {
            return v.clone();
        }
        let n1 = mat_vec(&self.nil, v);
        let n2 = mat_vec(&self.nil2, v);
        let (a, b) = (S::from_i64(k), S::from_i64(binom2(k)));
        std::array::from_fn(|i| v[i].clone() + a.clone() * n1[i].clone() + b.clone() * n2[i].clone())
    }

    pub fn wall_matrix(&self, upper: bool) -> &Mat4<S> {
        &self.generators[if upper { self.walls.1 } else { self.walls.0 }].matrix
    }

    /// Translation period as `num / den` in units of `(v . m_lo)/(v . E)`.
    pub fn period(&self) -> (&S, &S) {
        (&self.period_num, &self.period_den)
    }

    /// Canonical representative of `v` under the wall group, with the
    /// translation power and upper-wall reflection that were applied.
    pub fn fold(&self, v: &Vec4<S>) -> (Vec4<S>, i64, bool) {
        let den = self.height(v);
        if den.is_zero() {
            return (v.clone(), 0, false);
        }
        let sd = den.signum();
        let s = self.dot(v, &self.mirrors.0).approx() / den.approx();
        let tau = self.period_num.approx() / self.period_den.approx();
        let j = (s / tau).floor();
        let mut shift = if j.is_finite() { -(j as i64) } else { 0 };
        let mut w = self.translate(shift, v);
        loop {
            let num = self.dot(&w, &self.mirrors.0);
            if num.signum() * sd < 0 {
                w = self.translate(1, &w);
                shift += 1;
                continue;
            }
            let over = num * self.period_den.clone() - self.period_num.clone() * self.height(&w);
            if over.signum() * sd >= 0 {
                w = self.translate(-1, &w);
                shift -= 1;
                continue;
            }
            break;
        }
        let reflect = self.dot(&w, &self.mirrors.1).signum() * sd < 0;
        if reflect {
            w = mat_vec(self.wall_matrix(true), &w);
        }
        (w, shift, reflect)
    }

    /// Inversive coordinates of `v` in floating point.
    pub fn chart_of(&self, v: &Vec4<S>) -> [f64; 4] {
        let f: [f64; 4] = std::array::from_fn(|i| v[i].approx());
        std::array::from_fn(|i| (0..4).map(|k| self.chart[i][k] * f[k]).sum())
    }
}

/// Float chart of `Lambda_n` into inversive coordinates.
pub fn lattice_chart(n: f64) -> [[f64; 4]; 4] {
    [
        [0.0, 4.0, 0.0, 4.0 * n],
        [0.0, 0.0, 1.0, 1.0],
        [0.0, 0.0, 0.0, 2.0 * n.sqrt()],
        [-1.0, 1.0, 1.0, 1.0],
    ]
}

impl OrbitGroup<BigInt> {
    /// The packing group of a catalog preset, seeded with `e1`.
    pub fn from_preset(preset: &GeneratorPreset) -> Result<Self, OrbitError> {
        let (lo, hi) = preset.wall_indices().ok_or_else(|| OrbitError::NoWalls(preset.n.to_string()))?;
        let frame = preset.frame();
        let big = |v: &Vec4<Rational>| -> Vec4<BigInt> {
            std::array::from_fn(|i| v[i].to_integer().expect("frame vectors are integral"))
        };
        let gram: Mat4<BigInt> = preset.form.matrix();
        let generators = preset
            .generators
            .iter()
            .zip(preset.integer_matrices())
            .map(|(g, m)| (g.name.clone(), m))
            .collect();
        let n = preset.n.to_f64();
        OrbitGroup::new(GroupSpec {
            label: format!("n={}", preset.n),
            gram,
            infinity: big(&frame.big_e.coords),
            delta: 4,
            generators,
            walls: (lo, hi),
            mirrors: (big(&frame.v1.coords), big(&frame.v2.coords)),
            seeds: vec![big(&preset.seed.coords)],
            chart: lattice_chart(n),
            integral: true,
        })
    }
}
