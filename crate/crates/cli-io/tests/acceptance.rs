// One PASS/FAIL line per acceptance criterion. Runs without the libtest
// harness so the lines reach the terminal; exits 1 if any criterion fails.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use boundary_geom::{boundary_distance, circle_of, sigma_n21, BoundaryFrame, CircleShape, MoebiusMap};
use exact_arith::{BigInt, BiQuadElem, Field, QuadElem, Rational, Scalar};
use glue_blend::{check_compatibility, glue, shift_wall, std_dot, Face, SampleOutcome, Std};
use isometry_catalog::{general_s1_s2, verify_symmetry, Catalog, GeneratorPreset};
use lorentz_core::linalg::{map_mat, Mat4, Vec4};
use lorentz_core::{mod8_obstruction, primitive_reduce, represents_norm, FrameVectors, GramForm, LatticeVector};
use orbit_engine::{
    admissible, check_apollonian_property, check_packing_property, direct_search, enumerate_orbit, transitivity_check, OrbitConfig,
    OrbitGroup, Packing,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gram_i64(n: i64) -> [[i64; 4]; 4] {
    let a = 4 * n - 2;
    [[-2, 2, 2, 2], [2, -2, 2, 2], [2, 2, -2, a], [2, 2, a, -2]]
}

fn quad_form(j: &[[i64; 4]; 4], x: &[i64; 4]) -> i64 {
    (0..4).map(|i| (0..4).map(|k| x[i] * j[i][k] * x[k]).sum::<i64>()).sum()
}

fn residues_hit_minus_four(n: i64, modulus: i64) -> bool {
    let j = gram_i64(n);
    let m = modulus as u32;
    (0..m.pow(4)).any(|idx| {
        let x: [i64; 4] = std::array::from_fn(|k| ((idx / m.pow(k as u32)) % m) as i64);
        quad_form(&j, &x).rem_euclid(8) == 4
    })
}

fn mod8() -> Outcome {
    let start = Instant::now();
    for n in 1..=26 {
        let claimed = mod8_obstruction(&GramForm::integer(n)).map_err(|e| e.to_string())?;
        ensure(claimed, || format!("n = {n}: no obstruction reported"))?;
        ensure(!residues_hit_minus_four(n, 4), || format!("n = {n}: a residue mod 4 reaches -4 mod 8"))?;
    }
    let took = start.elapsed();
    for n in 1..=26 {
        ensure(!residues_hit_minus_four(n, 8), || format!("n = {n}: a residue mod 8 reaches -4 mod 8"))?;
    }
    ensure(took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("n = 1..26 obstructed, residue scan agrees, {took:.2?}"))
}

fn integer_matrix(m: &Mat4<QuadElem>) -> Option<[[i64; 4]; 4]> {
    let mut out = [[0i64; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let r = m[i][k].as_rational()?;
            out[i][k] = r.to_integer()?.try_into().ok()?;
        }
    }
    Some(out)
}

// M^T J M = J, and the timelike D = (1,1,1,1) keeps its sheet.
fn independent_symmetry(n: i64, m: &[[i64; 4]; 4]) -> bool {
    let j = gram_i64(n).map(|r| r.map(i128::from));
    let m = m.map(|r| r.map(i128::from));
    for a in 0..4 {
        for b in 0..4 {
            let s: i128 = (0..4).map(|i| (0..4).map(|k| m[i][a] * j[i][k] * m[k][b]).sum::<i128>()).sum();
            if s != j[a][b] {
                return false;
            }
        }
    }
    let md: [i128; 4] = std::array::from_fn(|i| m[i].iter().sum());
    let dot_d: i128 = (0..4).map(|i| (0..4).map(|k| md[i] * j[i][k]).sum::<i128>()).sum();
    dot_d > 0
}

fn primitive_i64(v: [i64; 4]) -> [i64; 4] {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    v.map(|x| x / g)
}

fn as_ints(v: &Vec4<QuadElem>) -> Option<[i64; 4]> {
    let mut out = [0i64; 4];
    for (o, x) in out.iter_mut().zip(v) {
        *o = x.as_rational()?.to_integer()?.try_into().ok()?;
    }
    Some(out)
}

fn catalog_check() -> Outcome {
    let start = Instant::now();
    let cat = Catalog::embedded();
    let mut generators = 0;
    let mut presets = Vec::new();
    for n in 1..=26 {
        let p = cat.preset_n(n).map_err(|e| format!("n = {n}: {e}"))?;
        for g in &p.generators {
            let rep = verify_symmetry(&g.iso, &p.form);
            ensure(rep.all_ok(), || format!("n = {n} {}: {rep:?}", g.name))?;
            let m = integer_matrix(&g.iso.matrix).ok_or_else(|| format!("n = {n} {}: not integral", g.name))?;
            ensure(independent_symmetry(n, &m), || format!("n = {n} {}: independent check failed", g.name))?;
            generators += 1;
        }
        presets.push(p);
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(5), || format!("took {took:?}"))?;

    let mut formula_rows = 0;
    let mut q1_rows = BTreeSet::new();
    for rec in cat.records() {
        let Ok(n) = rec.n.parse::<i64>() else { continue };
        let p = &presets[(n - 1) as usize];
        for (g, r) in p.generators.iter().skip(if rec.common { 4 } else { 0 }).zip(&rec.generators) {
            let Some(tag) = &r.formula else { continue };
            let (want, idx) = match tag.as_str() {
                "s1" | "s2" => {
                    let all = general_s1_s2(n).map_err(|e| e.to_string())?;
                    let v = all.into_iter().find(|(k, _)| k == tag).ok_or_else(|| format!("n = {n}: no {tag}"))?.1;
                    let ints = v.integer_coords().ok_or("formula vector not integral")?;
                    let ints: [i64; 4] = ints.map(|x| x.try_into().unwrap());
                    (ints, 0)
                }
                t => {
                    let idx: usize = t.trim_start_matches("q1:").parse().map_err(|_| format!("tag {t}"))?;
                    ensure(n % 4 == 3, || format!("Q1 row at n = {n}"))?;
                    let q1 = primitive_i64([-n * n + 25, -n * n + 9, 2 * n + 10, 2 * n - 6]);
                    ensure(quad_form(&gram_i64(n), &q1) == 0, || format!("Q1 not lightlike at n = {n}"))?;
                    q1_rows.insert(n);
                    (q1, idx)
                }
            };
            let table = as_ints(&g.data[idx].1).ok_or_else(|| format!("n = {n} {}: surd data", g.name))?;
            let form = p.form.clone();
            let table = primitive_reduce(&LatticeVector::from_ints(table, form.clone())).map_err(|e| e.to_string())?;
            let want = primitive_reduce(&LatticeVector::from_ints(want, form)).map_err(|e| e.to_string())?;
            ensure(table == want, || format!("n = {n} {} ({tag}): table {table}, formula {want}", g.name))?;
            formula_rows += 1;
        }
    }
    ensure(q1_rows == BTreeSet::from([7, 11, 15, 19, 23]), || format!("Q1 rows at {q1_rows:?}"))?;
    Ok(format!(
        "{generators} generators verified in {took:.2?}; {formula_rows} formula rows match, Q1 at n = 7, 11, 15, 19, 23"
    ))
}

fn q(c: [i64; 4], n: i64) -> LatticeVector {
    LatticeVector::from_ints(c, GramForm::integer(n))
}

fn sqrt_q(n: i64) -> QuadElem {
    QuadElem::sqrt_of(&Rational::from_int(n)).unwrap()
}

// Faddeev-LeVerrier: coefficients of det(xI - M), highest degree first.
fn charpoly(m: &Mat4<Rational>) -> [Rational; 5] {
    let zero = Rational::zero;
    let mul = |a: &Mat4<Rational>, b: &Mat4<Rational>| -> Mat4<Rational> {
        std::array::from_fn(|i| {
            std::array::from_fn(|k| (0..4).fold(zero(), |s, t| s + a[i][t].clone() * b[t][k].clone()))
        })
    };
    let mut c: [Rational; 5] = std::array::from_fn(|_| zero());
    c[0] = Rational::one();
    let mut acc: Mat4<Rational> = std::array::from_fn(|_| std::array::from_fn(|_| zero()));
    for k in 1..=4 {
        let mut step = mul(m, &acc);
        for (i, row) in step.iter_mut().enumerate() {
            row[i] = row[i].clone() + c[k - 1].clone();
        }
        acc = step;
        let am = mul(m, &acc);
        let tr = (0..4).fold(zero(), |s, i| s + am[i][i].clone());
        c[k] = -tr / Rational::from_int(k as i64);
    }
    c
}

fn worked_numbers() -> Outcome {
    let one = QuadElem::from_int(1);
    for n in 1..=26 {
        let c = circle_of(&q([0, 0, 1, 0], n)).map_err(|e| e.to_string())?;
        let CircleShape::Circle { center, radius } = &c.shape else { return Err(format!("e3 is a line at n = {n}")) };
        ensure(c.curvature == one && *radius == one, || format!("n = {n}: e3 radius {radius}"))?;
        ensure(center.re == QuadElem::from_int(0) && center.im == one, || format!("n = {n}: e3 not at i"))?;

        let f = FrameVectors::new(&GramForm::integer(n));
        let p3 = f.big_e.plus(&f.e[2].scaled(&Rational::from_int(4)));
        let p4 = f.big_e.plus(&f.e[3].scaled(&Rational::from_int(4)));
        let d2 = boundary_distance(&p3, &p4).map_err(|e| e.to_string())?;
        ensure(d2 == QuadElem::from_int(4 * n), || format!("n = {n}: |P3P4|^2 = {d2}"))?;
        let v1v1 = f.v1.dot(&f.v1).map_err(|e| e.to_string())?;
        ensure(v1v1 == Rational::from_int(-8 * n), || format!("n = {n}: v1.v1 = {v1v1}"))?;
    }

    let f = FrameVectors::new(&GramForm::integer(5));
    let s2 = q([-5, -5, 3, 2], 5);
    let norms: Vec<Rational> =
        [&f.e[0], &f.h, &f.s0, &s2, &f.v1].iter().map(|v| v.dot(v).unwrap()).collect();
    let want: Vec<Rational> = [-2, -8, -8, -10, -40].map(Rational::from_int).to_vec();
    ensure(norms == want, || format!("n = 5 norms {norms:?}"))?;
    ensure(f.v2.dot(&f.v2).unwrap() == Rational::from_int(-40), || "n = 5 v2 norm".into())?;
    let k = circle_of(&s2).map_err(|e| e.to_string())?.curvature;
    ensure(k == sqrt_q(5), || format!("s2 curvature {k}"))?;

    let p = q([6, 6, -3, -1], 10);
    ensure(p.dot(&p).unwrap() == Rational::from_int(16), || "P.P at n = 10".into())?;

    let cat = Catalog::embedded();
    let t = cat.preset_n(21).map_err(|e| e.to_string())?;
    let t = t.get("T").ok_or("no glide T at n = 21")?;
    let m = map_mat(&t.iso.matrix, |x| x.as_rational().cloned().expect("rational glide"));
    let cp = charpoly(&m);
    let want = [1, -18, 0, 18, -1].map(Rational::from_int);
    ensure(cp == want, || format!("charpoly {cp:?}"))?;
    // (x - 1)(x + 1)(x^2 - 18x + 1), the last with roots 9 +- 4 sqrt 5
    let eval = |x: &QuadElem| cp.iter().fold(QuadElem::from_int(0), |s, c| s * x.clone() + QuadElem::rational(c.clone()));
    let four_root5 = sqrt_q(5) * QuadElem::from_int(4);
    let roots = [
        QuadElem::from_int(1),
        QuadElem::from_int(-1),
        QuadElem::from_int(9) + four_root5.clone(),
        QuadElem::from_int(9) - four_root5,
    ];
    for r in &roots {
        ensure(eval(r).is_zero(), || format!("{r} is not a root"))?;
    }
    let product = roots.iter().fold(QuadElem::from_int(1), |s, r| s * r.clone());
    ensure(product == QuadElem::rational(cp[4].clone()), || "root product".into())?;
    Ok("e3, |P3P4|, v1.v1 for n = 1..26; n = 5 norms; s2 curvature sqrt 5; P.P = 16; glide eigenvalues 1, -1, 9 +- 4 sqrt 5".into())
}

fn group(cat: &Catalog, n: i64) -> Arc<OrbitGroup<BigInt>> {
    Arc::new(OrbitGroup::from_preset(&cat.preset_n(n).unwrap()).unwrap())
}

fn to_i128(v: &Vec4<BigInt>) -> [i128; 4] {
    std::array::from_fn(|i| i128::try_from(&v[i]).expect("small coordinates"))
}

// All distinct pairs in the window and its neighbouring translates.
fn independent_pairs(n: i64, p: &Packing<BigInt>) -> Result<usize, String> {
    let j = gram_i64(n).map(|r| r.map(i128::from));
    let mut all: Vec<[i128; 4]> = Vec::new();
    for k in -1..=1 {
        all.extend(p.translated(k).iter().map(to_i128));
    }
    all.sort();
    all.dedup();
    let dot = |u: &[i128; 4], v: &[i128; 4]| -> i128 { (0..4).map(|i| (0..4).map(|k| u[i] * j[i][k] * v[k]).sum::<i128>()).sum() };
    let mut pairs = 0;
    for (a, u) in all.iter().enumerate() {
        ensure(dot(u, u) == -2, || format!("{u:?} has norm {}", dot(u, u)))?;
        for v in &all[a + 1..] {
            let d = dot(u, v);
            ensure(d >= 2 && d % 2 == 0, || format!("n = {n}: {u:?}.{v:?} = {d}"))?;
            pairs += 1;
        }
    }
    Ok(pairs)
}

fn packing_property(cat: &Catalog, orbits: &[Packing<BigInt>]) -> Outcome {
    let mut circles = 0;
    let mut pairs = 0;
    let sizes: Vec<usize> = orbits.iter().map(|p| p.len()).collect();
    for (i, p) in orbits.iter().enumerate() {
        let n = i as i64 + 1;
        ensure(p.complete, || format!("n = {n}: orbit incomplete"))?;
        let rep = check_packing_property(p);
        ensure(rep.ok(), || format!("n = {n}: {:?}", rep.violations.first()))?;
        ensure(rep.float_certified_pairs == 0, || format!("n = {n}: float-certified pairs"))?;
        pairs += independent_pairs(n, p)?;
        ensure(transitivity_check(p), || format!("n = {n}: transitivity"))?;
        circles += p.len();
    }
    let _ = cat;
    let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
    Ok(format!(
        "n = 1..26 at bound 50: {circles} circles ({lo} to {hi} per n), {pairs} pairs, all even >= 2; transitive"
    ))
}

fn integer_curvatures(cat: &Catalog, orbits: &[Packing<BigInt>]) -> Outcome {
    let zero = BigInt::from(0);
    for (i, p) in orbits.iter().enumerate() {
        let n = i as i64 + 1;
        let g = group(cat, n);
        ensure(g.delta() == 4, || format!("n = {n}: delta {}", g.delta()))?;
        let frame = BoundaryFrame::<QuadElem>::new(&GramForm::integer(n)).map_err(|e| e.to_string())?;
        for v in p.vectors() {
            let h = g.height(v);
            ensure(h >= zero && &h % BigInt::from(4) == zero, || format!("n = {n}: height {h} for {v:?}"))?;
            // independent: the boundary frame's curvature
            let lifted = v.clone().map(|x| QuadElem::rational(Rational::from_int(x)));
            let k = frame.circle(&lifted).map_err(|e| e.to_string())?.curvature;
            ensure(k == QuadElem::rational(Rational::new(h.clone(), 4)), || format!("n = {n}: curvature {k} vs height {h}"))?;
        }
    }
    Ok("every orbit circle for n = 1..26 has a non-negative integer curvature".into())
}

fn blend_orbit(g: &glue_blend::BlendedGroup, bound: i64) -> Result<Packing<Std>, String> {
    let group = g.to_group().map_err(|e| e.to_string())?;
    enumerate_orbit(&group, &OrbitConfig::new(bound)).map_err(|e| e.to_string())
}

fn apollonian(cat: &Catalog) -> Outcome {
    let preset = |n: i64| -> GeneratorPreset { cat.preset_n(n).unwrap() };
    let mut cases = vec![("shift 7 by 1".to_string(), shift_wall(&preset(7), &Rational::from_int(1)).map_err(|e| e.to_string())?)];
    for n in [2, 3, 5, 7] {
        cases.push((format!("glue 1|{n} v1"), glue(&preset(1), &preset(n), Face::V1).map_err(|e| e.to_string())?));
    }
    let mut notes = Vec::new();
    for (name, g) in &cases {
        let p = blend_orbit(g, 50)?;
        ensure(p.complete, || format!("{name}: incomplete"))?;
        ensure(check_packing_property(&p).ok(), || format!("{name}: not a packing"))?;
        let rep = check_apollonian_property(&p);
        ensure(rep.ok(), || format!("{name}: failures {:?}", rep.failures()))?;
        notes.push(format!("{name} ({} circles)", p.len()));
    }
    Ok(notes.join(", "))
}

fn negative_control(cat: &Catalog) -> Outcome {
    let form = GramForm::new(Rational::new(3, 2)).map_err(|e| e.to_string())?;
    let w = represents_norm(&form, -4, 10).ok_or("no norm -4 vector at n = 3/2")?;
    let ww = w.dot(&w).map_err(|e| e.to_string())?;
    ensure(ww == Rational::from_int(-4) && w.is_lattice_member(), || format!("witness {w} has norm {ww}"))?;

    let g = shift_wall(&cat.preset_n(7).unwrap(), &Rational::new(1, 3)).map_err(|e| e.to_string())?;
    let rep = check_compatibility(&g, &Rational::from_int(50), 3000);
    ensure(!rep.ok(), || "1/3 shift accepted".into())?;
    let SampleOutcome::Overlap { a, b, product, .. } = &rep.sample else {
        return Err(format!("no overlap witness: {:?}", rep.sample));
    };
    let parse = |s: &str| -> Result<Vec4<Std>, String> {
        let parts: Vec<Std> = s.trim_matches(['[', ']']).split(',').map(|x| x.trim().parse::<Std>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
        parts.try_into().map_err(|_| format!("{s} is not a 4-vector"))
    };
    let (u, v) = (parse(a)?, parse(b)?);
    let minus_two = Std::from_i64(-2);
    ensure(std_dot(&u, &u) == minus_two && std_dot(&v, &v) == minus_two, || "witness circles are not norm -2".into())?;
    let uv = std_dot(&u, &v);
    ensure((uv.clone() - Std::from_i64(2)).signum() < 0, || format!("product {uv} is not an overlap"))?;
    Ok(format!("n = 3/2 witness {w}; 1/3 shift at n = 7 overlaps with product {product:.6}"))
}

fn chart(n: i64) -> [[f64; 4]; 4] {
    let r = (n as f64).sqrt();
    let cols = [[0.0, 0.0, 0.0, -1.0], [4.0, 0.0, 0.0, 1.0], [0.0, 1.0, 0.0, 1.0], [4.0 * n as f64, 1.0, 2.0 * r, 1.0]];
    std::array::from_fn(|i| std::array::from_fn(|k| cols[k][i]))
}

fn solve(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> [f64; 4] {
    for c in 0..4 {
        let p = (c..4).max_by(|&i, &k| a[i][c].abs().total_cmp(&a[k][c].abs())).unwrap();
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..4 {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in 0..4 {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    std::array::from_fn(|i| b[i] / a[i][i])
}

fn mv(m: &[[f64; 4]; 4], v: &[f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| (0..4).map(|k| m[i][k] * v[k]).sum())
}

// Relative disagreement between the 2x2 map and the lattice matrix at z.
fn dual_path<F: Field>(n: i64, map: &MoebiusMap<F>, lattice: &Mat4<f64>, z: (f64, f64)) -> Option<f64> {
    let w = map.apply_f64(z)?;
    if w.0.hypot(w.1) > 1e6 {
        return None;
    }
    let m = chart(n);
    let lifted = solve(m, [z.0 * z.0 + z.1 * z.1, 1.0, z.0, z.1]);
    let s = mv(&m, &mv(lattice, &lifted));
    let u = (s[2] / s[1], s[3] / s[1]);
    Some((u.0 - w.0).hypot(u.1 - w.1) / w.0.hypot(w.1).max(1.0))
}

fn sample_points<F: Field>(n: i64, map: &MoebiusMap<F>, lattice: &Mat4<f64>, xs: (f64, f64), rng: &mut StdRng) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    let mut used = 0;
    while used < 100 {
        let z = (rng.gen_range(xs.0..xs.1), rng.gen_range(-2.0..4.0));
        if let Some(err) = dual_path(n, map, lattice, z) {
            ensure(err < 1e-9, || format!("n = {n}: error {err:e} at {z:?}"))?;
            worst = worst.max(err);
            used += 1;
        }
    }
    Ok(worst)
}

fn dual_path_check(cat: &Catalog) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let frame = BoundaryFrame::<QuadElem>::new(&GramForm::integer(7)).map_err(|e| e.to_string())?;
    let point = |c: [i64; 4]| frame.point(&c.map(QuadElem::from_int)).map_err(|e| e.to_string());
    let phi = MoebiusMap::rotation(&point([-3, -3, 1, 1])?, &point([-3, -5, 3, 1])?).map_err(|e| e.to_string())?;
    let p7 = cat.preset_n(7).map_err(|e| e.to_string())?;
    let m7 = map_mat(&p7.get("phi_Q0_Q1").ok_or("no phi_Q0_Q1")?.iso.matrix, QuadElem::to_f64);
    let e_phi = sample_points(7, &phi, &m7, (-3.0, 7.0), &mut rng)?;
    let (sigma, axis) = sigma_n21().map_err(|e| e.to_string())?;
    let m21 = map_mat(&axis.matrix, BiQuadElem::to_f64);
    let e_sigma = sample_points(21, &sigma, &m21, (-3.0, 12.0), &mut rng)?;
    Ok(format!("phi (n = 7) worst {e_phi:.1e}, sigma (n = 21) worst {e_sigma:.1e} over 100 points each"))
}

fn oracle(cat: &Catalog) -> Outcome {
    for n in [1, 2] {
        let g = group(cat, n);
        let p = enumerate_orbit(&g, &OrbitConfig::new(10)).map_err(|e| e.to_string())?;
        let big = enumerate_orbit(&g, &OrbitConfig::new(40)).map_err(|e| e.to_string())?;
        let mut closure = Vec::new();
        for k in -2..=2 {
            closure.extend(big.translated(k));
        }
        let found = admissible(n, &direct_search(n, 10), &closure);
        let mut mine: Vec<_> = p.vectors().cloned().collect();
        mine.sort();
        ensure(found == mine, || format!("n = {n}: search {} vs orbit {}", found.len(), mine.len()))?;
    }
    Ok("orbit = direct search at bound 10 for n = 1, 2".into())
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    // timed criteria run alone
    results.push((1, "mod 8 obstruction", mod8()));
    results.push((2, "catalog verification", catalog_check()));

    let cat = Catalog::embedded();
    let orbits: Vec<Packing<BigInt>> = std::thread::scope(|s| {
        let handles: Vec<_> = (1..=26)
            .map(|n| {
                let g = group(&cat, n);
                s.spawn(move || enumerate_orbit(&g, &OrbitConfig::new(50)).unwrap())
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let rest: Vec<(usize, &str, Outcome)> = std::thread::scope(|s| {
        let (cat, orbits) = (&cat, &orbits);
        let jobs: Vec<(usize, &str, Box<dyn FnOnce() -> Outcome + Send + '_>)> = vec![
            (3, "worked numbers", Box::new(worked_numbers)),
            (4, "packing property", Box::new(move || packing_property(cat, orbits))),
            (5, "integer curvatures", Box::new(move || integer_curvatures(cat, orbits))),
            (6, "apollonian property", Box::new(move || apollonian(cat))),
            (7, "negative control", Box::new(move || negative_control(cat))),
            (8, "dual-path maps", Box::new(move || dual_path_check(cat))),
            (9, "orbit vs direct search", Box::new(move || oracle(cat))),
        ];
        let handles: Vec<_> = jobs
            .into_iter()
            .map(|(i, name, job)| {
                (i, name, s.spawn(move || {
                    let t = Instant::now();
                    let r = job();
                    eprintln!("criterion {i} took {:.1?}", t.elapsed());
                    r
                }))
            })
            .collect();
        handles
            .into_iter()
            .map(|(i, name, h)| (i, name, h.join().unwrap_or_else(|_| Err("panicked".into()))))
            .collect()
    });
    results.extend(rest);

    let mut failed = 0;
    for (i, name, r) in &results {
        match r {
            Ok(detail) => println!("criterion {i} PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {i} FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
