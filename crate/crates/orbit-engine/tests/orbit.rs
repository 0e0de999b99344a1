use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use exact_arith::{BigInt, Rational};
use isometry_catalog::Catalog;
use lorentz_core::linalg::{mat_vec, Vec4};
use orbit_engine::*;
use proptest::prelude::*;

fn v(c: [i64; 4]) -> Vec4<BigInt> {
    c.map(BigInt::from)
}

fn group(n: i64) -> Arc<OrbitGroup<BigInt>> {
    static CACHE: OnceLock<Vec<Arc<OrbitGroup<BigInt>>>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let cat = Catalog::embedded();
        (1..=26).map(|n| Arc::new(OrbitGroup::from_preset(&cat.preset_n(n).unwrap()).unwrap())).collect()
    })[(n - 1) as usize]
        .clone()
}

fn orbit(n: i64, bound: i64) -> Packing<BigInt> {
    enumerate_orbit(&group(n), &OrbitConfig::new(bound)).unwrap()
}

fn set(p: &Packing<BigInt>) -> HashSet<Vec4<BigInt>> {
    p.vectors().cloned().collect()
}

#[test]
fn unit_layer_for_n1() {
    let p = orbit(1, 1);
    let want: HashSet<_> = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]].map(v).into_iter().collect();
    assert_eq!(set(&p), want);
    assert!(p.complete);
}

#[test]
fn curvature_ten_circle_for_n5() {
    let p = orbit(5, 10);
    let target = v([-9, -10, 6, 4]);
    assert!(p.contains(&target));
    assert_eq!(p.group.height(&target), BigInt::from(40));
}

#[test]
fn below_one_only_lines_remain() {
    for n in 1..=26 {
        let p = enumerate_orbit(&group(n), &OrbitConfig::new(Rational::new(1, 2))).unwrap();
        let want: HashSet<_> = [v([1, 0, 0, 0]), v([0, 1, 0, 0])].into_iter().collect();
        assert_eq!(set(&p), want, "n={n}");
    }
}

#[test]
fn packing_property_n7() {
    let p = orbit(7, 30);
    let r = check_packing_property(&p);
    assert!(r.ok(), "{:?}", r.violations.first());
    assert!(r.pairs > 10_000);
    assert_eq!(r.float_certified_pairs, 0);
    let g = group(7);
    assert_eq!(g.dot(&v([0, 0, 1, 0]), &v([0, 0, 0, 1])), BigInt::from(4 * 7 - 2));
}

#[test]
fn duplicates_are_rejected_not_violations() {
    let g = group(3);
    let e3 = v([0, 0, 1, 0]);
    let err = Packing::from_vectors(&g, vec![e3.clone(), e3], Rational::from_int(1)).unwrap_err();
    assert!(matches!(err, OrbitError::Duplicate(_)));
}

#[test]
fn overlap_is_reported() {
    let g = group(1);
    let e3 = v([0, 0, 1, 0]);
    let two = BigInt::from(2);
    let bad = (-3i64..=3)
        .flat_map(|a| (-3i64..=3).flat_map(move |b| (-3i64..=3).flat_map(move |c| (-3i64..=3).map(move |d| v([a, b, c, d])))))
        .find(|w| g.dot(w, w) == -two.clone() && *w != e3 && g.dot(&e3, w) < two && g.height(w) > BigInt::from(0))
        .unwrap();
    let p = Packing::from_vectors(&g, vec![e3, bad], Rational::from_int(10)).unwrap();
    let r = check_packing_property(&p);
    assert!(!r.ok());
    assert!(r.violations.iter().any(|x| x.overlap));
}

fn basis_packing(n: i64) -> (Packing<BigInt>, TangencyGraph) {
    let g = group(n);
    let p = Packing::from_vectors(&g, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]].map(v).to_vec(), Rational::from_int(1)).unwrap();
    let t = tangency_graph(&p);
    (p, t)
}

fn member(p: &Packing<BigInt>, c: [i64; 4]) -> usize {
    p.members.iter().position(|m| m.vector == v(c)).unwrap()
}

#[test]
fn tangency_edges() {
    let (p, t) = basis_packing(1);
    let (e1, e2, e3, e4) = (member(&p, [1, 0, 0, 0]), member(&p, [0, 1, 0, 0]), member(&p, [0, 0, 1, 0]), member(&p, [0, 0, 0, 1]));
    assert!(t.adjacent(e1, e2));
    assert!(t.adjacent(e3, e4));
    assert!(t.clique_through(e3).is_some());
    let (p, t) = basis_packing(5);
    let (e3, e4) = (member(&p, [0, 0, 1, 0]), member(&p, [0, 0, 0, 1]));
    assert!(!t.adjacent(e3, e4));
    assert!(t.adjacent(member(&p, [1, 0, 0, 0]), member(&p, [0, 1, 0, 0])));
}

#[test]
fn apollonian_n1_and_not_n5() {
    let p = orbit(1, 30);
    let r = check_apollonian_property(&p);
    assert!(r.ok());
    assert_eq!(r.count(CircleStatus::Clique), p.len());
    assert!(r.seed_clusters[0].is_some());

    let p = orbit(5, 30);
    let r = check_apollonian_property(&p);
    assert!(!r.ok());
    assert!(r.seed_clusters[0].is_none());
    let seed = member(&p, [1, 0, 0, 0]);
    assert_eq!(r.status[seed], CircleStatus::Failed);
}

#[test]
fn transitivity() {
    let p = orbit(2, 10);
    assert!(transitivity_check(&p));
    let g = group(2);
    let empty = Packing::from_vectors(&g, vec![], Rational::from_int(1)).unwrap();
    assert!(transitivity_check(&empty));
    // a norm -2 lattice vector outside the orbit
    let stray = direct_search(2, 3).into_iter().find(|c| !orbit(2, 3).contains(c)).unwrap();
    let q = Packing::from_vectors(&g, vec![v([1, 0, 0, 0]), stray], Rational::from_int(3)).unwrap();
    assert!(!transitivity_check(&q));
}

#[test]
fn direct_search_matches_orbit() {
    for (n, b) in [(1, 3), (1, 10), (2, 10)] {
        let p = orbit(n, b);
        let big = orbit(n, 4 * b);
        let mut closure = Vec::new();
        for k in -2..=2 {
            closure.extend(big.translated(k));
        }
        let found = admissible(n, &direct_search(n, b), &closure);
        let mut mine: Vec<_> = p.vectors().cloned().collect();
        mine.sort();
        assert_eq!(found, mine, "n={n} bound={b}");
        let q = Packing::from_vectors(&group(n), found, Rational::from_int(b)).unwrap();
        assert!(transitivity_check(&q));
    }
}

#[test]
fn generator_order_does_not_matter() {
    let cat = Catalog::embedded();
    let preset = cat.preset_n(11).unwrap();
    let k = preset.generators.len();
    let order: Vec<usize> = (0..k).rev().collect();
    let g2 = Arc::new(OrbitGroup::from_preset(&preset.permuted(&order)).unwrap());
    let a = orbit(11, 30);
    let b = enumerate_orbit(&g2, &OrbitConfig::new(30)).unwrap();
    let va: Vec<_> = a.members.iter().map(|m| (m.vector.clone(), m.word_length())).collect();
    let vb: Vec<_> = b.members.iter().map(|m| (m.vector.clone(), m.word_length())).collect();
    assert_eq!(va, vb);
}

#[test]
fn words_reproduce_members() {
    let p = orbit(13, 20);
    let g = &p.group;
    for (i, m) in p.members.iter().enumerate() {
        let w = p.word_matrix(i);
        assert_eq!(mat_vec(&w, &g.seeds()[m.seed]), m.vector);
    }
}

#[test]
fn norms_and_integral_curvature() {
    for n in [4, 10, 21, 26] {
        let p = orbit(n, 40);
        let g = &p.group;
        for m in &p.members {
            assert_eq!(g.dot(&m.vector, &m.vector), BigInt::from(-2));
            let h = g.height(&m.vector);
            assert!(h >= BigInt::from(0));
            assert_eq!(&h % BigInt::from(4), BigInt::from(0), "n={n}");
        }
    }
}

#[test]
fn escalation_finds_members_behind_large_words() {
    let g = group(11);
    let mut single = OrbitConfig::single_pass(50);
    single.grace = false;
    let bare = enumerate_orbit(&g, &single).unwrap();
    single.grace = true;
    let graced = enumerate_orbit(&g, &single).unwrap();
    let full = orbit(11, 50);
    assert!(set(&bare).is_subset(&set(&graced)));
    assert!(set(&graced).is_subset(&set(&full)));
    assert!(graced.len() < full.len());
    let wide = enumerate_orbit(&g, &OrbitConfig::single_pass(400)).unwrap();
    let cut: HashSet<_> = wide.vectors().filter(|x| g.height(x) <= BigInt::from(200)).cloned().collect();
    assert_eq!(cut, set(&full));
}

#[test]
fn grace_is_harmless_where_single_pass_is_complete() {
    let g = group(7);
    let mut cfg = OrbitConfig::single_pass(40);
    let with = enumerate_orbit(&g, &cfg).unwrap();
    cfg.grace = false;
    let without = enumerate_orbit(&g, &cfg).unwrap();
    assert_eq!(set(&with), set(&without));
    assert_eq!(set(&with), set(&orbit(7, 40)));
}

#[test]
fn frontier_cap_flags_incomplete() {
    let mut cfg = OrbitConfig::new(50);
    cfg.max_frontier = 5;
    let p = enumerate_orbit(&group(9), &cfg).unwrap();
    assert!(!p.complete);
    assert!(p.complete_up_to.is_none());
}

#[test]
fn bad_seed_is_rejected() {
    let g = group(3);
    let spec = GroupSpec {
        label: "bad".into(),
        gram: g.gram().clone(),
        infinity: g.infinity().clone(),
        delta: 4,
        generators: g.generators().iter().map(|x| (x.name.clone(), x.matrix.clone())).collect(),
        walls: g.walls(),
        mirrors: g.mirrors().clone(),
        seeds: vec![v([1, 1, 0, 0])],
        chart: *g.chart(),
        integral: true,
    };
    assert!(matches!(OrbitGroup::new(spec), Err(OrbitError::BadSeed(0))));
}

fn closure_case() -> impl Strategy<Value = (i64, usize, usize)> {
    (prop::sample::select(vec![3i64, 7, 12, 21]), 0usize..64, 0usize..400)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbit_is_closed_under_generators((n, gi, mi) in closure_case()) {
        static ORBITS: OnceLock<Vec<(i64, Packing<BigInt>)>> = OnceLock::new();
        let orbits = ORBITS.get_or_init(|| [3, 7, 12, 21].map(|n| (n, orbit(n, 25))).to_vec());
        let p = &orbits.iter().find(|(k, _)| *k == n).unwrap().1;
        let g = &p.group;
        let gen = &g.generators()[gi % g.generators().len()];
        let m = &p.members[mi % p.len()];
        let w = mat_vec(&gen.matrix, &m.vector);
        if g.height(&w) <= BigInt::from(100) {
            let (f, _, _) = g.fold(&w);
            prop_assert!(p.contains(&f) || p.contains(&mat_vec(g.wall_matrix(true), &f)));
        }
    }

    #[test]
    fn fold_is_idempotent_and_in_orbit_of_walls((n, _, mi) in closure_case(), k in -5i64..5) {
        let p = orbit(n, 10);
        let g = &p.group;
        let m = &p.members[mi % p.len()];
        let moved = g.translate(k, &m.vector);
        let (f, _, _) = g.fold(&moved);
        prop_assert_eq!(g.fold(&f).0, f.clone());
        prop_assert_eq!(g.fold(&m.vector).0, f);
    }
}
