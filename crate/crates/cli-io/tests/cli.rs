use std::path::Path;
use std::process::{Command, Output};
use std::sync::{Arc, OnceLock};

use boundary_geom::{point_of, FloatShape};
use cli_io::svg::{clip_line, num, shapes};
use cli_io::*;
use exact_arith::{BigInt, Rational, Scalar};
use glue_blend::{registry, std_dot, BlendDescriptor, Number, Std};
use isometry_catalog::Catalog;
use lorentz_core::{GramForm, LatticeVector};
use orbit_engine::{check_apollonian_property, enumerate_orbit, OrbitConfig, OrbitGroup, Packing};
use proptest::prelude::*;

fn lattice_orbit(n: i64, bound: i64) -> Packing<BigInt> {
    let cat = Catalog::embedded();
    let group = Arc::new(OrbitGroup::from_preset(&cat.preset_n(n).unwrap()).unwrap());
    enumerate_orbit(&group, &OrbitConfig::new(bound)).unwrap()
}

fn lattice_doc(n: i64, bound: i64) -> PackingDocument {
    lattice_document(&Rational::from_int(n), &lattice_orbit(n, bound)).unwrap()
}

fn blend_doc(desc: &BlendDescriptor, bound: i64) -> PackingDocument {
    let group = registry().build(&Catalog::embedded(), desc).unwrap();
    let packing = enumerate_orbit(&group.to_group().unwrap(), &OrbitConfig::new(bound)).unwrap();
    blend_document(desc, &group, &packing)
}

fn shifted_7() -> BlendDescriptor {
    BlendDescriptor {
        offset: Some(Number::Int(1)),
        ..BlendDescriptor::preset(7)
    }
}

fn glued_5_7() -> BlendDescriptor {
    BlendDescriptor {
        right: Some(Number::Int(7)),
        face: Some(glue_blend::Face::V2),
        ..BlendDescriptor::preset(5)
    }
}

fn shifted_doc() -> &'static PackingDocument {
    static DOC: OnceLock<PackingDocument> = OnceLock::new();
    DOC.get_or_init(|| blend_doc(&shifted_7(), 30))
}

#[test]
fn lattice_document_round_trips() {
    let doc = lattice_doc(7, 20);
    let text = doc.to_json();
    assert_eq!(PackingDocument::from_json(&text).unwrap(), doc);
    assert_eq!(lattice_doc(7, 20).to_json(), text);
    assert_eq!(doc.meta.count, doc.circles.len());
    assert_eq!(doc.meta.delta, 4);
    assert!(doc.meta.complete);
}

#[test]
fn blend_documents_round_trip() {
    for doc in [shifted_doc().clone(), blend_doc(&glued_5_7(), 8)] {
        let text = doc.to_json();
        let back = PackingDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.meta.frame, Frame::Standard);
    }
    // gluing 5 and 7 needs both radicals
    let doc = blend_doc(&glued_5_7(), 8);
    assert!(doc.circles.iter().any(|c| matches!(c.center.as_ref().map(|p| &p.x), Some(ExactValue::BiQuad { .. }))));
}

#[test]
fn tampered_documents_are_rejected() {
    let doc = lattice_doc(5, 6);
    let mut bad = doc.clone();
    bad.circles[3].curvature = ExactValue::Rational("7".into());
    assert!(PackingDocument::from_json(&bad.to_json()).is_err());
    let mut bad = doc.clone();
    bad.meta.count += 1;
    assert!(PackingDocument::from_json(&bad.to_json()).is_err());
    let text = doc.to_json().replace("\"delta\"", "\"extra\": 1, \"delta\"");
    assert!(PackingDocument::from_json(&text).is_err());
    assert!(PackingDocument::from_json("{").is_err());
}

fn key(doc: &PackingDocument, i: usize) -> (bool, Std, Std, Std) {
    let c = &doc.circles[i];
    match (&c.center, &c.line) {
        (Some(p), _) => (true, c.curvature.to_std().unwrap(), p.x.to_std().unwrap(), p.y.to_std().unwrap()),
        (_, Some(_)) => (false, Std::zero(), Std::zero(), Std::zero()),
        _ => panic!("circle {i} without geometry"),
    }
}

#[test]
fn circles_are_in_canonical_order() {
    for doc in [lattice_doc(11, 20), shifted_doc().clone()] {
        for i in 1..doc.circles.len() {
            let (a, b) = (key(&doc, i - 1), key(&doc, i));
            if !a.0 || !b.0 {
                assert!(a.0 <= b.0, "lines come first");
                continue;
            }
            let d = [(b.1 - a.1), (b.2 - a.2), (b.3 - a.3)];
            let first = d.iter().map(|x| x.signum()).find(|&s| s != 0).unwrap_or(0);
            assert!(first > 0, "circles {} and {i} out of order", i - 1);
        }
    }
}

#[test]
fn curvature_ten_circle_at_n5() {
    let doc = lattice_doc(5, 10);
    let c = doc.circles.iter().find(|c| c.vec == ["-9", "-10", "6", "4"]).expect("member");
    assert_eq!(c.curvature, ExactValue::Rational("10".into()));
    assert!(c.integer_curvature);
    assert_eq!(c.radius, Some(ExactValue::Rational("1/10".into())));
}

#[test]
fn n1_document_is_integral_and_apollonian() {
    let p = lattice_orbit(1, 20);
    assert!(check_apollonian_property(&p).ok());
    let doc = lattice_document(&Rational::from_int(1), &p).unwrap();
    assert!(doc.circles.iter().all(|c| c.integer_curvature));
    let lines = doc.circles.iter().filter(|c| c.line.is_some()).count();
    assert!(lines >= 2);
}

#[test]
fn shifted_blend_loses_integral_curvature() {
    let doc = shifted_doc();
    assert!(doc.circles.iter().any(|c| !c.integer_curvature));
    assert!(doc.circles.iter().any(|c| c.integer_curvature));
    let bad = doc.circles.iter().find(|c| !c.integer_curvature).unwrap();
    assert!(matches!(bad.curvature, ExactValue::Quad { d: 7, .. }));
}

#[test]
fn number_format() {
    assert_eq!(num(1.0 / 3.0), "0.333333333333");
    assert_eq!(num(-0.0), "0");
    assert_eq!(num(2.0), "2");
    assert_eq!(num(-1234567.891234567), "-1234567.89123");
    assert_eq!(num(5f64.sqrt()), "2.2360679775");
    assert_eq!(num(1e-13 / 3.0), "0.0000000000000333333333333");
}

#[test]
fn windows_and_inversions_parse() {
    assert_eq!(Window::parse("-1, 3.5, -0.1, 2.1").unwrap(), Window::new(-1.0, 3.5, -0.1, 2.1).unwrap());
    assert!(Window::parse("1,0,0,1").is_err());
    assert!(Window::parse("0,1,0").is_err());
    assert!(Window::parse("0,1,a,2").is_err());
    assert_eq!(Inversion::parse("1,2").unwrap(), Inversion { x: 1.0, y: 2.0, r: 1.0 });
    assert_eq!(Inversion::parse("1,2,3").unwrap().r, 3.0);
    assert!(Inversion::parse("1,2,0").is_err());
}

#[test]
fn lines_are_clipped_to_the_window() {
    let w = Window::new(-1.0, 3.0, -0.1, 2.1).unwrap();
    let (a, b) = clip_line(&w, 0.0, 1.0, 2.0).unwrap();
    assert!((a.1 - 2.0).abs() < 1e-12 && (b.1 - 2.0).abs() < 1e-12);
    assert!(((a.0 - b.0).abs() - 4.0).abs() < 1e-12);
    let (a, b) = clip_line(&w, 1.0, 0.0, 0.5).unwrap();
    assert!(((a.1 - b.1).abs() - 2.2).abs() < 1e-12);
    assert!(clip_line(&w, 0.0, 1.0, 5.0).is_none());
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!(clip_line(&w, s, s, 10.0).is_none());
    assert!(clip_line(&w, s, s, 1.0).is_some());
}

/// Independent visibility count from the exact vectors.
fn visible(doc: &PackingDocument, w: &Window) -> usize {
    doc.inversive()
        .unwrap()
        .iter()
        .filter(|v| match FloatShape::from_inversive(std::array::from_fn(|i| v[i].to_f64())).unwrap() {
            FloatShape::Circle { cx, cy, r } => cx + r >= w.x0 && cx - r <= w.x1 && cy + r >= w.y0 && cy - r <= w.y1,
            FloatShape::Line { nx, ny, offset } => {
                let corners = [(w.x0, w.y0), (w.x0, w.y1), (w.x1, w.y0), (w.x1, w.y1)];
                let side: Vec<f64> = corners.iter().map(|(x, y)| nx * x + ny * y - offset).collect();
                side.iter().any(|s| *s >= 0.0) && side.iter().any(|s| *s <= 0.0)
            }
        })
        .count()
}

fn count_shapes(svg: &str) -> usize {
    svg.matches("<circle ").count() + svg.matches("<line ").count()
}

#[test]
fn svg_counts_match_the_window() {
    for (doc, window) in [
        (lattice_doc(1, 20), Window::around_walls(0.0, 1.0)),
        (lattice_doc(7, 30), Window::around_walls(0.0, 7f64.sqrt())),
        (lattice_doc(7, 30), Window::new(0.5, 1.5, 0.0, 1.0).unwrap()),
        (shifted_doc().clone(), Window::around_walls(-1.0, 7f64.sqrt())),
    ] {
        let svg = render(&doc, &RenderSpec::new(window)).unwrap();
        assert_eq!(count_shapes(&svg), visible(&doc, &window));
        assert!(count_shapes(&svg) > 0);
        assert!(svg.starts_with("<?xml") && svg.ends_with("</svg>\n"));
    }
}

#[test]
fn n1_picture_has_the_two_lines_and_unit_circles() {
    let doc = lattice_doc(1, 4);
    let svg = render(&doc, &RenderSpec::new(Window::around_walls(0.0, 1.0))).unwrap();
    assert!(svg.contains("<line x1=\"-1\" y1=\"0\" x2=\"2\" y2=\"0\"/>"));
    assert!(svg.contains("y1=\"-2\""));
    assert!(svg.contains("<circle cx=\"0\" cy=\"-1\" r=\"1\"/>"));
    assert!(svg.contains("<circle cx=\"2\" cy=\"-1\" r=\"1\"/>"));
}

#[test]
fn empty_document_gives_an_empty_picture() {
    let mut doc = lattice_doc(3, 1);
    doc.circles.clear();
    doc.meta.count = 0;
    let back = PackingDocument::from_json(&doc.to_json()).unwrap();
    let svg = render(&back, &RenderSpec::new(Window::around_walls(0.0, 1.0))).unwrap();
    assert_eq!(count_shapes(&svg), 0);
    assert!(svg.contains("<svg ") && svg.ends_with("</svg>\n"));
    let opened = svg.matches("<g ").count();
    assert_eq!(opened, svg.matches("</g>").count());
}

#[test]
fn labels_and_fill_are_written() {
    let doc = lattice_doc(5, 10);
    let mut spec = RenderSpec::new(Window::around_walls(0.0, 5f64.sqrt()));
    spec.labels = true;
    spec.fill = Some("#eef".into());
    let svg = render(&doc, &spec).unwrap();
    assert!(svg.contains(">10</text>"));
    assert!(svg.contains("fill=\"#eef\""));
    assert_eq!(svg.matches("<text ").count(), svg.matches("<circle ").count());
}

fn gap(a: &FloatShape, b: &FloatShape) -> f64 {
    match (*a, *b) {
        (FloatShape::Circle { cx, cy, r }, FloatShape::Circle { cx: x2, cy: y2, r: r2 }) => {
            let d = (cx - x2).hypot(cy - y2);
            (d - r - r2).abs().min((d - (r - r2).abs()).abs()) / r.max(r2).max(1.0)
        }
        (FloatShape::Circle { cx, cy, r }, FloatShape::Line { nx, ny, offset })
        | (FloatShape::Line { nx, ny, offset }, FloatShape::Circle { cx, cy, r }) => {
            ((nx * cx + ny * cy - offset).abs() - r).abs() / r.max(1.0)
        }
        (FloatShape::Line { nx, ny, offset }, FloatShape::Line { nx: a, ny: b, offset: o }) => {
            // parallel lines touch at infinity
            if (nx * b - ny * a).abs() < 1e-9 {
                0.0
            } else {
                (offset - o).abs() + 1.0
            }
        }
    }
}

#[test]
fn inversion_at_a_cusp_keeps_the_tangency_graph() {
    let doc = lattice_doc(7, 20);
    let q0 = point_of(&LatticeVector::from_ints([-3, -3, 1, 1], GramForm::integer(7))).unwrap();
    let (px, py) = q0.z().to_f64();
    let mut spec = RenderSpec::new(Window::new(px - 3.0, px + 3.0, py - 3.0, py + 3.0).unwrap());
    spec.inversion = Some(Inversion { x: px, y: py, r: 1.0 });
    let inverted = shapes(&doc, &spec).unwrap();
    assert_eq!(inverted.len(), doc.circles.len());
    let vecs = doc.inversive().unwrap();
    let two = Std::from_i64(2);
    let (mut tangent, mut apart) = (0, 0);
    for i in 0..vecs.len() {
        for k in i + 1..vecs.len() {
            let touching = std_dot(&vecs[i], &vecs[k]) == two;
            let g = gap(&inverted[i].1, &inverted[k].1);
            if touching {
                tangent += 1;
                assert!(g < 1e-9, "{i} {k} should touch: {g}");
            } else {
                apart += 1;
                assert!(g > 1e-7, "{i} {k} should not touch: {g}");
            }
        }
    }
    assert!(tangent > 50 && apart > 50);
    // exactly the circles through the cusp become lines
    let (x, y) = (Std::from_quad(&q0.x), Std::from_quad(&q0.y));
    let cusp = [x.clone() * x.clone() + y.clone() * y.clone(), Std::one(), x, y];
    for (i, s) in &inverted {
        let through = std_dot(&vecs[*i], &cusp).is_zero();
        assert_eq!(through, matches!(s, FloatShape::Line { .. }), "circle {i}");
    }
    let svg = render(&doc, &spec).unwrap();
    assert!(count_shapes(&svg) > 0);
}

proptest! {
    #[test]
    fn exact_values_round_trip(c in prop::array::uniform4((-50i64..50, 1i64..9)), d in prop::sample::select(vec![(1u64, 1u64), (1, 7), (5, 7), (2, 3), (3, 6)])) {
        let coeffs = c.map(|(p, q)| Rational::new(p, q));
        let x = Std::new(d.0, d.1, coeffs).unwrap();
        let v = ExactValue::from_std(&x);
        prop_assert_eq!(v.to_std().unwrap(), x.clone());
        let text = serde_json::to_string(&v).unwrap();
        let back: ExactValue = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, v.clone());
        match v {
            ExactValue::Rational(_) => prop_assert!(x.as_rational().is_some()),
            ExactValue::Quad { .. } => prop_assert!(x.to_quad().is_some()),
            ExactValue::BiQuad { .. } => prop_assert!(x.to_quad().is_none()),
        }
    }

    #[test]
    fn number_format_keeps_twelve_digits(x in -1e6f64..1e6) {
        let s = num(x);
        let y: f64 = s.parse().unwrap();
        prop_assert!((x - y).abs() <= 1e-11 * x.abs().max(1e-300));
        let digits = s.trim_start_matches('-').replace('.', "");
        prop_assert!(digits.trim_start_matches('0').len() <= 12);
    }
}

// the binary

fn pack(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pack"))
        .args(args)
        .current_dir(dir)
        .env_remove("PACK_CATALOG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn catalog_commands() {
    let dir = tempfile::tempdir().unwrap();
    let o = pack(&["catalog", "show", "5"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for name in ["R_h", "R_v1", "R_v2", "R_s0", "R_s1", "R_s2", "[-5,-5,3,2]"] {
        assert!(s.contains(name), "{name}");
    }
    assert!(!s.contains("FAILED"));
    let o = pack(&["catalog", "show", "21"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("T  glide") && s.contains("multiplier 9+4*sqrt(5)") && s.contains("attracting point"));
    let o = pack(&["catalog", "show", "21", "--json"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["glide"]["lambda"], "9+4*sqrt(5)");
    assert_eq!(pack(&["catalog", "show", "27"], dir.path()).status.code(), Some(2));
    assert_eq!(pack(&["catalog", "show", "x"], dir.path()).status.code(), Some(2));
    let o = pack(&["catalog", "list"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 27);
}

#[test]
fn verify_commands() {
    let dir = tempfile::tempdir().unwrap();
    let o = pack(&["verify", "7", "--bound", "20"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let o = pack(&["verify", "11", "--bound", "20"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for r in ["phi_Q1_Q0", "phi_Q1_Q2", "phi_Q1_Q3"] {
        assert!(s.contains(&format!("PASS symmetry {r} (rotation)")), "{r}");
    }
    let o = pack(&["verify", "3/2"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("norm -4"));
    assert_eq!(pack(&["verify", "27"], dir.path()).status.code(), Some(2));
    assert_eq!(pack(&["verify", "7", "--bound", "-3"], dir.path()).status.code(), Some(2));
    assert_eq!(pack(&["verify"], dir.path()).status.code(), Some(2));
}

#[test]
fn generate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        let o = pack(&["generate", "5", "--bound", "10", "--out", name], dir.path());
        assert_eq!(o.status.code(), Some(0));
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.json")).unwrap());
    let doc = PackingDocument::from_json(std::str::from_utf8(&a).unwrap()).unwrap();
    assert!(doc.circles.iter().any(|c| c.vec == ["-9", "-10", "6", "4"]));
    for name in ["a.svg", "b.svg"] {
        let o = pack(&["render", "a.json", "--out", name, "--window", "-1,3.3,-0.1,2.1", "--labels"], dir.path());
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(dir.path().join("a.svg")).unwrap(), std::fs::read(dir.path().join("b.svg")).unwrap());
    let o = pack(&["render", "a.json", "--out", "c.svg", "--invert", "1.2,0.5"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(pack(&["render", "a.json", "--out", "d.svg", "--window", "2,1,0,1"], dir.path()).status.code(), Some(2));
    assert_eq!(pack(&["render", "missing.json", "--out", "d.svg"], dir.path()).status.code(), Some(2));
    assert_eq!(pack(&["generate", "3/2", "--out", "e.json"], dir.path()).status.code(), Some(2));
    assert_eq!(pack(&["generate", "--out", "e.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn glue_commands() {
    let dir = tempfile::tempdir().unwrap();
    for face in ["v1", "v2"] {
        let out = format!("g{face}.json");
        let o = pack(&["glue", "--left", "5", "--right", "7", "--face", face, "--bound", "8", "--out", &out], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let doc = PackingDocument::from_json(&std::fs::read_to_string(dir.path().join(&out)).unwrap()).unwrap();
        let desc: BlendDescriptor =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join(format!("g{face}.blend.json"))).unwrap()).unwrap();
        assert_eq!(doc.meta.blend.as_ref(), Some(&desc));
        // the descriptor regenerates the same document
        let o = pack(&["generate", "--blend", &format!("g{face}.blend.json"), "--bound", "8", "--out", "again.json"], dir.path());
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(std::fs::read(dir.path().join(&out)).unwrap(), std::fs::read(dir.path().join("again.json")).unwrap());
    }
    let o = pack(&["glue", "--left", "7", "--shift", "1/3", "--bound", "8", "--out", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("overlap"));
    assert!(!dir.path().join("bad.json").exists());
    let o = pack(&["glue", "--left", "7", "--shift", "1", "--bound", "10", "--out", "s.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("yes apollonian"));
    assert_eq!(pack(&["glue", "--left", "7", "--out", "x.json"], dir.path()).status.code(), Some(2));
    assert_eq!(pack(&["glue", "--left", "7", "--right", "40", "--out", "x.json"], dir.path()).status.code(), Some(2));
    assert_eq!(pack(&["glue", "--left", "7", "--right", "5", "--face", "v3", "--out", "x.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn catalog_path_override() {
    let dir = tempfile::tempdir().unwrap();
    let mut file: serde_json::Value = serde_json::from_str(Catalog::embedded_json()).unwrap();
    file["presets"].as_array_mut().unwrap().retain(|p| p["n"] != "5");
    let path = dir.path().join("small.json");
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let run = |args: &[&str], catalog: &Path| {
        Command::new(env!("CARGO_BIN_EXE_pack")).args(args).env("PACK_CATALOG", catalog).output().unwrap()
    };
    assert_eq!(run(&["catalog", "show", "5"], &path).status.code(), Some(2));
    assert_eq!(run(&["catalog", "show", "7"], &path).status.code(), Some(0));
    assert_eq!(stdout(&run(&["catalog", "list"], &path)).lines().count(), 26);
    assert_eq!(run(&["catalog", "list"], &dir.path().join("none.json")).status.code(), Some(2));
}
