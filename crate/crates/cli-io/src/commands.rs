use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use exact_arith::{BigInt, Rational};
use glue_blend::{
    check_compatibility, registry, BlendDescriptor, BlendError, BlendedGroup, Face, Number, SampleOutcome,
};
use isometry_catalog::{verify_symmetry, CData, Catalog, GeneratorPreset, IsometryKind, Provenance};
use lorentz_core::{mod8_obstruction, represents_norm, GramForm};
use orbit_engine::{
    check_apollonian_property, check_packing_property, enumerate_orbit, transitivity_check, CircleStatus, OrbitConfig,
    OrbitGroup,
};
use serde_json::json;

use crate::document::{blend_document, lattice_document, PackingDocument};
use crate::svg::{render, Inversion, RenderSpec, Window};
use crate::CliError;

type Out<'a> = &'a mut dyn Write;

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|e| CliError::Io("stdout".into(), e))?
    };
}

fn parse_rational(text: &str, what: &str) -> Result<Rational, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::BadInput(format!("{what} must be an integer or p/q, got {text:?}")))
}

fn preset(cat: &Catalog, n: &Rational) -> Result<GeneratorPreset, CliError> {
    if cat.record(n).is_none() {
        return Err(CliError::BadInput(format!("no catalog entry for n = {n}")));
    }
    cat.preset(n).map_err(|e| CliError::BadInput(format!("catalog entry n = {n}: {e}")))
}

fn blend_err(e: BlendError) -> CliError {
    match e {
        BlendError::Orbit(_) | BlendError::Rejected(_) => CliError::Failed(e.to_string()),
        other => CliError::BadInput(other.to_string()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))
}

fn vec_text<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn cdata_text(c: &CData) -> String {
    match c {
        CData::Circle { center, radius } => format!("circle center ({}, {}) radius {radius}", center[0], center[1]),
        CData::Line { axis, at } => format!("line {axis} = {at}"),
        CData::Points { points } => {
            let p: Vec<String> = points.iter().map(|p| format!("({}, {})", p[0], p[1])).collect();
            format!("points {}", p.join(", "))
        }
        CData::Glide => "glide".into(),
    }
}

fn provenance_text(p: &Provenance) -> String {
    match p {
        Provenance::Common => "common".into(),
        Provenance::Table { row, .. } => format!("table row {}", row + 1),
        Provenance::Formula(f) => format!("formula {f}"),
    }
}

pub fn cmd_catalog_list(cat: &Catalog, json: bool, out: Out) -> Result<i32, CliError> {
    let mut rows = Vec::new();
    for rec in cat.records() {
        let n = parse_rational(&rec.n, "catalog n")?;
        let p = preset(cat, &n)?;
        let names: Vec<String> = p.generators.iter().map(|g| g.name.clone()).collect();
        rows.push((rec.n.clone(), names, p.notes.clone()));
    }
    if json {
        let v: Vec<_> = rows
            .iter()
            .map(|(n, names, notes)| json!({"n": n, "generators": names, "notes": notes}))
            .collect();
        say!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
        return Ok(0);
    }
    for (n, names, notes) in rows {
        if names.is_empty() {
            say!(out, "n={n:<4} form only: {notes}");
        } else {
            say!(out, "n={n:<4} {} generators: {}", names.len(), names.join(" "));
        }
    }
    Ok(0)
}

pub fn cmd_catalog_show(cat: &Catalog, n: &str, json: bool, out: Out) -> Result<i32, CliError> {
    let n = parse_rational(n, "n")?;
    let p = preset(cat, &n)?;
    let gram = p.form.matrix::<Rational>();
    let mut failed = false;
    let mut gens = Vec::new();
    let mut text = Vec::new();
    text.push(format!("n = {}", p.n));
    text.push("Gram matrix:".into());
    for row in &gram {
        text.push(format!("  {}", vec_text(row)));
    }
    if !p.notes.is_empty() {
        text.push(format!("notes: {}", p.notes));
    }
    for g in &p.generators {
        let rep = verify_symmetry(&g.iso, &p.form);
        failed |= !rep.all_ok();
        let mark = |ok: bool| if ok { "ok" } else { "FAILED" };
        let type_tag = g.type_tag.map(|t| format!("type {t}")).unwrap_or_else(|| "untyped".into());
        text.push(format!("{}  {}  {}  ({})", g.name, g.iso.kind.tag(), type_tag, provenance_text(&g.provenance)));
        for (name, v) in &g.data {
            text.push(format!("  {name} {}", vec_text(v)));
        }
        if let Some(c) = &g.cdata {
            text.push(format!("  plane: {}", cdata_text(c)));
        }
        text.push(format!(
            "  symmetry: form {}, lattice {}, orthochronous {}",
            mark(rep.form_ok),
            mark(rep.lattice_ok),
            mark(rep.orthochronous_ok)
        ));
        let data: serde_json::Map<String, serde_json::Value> = g
            .data
            .iter()
            .map(|(k, v)| (k.clone(), json!(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())))
            .collect();
        gens.push(json!({
            "name": g.name,
            "kind": g.iso.kind.tag(),
            "type": g.type_tag,
            "provenance": provenance_text(&g.provenance),
            "data": data,
            "cdata": g.cdata,
            "symmetry": {"form": rep.form_ok, "lattice": rep.lattice_ok, "orthochronous": rep.orthochronous_ok},
        }));
    }
    let mut glide = None;
    if p.generators.iter().any(|g| matches!(g.iso.kind, IsometryKind::Glide)) {
        let extra = cat.glide_extra();
        text.push(format!("glide: S = {} T has multiplier {}", extra.reflection, extra.lambda));
        let mut g = json!({"reflection": extra.reflection, "lambda": extra.lambda});
        if let Ok((sigma, axis)) = boundary_geom::sigma_n21() {
            if let (Ok(a), Ok(b)) = (axis.frame.point(&axis.attracting), axis.frame.point(&axis.repelling)) {
                text.push(format!("  attracting point {} + i ({})", a.x, a.y));
                text.push(format!("  repelling point {} + i ({})", b.x, b.y));
                text.push(format!("  boundary map {:?}", sigma.orientation));
                g["attracting"] = json!([a.x.to_string(), a.y.to_string()]);
                g["repelling"] = json!([b.x.to_string(), b.y.to_string()]);
            }
        }
        glide = Some(g);
    }
    for d in &p.discrepancies {
        text.push(format!("note {}: {}", d.name, d.note));
    }
    if json {
        let doc = json!({
            "n": p.n.to_string(),
            "gram": gram.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "generators": gens,
            "glide": glide,
            "notes": p.notes,
            "discrepancies": p.discrepancies.iter().map(|d| json!({"name": d.name, "note": d.note})).collect::<Vec<_>>(),
        });
        say!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        for line in text {
            say!(out, "{line}");
        }
    }
    Ok(if failed { 1 } else { 0 })
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Runs every check on one catalog group; non-integer `n` only gets the
/// norm -4 search, since no packing exists there.
pub fn cmd_verify(cat: &Catalog, n: &str, bound: Option<&str>, out: Out) -> Result<i32, CliError> {
    let n = parse_rational(n, "n")?;
    let bound = match bound {
        Some(b) => parse_rational(b, "bound")?,
        None => Rational::from_int(50),
    };
    if bound.signum() <= 0 {
        return Err(CliError::BadInput(format!("bound must be positive, got {bound}")));
    }
    if !n.is_integer() {
        let form = GramForm::new(n.clone()).map_err(|e| CliError::BadInput(e.to_string()))?;
        say!(out, "n = {n}: the mod 8 argument needs integer n");
        return Ok(match represents_norm(&form, -4, 10) {
            Some(w) => {
                say!(out, "FAIL norm -4: lattice vector {} has norm -4", vec_text(&w.coords));
                say!(out, "FAIL packing: a norm -4 vector rules out a packing for n = {n}");
                1
            }
            None => {
                say!(out, "PASS norm -4: no vector within coefficient bound 10");
                say!(out, "FAIL packing: no generators for n = {n}");
                1
            }
        });
    }
    let p = preset(cat, &n)?;
    if p.generators.is_empty() {
        return Err(CliError::BadInput(format!("catalog entry n = {n} has no generators")));
    }
    let mut ok = true;
    let mod8 = mod8_obstruction(&p.form).map_err(|e| CliError::BadInput(e.to_string()))?;
    ok &= mod8;
    say!(out, "{} mod 8: no vector has norm -4 modulo 8", mark(mod8));
    let mut sym_ok = true;
    for g in &p.generators {
        let rep = verify_symmetry(&g.iso, &p.form);
        sym_ok &= rep.all_ok();
        say!(
            out,
            "{} symmetry {} ({}): form {}, lattice {}, orthochronous {}",
            mark(rep.all_ok()),
            g.name,
            g.iso.kind.tag(),
            rep.form_ok,
            rep.lattice_ok,
            rep.orthochronous_ok
        );
    }
    ok &= sym_ok;
    let group = Arc::new(OrbitGroup::<BigInt>::from_preset(&p).map_err(|e| CliError::Failed(e.to_string()))?);
    let packing = enumerate_orbit(&group, &OrbitConfig::new(bound.clone())).map_err(|e| CliError::Failed(e.to_string()))?;
    ok &= packing.complete;
    say!(
        out,
        "{} orbit: {} circles to curvature {bound}{}",
        mark(packing.complete),
        packing.len(),
        if packing.complete { "" } else { " (incomplete)" }
    );
    let rep = check_packing_property(&packing);
    ok &= rep.ok();
    match rep.violations.first() {
        None => say!(out, "PASS packing: {} pairs, all products even integers >= 2", rep.pairs),
        Some(v) => say!(out, "FAIL packing: product {} between members {} and {}", v.product, v.a.member, v.b.member),
    }
    let delta = BigInt::from(group.delta());
    let zero = BigInt::from(0);
    let bad = packing.vectors().find(|v| {
        let h = group.height(v);
        h < zero || &h % &delta != zero
    });
    ok &= bad.is_none();
    match bad {
        None => say!(out, "PASS integer curvature: every curvature is a non-negative integer"),
        Some(v) => say!(out, "FAIL integer curvature: {}", vec_text(v)),
    }
    let transitive = transitivity_check(&packing);
    ok &= transitive;
    say!(out, "{} transitivity: every norm -2 vector found folds into the orbit", mark(transitive));
    say!(out, "{}", if ok { format!("n = {n}: all checks passed") } else { format!("n = {n}: verification failed") });
    Ok(if ok { 0 } else { 1 })
}

#[derive(Debug, Clone)]
pub enum GenerateSource {
    Lattice(String),
    Blend(PathBuf),
}

fn build_blend(cat: &Catalog, desc: &BlendDescriptor) -> Result<BlendedGroup, CliError> {
    registry().build(cat, desc).map_err(blend_err)
}

fn blend_packing(desc: &BlendDescriptor, group: &BlendedGroup, bound: &Rational) -> Result<PackingDocument, CliError> {
    let orbit_group = group.to_group().map_err(blend_err)?;
    let packing = enumerate_orbit(&orbit_group, &OrbitConfig::new(bound.clone())).map_err(|e| CliError::Failed(e.to_string()))?;
    Ok(blend_document(desc, group, &packing))
}

pub fn cmd_generate(cat: &Catalog, source: &GenerateSource, bound: &str, path: &Path, out: Out) -> Result<i32, CliError> {
    let bound = parse_rational(bound, "bound")?;
    if bound.signum() <= 0 {
        return Err(CliError::BadInput(format!("bound must be positive, got {bound}")));
    }
    let doc = match source {
        GenerateSource::Lattice(n) => {
            let n = parse_rational(n, "n")?;
            let p = preset(cat, &n)?;
            if p.generators.is_empty() {
                return Err(CliError::BadInput(format!("catalog entry n = {n} has no generators")));
            }
            let group = Arc::new(OrbitGroup::<BigInt>::from_preset(&p).map_err(|e| CliError::Failed(e.to_string()))?);
            let packing = enumerate_orbit(&group, &OrbitConfig::new(bound.clone())).map_err(|e| CliError::Failed(e.to_string()))?;
            lattice_document(&n, &packing)?
        }
        GenerateSource::Blend(file) => {
            let desc: BlendDescriptor = serde_json::from_str(&read_file(file)?)
                .map_err(|e| CliError::BadInput(format!("{}: {e}", file.display())))?;
            let group = build_blend(cat, &desc)?;
            blend_packing(&desc, &group, &bound)?
        }
    };
    write_file(path, &doc.to_json())?;
    say!(
        out,
        "wrote {} circles to {}{}",
        doc.circles.len(),
        path.display(),
        if doc.meta.complete { "" } else { " (orbit incomplete)" }
    );
    Ok(0)
}

#[derive(Debug, Clone, Default)]
pub struct RenderArgs {
    pub doc: PathBuf,
    pub window: Option<String>,
    pub out: PathBuf,
    pub invert: Option<String>,
    pub labels: bool,
    pub stroke: Option<f64>,
    pub fill: Option<String>,
    pub width: Option<f64>,
}

pub fn cmd_render(args: &RenderArgs, out: Out) -> Result<i32, CliError> {
    let doc = PackingDocument::from_json(&read_file(&args.doc)?)?;
    let window = match &args.window {
        Some(w) => Window::parse(w)?,
        None => Window::around_walls(doc.meta.walls[0].to_f64()?, doc.meta.walls[1].to_f64()?),
    };
    let mut spec = RenderSpec::new(window);
    spec.labels = args.labels;
    spec.fill = args.fill.clone();
    if let Some(s) = args.stroke {
        if !(s > 0.0) {
            return Err(CliError::BadInput(format!("stroke must be positive, got {s}")));
        }
        spec.stroke = s;
    }
    if let Some(w) = args.width {
        if !(w > 0.0) {
            return Err(CliError::BadInput(format!("width must be positive, got {w}")));
        }
        spec.width = w;
    }
    spec.inversion = args.invert.as_deref().map(Inversion::parse).transpose()?;
    let svg = render(&doc, &spec)?;
    write_file(&args.out, &svg)?;
    let shapes = svg.matches("<circle ").count() + svg.matches("<line ").count();
    say!(out, "wrote {shapes} shapes to {}", args.out.display());
    Ok(0)
}

#[derive(Debug, Clone)]
pub struct GlueArgs {
    pub left: String,
    pub right: Option<String>,
    pub face: Option<Face>,
    pub shift: Option<String>,
    pub bound: String,
    pub out: PathBuf,
    /// Where the descriptor goes; defaults to the output path with `.blend.json`.
    pub descriptor: Option<PathBuf>,
}

pub fn descriptor_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "packing".into());
    out.with_file_name(format!("{stem}.blend.json"))
}

fn number(text: &str, what: &str) -> Result<Number, CliError> {
    Ok(Number::from(&parse_rational(text, what)?))
}

/// Builds a glued or shifted blend, checks it, and writes the descriptor and
/// the packing document when it passes.
pub fn cmd_glue(cat: &Catalog, args: &GlueArgs, out: Out) -> Result<i32, CliError> {
    let bound = parse_rational(&args.bound, "bound")?;
    if bound.signum() <= 0 {
        return Err(CliError::BadInput(format!("bound must be positive, got {bound}")));
    }
    let desc = match (&args.right, &args.shift) {
        (Some(_), Some(_)) => return Err(CliError::BadInput("give --right or --shift, not both".into())),
        (None, None) => return Err(CliError::BadInput("glue needs --right (with --face) or --shift".into())),
        (Some(r), None) => BlendDescriptor {
            face: Some(args.face.unwrap_or(Face::V1)),
            right: Some(number(r, "right")?),
            ..BlendDescriptor::preset(0)
        },
        (None, Some(s)) => {
            if args.face.is_some() {
                return Err(CliError::BadInput("--face applies to gluing, not to --shift".into()));
            }
            BlendDescriptor {
                offset: Some(number(s, "shift")?),
                ..BlendDescriptor::preset(0)
            }
        }
    };
    let desc = BlendDescriptor {
        left: number(&args.left, "left")?,
        ..desc
    };
    // the presets must verify before they are combined
    let mut names = vec![&args.left];
    names.extend(args.right.as_ref());
    for n in names {
        let n = parse_rational(n, "n")?;
        let p = preset(cat, &n)?;
        if p.generators.is_empty() {
            return Err(CliError::BadInput(format!("catalog entry n = {n} has no generators")));
        }
        if let Some(g) = p.generators.iter().find(|g| !verify_symmetry(&g.iso, &p.form).all_ok()) {
            say!(out, "FAIL preset n = {n}: {} is not a symmetry", g.name);
            return Ok(1);
        }
    }
    let group = build_blend(cat, &desc)?;
    say!(out, "{} ({} generators)", group.label, group.generators.len());
    let report = check_compatibility(&group, &bound, 20_000);
    say!(
        out,
        "{} form: {}",
        mark(report.form_preserved()),
        if report.form_preserved() { "every generator preserves the form".to_string() } else { report.nonpreserving.join(", ") }
    );
    say!(out, "{} faces: {} checked against the new walls", mark(report.angle_issues.is_empty()), report.faces_checked);
    for issue in &report.angle_issues {
        say!(out, "  {} meets the {} with cos {}", issue.generator, issue.wall, issue.cos);
    }
    match &report.sample {
        SampleOutcome::Packing { members, pairs, min_product, .. } => {
            say!(out, "PASS sample: {members} circles, {pairs} pairs, least product {min_product}")
        }
        SampleOutcome::Overlap { a, b, product, members } => {
            say!(out, "FAIL sample: {a} and {b} overlap (product {product}) among {members} circles")
        }
        SampleOutcome::Failed(e) => say!(out, "FAIL sample: {e}"),
    }
    if !report.ok() {
        say!(out, "incompatible: nothing written");
        return Ok(1);
    }
    let orbit_group = group.to_group().map_err(blend_err)?;
    let packing = enumerate_orbit(&orbit_group, &OrbitConfig::new(bound.clone())).map_err(|e| CliError::Failed(e.to_string()))?;
    let apollonian = check_apollonian_property(&packing);
    say!(
        out,
        "{} apollonian: {} of {} circles in a tangent quadruple, {} near the bound",
        if apollonian.ok() { "yes" } else { "no" },
        apollonian.verified(),
        packing.len(),
        apollonian.count(CircleStatus::NearBoundary)
    );
    let doc = blend_document(&desc, &group, &packing);
    let desc_path = args.descriptor.clone().unwrap_or_else(|| descriptor_path(&args.out));
    let mut desc_text = serde_json::to_string_pretty(&desc).expect("json");
    desc_text.push('\n');
    write_file(&desc_path, &desc_text)?;
    write_file(&args.out, &doc.to_json())?;
    say!(out, "wrote {} and {} ({} circles)", desc_path.display(), args.out.display(), doc.circles.len());
    Ok(0)
}
