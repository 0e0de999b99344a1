use std::fmt::Write;

use boundary_geom::FloatShape;

use crate::document::PackingDocument;
use crate::CliError;

/// Axis-aligned region of the strip picture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self, CliError> {
        let w = Window { x0, x1, y0, y1 };
        if !(x0 < x1 && y0 < y1) || [x0, x1, y0, y1].iter().any(|v| !v.is_finite()) {
            return Err(CliError::BadInput(format!("empty window {x0},{x1},{y0},{y1}")));
        }
        Ok(w)
    }

    /// `x0,x1,y0,y1`
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let v = parse_floats(text, 4)?;
        Window::new(v[0], v[1], v[2], v[3])
    }

    /// `[x0 - 1, x1 + 1] x [-0.1, 2.1]` around walls at `x0`, `x1`.
    pub fn around_walls(x0: f64, x1: f64) -> Self {
        Window {
            x0: x0 - 1.0,
            x1: x1 + 1.0,
            y0: -0.1,
            y1: 2.1,
        }
    }
}

pub fn parse_floats(text: &str, count: usize) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::BadInput(format!("expected {count} comma-separated numbers, got {text:?}")))?;
    if v.len() != count {
        return Err(CliError::BadInput(format!("expected {count} comma-separated numbers, got {text:?}")));
    }
    Ok(v)
}

/// Inversion in the circle of radius `r` about `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

impl Inversion {
    /// `x,y` or `x,y,r`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let (x, y, r) = match parse_floats(text, 3) {
            Ok(v) => (v[0], v[1], v[2]),
            Err(_) => {
                let v = parse_floats(text, 2)?;
                (v[0], v[1], 1.0)
            }
        };
        if !(r > 0.0) {
            return Err(CliError::BadInput(format!("inversion radius must be positive, got {r}")));
        }
        Ok(Inversion { x, y, r })
    }

    pub fn apply(&self, s: &FloatShape) -> Option<FloatShape> {
        let m = FloatShape::Circle { cx: self.x, cy: self.y, r: self.r }.to_inversive();
        let c = s.to_inversive();
        let k = c[0] * m[1] + c[1] * m[0] - 2.0 * c[2] * m[2] - 2.0 * c[3] * m[3];
        FloatShape::from_inversive(std::array::from_fn(|i| c[i] + k * m[i]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub window: Window,
    pub stroke: f64,
    pub fill: Option<String>,
    pub labels: bool,
    pub inversion: Option<Inversion>,
    /// Output width in pixels; the height follows the window.
    pub width: f64,
}

impl RenderSpec {
    pub fn new(window: Window) -> Self {
        RenderSpec {
            window,
            stroke: 0.004,
            fill: None,
            labels: false,
            inversion: None,
            width: 800.0,
        }
    }
}

/// `x` rounded to 12 significant digits, without exponent or negative zero.
pub fn num(x: f64) -> String {
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float");
    if r == 0.0 {
        return "0".into();
    }
    format!("{r}")
}

/// Shapes after the perspective change, with the index of their document circle.
pub fn shapes(doc: &PackingDocument, spec: &RenderSpec) -> Result<Vec<(usize, FloatShape)>, CliError> {
    let mut out = Vec::new();
    for (i, c) in doc.circles.iter().enumerate() {
        let shape = match (&c.center, &c.radius, &c.line) {
            (Some(center), Some(r), _) => FloatShape::Circle {
                cx: center.x.to_f64()?,
                cy: center.y.to_f64()?,
                r: r.to_f64()?,
            },
            (_, _, Some(l)) => {
                let (nx, ny) = (l.normal[0].to_f64()?, l.normal[1].to_f64()?);
                let len = nx.hypot(ny);
                FloatShape::Line {
                    nx: nx / len,
                    ny: ny / len,
                    offset: l.offset.to_f64()? / len,
                }
            }
            _ => return Err(CliError::BadInput(format!("circle {i} has neither center nor line"))),
        };
        let shape = match &spec.inversion {
            Some(inv) => match inv.apply(&shape) {
                Some(s) => s,
                None => continue,
            },
            None => shape,
        };
        out.push((i, shape));
    }
    Ok(out)
}

/// Whether a circle meets the window (bounding boxes overlap).
pub fn circle_visible(w: &Window, cx: f64, cy: f64, r: f64) -> bool {
    cx + r >= w.x0 && cx - r <= w.x1 && cy + r >= w.y0 && cy - r <= w.y1
}

/// The part of a line inside the window.
pub fn clip_line(w: &Window, nx: f64, ny: f64, offset: f64) -> Option<((f64, f64), (f64, f64))> {
    let p = (nx * offset, ny * offset);
    let d = (-ny, nx);
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (start, dir, a, b) in [(p.0, d.0, w.x0, w.x1), (p.1, d.1, w.y0, w.y1)] {
        if dir.abs() < 1e-15 {
            if start < a || start > b {
                return None;
            }
            continue;
        }
        let (t0, t1) = ((a - start) / dir, (b - start) / dir);
        lo = lo.max(t0.min(t1));
        hi = hi.min(t0.max(t1));
    }
    (lo <= hi).then(|| ((p.0 + lo * d.0, p.1 + lo * d.1), (p.0 + hi * d.0, p.1 + hi * d.1)))
}

/// SVG 1.1 picture of the document. The y axis points up in the strip, so
/// `y` is negated in the output.
pub fn render(doc: &PackingDocument, spec: &RenderSpec) -> Result<String, CliError> {
    let w = &spec.window;
    let (ww, wh) = (w.x1 - w.x0, w.y1 - w.y0);
    let mut body = String::new();
    let mut labels = String::new();
    for (i, s) in shapes(doc, spec)? {
        match s {
            FloatShape::Circle { cx, cy, r } => {
                if !circle_visible(w, cx, cy, r) {
                    continue;
                }
                writeln!(body, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>", num(cx), num(-cy), num(r)).unwrap();
                if spec.labels {
                    let size = (r * 0.6).min(wh / 20.0);
                    writeln!(
                        labels,
                        "<text x=\"{}\" y=\"{}\" font-size=\"{}\">{}</text>",
                        num(cx),
                        num(-cy + size / 3.0),
                        num(size),
                        label_text(doc, i)
                    )
                    .unwrap();
                }
            }
            FloatShape::Line { nx, ny, offset } => {
                if let Some((a, b)) = clip_line(w, nx, ny, offset) {
                    writeln!(
                        body,
                        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                        num(a.0),
                        num(-a.1),
                        num(b.0),
                        num(-b.1)
                    )
                    .unwrap();
                }
            }
        }
    }
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        num(spec.width),
        num(spec.width * wh / ww),
        num(w.x0),
        num(-w.y1),
        num(ww),
        num(wh)
    )
    .unwrap();
    writeln!(out, "<title>{}</title>", escape(&doc.meta.label)).unwrap();
    let fill = spec.fill.as_deref().unwrap_or("none");
    writeln!(
        out,
        "<g fill=\"{}\" stroke=\"black\" stroke-width=\"{}\">",
        escape(fill),
        num(spec.stroke)
    )
    .unwrap();
    out.push_str(&body);
    out.push_str("</g>\n");
    if spec.labels && !labels.is_empty() {
        out.push_str("<g fill=\"black\" stroke=\"none\" text-anchor=\"middle\" font-family=\"sans-serif\">\n");
        out.push_str(&labels);
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn label_text(doc: &PackingDocument, i: usize) -> String {
    let c = &doc.circles[i];
    match c.curvature.to_std() {
        Ok(k) => escape(&k.to_string()),
        Err(_) => String::new(),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
