/// Gram matrix of inversive coordinates `(co-curvature, curvature, b x, b y)`.
pub const STD_GRAM: [[f64; 4]; 4] = [
    [0.0, 1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, -2.0, 0.0],
    [0.0, 0.0, 0.0, -2.0],
];

fn std_dot(u: &[f64; 4], v: &[f64; 4]) -> f64 {
    u[0] * v[1] + u[1] * v[0] - 2.0 * u[2] * v[2] - 2.0 * u[3] * v[3]
}

/// Floating-point circle or line, for drawing and perspective changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FloatShape {
    Circle { cx: f64, cy: f64, r: f64 },
    /// `nx x + ny y = offset`, unit normal.
    Line { nx: f64, ny: f64, offset: f64 },
}

impl FloatShape {
    /// From inversive coordinates of any negative norm. Curvatures below `eps`
    /// relative to the vector size are treated as lines.
    pub fn from_inversive(c: [f64; 4]) -> Option<FloatShape> {
        let q = std_dot(&c, &c);
        if q >= 0.0 {
            return None;
        }
        let s = (2.0 / -q).sqrt();
        let c = c.map(|x| x * s);
        let size = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if c[1].abs() <= 1e-12 * size.max(1.0) {
            let len = c[2].hypot(c[3]);
            return Some(FloatShape::Line {
                nx: c[2] / len,
                ny: c[3] / len,
                offset: c[0] / 2.0 / len,
            });
        }
        Some(FloatShape::Circle {
            cx: c[2] / c[1],
            cy: c[3] / c[1],
            r: 1.0 / c[1].abs(),
        })
    }

    /// Norm `-2` inversive coordinates, oriented so circles have positive curvature.
    pub fn to_inversive(&self) -> [f64; 4] {
        match *self {
            FloatShape::Circle { cx, cy, r } => {
                let b = 1.0 / r;
                [b * (cx * cx + cy * cy) - r, b, b * cx, b * cy]
            }
            FloatShape::Line { nx, ny, offset } => [2.0 * offset, 0.0, nx, ny],
        }
    }

    /// Image under inversion in the unit circle centered at `(px, py)`.
    pub fn invert_in(&self, px: f64, py: f64) -> Option<FloatShape> {
        let m = FloatShape::Circle { cx: px, cy: py, r: 1.0 }.to_inversive();
        let c = self.to_inversive();
        let k = std_dot(&c, &m);
        let img: [f64; 4] = std::array::from_fn(|i| c[i] + k * m[i]);
        FloatShape::from_inversive(img)
    }
}

/// Inversion of a point in the unit circle centered at `(px, py)`; `None` at the center.
pub fn invert_point(z: (f64, f64), px: f64, py: f64) -> Option<(f64, f64)> {
    let (dx, dy) = (z.0 - px, z.1 - py);
    let d2 = dx * dx + dy * dy;
    (d2 > 0.0).then(|| (px + dx / d2, py + dy / d2))
}
