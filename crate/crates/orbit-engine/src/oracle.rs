use exact_arith::BigInt;
use lorentz_core::GramForm;

/// Exhaustive search for norm -2 vectors of `Lambda_n` with `0 <= v.E <= 4 bound`
/// and center in the window `0 <= x <= 2 sqrt n`, oriented by `v.D > 0`.
///
/// The coefficient box is derived from the inverse of the inversive chart, so
/// every circle meeting those constraints lies inside it. Lines within the box
/// are returned too. Independent of the orbit machinery.
pub fn direct_search(n: i64, bound: i64) -> Vec<[BigInt; 4]> {
    let form = GramForm::integer(n);
    let j = form.matrix_i64();
    let dot = |u: &[i64; 4], v: &[i64; 4]| -> i64 { (0..4).map(|a| (0..4).map(|b| u[a] * j[a][b] * v[b]).sum::<i64>()).sum() };
    let big_e = [1, 1, 0, 0];
    let d = [1, 1, 1, 1];
    let v1 = [n, n, 1, -1];
    let a = 4 * n - 2;
    let k = box_radius(n, bound);
    let mut out = Vec::new();
    for x1 in -k..=k {
        for x2 in -k..=k {
            for x3 in -k..=k {
                let q3 = dot(&[x1, x2, x3, 0], &[x1, x2, x3, 0]);
                let l = 2 * x1 + 2 * x2 + a * x3;
                // -2 x4^2 + 2 l x4 + q3 = -2
                if (q3 + 2) % 2 != 0 {
                    continue;
                }
                let disc = l * l + 2 * (q3 + 2);
                if disc < 0 {
                    continue;
                }
                let s = disc.isqrt();
                if s * s != disc {
                    continue;
                }
                let mut roots = vec![l + s];
                if s != 0 {
                    roots.push(l - s);
                }
                for twice in roots {
                    if twice % 2 != 0 {
                        continue;
                    }
                    let mut v = [x1, x2, x3, twice / 2];
                    if v[3].abs() > k {
                        continue;
                    }
                    let dd = dot(&v, &d);
                    if dd < 0 || (dd == 0 && v.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0)) {
                        v = v.map(|c| -c);
                    }
                    let h = dot(&v, &big_e);
                    if h < 0 || h > 4 * bound {
                        continue;
                    }
                    if h > 0 {
                        let t = dot(&v, &v1);
                        if t < 0 || t > 2 * n * h {
                            continue;
                        }
                    }
                    out.push(v.map(BigInt::from));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn box_radius(n: i64, bound: i64) -> i64 {
    let r = (n as f64).sqrt();
    let b = bound as f64;
    // columns: images of e1..e4 in (co-curvature, curvature, curvature x, curvature y)
    let m = [
        [0.0, 4.0, 0.0, 4.0 * n as f64],
        [0.0, 0.0, 1.0, 1.0],
        [0.0, 0.0, 0.0, 2.0 * r],
        [-1.0, 1.0, 1.0, 1.0],
    ];
    let inv = invert4(m);
    // curvature >= 1/2, center in [0, 2 sqrt n] x [0, 2]
    let cmax = [b * (4.0 * n as f64 + 4.0) + 2.0, b, 2.0 * r * b, 2.0 * b];
    let k = (0..4)
        .map(|i| (0..4).map(|c| inv[i][c].abs() * cmax[c]).sum::<f64>())
        .fold(0.0, f64::max);
    k.ceil() as i64 + 2
}

fn invert4(m: [[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut a = [[0.0; 8]; 4];
    for i in 0..4 {
        a[i][..4].copy_from_slice(&m[i]);
        a[i][4 + i] = 1.0;
    }
    for c in 0..4 {
        let p = (c..4).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).expect("rows");
        a.swap(c, p);
        let d = a[c][c];
        for x in a[c].iter_mut() {
            *x /= d;
        }
        for r in 0..4 {
            if r != c {
                let f = a[r][c];
                let pivot = a[c];
                for (x, y) in a[r].iter_mut().zip(pivot) {
                    *x -= f * y;
                }
            }
        }
    }
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][4 + j]))
}

/// Candidates whose product with every closure vector (other than itself) is at least 2.
pub fn admissible(n: i64, candidates: &[[BigInt; 4]], closure: &[[BigInt; 4]]) -> Vec<[BigInt; 4]> {
    let form = GramForm::integer(n);
    let two = BigInt::from(2);
    candidates
        .iter()
        .filter(|v| closure.iter().all(|w| w == *v || form.dot_int(v, w) >= two))
        .cloned()
        .collect()
}
