//! Fixed-size exact linear algebra over any [`Scalar`].

use exact_arith::{Field, Scalar};

pub type Vec4<T> = [T; 4];
pub type Mat4<T> = [[T; 4]; 4];

pub fn vec_from<T: Scalar>(v: [i64; 4]) -> Vec4<T> {
    v.map(T::from_i64)
}

pub fn mat_from<T: Scalar>(m: [[i64; 4]; 4]) -> Mat4<T> {
    m.map(|r| r.map(T::from_i64))
}

pub fn identity<T: Scalar>() -> Mat4<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { T::one() } else { T::zero() }))
}

pub fn dot4<T: Scalar>(u: &Vec4<T>, v: &Vec4<T>) -> T {
    let mut s = T::zero();
    for i in 0..4 {
        s = s + u[i].clone() * v[i].clone();
    }
    s
}

/// `u^T J v`.
pub fn bilinear<T: Scalar>(j: &Mat4<T>, u: &Vec4<T>, v: &Vec4<T>) -> T {
    dot4(u, &mat_vec(j, v))
}

pub fn mat_vec<T: Scalar>(m: &Mat4<T>, v: &Vec4<T>) -> Vec4<T> {
    std::array::from_fn(|i| dot4(&m[i], v))
}

pub fn mat_mul<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut s = T::zero();
            for k in 0..4 {
                s = s + a[i][k].clone() * b[k][j].clone();
            }
            s
        })
    })
}

pub fn transpose<T: Scalar>(m: &Mat4<T>) -> Mat4<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].clone()))
}

pub fn add<T: Scalar>(u: &Vec4<T>, v: &Vec4<T>) -> Vec4<T> {
    std::array::from_fn(|i| u[i].clone() + v[i].clone())
}

pub fn sub<T: Scalar>(u: &Vec4<T>, v: &Vec4<T>) -> Vec4<T> {
    std::array::from_fn(|i| u[i].clone() - v[i].clone())
}

pub fn scale<T: Scalar>(c: &T, v: &Vec4<T>) -> Vec4<T> {
    std::array::from_fn(|i| c.clone() * v[i].clone())
}

pub fn neg<T: Scalar>(v: &Vec4<T>) -> Vec4<T> {
    std::array::from_fn(|i| -v[i].clone())
}

/// Outer product `u (J w)^T`, the building block of reflections and rotations.
pub fn outer_j<T: Scalar>(u: &Vec4<T>, j: &Mat4<T>, w: &Vec4<T>) -> Mat4<T> {
    let jw = mat_vec(j, w);
    std::array::from_fn(|r| std::array::from_fn(|c| u[r].clone() * jw[c].clone()))
}

pub fn mat_add<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].clone() + b[i][j].clone()))
}

pub fn mat_sub<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].clone() - b[i][j].clone()))
}

pub fn mat_scale<T: Scalar>(c: &T, m: &Mat4<T>) -> Mat4<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| c.clone() * m[i][j].clone()))
}

pub fn map_mat<T, U>(m: &Mat4<T>, f: impl Fn(&T) -> U) -> Mat4<U> {
    std::array::from_fn(|i| std::array::from_fn(|j| f(&m[i][j])))
}

pub fn map_vec<T, U>(v: &Vec4<T>, f: impl Fn(&T) -> U) -> Vec4<U> {
    std::array::from_fn(|i| f(&v[i]))
}

/// Determinant by cofactor expansion (exact, division free).
pub fn det<T: Scalar>(m: &Mat4<T>) -> T {
    fn det3<T: Scalar>(m: &Mat4<T>, rows: [usize; 3], cols: [usize; 3]) -> T {
        let e = |i: usize, j: usize| m[rows[i]][cols[j]].clone();
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    }
    let mut s = T::zero();
    for c in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&k| k != c).collect();
        let minor = det3(m, [1, 2, 3], [cols[0], cols[1], cols[2]]);
        let term = m[0][c].clone() * minor;
        s = if c % 2 == 0 { s + term } else { s - term };
    }
    s
}

/// Inverse by Gauss-Jordan elimination over a field.
pub fn inverse<T: Field>(m: &Mat4<T>) -> Option<Mat4<T>> {
    let mut a: Vec<Vec<T>> = m.iter().map(|r| r.to_vec()).collect();
    let mut inv: Vec<Vec<T>> = identity::<T>().iter().map(|r| r.to_vec()).collect();
    for col in 0..4 {
        let piv = (col..4).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].inv()?;
        for k in 0..4 {
            a[col][k] = a[col][k].clone() * p.clone();
            inv[col][k] = inv[col][k].clone() * p.clone();
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..4 {
                    a[r][k] = a[r][k].clone() - f.clone() * a[col][k].clone();
                    inv[r][k] = inv[r][k].clone() - f.clone() * inv[col][k].clone();
                }
            }
        }
    }
    Some(std::array::from_fn(|i| std::array::from_fn(|j| inv[i][j].clone())))
}

/// Coefficients `[c0, c1, c2, c3, 1]` of `det(x I - M) = x^4 + c3 x^3 + ...`,
/// via Faddeev-LeVerrier over a field.
pub fn charpoly<T: Field>(m: &Mat4<T>) -> [T; 5] {
    let mut coeffs: [T; 5] = std::array::from_fn(|_| T::zero());
    coeffs[4] = T::one();
    let mut mk = identity::<T>();
    let mut c = T::one();
    for k in 1..=4 {
        let am = mat_mul(m, &mk);
        let mut tr = T::zero();
        for i in 0..4 {
            tr = tr + am[i][i].clone();
        }
        c = -(tr / T::from_i64(k as i64));
        coeffs[4 - k] = c.clone();
        mk = mat_add(&am, &mat_scale(&c, &identity()));
    }
    let _ = c;
    coeffs
}


/// Basis of the null space of `m` (row reduction over a field).
pub fn kernel<T: Field>(m: &Mat4<T>) -> Vec<Vec4<T>> {
    let mut a: Vec<Vec<T>> = m.iter().map(|r| r.to_vec()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..4 {
        let Some(p) = (row..4).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].inv().expect("nonzero pivot");
        for k in 0..4 {
            a[row][k] = a[row][k].clone() * inv.clone();
        }
        for r in 0..4 {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..4 {
                    a[r][k] = a[r][k].clone() - f.clone() * a[row][k].clone();
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..4).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v: Vec4<T> = std::array::from_fn(|_| T::zero());
            v[f] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect()
}
