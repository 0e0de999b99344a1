use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Splits `n > 0` as `k^2 * r` with `r` square-free; returns `(k, r)`.
pub fn squarefree_split(n: u64) -> (u64, u64) {
    assert!(n > 0, "squarefree_split of zero");
    let mut k = 1u64;
    let mut r = 1u64;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            k *= p;
        }
        if e % 2 == 1 {
            r *= p;
        }
        p += 1;
    }
    (k, r * m)
}

/// Floor of the square root of a non-negative big integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative");
    if n.is_zero() {
        return BigInt::zero();
    }
    let mut x = n.sqrt();
    // BigInt::sqrt is already the floor, this just guards the contract.
    while &x * &x > *n {
        x -= BigInt::one();
    }
    while (&x + 1) * (&x + 1) <= *n {
        x += BigInt::one();
    }
    x
}
