use exact_arith::{quad_mul, quad_sign, to_float, BiQuadElem, QuadElem, Rational, Scalar};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-60i64..60, 1i64..12).prop_map(|(p, q)| Rational::new(p, q))
}

fn quad(d: u64) -> impl Strategy<Value = QuadElem> {
    (rat(), rat()).prop_map(move |(a, b)| QuadElem::new(a, b, d).unwrap())
}

fn radicand() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 6, 7, 10, 11, 13, 21, 26])
}

fn biquad() -> impl Strategy<Value = BiQuadElem> {
    (rat(), rat(), rat(), rat()).prop_map(|(a, b, c, d)| BiQuadElem::new(5, 7, [a, b, c, d]).unwrap())
}

fn ulps(a: f64, b: f64) -> u64 {
    (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
}

#[test]
fn to_float_examples() {
    assert_eq!(to_float(&Rational::new(1, 2), 53), 0.5);
    let s7 = QuadElem::new(0.into(), 1.into(), 7).unwrap();
    assert!(ulps(to_float(&s7, 53), 7f64.sqrt()) <= 1);
    let lam = QuadElem::new(9.into(), 4.into(), 5).unwrap();
    assert!(ulps(to_float(&lam, 128), 17.944271909999158) <= 1);
}

#[test]
fn to_float_survives_cancellation() {
    // (9 - 4 sqrt5) = 1/(9 + 4 sqrt5) ~ 0.0557
    let small = QuadElem::new(9.into(), (-4).into(), 5).unwrap();
    let want = 1.0 / (9.0 + 4.0 * 5f64.sqrt());
    assert!((to_float(&small, 53) - want).abs() < 1e-16);
    // 665857 - 470832 sqrt2 ~ 7.5e-13, catastrophic in naive f64
    let tiny = QuadElem::new(665857.into(), (-470832).into(), 2).unwrap();
    let exact = 1.0 / (665857.0 + 470832.0 * 2f64.sqrt());
    assert!(ulps(to_float(&tiny, 53), exact) <= 2);
}

proptest! {
    #[test]
    fn quad_field_axioms((x, y, z) in radicand().prop_flat_map(|d| (quad(d), quad(d), quad(d)))) {
        prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
        prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
        prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
        if !x.is_zero() {
            prop_assert_eq!(x.clone() * x.inv().unwrap(), QuadElem::from_int(1));
        }
    }

    #[test]
    fn quad_inverse_any_radicand(d in radicand(), x in (rat(), rat())) {
        let x = QuadElem::new(x.0, x.1, d).unwrap();
        if !x.is_zero() {
            prop_assert_eq!(quad_mul(&x, &x.inv().unwrap()).unwrap(), QuadElem::from_int(1));
        }
    }

    #[test]
    fn quad_sign_matches_float(d in radicand(), a in rat(), b in rat()) {
        let x = QuadElem::new(a, b, d).unwrap();
        let s = quad_sign(&x);
        if x.is_zero() {
            prop_assert_eq!(s, 0);
        } else {
            prop_assert_eq!(s * s, 1);
            let f = to_float(&x, 128);
            prop_assert_eq!(f.signum() as i32, s);
        }
    }

    #[test]
    fn normalization_idempotent(d in 1u64..200, a in rat(), b in rat()) {
        let x = QuadElem::new(a, b, d).unwrap();
        let y = QuadElem::new(x.a().clone(), x.b().clone(), x.d()).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn biquad_field_axioms(x in biquad(), y in biquad(), z in biquad()) {
        prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
        prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
        if !x.is_zero() {
            prop_assert_eq!(x.clone() * x.inv().unwrap(), BiQuadElem::from_int(1));
        }
    }

    #[test]
    fn biquad_sign_matches_float(x in biquad()) {
        let s = x.signum();
        if x.is_zero() {
            prop_assert_eq!(s, 0);
        } else {
            prop_assert_eq!(s * s, 1);
            prop_assert_eq!(to_float(&x, 128).signum() as i32, s);
            let c = x.coeffs();
            let approx = c[0].to_f64() + c[1].to_f64() * 5f64.sqrt() + c[2].to_f64() * 7f64.sqrt()
                + c[3].to_f64() * 35f64.sqrt();
            prop_assert!((approx - x.to_f64()).abs() <= 1e-9 * (1.0 + approx.abs()));
        }
    }

    #[test]
    fn biquad_order_is_value_order(x in biquad(), y in biquad()) {
        let ord = x.cmp(&y);
        let fx = Scalar::to_f64(&x);
        let fy = Scalar::to_f64(&y);
        if (fx - fy).abs() > 1e-9 {
            prop_assert_eq!(ord, fx.partial_cmp(&fy).unwrap());
        }
    }
}

#[test]
fn parse_surd_sums() {
    let x: BiQuadElem = "8/11*sqrt(6)-4/11*sqrt(2)".parse().unwrap();
    let want = 8.0 / 11.0 * 6f64.sqrt() - 4.0 / 11.0 * 2f64.sqrt();
    assert!((x.to_f64() - want).abs() < 1e-15);
    let y: QuadElem = "-1-2/3*sqrt(3)".parse().unwrap();
    assert_eq!(y, QuadElem::new((-1).into(), Rational::new(-2, 3), 3).unwrap());
    let z: QuadElem = "sqrt(12)".parse().unwrap();
    assert_eq!(z, QuadElem::new(0.into(), 2.into(), 3).unwrap());
    assert_eq!("7".parse::<QuadElem>().unwrap(), QuadElem::from_int(7));
    assert!("sqrt(2)+sqrt(3)".parse::<QuadElem>().is_err());
    assert!("abc".parse::<BiQuadElem>().is_err());
    let w: QuadElem = "1/2*sqrt(7)".parse().unwrap();
    let back: QuadElem = w.to_string().parse().unwrap();
    assert_eq!(w, back);
}
