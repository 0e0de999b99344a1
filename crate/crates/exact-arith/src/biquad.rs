use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::ArithError;
use crate::float::{to_float, SurdTerms};
use crate::quad::{quad_sign, QuadElem};
use crate::rational::Rational;
use crate::squarefree::squarefree_split;

/// Element of `Q(sqrt d1, sqrt d2)`, value `c0 + c1 sqrt d1 + c2 sqrt d2 + c3 sqrt(d1 d2)`.
///
/// Stored as a sparse map from square-free radicand to nonzero coefficient, which
/// is canonical: equal values have equal maps. [`BiQuadElem::bases`] and
/// [`BiQuadElem::coeffs`] recover the `(d1, d2)` / `c0..c3` view. Elements whose
/// radicands span only one quadratic field report bases `(1, d)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiQuadElem {
    terms: BTreeMap<u64, Rational>,
}

fn sf_mul(r: u64, s: u64) -> (u64, u64) {
    let (g, rr, ss) = (gcd(r, s), r, s);
    // r*s = g^2 * (r/g)*(s/g) and (r/g)(s/g) is square-free for square-free r, s
    (g, (rr / g) * (ss / g))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Closure of a radicand set under `r, s -> sf(r s)`.
fn span(keys: impl IntoIterator<Item = u64>) -> BTreeSet<u64> {
    let mut set: BTreeSet<u64> = BTreeSet::from([1]);
    let mut todo: Vec<u64> = keys.into_iter().collect();
    while let Some(k) = todo.pop() {
        if set.contains(&k) {
            continue;
        }
        let old: Vec<u64> = set.iter().copied().collect();
        set.insert(k);
        for o in old {
            let (_, t) = sf_mul(o, k);
            if !set.contains(&t) {
                todo.push(t);
            }
        }
        if set.len() > 4 {
            break;
        }
    }
    set
}

impl BiQuadElem {
    pub fn new(d1: u64, d2: u64, c: [Rational; 4]) -> Result<Self, ArithError> {
        if d1 == 0 || d2 == 0 {
            return Err(ArithError::BadRadicand(0));
        }
        let [c0, c1, c2, c3] = c;
        let mut x = BiQuadElem::default();
        x.push(c0, 1);
        x.push(c1, d1);
        x.push(c2, d2);
        x.push(c3, d1 * d2);
        x.check_span()?;
        Ok(x)
    }

    pub fn rational(r: Rational) -> Self {
        let mut x = BiQuadElem::default();
        x.push(r, 1);
        x
    }

    pub fn from_int(v: i64) -> Self {
        BiQuadElem::rational(Rational::from_int(v))
    }

    pub fn from_quad(q: &QuadElem) -> Self {
        let mut x = BiQuadElem::rational(q.a().clone());
        x.push(q.b().clone(), q.d());
        x
    }

    pub fn sqrt_of(q: &Rational) -> Result<Self, ArithError> {
        Ok(BiQuadElem::from_quad(&QuadElem::sqrt_of(q)?))
    }

    // adds c*sqrt(r) for arbitrary r > 0
    fn push(&mut self, c: Rational, r: u64) {
        if c.is_zero() {
            return;
        }
        let (k, s) = squarefree_split(r);
        let c = c * Rational::from_int(k);
        let slot = self.terms.entry(s).or_insert_with(Rational::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&s);
        }
    }

    fn check_span(&self) -> Result<(), ArithError> {
        let s = span(self.terms.keys().copied());
        if s.len() > 4 {
            let v: Vec<u64> = s.into_iter().filter(|&r| r != 1).collect();
            return Err(ArithError::IncompatibleField(v[0], v[1]));
        }
        Ok(())
    }

    fn compatible(&self, other: &Self) -> Result<(), ArithError> {
        let s = span(self.terms.keys().chain(other.terms.keys()).copied());
        if s.len() > 4 {
            let a = self.terms.keys().copied().find(|&r| r != 1).unwrap_or(1);
            let b = other
                .terms
                .keys()
                .copied()
                .find(|&r| r != 1 && !self.terms.contains_key(&r))
                .unwrap_or(1);
            return Err(ArithError::IncompatibleField(a, b));
        }
        Ok(())
    }

    /// The pair of radicands generating the smallest field holding this value.
    pub fn bases(&self) -> (u64, u64) {
        let s: Vec<u64> = span(self.terms.keys().copied())
            .into_iter()
            .filter(|&r| r != 1)
            .collect();
        match s.len() {
            0 => (1, 1),
            1 => (1, s[0]),
            _ => (s[0], s[1]),
        }
    }

    /// Coefficients `c0..c3` against the basis `1, sqrt d1, sqrt d2, sqrt(d1 d2)`.
    pub fn coeffs(&self) -> [Rational; 4] {
        let (d1, d2) = self.bases();
        self.coeffs_in(d1, d2)
    }

    /// Coefficients against an explicit basis containing this value's field.
    pub fn coeffs_in(&self, d1: u64, d2: u64) -> [Rational; 4] {
        let mut c = [
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        ];
        let (k3, d3) = squarefree_split(d1 * d2);
        for (r, v) in &self.terms {
            if *r == 1 {
                c[0] = &c[0] + v;
            } else if *r == d1 {
                c[1] = &c[1] + v;
            } else if *r == d2 {
                c[2] = &c[2] + v;
            } else if *r == d3 {
                c[3] = &c[3] + &(v / &Rational::from_int(k3));
            } else {
                panic!("radicand {r} outside Q(sqrt {d1}, sqrt {d2})");
            }
        }
        c
    }

    pub fn to_quad(&self) -> Option<QuadElem> {
        match self.terms.len() {
            0 => Some(QuadElem::from_int(0)),
            _ => {
                let irr: Vec<_> = self.terms.iter().filter(|(r, _)| **r != 1).collect();
                if irr.len() > 1 {
                    return None;
                }
                let a = self.terms.get(&1).cloned().unwrap_or_else(Rational::zero);
                match irr.first() {
                    None => Some(QuadElem::rational(a)),
                    Some((r, b)) => QuadElem::new(a, (*b).clone(), **r).ok(),
                }
            }
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    // x = p + q sqrt(d2) with p, q in Q(sqrt d1)
    fn tower(&self) -> (QuadElem, QuadElem, u64) {
        let (d1, d2) = self.bases();
        let c = self.coeffs_in(d1, d2);
        let p = QuadElem::new(c[0].clone(), c[1].clone(), d1).unwrap();
        let q = QuadElem::new(c[2].clone(), c[3].clone(), d1).unwrap();
        (p, q, d2)
    }

    fn from_tower(p: &QuadElem, q: &QuadElem, d2: u64) -> Self {
        let mut x = BiQuadElem::from_quad(p);
        x.push(q.a().clone(), d2);
        x.push(q.b().clone(), q.d() * d2);
        x
    }

    pub fn signum(&self) -> i32 {
        let (d1, _) = self.bases();
        if d1 == 1 {
            return quad_sign(&self.to_quad().expect("single radicand"));
        }
        let (p, q, d2) = self.tower();
        let sp = quad_sign(&p);
        let sq = quad_sign(&q);
        if sq == 0 || sp == sq {
            return if sp == 0 { sq } else { sp };
        }
        if sp == 0 {
            return sq;
        }
        let diff = p.clone() * p - q.clone() * q * QuadElem::from_int(d2 as i64);
        if quad_sign(&diff) > 0 {
            sp
        } else {
            sq
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (d1, _) = self.bases();
        if d1 == 1 {
            return self.to_quad()?.inv().map(|q| BiQuadElem::from_quad(&q));
        }
        let (p, q, d2) = self.tower();
        let n = p.clone() * p.clone() - q.clone() * q.clone() * QuadElem::from_int(d2 as i64);
        let ni = n.inv()?;
        Some(BiQuadElem::from_tower(&(p * ni.clone()), &-(q * ni), d2))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.compatible(other)?;
        let mut x = self.clone();
        for (r, c) in &other.terms {
            x.push(c.clone(), *r);
        }
        Ok(x)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.compatible(other)?;
        let mut x = BiQuadElem::default();
        for (r, a) in &self.terms {
            for (s, b) in &other.terms {
                let (g, t) = sf_mul(*r, *s);
                x.push(a * b * Rational::from_int(g), t);
            }
        }
        Ok(x)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        self.compatible(other)?;
        let inv = other.inv().ok_or(ArithError::DivisionByZero)?;
        self.checked_mul(&inv)
    }

    pub fn to_f64(&self) -> f64 {
        to_float(self, 64)
    }
}

impl SurdTerms for BiQuadElem {
    fn terms(&self) -> Vec<(Rational, u64)> {
        self.terms.iter().map(|(r, c)| (c.clone(), *r)).collect()
    }

    fn sign(&self) -> i32 {
        self.signum()
    }
}

impl PartialOrd for BiQuadElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BiQuadElem {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum().cmp(&0)
    }
}

impl fmt::Display for BiQuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (r, c)) in self.terms.iter().enumerate() {
            if i > 0 && c.signum() > 0 {
                write!(f, "+")?;
            }
            if *r == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*sqrt({r})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiQuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rational> for BiQuadElem {
    fn from(r: Rational) -> Self {
        BiQuadElem::rational(r)
    }
}

impl From<i64> for BiQuadElem {
    fn from(v: i64) -> Self {
        BiQuadElem::from_int(v)
    }
}

impl From<QuadElem> for BiQuadElem {
    fn from(q: QuadElem) -> Self {
        BiQuadElem::from_quad(&q)
    }
}

impl Add for BiQuadElem {
    type Output = BiQuadElem;
    fn add(self, rhs: BiQuadElem) -> BiQuadElem {
        self.checked_add(&rhs).expect("BiQuadElem add")
    }
}

impl Sub for BiQuadElem {
    type Output = BiQuadElem;
    fn sub(self, rhs: BiQuadElem) -> BiQuadElem {
        self.checked_add(&-rhs).expect("BiQuadElem sub")
    }
}

impl Mul for BiQuadElem {
    type Output = BiQuadElem;
    fn mul(self, rhs: BiQuadElem) -> BiQuadElem {
        self.checked_mul(&rhs).expect("BiQuadElem mul")
    }
}

impl Div for BiQuadElem {
    type Output = BiQuadElem;
    fn div(self, rhs: BiQuadElem) -> BiQuadElem {
        self.checked_div(&rhs).expect("BiQuadElem div")
    }
}

impl Neg for BiQuadElem {
    type Output = BiQuadElem;
    fn neg(mut self) -> BiQuadElem {
        for c in self.terms.values_mut() {
            *c = -&*c;
        }
        self
    }
}


impl std::str::FromStr for BiQuadElem {
    type Err = ArithError;

    /// Parses sums like `-1-2/3*sqrt(3)` or `8/11*sqrt(6)+4/11*sqrt(2)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ArithError::Parse(s.to_string()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'(' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut x = BiQuadElem::default();
        for t in terms {
            let (c, r) = parse_term(t).ok_or_else(|| ArithError::Parse(s.to_string()))?;
            x.push(c, r);
        }
        x.check_span()?;
        Ok(x)
    }
}

fn parse_term(t: &str) -> Option<(Rational, u64)> {
    let (sign, body) = match t.as_bytes().first()? {
        b'-' => (-1, &t[1..]),
        b'+' => (1, &t[1..]),
        _ => (1, t),
    };
    let (coef, rad) = match body.find("sqrt(") {
        Some(pos) => {
            let inner = body[pos + 5..].strip_suffix(')')?;
            let r: u64 = inner.parse().ok()?;
            let c = body[..pos].trim_end_matches('*');
            let c: Rational = if c.is_empty() { Rational::one() } else { c.parse().ok()? };
            (c, r)
        }
        None => (body.parse().ok()?, 1),
    };
    if rad == 0 {
        return Some((Rational::zero(), 1));
    }
    Some((coef * Rational::from_int(sign), rad))
}
