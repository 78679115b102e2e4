//! Exact trace polynomials. Every word `w` in `A, B` has an integer
//! polynomial `F_w` with `tr w(A, B) = F_w(tr A, tr B, tr AB, det A, det B)`.
//!
//! Words are reduced left to right in the algebra spanned by `{I, A, B, AB}`,
//! using Cayley–Hamilton and `AB + BA = xB + yA + (z − xy)I`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::FiveTuple;
use crate::words::{signature, BinaryWord};

/// Exponents of `(x, y, z, u, v)`.
pub type Exponents = [u32; 5];

const VARS: [char; 5] = ['x', 'y', 'z', 'u', 'v'];

/// Sparse integer polynomial in `x, y, z, u, v`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly5 {
    terms: BTreeMap<Exponents, BigInt>,
}

impl Poly5 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, [0; 5])
    }

    pub fn monomial(c: impl Into<BigInt>, e: Exponents) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c.into());
        p
    }

    /// The variable with index `i` in `(x, y, z, u, v)`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 5];
        e[i] = 1;
        Self::monomial(1, e)
    }

    pub fn x() -> Self {
        Self::var(0)
    }
    pub fn y() -> Self {
        Self::var(1)
    }
    pub fn z() -> Self {
        Self::var(2)
    }
    pub fn u() -> Self {
        Self::var(3)
    }
    pub fn v() -> Self {
        Self::var(4)
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &Exponents) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Terms in display order: higher total degree first, then by exponent
    /// vector in decreasing lexicographic order of `(x, y, z, u, v)`.
    pub fn terms(&self) -> Vec<(BigInt, Exponents)> {
        let mut out: Vec<(BigInt, Exponents)> = self.terms.iter().map(|(e, c)| (c.clone(), *e)).collect();
        out.sort_by(|a, b| {
            let da: u32 = a.1.iter().sum();
            let db: u32 = b.1.iter().sum();
            db.cmp(&da).then_with(|| b.1.cmp(&a.1))
        });
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero();
        for (e, k) in &self.terms {
            out.add_term(*e, k * c);
        }
        out
    }

    /// Substitute `u = v = 0`.
    pub fn at_uv0(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[3] == 0 && e[4] == 0)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Value at `t`, accumulated exactly over dyadic rationals and rounded once.
    pub fn evaluate(&self, t: &FiveTuple) -> f64 {
        let vals = t.as_array().map(Dyadic::from_f64);
        if vals.iter().any(Option::is_none) {
            return f64::NAN;
        }
        let vals = vals.map(Option::unwrap);
        let mut acc = Dyadic::zero();
        for (e, c) in &self.terms {
            let mut term = Dyadic {
                mant: c.clone(),
                exp: 0,
            };
            for (v, &k) in vals.iter().zip(e) {
                for _ in 0..k {
                    term = term.mul(v);
                }
            }
            acc = acc.add(&term);
        }
        acc.to_f64()
    }

    /// Value at `t` in plain floating point (Horner-free; for cross-checks).
    pub fn evaluate_f64(&self, t: &FiveTuple) -> f64 {
        let vals = t.as_array();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono: f64 = vals.iter().zip(e).map(|(v, &k)| v.powi(k as i32)).product();
                c.to_f64().unwrap_or(f64::NAN) * mono
            })
            .sum()
    }
}

impl Add for &Poly5 {
    type Output = Poly5;
    fn add(self, rhs: &Poly5) -> Poly5 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Poly5 {
    type Output = Poly5;
    fn sub(self, rhs: &Poly5) -> Poly5 {
        self + &(-rhs)
    }
}

impl Neg for &Poly5 {
    type Output = Poly5;
    fn neg(self) -> Poly5 {
        Poly5 {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &Poly5 {
    type Output = Poly5;
    // exponents add when monomials multiply
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Poly5) -> Poly5 {
        let mut out = Poly5::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = std::array::from_fn(|i| e1[i] + e2[i]);
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Poly5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, e)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let factors: Vec<String> = e
                .iter()
                .zip(VARS)
                .filter(|(k, _)| **k > 0)
                .map(|(&k, v)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `mant · 2^exp`, exact.
#[derive(Clone, Debug)]
struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    fn zero() -> Self {
        Self {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Self {
            mant: BigInt::from(sign) * BigInt::from(m),
            exp: e,
        })
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            mant: &self.mant * &o.mant,
            exp: self.exp + o.exp,
        }
    }

    fn add(&self, o: &Self) -> Self {
        if self.mant.is_zero() {
            return o.clone();
        }
        if o.mant.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &o.mant << (o.exp - e) as usize;
        Self { mant: a + b, exp: e }
    }

    /// Round to nearest, ties to even: keep 64 leading bits plus a sticky
    /// bit, so the final `u64 → f64` conversion is the only rounding.
    fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let neg = self.mant.sign() == Sign::Minus;
        let mag = self.mant.magnitude();
        let bits = mag.bits() as i64;
        let shift = (bits - 63).max(0);
        let mut top = (mag >> shift as usize).to_u64().expect("at most 63 bits");
        if shift > 0 && mag.trailing_zeros().is_some_and(|tz| (tz as i64) < shift) {
            top |= 1;
        }
        let exp = self.exp + shift;
        // `top` has at most 63 bits; scale in two steps to stay in range.
        let mut r = top as f64;
        let mut e = exp;
        while e > 0 {
            let step = e.min(1000);
            r *= 2f64.powi(step as i32);
            e -= step;
        }
        while e < 0 {
            let step = (-e).min(1000);
            r /= 2f64.powi(step as i32);
            e += step;
        }
        if neg {
            -r
        } else {
            r
        }
    }
}

/// Element `cI·I + cA·A + cB·B + cAB·AB` of the algebra generated by `A, B`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    pub c_i: Poly5,
    pub c_a: Poly5,
    pub c_b: Poly5,
    pub c_ab: Poly5,
}

impl AlgebraElement {
    pub fn identity() -> Self {
        Self {
            c_i: Poly5::constant(1),
            ..Self::default()
        }
    }

    pub fn letter(bit: u8) -> Self {
        if bit == 0 {
            Self {
                c_a: Poly5::constant(1),
                ..Self::default()
            }
        } else {
            Self {
                c_b: Poly5::constant(1),
                ..Self::default()
            }
        }
    }

    /// `2·cI + x·cA + y·cB + z·cAB`.
    pub fn trace(&self) -> Poly5 {
        let two = Poly5::constant(2);
        let t = &(&two * &self.c_i) + &(&Poly5::x() * &self.c_a);
        let t = &t + &(&Poly5::y() * &self.c_b);
        &t + &(&Poly5::z() * &self.c_ab)
    }

    /// Right multiplication by the letter `bit`.
    pub fn mul_letter(&self, bit: u8) -> Self {
        let (x, y, z, u, v) = (Poly5::x(), Poly5::y(), Poly5::z(), Poly5::u(), Poly5::v());
        let mut out = AlgebraElement::default();
        let add = |slot: &mut Poly5, c: &Poly5, k: &Poly5| *slot = &*slot + &(c * k);
        let one = Poly5::constant(1);
        if bit == 0 {
            // I·A = A
            add(&mut out.c_a, &self.c_i, &one);
            // A·A = xA − uI
            add(&mut out.c_a, &self.c_a, &x);
            add(&mut out.c_i, &self.c_a, &-&u);
            // B·A = xB + yA + (z − xy)I − AB
            add(&mut out.c_b, &self.c_b, &x);
            add(&mut out.c_a, &self.c_b, &y);
            add(&mut out.c_i, &self.c_b, &(&z - &(&x * &y)));
            add(&mut out.c_ab, &self.c_b, &-&one);
            // (AB)·A = zA + uB − uyI
            add(&mut out.c_a, &self.c_ab, &z);
            add(&mut out.c_b, &self.c_ab, &u);
            add(&mut out.c_i, &self.c_ab, &-&(&u * &y));
        } else {
            // I·B = B
            add(&mut out.c_b, &self.c_i, &one);
            // A·B = AB
            add(&mut out.c_ab, &self.c_a, &one);
            // B·B = yB − vI
            add(&mut out.c_b, &self.c_b, &y);
            add(&mut out.c_i, &self.c_b, &-&v);
            // (AB)·B = yAB − vA
            add(&mut out.c_ab, &self.c_ab, &y);
            add(&mut out.c_a, &self.c_ab, &-&v);
        }
        out
    }
}

/// Reduce `w` in the algebra, left to right.
pub fn reduce_word(w: &BinaryWord) -> Result<AlgebraElement> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(w.letters()
        .iter()
        .fold(AlgebraElement::identity(), |acc, &bit| acc.mul_letter(bit)))
}

pub fn fricke_poly(w: &BinaryWord) -> Result<Poly5> {
    Ok(reduce_word(w)?.trace())
}

pub fn evaluate(f: &Poly5, t: &FiveTuple) -> f64 {
    f.evaluate(t)
}

/// `F_w` with `u = v = 0`. For primitive `w` this is the single monomial
/// `x^(m−l) y^(k−l) z^l` given by the signature `(m, k, l)`.
pub fn monomial_at_uv0(w: &BinaryWord) -> Result<Poly5> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !w.is_primitive() {
        return Err(Error::NotPrimitive(w.to_string()));
    }
    Ok(fricke_poly(w)?.at_uv0())
}

/// The monomial predicted by the signature, computed without any reduction.
pub fn signature_monomial(w: &BinaryWord) -> Result<Poly5> {
    let s = signature(w)?;
    Ok(Poly5::monomial(
        1,
        [(s.m - s.l) as u32, (s.k - s.l) as u32, s.l as u32, 0, 0],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{word_product, Mat2, MatrixPair};
    use crate::sampling::{random_pair, stream_rng, Distribution};

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn multiplication_table_numeric() {
        let mut rng = stream_rng(11, 0);
        for _ in 0..50 {
            let p = random_pair(&mut rng, Distribution::Normal);
            let t = p.five_tuple();
            let (a, b) = (p.a, p.b);
            let ab = a * b;
            let i = Mat2::IDENTITY;
            let close = |m: Mat2, n: Mat2| (m - n).max_abs() <= 1e-9 * (1.0 + m.max_abs());
            assert!(close(a * a, a.scale(t.x) - i.scale(t.u)));
            assert!(close(b * b, b.scale(t.y) - i.scale(t.v)));
            assert!(close(
                b * a,
                b.scale(t.x) + a.scale(t.y) + i.scale(t.z - t.x * t.y) - ab
            ));
            assert!(close(a * ab, ab.scale(t.x) - b.scale(t.u)));
            assert!(close(ab * a, a.scale(t.z) + b.scale(t.u) - i.scale(t.u * t.y)));
            assert!(close(b * ab, a.scale(t.v) + b.scale(t.z) - i.scale(t.v * t.x)));
            assert!(close(ab * b, ab.scale(t.y) - a.scale(t.v)));
            assert!(close(ab * ab, ab.scale(t.z) - i.scale(t.u * t.v)));
        }
    }

    #[test]
    fn small_examples() {
        assert_eq!(fricke_poly(&w("0")).unwrap().to_string(), "x");
        assert_eq!(fricke_poly(&w("01")).unwrap().to_string(), "z");
        let f = fricke_poly(&w("0011")).unwrap();
        let expected = {
            let (x, y, z, u, v) = (Poly5::x(), Poly5::y(), Poly5::z(), Poly5::u(), Poly5::v());
            let t1 = &(&x * &y) * &z;
            let t2 = &(&u * &y) * &y;
            let t3 = &(&v * &x) * &x;
            let t4 = &Poly5::constant(2) * &(&u * &v);
            &(&(&t1 - &t2) - &t3) + &t4
        };
        assert_eq!(f, expected);
        assert!(matches!(BinaryWord::new(vec![]), Err(Error::EmptyWord)));
    }

    #[test]
    fn evaluate_examples() {
        let t = FiveTuple::new(3.0, 3.0, 8.0, 1.0, 1.0);
        assert_eq!(fricke_poly(&w("0")).unwrap().evaluate(&t), 3.0);
        assert_eq!(fricke_poly(&w("01")).unwrap().evaluate(&t), 8.0);
        assert_eq!(fricke_poly(&w("0011")).unwrap().evaluate(&t), 56.0);
    }

    #[test]
    fn exact_evaluation_rounds_once() {
        // (x − 1)² − x² + 2x − 1 is identically 0; naive evaluation at large x is not.
        let x = Poly5::x();
        let one = Poly5::constant(1);
        let sq = &(&x - &one) * &(&x - &one);
        let p = &(&(&sq - &(&x * &x)) + &(&Poly5::constant(2) * &x)) - &one;
        assert!(p.is_zero());
        let q = &(&x * &x) - &(&x * &x);
        assert_eq!(q.evaluate(&FiveTuple::new(1e200, 0.0, 0.0, 0.0, 0.0)), 0.0);
        let r = &(&x * &x) + &one;
        let big = 2f64.powi(30);
        assert_eq!(r.evaluate(&FiveTuple::new(big, 0.0, 0.0, 0.0, 0.0)), big * big + 1.0);
        assert_eq!(Poly5::x().evaluate(&FiveTuple::new(0.1, 0.0, 0.0, 0.0, 0.0)), 0.1);
        assert_eq!(
            Poly5::x().evaluate(&FiveTuple::new(-5e-324, 0.0, 0.0, 0.0, 0.0)),
            -5e-324
        );
    }

    #[test]
    fn uv0_examples() {
        assert_eq!(monomial_at_uv0(&w("0011")).unwrap().to_string(), "x*y*z");
        assert_eq!(monomial_at_uv0(&w("01")).unwrap().to_string(), "z");
        assert_eq!(monomial_at_uv0(&w("0010")).unwrap().to_string(), "x^2*z");
        assert!(matches!(monomial_at_uv0(&w("0101")), Err(Error::NotPrimitive(_))));
    }

    #[test]
    fn numeric_agreement_short_words() {
        let mut rng = stream_rng(5, 0);
        let pairs: Vec<MatrixPair> = (0..20).map(|_| random_pair(&mut rng, Distribution::Normal)).collect();
        for n in 1..=6 {
            for word in crate::words::all_words(n) {
                let f = fricke_poly(&word).unwrap();
                for p in &pairs {
                    let tr = word_product(p, &word).trace();
                    let val = f.evaluate(&p.five_tuple());
                    let scale = 1.0 + pairs_scale(p).powi(n as i32);
                    assert!((val - tr).abs() <= 1e-8 * scale, "{word}: {val} vs {tr}");
                }
            }
        }
    }

    fn pairs_scale(p: &MatrixPair) -> f64 {
        p.a.operator_norm_2().max(p.b.operator_norm_2())
    }
}
