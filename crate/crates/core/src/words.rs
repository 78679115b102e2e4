//! Finite binary words: primitivity, Lyndon rotations, signatures, and the
//! mechanical / Sturmian / Christoffel families.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonempty word over `{0, 1}`. Letter `0` stands for `A`, letter `1` for `B`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BinaryWord(Vec<u8>);

impl BinaryWord {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(&bad) = letters.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidLetter(char::from(b'0' + bad.min(9))));
        }
        Ok(Self(letters))
    }

    /// Single-letter word.
    pub fn letter(bit: u8) -> Self {
        Self(vec![bit & 1])
    }

    /// `0ⁿ1`, the word of `AⁿB`.
    pub fn a_pow_b(n: usize) -> Self {
        let mut v = vec![0; n];
        v.push(1);
        Self(v)
    }

    /// `01ⁿ`, the word of `ABⁿ`.
    pub fn a_b_pow(n: usize) -> Self {
        let mut v = vec![0];
        v.extend(std::iter::repeat(1).take(n));
        Self(v)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; present for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|&&b| b == 0).count()
    }

    pub fn ones(&self) -> usize {
        self.0.len() - self.zeros()
    }

    pub fn rotate(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        let n = v.len();
        v.rotate_left(k % n);
        Self(v)
    }

    pub fn rotations(&self) -> impl Iterator<Item = BinaryWord> + '_ {
        (0..self.len()).map(move |k| self.rotate(k))
    }

    pub fn pow(&self, k: usize) -> Self {
        assert!(k >= 1, "word power must be positive");
        Self(self.0.repeat(k))
    }

    pub fn concat(&self, other: &BinaryWord) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    pub fn is_primitive(&self) -> bool {
        is_primitive(self)
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidLetter(other)),
            })
            .collect::<Result<Vec<u8>>>()?;
        BinaryWord::new(letters)
    }
}

impl TryFrom<String> for BinaryWord {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BinaryWord> for String {
    fn from(w: BinaryWord) -> String {
        w.to_string()
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord({self})")
    }
}

/// True iff `w` is not `uᵏ` for a shorter `u`.
pub fn is_primitive(w: &BinaryWord) -> bool {
    let s = w.letters();
    let n = s.len();
    (1..n).filter(|d| n % d == 0).all(|d| (d..n).any(|i| s[i] != s[i - d]))
}

/// Lexicographically least rotation (with `0 < 1`).
pub fn lyndon_rotation(w: &BinaryWord) -> Result<BinaryWord> {
    if !is_primitive(w) {
        return Err(Error::NotPrimitive(w.to_string()));
    }
    Ok(least_rotation(w))
}

/// Least rotation without the primitivity check; used for canonical
/// necklace representatives of arbitrary words.
pub fn least_rotation(w: &BinaryWord) -> BinaryWord {
    w.rotations().min().expect("words are nonempty")
}

pub fn is_lyndon(w: &BinaryWord) -> bool {
    is_primitive(w) && least_rotation(w) == *w
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WordSignature {
    pub m: usize,
    pub k: usize,
    pub l: usize,
}

impl fmt::Display for WordSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.m, self.k, self.l)
    }
}

/// `(m, k, l)`: zeros, ones, and `01` factors of the Lyndon rotation.
pub fn signature(w: &BinaryWord) -> Result<WordSignature> {
    let lw = lyndon_rotation(w)?;
    let s = lw.letters();
    let l = s.windows(2).filter(|p| p == &[0, 1]).count();
    Ok(WordSignature {
        m: lw.zeros(),
        k: lw.ones(),
        l,
    })
}

/// A slope or intercept: exact rationals get exact floor arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Param {
    Exact(Rational64),
    Real(f64),
}

impl Param {
    pub fn to_f64(self) -> f64 {
        match self {
            Param::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Param::Real(x) => x,
        }
    }
}

impl From<Rational64> for Param {
    fn from(r: Rational64) -> Self {
        Param::Exact(r)
    }
}

impl From<f64> for Param {
    fn from(x: f64) -> Self {
        Param::Real(x)
    }
}

impl FromStr for Param {
    type Err = Error;

    /// Accepts `p/q` (exact) or a decimal (real).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| Error::Parse(s.into()))?;
            let q: i64 = q.trim().parse().map_err(|_| Error::Parse(s.into()))?;
            if q == 0 {
                return Err(Error::Parse(format!("{s}: zero denominator")));
            }
            Ok(Param::Exact(Rational64::new(p, q)))
        } else {
            let x: f64 = s.parse().map_err(|_| Error::Parse(s.into()))?;
            if !x.is_finite() {
                return Err(Error::NonFinite);
            }
            Ok(Param::Real(x))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Lower,
    Upper,
}

/// First `n` letters of the lower (floor) or upper (ceiling) mechanical word
/// of slope `gamma` and intercept `rho`, indexed from 0.
pub fn mechanical_prefix(gamma: Param, rho: Param, variant: Variant, n: usize) -> Result<BinaryWord> {
    let g = gamma.to_f64();
    let r = rho.to_f64();
    if !(0.0..=1.0).contains(&g) || !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange(format!(
            "slope {g} and intercept {r} must lie in [0, 1]"
        )));
    }
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    let letters = match (gamma, rho) {
        (Param::Exact(g), Param::Exact(r)) => {
            // γi + ρ = (gn·rd·i + rn·gd) / (gd·rd), all in i128
            let (gn, gd) = (*g.numer() as i128, *g.denom() as i128);
            let (rn, rd) = (*r.numer() as i128, *r.denom() as i128);
            let den = gd * rd;
            let at = |i: i128| {
                let num = gn * rd * i + rn * gd;
                match variant {
                    Variant::Lower => num.div_euclid(den),
                    Variant::Upper => -(-num).div_euclid(den),
                }
            };
            (0..n as i128).map(|i| (at(i + 1) - at(i)) as u8).collect()
        }
        _ => {
            let at = |i: usize| {
                let t = g * i as f64 + r;
                match variant {
                    Variant::Lower => t.floor(),
                    Variant::Upper => t.ceil(),
                }
            };
            (0..n).map(|i| (at(i + 1) - at(i)) as u8).collect()
        }
    };
    BinaryWord::new(letters)
}

/// Lower Christoffel word of slope `p/q`: length `q`, `p` ones.
pub fn christoffel(p: u64, q: u64) -> Result<BinaryWord> {
    if q == 0 || p > q {
        return Err(Error::OutOfRange(format!(
            "christoffel({p}, {q}) needs 0 <= p <= q, q >= 1"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let letters = (0..q).map(|i| (((i + 1) * p) / q - (i * p) / q) as u8).collect();
    BinaryWord::new(letters)
}

/// A node `(u, v)` of the Christoffel tree; `uv` is a Christoffel word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChristoffelNode {
    pub u: BinaryWord,
    pub v: BinaryWord,
    pub depth: usize,
}

impl ChristoffelNode {
    pub fn word(&self) -> BinaryWord {
        self.u.concat(&self.v)
    }

    pub fn children(&self) -> [ChristoffelNode; 2] {
        let uv = self.word();
        [
            ChristoffelNode {
                u: self.u.clone(),
                v: uv.clone(),
                depth: self.depth + 1,
            },
            ChristoffelNode {
                u: uv,
                v: self.v.clone(),
                depth: self.depth + 1,
            },
        ]
    }
}

/// Breadth-first listing of the tree down to `depth` (root `(0, 1)` at depth 0).
pub fn christoffel_tree(depth: usize) -> Vec<ChristoffelNode> {
    let root = ChristoffelNode {
        u: BinaryWord::letter(0),
        v: BinaryWord::letter(1),
        depth: 0,
    };
    let mut out = Vec::new();
    let mut queue = VecDeque::from([root]);
    while let Some(node) = queue.pop_front() {
        if node.depth < depth {
            queue.extend(node.children());
        }
        out.push(node);
    }
    out
}

/// Intercept `i/q` witnessing that a word is a Sturmian prefix of slope `p/q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SturmianWitness {
    pub p: u64,
    pub q: u64,
    /// Intercept numerator; the intercept is `rho / q`.
    pub rho: u64,
}

/// Decides whether `w` is the `q`-prefix of `ω⁻_{p/q, ρ}` with `q = |w|`,
/// `p = #1`, by trying every intercept on the `1/q` grid.
pub fn is_sturmian_word(w: &BinaryWord) -> Option<SturmianWitness> {
    let q = w.len() as u64;
    let p = w.ones() as u64;
    (0..q).find_map(|i| {
        let matches = (0..q).all(|n| {
            let letter = ((n + 1) * p + i) / q - (n * p + i) / q;
            letter as u8 == w.letters()[n as usize]
        });
        matches.then_some(SturmianWitness { p, q, rho: i })
    })
}

/// Distinct rotations of `christoffel(b, a + b)`: the Sturmian words of
/// `W(a, b)` (`a` zeros, `b` ones).
pub fn sturmian_class_words(a: u64, b: u64) -> Result<Vec<BinaryWord>> {
    if a == 0 || b == 0 {
        return Err(Error::OutOfRange(format!("W({a}, {b}) needs a, b >= 1")));
    }
    if a.gcd(&b) != 1 {
        return Err(Error::NotCoprime { p: a, q: b });
    }
    let c = christoffel(b, a + b)?;
    let mut out: Vec<BinaryWord> = c.rotations().collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Lyndon words of length `1..=max_len` in lexicographic order
/// (Fredricksen–Kessler–Maiorana successor rule, binary alphabet).
pub struct LyndonWords {
    current: Vec<u8>,
    max_len: usize,
    done: bool,
}

impl LyndonWords {
    pub fn new(max_len: usize) -> Self {
        Self {
            current: vec![0],
            max_len,
            done: max_len == 0,
        }
    }
}

impl Iterator for LyndonWords {
    type Item = BinaryWord;

    fn next(&mut self) -> Option<BinaryWord> {
        if self.done {
            return None;
        }
        let out = BinaryWord(self.current.clone());
        let len = self.current.len();
        let mut w = self.current.clone();
        while w.len() < self.max_len {
            w.push(w[w.len() - len]);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => {
                *last = 1;
                self.current = w;
            }
            None => self.done = true,
        }
        Some(out)
    }
}

/// All `2ⁿ` words of length `n`, in lexicographic order.
pub fn all_words(n: usize) -> impl Iterator<Item = BinaryWord> {
    assert!((1..64).contains(&n));
    (0u64..1 << n).map(move |bits| BinaryWord((0..n).rev().map(|i| ((bits >> i) & 1) as u8).collect()))
}

/// Distinct cyclic classes of primitive words with `a` zeros and `b` ones,
/// one Lyndon representative each.
pub fn lyndon_words_with_content(a: usize, b: usize) -> Vec<BinaryWord> {
    LyndonWords::new(a + b)
        .filter(|w| w.len() == a + b && w.zeros() == a)
        .collect()
}
