//! Closed-form linear algebra for real 2×2 matrices.
//!
//! Everything here is plain `f64` arithmetic. Spectra are computed from the
//! trace and discriminant; complex eigenvalues are never materialized, only
//! their common modulus.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::BinaryWord;

/// Relative threshold under which the discriminant `tr² − 4 det` counts as
/// zero, measured against `max(1, tr²)`.
pub const REPEATED_EIGENVALUE_TOL: f64 = 1e-12;

/// A real 2×2 matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[f64; 2]; 2]", into = "[[f64; 2]; 2]")]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);
    pub const ZERO: Mat2 = Mat2::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub const fn from_rows(rows: [[f64; 2]; 2]) -> Self {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub const fn diag(d1: f64, d2: f64) -> Self {
        Self::new(d1, 0.0, 0.0, d2)
    }

    pub const fn rows(&self) -> [[f64; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// `tr² − 4 det`, evaluated as `(a11 − a22)² + 4 a12 a21` to avoid the
    /// cancellation of the textbook form.
    pub fn discriminant(&self) -> f64 {
        let d = self.a11 - self.a22;
        d * d + 4.0 * self.a12 * self.a21
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    pub fn adjugate(&self) -> Self {
        Self::new(self.a22, -self.a12, -self.a21, self.a11)
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(self.adjugate().scale(1.0 / det))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Mat2::IDENTITY;
        let mut base = *self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            e >>= 1;
        }
        result
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.a11 * v[0] + self.a12 * v[1], self.a21 * v[0] + self.a22 * v[1]]
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.a11 == 0.0 && self.a12 == 0.0 && self.a21 == 0.0 && self.a22 == 0.0
    }

    pub fn max_abs(&self) -> f64 {
        self.a11
            .abs()
            .max(self.a12.abs())
            .max(self.a21.abs())
            .max(self.a22.abs())
    }

    pub fn is_symmetric(&self) -> bool {
        self.a12 == self.a21
    }

    /// `P⁻¹ M P`. Returns `None` when `p` is singular.
    pub fn conjugate_by(&self, p: &Mat2) -> Option<Self> {
        Some(p.inverse()? * *self * *p)
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum::of(self, REPEATED_EIGENVALUE_TOL)
    }

    pub fn spectral_radius(&self) -> f64 {
        spectral_radius_from(self.trace(), self.det(), self.discriminant())
    }

    /// Largest singular value.
    ///
    /// Closed form `σ₁ = (√((a+d)² + (c−b)²) + √((a−d)² + (b+c)²)) / 2`, which is
    /// the square root of the top eigenvalue of `MᵀM` written without
    /// subtractive cancellation.
    pub fn operator_norm_2(&self) -> f64 {
        let p = (self.a11 + self.a22).hypot(self.a21 - self.a12);
        let q = (self.a11 - self.a22).hypot(self.a12 + self.a21);
        0.5 * (p + q)
    }

    pub fn frobenius(&self) -> f64 {
        self.a11.hypot(self.a12).hypot(self.a21.hypot(self.a22))
    }
}

impl TryFrom<[[f64; 2]; 2]> for Mat2 {
    type Error = Error;

    fn try_from(rows: [[f64; 2]; 2]) -> Result<Self> {
        let m = Mat2::from_rows(rows);
        if m.is_finite() {
            Ok(m)
        } else {
            Err(Error::NonFinite)
        }
    }
}

impl From<Mat2> for [[f64; 2]; 2] {
    fn from(m: Mat2) -> Self {
        m.rows()
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a11 - o.a11, self.a12 - o.a12, self.a21 - o.a21, self.a22 - o.a22)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a11, self.a12, self.a21, self.a22)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumKind {
    RealDistinct,
    RealRepeated,
    ComplexConjugate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Eigenvalues {
    /// Ordered so that `|first| >= |second|`.
    Real(f64, f64),
    /// Common modulus `√det` of a conjugate pair.
    ComplexModulus(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub kind: SpectrumKind,
    pub rho: f64,
    pub eigenvalues: Eigenvalues,
}

impl Spectrum {
    /// Spectrum with a caller-chosen threshold for the repeated-eigenvalue
    /// test `|tr² − 4 det| <= tol · max(1, tr²)`.
    ///
    /// The spectral radius never depends on `tol`; it always comes from the
    /// exact closed form for the computed discriminant.
    pub fn of(m: &Mat2, tol: f64) -> Self {
        let tr = m.trace();
        let det = m.det();
        let disc = m.discriminant();
        let rho = spectral_radius_from(tr, det, disc);
        let kind = if disc.abs() <= tol * tr.mul_add(tr, 0.0).max(1.0) {
            SpectrumKind::RealRepeated
        } else if disc > 0.0 {
            SpectrumKind::RealDistinct
        } else {
            SpectrumKind::ComplexConjugate
        };
        let eigenvalues = match kind {
            SpectrumKind::ComplexConjugate => Eigenvalues::ComplexModulus(rho),
            _ if disc >= 0.0 => {
                let big = 0.5 * (tr + tr.signum() * disc.sqrt());
                let small = if big != 0.0 { det / big } else { 0.0 };
                Eigenvalues::Real(big, small)
            }
            _ => Eigenvalues::Real(0.5 * tr, 0.5 * tr),
        };
        Spectrum { kind, rho, eigenvalues }
    }

    pub fn is_real(&self) -> bool {
        !matches!(self.kind, SpectrumKind::ComplexConjugate)
    }
}

fn spectral_radius_from(tr: f64, det: f64, disc: f64) -> f64 {
    if disc >= 0.0 {
        0.5 * (tr.abs() + disc.sqrt())
    } else {
        det.max(0.0).sqrt()
    }
}

/// An ordered pair `(A, B)`; in words, letter `0` stands for `A` and `1` for `B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixPair {
    #[serde(rename = "A")]
    pub a: Mat2,
    #[serde(rename = "B")]
    pub b: Mat2,
}

impl MatrixPair {
    pub const fn new(a: Mat2, b: Mat2) -> Self {
        Self { a, b }
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.b, self.a)
    }

    pub fn scaled(&self, alpha: f64, beta: f64) -> Self {
        Self::new(self.a.scale(alpha), self.b.scale(beta))
    }

    /// Simultaneous conjugation `(P⁻¹AP, P⁻¹BP)`.
    pub fn conjugate_by(&self, p: &Mat2) -> Option<Self> {
        Some(Self::new(self.a.conjugate_by(p)?, self.b.conjugate_by(p)?))
    }

    pub fn letter(&self, bit: u8) -> Mat2 {
        if bit == 0 {
            self.a
        } else {
            self.b
        }
    }

    pub fn commutator(&self) -> Mat2 {
        self.a * self.b - self.b * self.a
    }

    pub fn five_tuple(&self) -> FiveTuple {
        five_tuple(self)
    }

    /// `(‖A‖₂ ‖B‖₂)²`, the natural scale of `det(AB − BA)`.
    pub fn commutator_scale(&self) -> f64 {
        let s = self.a.operator_norm_2() * self.b.operator_norm_2();
        s * s
    }

    /// `det(AB − BA) / (‖A‖₂‖B‖₂)²`, invariant under independent rescaling.
    pub fn normalized_commutator(&self) -> f64 {
        let scale = self.commutator_scale();
        if scale == 0.0 {
            0.0
        } else {
            self.commutator().det() / scale
        }
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }
}

/// Simultaneous-conjugacy coordinates `(tr A, tr B, tr AB, det A, det B)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiveTuple {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub u: f64,
    pub v: f64,
}

impl FiveTuple {
    pub const fn new(x: f64, y: f64, z: f64, u: f64, v: f64) -> Self {
        Self { x, y, z, u, v }
    }

    /// Friedland's polynomial `4uv − uy² − vx² + xyz − z²`, equal to `det(AB − BA)`.
    pub fn delta(&self) -> f64 {
        let FiveTuple { x, y, z, u, v } = *self;
        4.0 * u * v - u * y * y - v * x * x + x * y * z - z * z
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.x, self.y, self.z, self.u, self.v]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|c| c.is_finite())
    }

    pub fn realizable(&self) -> bool {
        realizable(self)
    }

    /// Swap the roles of `A` and `B`.
    pub fn swapped(&self) -> Self {
        Self::new(self.y, self.x, self.z, self.v, self.u)
    }
}

impl std::str::FromStr for FiveTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("five-tuple {s:?}: {e}")))?;
        match parts.as_slice() {
            &[x, y, z, u, v] => {
                let t = FiveTuple::new(x, y, z, u, v);
                if t.is_finite() {
                    Ok(t)
                } else {
                    Err(Error::NonFinite)
                }
            }
            _ => Err(Error::Parse(format!(
                "five-tuple needs 5 comma-separated numbers, got {}",
                parts.len()
            ))),
        }
    }
}

pub fn five_tuple(p: &MatrixPair) -> FiveTuple {
    FiveTuple::new(p.a.trace(), p.b.trace(), (p.a * p.b).trace(), p.a.det(), p.b.det())
}

/// A five-tuple comes from a pair of real matrices iff
/// `min(4u − x², Δ) <= 0`.
pub fn realizable(t: &FiveTuple) -> bool {
    realizability_margin(t) <= 0.0
}

pub fn realizability_margin(t: &FiveTuple) -> f64 {
    (4.0 * t.u - t.x * t.x).min(t.delta())
}

/// The five equal expressions for `det(AB − BA)`, with their spread.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorReport {
    /// `det(AB − BA)` computed from the commutator matrix.
    pub value: f64,
    /// Expressions (1)–(5); the last is `None` when a determinant vanishes.
    pub expressions: [Option<f64>; 5],
    /// Largest pairwise deviation divided by `(‖A‖₂‖B‖₂)²`.
    pub max_relative_deviation: f64,
}

pub fn commutator_invariant(p: &MatrixPair) -> CommutatorReport {
    let t = p.five_tuple();
    let FiveTuple { x, y, z, u, v } = t;
    let ab = p.a * p.b;

    let e1 = t.delta();
    let e2 = p.commutator().det();
    let half = z - 0.5 * x * y;
    let e3 = 0.25 * (x * x - 4.0 * u) * (y * y - 4.0 * v) - half * half;
    let e4 = (p.a * p.a * p.b * p.b).trace() - (ab * ab).trace();
    let e5 = match (p.a.inverse(), p.b.inverse()) {
        (Some(ai), Some(bi)) if u != 0.0 && v != 0.0 => Some(u * v * (2.0 - (p.a * p.b * ai * bi).trace())),
        _ => None,
    };

    let expressions = [Some(e1), Some(e2), Some(e3), Some(e4), e5];
    let present: Vec<f64> = expressions.iter().flatten().copied().collect();
    let hi = present.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = present.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = p.commutator_scale();
    let spread = hi - lo;
    let max_relative_deviation = if scale > 0.0 { spread / scale } else { spread };

    CommutatorReport {
        value: e2,
        expressions,
        max_relative_deviation,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", content = "margin", rename_all = "lowercase")]
pub enum Reducibility {
    Reducible,
    Irreducible,
    /// The normalized commutator determinant is nonzero but within `tol`.
    Indeterminate(f64),
}

/// Reducibility via `det(AB − BA) = 0`, tested on the scale-free quantity
/// `det(AB − BA) / (‖A‖₂‖B‖₂)²`.
///
/// An exactly vanishing commutator determinant (diagonal pairs, triangular
/// pairs, scalar matrices) is `Reducible`; a nonzero value within `tol` is
/// reported as `Indeterminate` with its normalized margin.
pub fn is_reducible(p: &MatrixPair, tol: f64) -> Reducibility {
    let raw = p.commutator().det();
    if raw == 0.0 || p.commutator_scale() == 0.0 {
        return Reducibility::Reducible;
    }
    let margin = p.normalized_commutator();
    if margin.abs() <= tol {
        Reducibility::Indeterminate(margin)
    } else {
        Reducibility::Irreducible
    }
}

/// `w(A, B)`: letters multiply left to right in word order.
pub fn word_product(p: &MatrixPair, w: &BinaryWord) -> Mat2 {
    w.letters()
        .iter()
        .skip(1)
        .fold(p.letter(w.letters()[0]), |acc, &bit| acc * p.letter(bit))
}

/// `ln ρ(w(A, B))`, accumulated with renormalization so long words neither
/// overflow nor underflow. Returns `-inf` for a nilpotent product.
pub fn log_spectral_radius(p: &MatrixPair, w: &BinaryWord) -> f64 {
    let mut acc = Mat2::IDENTITY;
    let mut log_scale = 0.0;
    for &bit in w.letters() {
        acc = acc * p.letter(bit);
        let s = acc.max_abs();
        if s == 0.0 {
            return f64::NEG_INFINITY;
        }
        if !(0.25..=4.0).contains(&s) {
            acc = acc.scale(1.0 / s);
            log_scale += s.ln();
        }
    }
    let rho = acc.spectral_radius();
    if rho == 0.0 {
        f64::NEG_INFINITY
    } else {
        rho.ln() + log_scale
    }
}
