//! Explicit constructions: symmetric representatives of crossing pairs,
//! concrete matrices for a five-tuple, and the invariant-polygon family
//! `(A_n, B_n)` whose unique SMP is `A_nⁿB_n`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jsr::{brute_force, Norm};
use crate::linalg::{FiveTuple, Mat2, MatrixPair};
use crate::regions::classify;
use crate::sampling::{random_matrix, Distribution};
use crate::words::BinaryWord;

/// Normalized realizability slack accepted before a tuple is rejected;
/// tuples computed from a float pair can miss `min(4u − x², Δ) <= 0` by
/// rounding.
const REALIZABILITY_SLACK: f64 = 1e-12;

/// Relative width of the band `|x² − 4u| <= thr · max(1, x²)` in which the
/// shear form replaces the diagonal and rotation forms.
const SHEAR_BAND: f64 = 1e-6;

/// Symmetric pair with the same five-tuple as a crossing pair:
/// `A = diag((x ± √(x² − 4u))/2)`, `B` with off-diagonal `√(Δ/(x² − 4u))`.
pub fn symmetrize(p: &MatrixPair, tol: f64) -> Result<MatrixPair> {
    let flags = classify(p, tol);
    if !flags.in_cross.is_true() {
        return Err(Error::WrongRegion {
            region: "cross",
            detail: format!("normalized commutator margin {:e}", flags.margins.commutator),
        });
    }
    let t = p.five_tuple();
    let da = t.x * t.x - 4.0 * t.u;
    if da <= tol * (t.x * t.x).max(1.0) {
        return Err(Error::OutOfRange(format!(
            "x^2 - 4u = {da:e} is too close to zero to diagonalize A"
        )));
    }
    let (l1, l2) = distinct_roots(t.x, t.u, da);
    let b1 = (t.z - l2 * t.y) / (l1 - l2);
    let b4 = t.y - b1;
    let off = (t.delta() / da).max(0.0).sqrt();
    Ok(MatrixPair::new(Mat2::diag(l1, l2), Mat2::new(b1, off, off, b4)))
}

/// Roots of `λ² − xλ + u` with `x² − 4u = da > 0`, larger modulus first.
fn distinct_roots(x: f64, u: f64, da: f64) -> (f64, f64) {
    let sign = if x >= 0.0 { 1.0 } else { -1.0 };
    let l1 = 0.5 * (x + sign * da.sqrt());
    let l2 = if l1 != 0.0 { u / l1 } else { -l1 };
    (l1, l2)
}

/// One concrete pair with the given five-tuple.
///
/// The form of `A` follows the sign of `x² − 4u`: diagonal when positive,
/// rotation-scaling when negative, and the shear `[[x/2, 1], [(x²−4u)/4, x/2]]`
/// near zero, where the other two forms lose accuracy. Reducible tuples
/// (`Δ = 0`) are realized too, by a triangular or scalar representative.
pub fn realize_from_tuple(t: &FiveTuple) -> Result<MatrixPair> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let FiveTuple { x, y, z, u, v } = *t;
    let sa2 = (x * x).max(u.abs());
    let sb2 = (y * y).max(v.abs());
    let da = x * x - 4.0 * u;
    let delta = t.delta();
    let norm_a = if sa2 > 0.0 { da / sa2 } else { da };
    let norm_delta = if sa2 * sb2 > 0.0 { delta / (sa2 * sb2) } else { delta };
    if (-norm_a).min(norm_delta) > REALIZABILITY_SLACK {
        return Err(Error::Unrealizable {
            margin: (4.0 * u - x * x).min(delta),
        });
    }

    let band = SHEAR_BAND * (x * x).max(1.0);
    if da > band || (delta > 0.0 && da > 0.0) {
        let (l1, l2) = distinct_roots(x, u, da);
        let b1 = (z - l2 * y) / (l1 - l2);
        let b4 = y - b1;
        return Ok(MatrixPair::new(Mat2::diag(l1, l2), Mat2::new(b1, 1.0, b1 * b4 - v, b4)));
    }

    let w = z - 0.5 * x * y;
    let k = 0.25 * y * y - v;
    if da < -band {
        let s = 0.5 * (-da).sqrt();
        let d = w / s;
        let disc = (d * d + 4.0 * k).max(0.0);
        let sign = if d >= 0.0 { 1.0 } else { -1.0 };
        let b3 = -0.5 * (d + sign * disc.sqrt());
        let b2 = b3 + d;
        return Ok(MatrixPair::new(
            Mat2::new(0.5 * x, -s, s, 0.5 * x),
            Mat2::new(0.5 * y, b2, b3, 0.5 * y),
        ));
    }

    // Shear form: b3 + e·b2 = w and b2·b3 = k with e = (x² − 4u)/4, so
    // e·b2² − w·b2 + k = 0 whose discriminant is −Δ.
    let e = 0.25 * da;
    let b2 = if e == 0.0 {
        if w == 0.0 {
            // z = xy/2 and u = x²/4: a scalar A works with any B of the right trace and determinant
            return Ok(MatrixPair::new(
                Mat2::diag(0.5 * x, 0.5 * x),
                Mat2::new(0.0, -v, 1.0, y),
            ));
        }
        k / w
    } else {
        let disc = (w * w - 4.0 * e * k).max(0.0);
        let sign = if w >= 0.0 { 1.0 } else { -1.0 };
        let q = 0.5 * (w + sign * disc.sqrt());
        if q != 0.0 {
            k / q
        } else {
            0.0
        }
    };
    let b3 = w - e * b2;
    Ok(MatrixPair::new(
        Mat2::new(0.5 * x, 1.0, e, 0.5 * x),
        Mat2::new(0.5 * y, b2, b3, 0.5 * y),
    ))
}

/// The root `c = W(1/e) ≈ 0.27846` of `x·e^(x+1) = 1`, by Newton's method.
pub fn lambert_c() -> f64 {
    let mut x: f64 = 0.3;
    for _ in 0..100 {
        let ex = (x + 1.0).exp();
        let g = x * ex - 1.0;
        if g.abs() < 1e-15 {
            break;
        }
        let step = g / ((x + 1.0) * ex);
        x -= step;
        if step.abs() < 1e-17 {
            break;
        }
    }
    x
}

fn cross(p: [f64; 2], q: [f64; 2]) -> f64 {
    p[0] * q[1] - p[1] * q[0]
}

fn sub(p: [f64; 2], q: [f64; 2]) -> [f64; 2] {
    [p[0] - q[0], p[1] - q[1]]
}

fn unit(p: [f64; 2]) -> [f64; 2] {
    let n = p[0].hypot(p[1]);
    [p[0] / n, p[1] / n]
}

/// A centrally symmetric convex polygon, stored as the half-list
/// `w₁ … w_m`; the full counterclockwise vertex cycle is `w₁ … w_m, −w₁ … −w_m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polygon {
    half: Vec<[f64; 2]>,
}

impl Polygon {
    /// Relative tolerance for the convexity check.
    pub const CONVEXITY_TOL: f64 = 1e-12;

    pub fn new(half: Vec<[f64; 2]>) -> Result<Self> {
        if half.is_empty() {
            return Err(Error::OutOfRange("polygon needs at least one vertex".into()));
        }
        if half.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let poly = Polygon { half };
        let verts = poly.vertices();
        let n = verts.len();
        let scale = verts.iter().map(|v| v[0] * v[0] + v[1] * v[1]).fold(0.0, f64::max);
        for i in 0..n {
            let (p, q, r) = (verts[i], verts[(i + 1) % n], verts[(i + 2) % n]);
            if cross(p, q) <= 0.0 {
                return Err(Error::OutOfRange(format!(
                    "origin not strictly inside the polygon (edge {i})"
                )));
            }
            if cross(sub(q, p), sub(r, q)) < -Self::CONVEXITY_TOL * scale {
                return Err(Error::OutOfRange(format!(
                    "polygon not convex at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        Ok(poly)
    }

    pub fn half(&self) -> &[[f64; 2]] {
        &self.half
    }

    /// Full counterclockwise vertex cycle.
    pub fn vertices(&self) -> Vec<[f64; 2]> {
        self.half
            .iter()
            .copied()
            .chain(self.half.iter().map(|w| [-w[0], -w[1]]))
            .collect()
    }

    /// Minkowski gauge `min{t > 0 : v ∈ tS}`.
    ///
    /// Finds the edge `[w_i, w_{i+1}]` whose cone contains `v`, writes
    /// `v = α w_i + β w_{i+1}` and returns `α + β`.
    pub fn gauge(&self, v: [f64; 2]) -> f64 {
        if v == [0.0, 0.0] {
            return 0.0;
        }
        let verts = self.vertices();
        let n = verts.len();
        let mut best = f64::NEG_INFINITY;
        for i in 0..n {
            let (p, q) = (verts[i], verts[(i + 1) % n]);
            let area = cross(p, q);
            let alpha = cross(v, q) / area;
            let beta = cross(p, v) / area;
            if alpha >= 0.0 && beta >= 0.0 {
                return alpha + beta;
            }
            // floating-point fallback: a ray grazing a vertex may miss both
            // adjacent cones by an ulp; the facet maximum is still exact
            best = best.max(alpha + beta);
        }
        best
    }

    /// Induced operator norm `max_w gauge(M w)` over the vertices.
    pub fn operator_norm(&self, m: &Mat2) -> f64 {
        self.half.iter().map(|&w| self.gauge(m.apply(w))).fold(0.0, f64::max)
    }
}

pub fn polygon_gauge(s: &Polygon, v: [f64; 2]) -> f64 {
    s.gauge(v)
}

pub fn polygon_operator_norm(s: &Polygon, m: &Mat2) -> f64 {
    s.operator_norm(m)
}

/// The pair `(A_n, B_n)` with the invariant `(2n+2)`-gon `S`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExampleFamily {
    pub n: usize,
    pub c: f64,
    #[serde(rename = "A")]
    pub a: Mat2,
    #[serde(rename = "B")]
    pub b: Mat2,
    /// Row vector `φ` with `B_n = v₀ φ`.
    pub phi: [f64; 2],
    pub polygon: Polygon,
}

impl ExampleFamily {
    pub fn pair(&self) -> MatrixPair {
        MatrixPair::new(self.a, self.b)
    }

    /// `v_i = A_nⁱ (1, 0)ᵀ` for `i = 0..=n`.
    pub fn v(&self) -> &[[f64; 2]] {
        self.polygon.half()
    }

    /// The SMP word `0ⁿ1`.
    pub fn smp_word(&self) -> BinaryWord {
        BinaryWord::a_pow_b(self.n)
    }
}

/// Builds `A_n = c^{1/n} [[1,0],[1,1]]`, the polygon with vertices
/// `±v₀ … ±v_n`, and the rank-one `B_n` with `B_n v_n = v₀`.
///
/// The kernel direction of `B_n` is the bisector of the two polygon edges at
/// `v_n`, so the line `v_n + ker B_n` meets `S` only at `v_n`.
pub fn counterexample_family(n: usize) -> Result<ExampleFamily> {
    if n == 0 {
        return Err(Error::OutOfRange("family index n must be >= 1".into()));
    }
    let c = lambert_c();
    let s = c.powf(1.0 / n as f64);
    let a = Mat2::new(s, 0.0, s, s);
    let mut half = Vec::with_capacity(n + 1);
    let mut v = [1.0, 0.0];
    for _ in 0..=n {
        half.push(v);
        v = a.apply(v);
    }
    let vn = half[n];
    let e1 = unit(sub(vn, half[n - 1]));
    let e2 = unit(sub([-1.0, 0.0], vn));
    let d = [e1[0] + e2[0], e1[1] + e2[1]];
    // φ(v_n) = 1, φ(d) = 0  ⇒  φ ∝ (d₁, −d₀)
    let k = d[1] * vn[0] - d[0] * vn[1];
    let phi = [d[1] / k, -d[0] / k];
    let b = Mat2::new(phi[0], phi[1], 0.0, 0.0);
    let polygon = Polygon::new(half)?;
    Ok(ExampleFamily {
        n,
        c,
        a,
        b,
        phi,
        polygon,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExampleVerification {
    pub n: usize,
    pub max_len: usize,
    pub norm_a: f64,
    pub norm_b: f64,
    pub rho_smp: f64,
    pub best_word: BinaryWord,
    pub best_value: f64,
    pub runner_up: Option<BinaryWord>,
    /// `best_value − runner_up_value`; the margin by which the SMP is unique.
    pub gap: f64,
    /// Norms within `1e−12` of 1, `ρ(A_nⁿB_n)` within `1e−10` of 1, and the
    /// unique best class is `0ⁿ1` with a positive gap.
    pub passed: bool,
}

/// Checks the family's claims by direct computation and exhaustive search up
/// to length `max_len`.
pub fn verify_example(n: usize, max_len: usize) -> Result<ExampleVerification> {
    let fam = counterexample_family(n)?;
    verify_pair(&fam, &fam.pair(), max_len)
}

/// Same checks for an arbitrary pair standing in for the family, e.g. a
/// perturbation of it.
pub fn verify_pair(fam: &ExampleFamily, pair: &MatrixPair, max_len: usize) -> Result<ExampleVerification> {
    let n = fam.n;
    if max_len < n + 1 {
        return Err(Error::OutOfRange(format!(
            "max_len {max_len} must be at least n + 1 = {}",
            n + 1
        )));
    }
    let norm_a = fam.polygon.operator_norm(&pair.a);
    let norm_b = fam.polygon.operator_norm(&pair.b);
    let rho_smp = (pair.a.pow(n as u32) * pair.b).spectral_radius();
    let report = brute_force(pair, max_len, &Norm::Euclid)?;
    let expected = fam.smp_word();
    let gap = report.gap.unwrap_or(f64::INFINITY);
    let passed = (norm_a - 1.0).abs() <= 1e-12
        && (norm_b - 1.0).abs() <= 1e-12
        && (rho_smp - 1.0).abs() <= 1e-10
        && report.best_word == expected
        && report.tied.is_empty()
        && gap > 0.0;
    Ok(ExampleVerification {
        n,
        max_len,
        norm_a,
        norm_b,
        rho_smp,
        best_word: report.best_word,
        best_value: report.lower,
        runner_up: report.runner_up,
        gap,
        passed,
    })
}

/// The family pair with every entry moved by `eps·N(0,1)`, then rescaled so
/// that `ρ(AⁿB) = 1`.
pub fn perturbed_family<R: Rng + ?Sized>(fam: &ExampleFamily, eps: f64, rng: &mut R) -> MatrixPair {
    let a = fam.a + random_matrix(rng, Distribution::Normal).scale(eps);
    let b = fam.b + random_matrix(rng, Distribution::Normal).scale(eps);
    let rho = (a.pow(fam.n as u32) * b).spectral_radius();
    let s = rho.powf(-1.0 / (fam.n as f64 + 1.0));
    MatrixPair::new(a.scale(s), b.scale(s))
}
