//! Joint spectral radius bounds and SMP certification.
//!
//! `brute_force` sandwiches the JSR between spectral-radius roots of
//! primitive products (one per cyclic class) and norm roots of all products.
//! `certify` applies the region theorems where they yield the exact value.

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::Polygon;
use crate::error::{Error, Result};
use crate::linalg::{Mat2, MatrixPair, SpectrumKind};
use crate::regions::{classify, RegionFlags};
use crate::sturmian::maximize_sturmian;
use crate::words::{christoffel, least_rotation, BinaryWord};

/// Longest word length `brute_force` accepts.
pub const MAX_BRUTE_FORCE_LEN: usize = 24;

/// Relative tolerance under which two cyclic classes count as tied.
pub const TIE_TOL: f64 = 1e-9;

/// Hard cap on the exponent `n` scanned by `gelfand_scan`.
pub const GELFAND_CAP: usize = 10_000;

/// Default word length for the brute-force parts of `certify`.
pub const DEFAULT_MAX_LEN: usize = 12;

/// Most tied classes listed in a report; `tied_count` has the full number.
const TIED_LIST_CAP: usize = 64;

/// Prefix depth at which the enumerations fan out to worker threads.
const SPLIT_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub enum Norm {
    Euclid,
    Polygon(Polygon),
}

impl Norm {
    fn of(&self, m: &Mat2) -> f64 {
        match self {
            Norm::Euclid => m.operator_norm_2(),
            Norm::Polygon(s) => s.operator_norm(m),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Norm::Euclid => "euclid",
            Norm::Polygon(_) => "polygon",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthBounds {
    pub k: usize,
    /// Lyndon representative maximizing `ρ(Π)^{1/k}` among primitive words of length `k`.
    pub best_word: BinaryWord,
    pub rho_root: f64,
    /// `max ‖Π‖^{1/k}` over all `2ᵏ` products of length `k`.
    pub norm_root: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub max_len: usize,
    pub norm: &'static str,
    pub lower: f64,
    pub upper: f64,
    /// Shortest, then lexicographically least, Lyndon word among the classes
    /// within `TIE_TOL` of `lower`.
    pub best_word: BinaryWord,
    /// Other classes within `TIE_TOL` of `lower` (at most 64 listed).
    pub tied: Vec<BinaryWord>,
    pub tied_count: usize,
    /// Best class strictly outside the tie band.
    pub runner_up: Option<BinaryWord>,
    pub runner_up_value: Option<f64>,
    /// `lower − runner_up_value`.
    pub gap: Option<f64>,
    pub per_length: Vec<LengthBounds>,
}

/// A Lyndon word packed as `(length, bits)`, first letter most significant;
/// the derived order is (shorter, then lexicographic).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Packed {
    len: u8,
    bits: u32,
}

impl Packed {
    fn to_word(self) -> BinaryWord {
        let letters = (0..self.len).rev().map(|i| ((self.bits >> i) & 1) as u8).collect();
        BinaryWord::new(letters).expect("packed words are nonempty")
    }
}

/// Prenecklace DFS state: `p` is the period of the longest Lyndon prefix; the
/// prefix is itself Lyndon iff `p == len`.
#[derive(Clone, Copy)]
struct Prenecklace {
    word: Packed,
    p: usize,
    product: Mat2,
}

fn letter_at(w: Packed, i: usize) -> u8 {
    ((w.bits >> (w.len as usize - 1 - i)) & 1) as u8
}

fn extend(pair: &MatrixPair, node: &Prenecklace, bit: u8, p: usize) -> Prenecklace {
    Prenecklace {
        word: Packed {
            len: node.word.len + 1,
            bits: (node.word.bits << 1) | bit as u32,
        },
        p,
        product: node.product * pair.letter(bit),
    }
}

fn prenecklace_children(pair: &MatrixPair, node: &Prenecklace) -> Vec<Prenecklace> {
    let t = node.word.len as usize;
    let inherited = letter_at(node.word, t - node.p);
    let mut out = vec![extend(pair, node, inherited, node.p)];
    if inherited == 0 {
        out.push(extend(pair, node, 1, t + 1));
    }
    out
}

/// Visit every Lyndon word of length `<= max_len` below `node`.
fn lyndon_dfs(pair: &MatrixPair, node: &Prenecklace, max_len: usize, out: &mut Vec<(f64, Packed)>) {
    let t = node.word.len as usize;
    if node.p == t {
        let root = node.product.spectral_radius().powf(1.0 / t as f64);
        out.push((root, node.word));
    }
    if t < max_len {
        for child in prenecklace_children(pair, node) {
            lyndon_dfs(pair, &child, max_len, out);
        }
    }
}

fn lyndon_roots(pair: &MatrixPair, max_len: usize) -> Vec<(f64, Packed)> {
    let roots = [0u8, 1].map(|bit| Prenecklace {
        word: Packed {
            len: 1,
            bits: bit as u32,
        },
        p: 1,
        product: pair.letter(bit),
    });
    // expand sequentially down to the split depth, then fan out
    let mut out = Vec::new();
    let mut frontier: Vec<Prenecklace> = roots.to_vec();
    while let Some(depth) = frontier.first().map(|n| n.word.len as usize) {
        if depth >= SPLIT_DEPTH.min(max_len) {
            break;
        }
        let mut next = Vec::new();
        for node in &frontier {
            if node.p == depth {
                let root = node.product.spectral_radius().powf(1.0 / depth as f64);
                out.push((root, node.word));
            }
            next.extend(prenecklace_children(pair, node));
        }
        frontier = next;
    }
    let tails: Vec<Vec<(f64, Packed)>> = frontier
        .par_iter()
        .map(|node| {
            let mut v = Vec::new();
            lyndon_dfs(pair, node, max_len, &mut v);
            v
        })
        .collect();
    out.extend(tails.into_iter().flatten());
    out
}

fn norm_dfs(pair: &MatrixPair, norm: &Norm, m: Mat2, depth: usize, max_len: usize, best: &mut [f64]) {
    let value = norm.of(&m);
    if value > best[depth - 1] {
        best[depth - 1] = value;
    }
    if depth < max_len {
        norm_dfs(pair, norm, m * pair.a, depth + 1, max_len, best);
        norm_dfs(pair, norm, m * pair.b, depth + 1, max_len, best);
    }
}

/// `max ‖Π‖` over all products of each length `1..=max_len`.
fn max_norms(pair: &MatrixPair, norm: &Norm, max_len: usize) -> Vec<f64> {
    let split = SPLIT_DEPTH.min(max_len);
    let mut best = vec![0.0f64; max_len];
    let mut frontier = vec![pair.a, pair.b];
    for depth in 1..split {
        for m in &frontier {
            best[depth - 1] = best[depth - 1].max(norm.of(m));
        }
        frontier = frontier.iter().flat_map(|m| [*m * pair.a, *m * pair.b]).collect();
    }
    let partial: Vec<Vec<f64>> = frontier
        .par_iter()
        .map(|m| {
            let mut local = vec![0.0f64; max_len];
            norm_dfs(pair, norm, *m, split, max_len, &mut local);
            local
        })
        .collect();
    for local in partial {
        for (b, l) in best.iter_mut().zip(local) {
            *b = b.max(l);
        }
    }
    best
}

fn better(a: &(f64, Packed), b: &(f64, Packed)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Exhaustive three-member bounds over words of length `<= max_len`.
pub fn brute_force(pair: &MatrixPair, max_len: usize, norm: &Norm) -> Result<BoundsReport> {
    if max_len == 0 {
        return Err(Error::OutOfRange("max_len must be >= 1".into()));
    }
    if max_len > MAX_BRUTE_FORCE_LEN {
        return Err(Error::WordTooLong {
            requested: max_len,
            limit: MAX_BRUTE_FORCE_LEN,
        });
    }
    if !pair.is_finite() {
        return Err(Error::NonFinite);
    }

    // Work with (A, B)/s, s = max(‖A‖₂, ‖B‖₂). Norm roots scale by the
    // same s for any norm, so the correction is one multiplication.
    let s = pair.a.operator_norm_2().max(pair.b.operator_norm_2());
    let s = if s > 0.0 { s } else { 1.0 };
    let scaled = pair.scaled(1.0 / s, 1.0 / s);

    let mut roots = lyndon_roots(&scaled, max_len);
    for r in &mut roots {
        r.0 *= s;
    }
    let norms: Vec<f64> = max_norms(&scaled, norm, max_len)
        .into_iter()
        .enumerate()
        .map(|(i, m)| s * m.powf(1.0 / (i + 1) as f64))
        .collect();

    let mut per_len_best: Vec<Option<(f64, Packed)>> = vec![None; max_len];
    for r in &roots {
        let slot = &mut per_len_best[r.1.len as usize - 1];
        if slot.as_ref().map_or(true, |cur| better(r, cur)) {
            *slot = Some(*r);
        }
    }
    let per_length: Vec<LengthBounds> = per_len_best
        .into_iter()
        .zip(&norms)
        .enumerate()
        .map(|(i, (b, &norm_root))| {
            let (rho_root, w) = b.expect("every length has a Lyndon word");
            LengthBounds {
                k: i + 1,
                best_word: w.to_word(),
                rho_root,
                norm_root,
            }
        })
        .collect();

    let lower = roots.iter().map(|r| r.0).fold(0.0, f64::max);
    let mut upper = norms.iter().copied().fold(f64::INFINITY, f64::min);
    if lower > upper && lower - upper <= 1e-12 * lower {
        upper = lower;
    }

    let band = lower * (1.0 - TIE_TOL);
    let mut top: Vec<(f64, Packed)> = roots.iter().copied().filter(|r| r.0 >= band).collect();
    top.sort_by_key(|r| r.1);
    let best = top[0];
    let tied_count = top.len() - 1;
    let tied = top[1..].iter().take(TIED_LIST_CAP).map(|r| r.1.to_word()).collect();

    let runner = roots
        .iter()
        .filter(|r| r.0 < band)
        .fold(None::<(f64, Packed)>, |acc, r| match acc {
            Some(a) if !better(r, &a) => Some(a),
            _ => Some(*r),
        });

    Ok(BoundsReport {
        max_len,
        norm: norm.name(),
        lower,
        upper,
        best_word: best.1.to_word(),
        tied,
        tied_count,
        runner_up: runner.map(|r| r.1.to_word()),
        runner_up_value: runner.map(|r| r.0),
        gap: runner.map(|r| lower - r.0),
        per_length,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// Terms `ρ(AⁿB)^{1/(n+1)}`, words `0ⁿ1`.
    APowB,
    /// Terms `ρ(BⁿA)^{1/(n+1)}`, words `01ⁿ` up to rotation.
    BPowA,
}

impl Direction {
    pub fn word(self, n: usize) -> BinaryWord {
        match self {
            Direction::APowB => BinaryWord::a_pow_b(n),
            Direction::BPowA => BinaryWord::a_b_pow(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GelfandScan {
    pub direction: Direction,
    /// Exponent of the best term; `None` when `ρ` of the powered matrix wins.
    pub n_star: Option<usize>,
    pub value: f64,
    /// The tail bound certified that no later term exceeds `value`.
    pub terminated: bool,
    /// Last exponent examined.
    pub steps: usize,
}

impl GelfandScan {
    pub fn word(&self) -> BinaryWord {
        match self.n_star {
            Some(n) => self.direction.word(n),
            None => BinaryWord::letter(match self.direction {
                Direction::APowB => 0,
                Direction::BPowA => 1,
            }),
        }
    }
}

/// Similarity `T` bringing `m` to a normal form whose powers stay bounded
/// by `ρ(m)ⁿ` in the 2-norm: diagonal for distinct real eigenvalues,
/// rotation-scaling for complex ones. Other cases use `T = I`.
fn normalizing_basis(m: &Mat2) -> Mat2 {
    let spec = m.spectrum();
    match spec.kind {
        SpectrumKind::RealDistinct => {
            let crate::linalg::Eigenvalues::Real(l1, l2) = spec.eigenvalues else {
                return Mat2::IDENTITY;
            };
            let vec_for = |lambda: f64| {
                let r1 = [m.a11 - lambda, m.a12];
                let r2 = [m.a21, m.a22 - lambda];
                let r = if r1[0].hypot(r1[1]) >= r2[0].hypot(r2[1]) {
                    r1
                } else {
                    r2
                };
                let n = r[0].hypot(r[1]);
                [-r[1] / n, r[0] / n]
            };
            let (v1, v2) = (vec_for(l1), vec_for(l2));
            let t = Mat2::new(v1[0], v2[0], v1[1], v2[1]);
            if t.det().abs() > 1e-8 {
                t
            } else {
                Mat2::IDENTITY
            }
        }
        SpectrumKind::ComplexConjugate => {
            // For M = [[a, b], [c, d]] with c ≠ 0, T = [[(a−d)/2, −ω], [c, 0]]
            // with ω = √(−disc)/2 gives T⁻¹MT = [[tr/2, −ω], [ω, tr/2]].
            let omega = 0.5 * (-m.discriminant()).sqrt();
            let t = Mat2::new(0.5 * (m.a11 - m.a22), -omega, m.a21, 0.0);
            if t.det() != 0.0 {
                t
            } else {
                Mat2::IDENTITY
            }
        }
        SpectrumKind::RealRepeated => Mat2::IDENTITY,
    }
}

/// Invariants of `(P, Q)` for the projector tail bound, scaled by `1/s`.
#[derive(Clone, Copy)]
struct SpectralTail {
    /// `|tr(E₁Q)| / s`, `|tr(E₂Q)| / s`
    t1: f64,
    t2: f64,
    /// `|λ₂ / λ₁|`
    mu: f64,
    /// `|det Q| / s²`
    det_q: f64,
}

impl SpectralTail {
    /// Upper bound on `ρ(P̃ᵐQ̃)` for every `m >= n`.
    fn bound(&self, n: usize) -> f64 {
        let mn = self.mu.powi(n.min(i32::MAX as usize) as i32);
        let half = 0.5 * (self.t1 + mn * self.t2);
        half + (half * half + mn * self.det_q).sqrt()
    }
}

fn spectral_tail(p: &Mat2, q: &Mat2, s: f64) -> Option<SpectralTail> {
    let spec = p.spectrum();
    let crate::linalg::Eigenvalues::Real(l1, l2) = spec.eigenvalues else {
        return None;
    };
    if spec.kind != SpectrumKind::RealDistinct || l2.abs() >= l1.abs() {
        return None;
    }
    let e1 = (*p - Mat2::IDENTITY.scale(l2)).scale(1.0 / (l1 - l2));
    let e2 = Mat2::IDENTITY - e1;
    Some(SpectralTail {
        t1: (e1 * *q).trace().abs() / s,
        t2: (e2 * *q).trace().abs() / s,
        mu: (l2 / l1).abs(),
        det_q: q.det().abs() / (s * s),
    })
}

/// `sup_n { ρ(PⁿQ)^{1/(n+1)}, ρ(P) }` for `(P, Q) = (A, B)` or `(B, A)`.
///
/// The scan conjugates `P` to a normal form and divides by `ρ(P)`, so that
/// `α_n = ‖P̃ⁿ‖₂` stays bounded. At exponent `n` it certifies every later
/// term: writing `m = qn + r + n` with `q >= 0`, `0 <= r < n`,
/// `ρ(P̃ᵐQ̃) <= α_n^q ‖P̃ʳ‖ ‖P̃ⁿQ̃‖`, and the root of that bound is monotone
/// in `q`, so checking `q = 0` and `q → ∞` suffices.
///
/// When `P` has real eigenvalues `|λ₁| > |λ₂|` a second, basis-free bound is
/// tried: with spectral projectors `E₁, E₂`, `tr(PᵐQ) = λ₁ᵐ tr(E₁Q) + λ₂ᵐ tr(E₂Q)`
/// and `det(PᵐQ) = (λ₁λ₂)ᵐ det Q`, so `ρ(PᵐQ)/|λ₁|ᵐ <= h(m)` with `h`
/// decreasing. It closes the scan even when `‖Q̃‖ > 1` and `ρ(P)` wins.
pub fn gelfand_scan(pair: &MatrixPair, direction: Direction) -> Result<GelfandScan> {
    let (p, q, p_name, q_name) = match direction {
        Direction::APowB => (pair.a, pair.b, "A", "B"),
        Direction::BPowA => (pair.b, pair.a, "B", "A"),
    };
    if p.is_zero() {
        return Err(Error::ZeroMatrix(p_name));
    }
    if q.is_zero() {
        return Err(Error::ZeroMatrix(q_name));
    }
    if !pair.is_finite() {
        return Err(Error::NonFinite);
    }

    let basis = normalizing_basis(&p);
    let (t, t_inv) = match basis.inverse() {
        Some(inv) => (basis, inv),
        None => (Mat2::IDENTITY, Mat2::IDENTITY),
    };
    let sigma = p.spectral_radius();
    let s = if sigma > 0.0 { sigma } else { 1.0 };
    let pt = (t_inv * p * t).scale(1.0 / s);
    let qt = (t_inv * q * t).scale(1.0 / s);

    let projector_tail = spectral_tail(&p, &q, s);

    let slack = 1.0 + 1e-12;
    let mut best = sigma / s;
    let mut n_star: Option<usize> = None;
    let mut pow = Mat2::IDENTITY;
    let mut pow_norms: Vec<f64> = Vec::new();

    for n in 0..=GELFAND_CAP {
        // pow = P̃ⁿ
        let term_matrix = pow * qt;
        let term = term_matrix.spectral_radius().powf(1.0 / (n as f64 + 1.0));
        if term > best {
            best = term;
            n_star = Some(n);
        }
        let alpha = pow.operator_norm_2();
        pow_norms.push(alpha);
        if n >= 1 {
            if alpha == 0.0 {
                return Ok(GelfandScan {
                    direction,
                    n_star,
                    value: best * s,
                    terminated: true,
                    steps: n,
                });
            }
            let tail = term_matrix.operator_norm_2();
            let limit_ok = alpha.powf(1.0 / n as f64) <= best * slack;
            let head_ok = limit_ok
                && pow_norms[..n]
                    .iter()
                    .enumerate()
                    .all(|(r, &pr)| (pr * tail).powf(1.0 / (r + n + 1) as f64) <= best * slack);
            let projector_ok = projector_tail.is_some_and(|t| t.bound(n).powf(1.0 / (n as f64 + 1.0)) <= best * slack);
            if head_ok || projector_ok {
                return Ok(GelfandScan {
                    direction,
                    n_star,
                    value: best * s,
                    terminated: true,
                    steps: n,
                });
            }
        }
        pow = pow * pt;
    }
    Ok(GelfandScan {
        direction,
        n_star,
        value: best * s,
        terminated: false,
        steps: GELFAND_CAP,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmpCandidate {
    /// Lyndon representative.
    pub word: BinaryWord,
    /// `ρ(word)^{1/|word|}`.
    pub value: f64,
    pub certified: bool,
    pub certificate: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certification {
    pub candidate: SmpCandidate,
    /// Exact JSR when certified.
    pub jsr: Option<f64>,
    pub lower: f64,
    pub upper: f64,
    /// Other words attaining the certified value within `TIE_TOL`.
    pub tied: Vec<BinaryWord>,
    pub gelfand: Vec<GelfandScan>,
    pub regions: RegionFlags,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifyOptions {
    pub tol: f64,
    /// Word length for brute-force intervals.
    pub max_len: usize,
    /// Stern–Brocot resolution for co-parallel candidates, as `(1, den)`.
    pub resolution_den: i64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_len: DEFAULT_MAX_LEN,
            resolution_den: 1024,
        }
    }
}

fn word_root(pair: &MatrixPair, w: &BinaryWord) -> f64 {
    (crate::linalg::log_spectral_radius(pair, w) / w.len() as f64).exp()
}

/// Best of a finite list of candidate words, with ties.
fn best_of(pair: &MatrixPair, words: &[BinaryWord]) -> (BinaryWord, f64, Vec<BinaryWord>) {
    let scored: Vec<(BinaryWord, f64)> = words.iter().map(|w| (least_rotation(w), word_root(pair, w))).collect();
    let top = scored.iter().map(|s| s.1).fold(0.0, f64::max);
    let band = top * (1.0 - TIE_TOL);
    let mut winners: Vec<BinaryWord> = scored.iter().filter(|s| s.1 >= band).map(|s| s.0.clone()).collect();
    winners.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    winners.dedup();
    let head = winners.remove(0);
    (head, top, winners)
}

pub fn certify(pair: &MatrixPair, tol: f64) -> Result<Certification> {
    certify_with(
        pair,
        &CertifyOptions {
            tol,
            ..CertifyOptions::default()
        },
    )
}

/// SMP candidate and, where a region theorem applies, the exact JSR.
///
/// Regions are tried in the order reducible, cross, neg, mix, copar; the
/// first one whose flag is definitely true decides.
pub fn certify_with(pair: &MatrixPair, opts: &CertifyOptions) -> Result<Certification> {
    if !pair.is_finite() {
        return Err(Error::NonFinite);
    }
    let regions = classify(pair, opts.tol);
    let letters = [BinaryWord::letter(0), BinaryWord::letter(1)];

    let exact =
        |word: BinaryWord, value: f64, tied: Vec<BinaryWord>, tag: &str, gelfand: Vec<GelfandScan>| Certification {
            candidate: SmpCandidate {
                word,
                value,
                certified: true,
                certificate: tag.to_string(),
            },
            jsr: Some(value),
            lower: value,
            upper: value,
            tied,
            gelfand,
            regions: regions.clone(),
        };

    if regions.reducible.is_true() {
        let (w, v, tied) = best_of(pair, &letters);
        return Ok(exact(w, v, tied, "reducible", vec![]));
    }
    if regions.in_cross.is_true() {
        let (w, v, tied) = best_of(pair, &letters);
        return Ok(exact(w, v, tied, "cross", vec![]));
    }
    if regions.in_neg.is_true() {
        let words = [letters[0].clone(), letters[1].clone(), "01".parse()?];
        let (w, v, tied) = best_of(pair, &words);
        return Ok(exact(w, v, tied, "neg", vec![]));
    }
    if regions.in_mix.is_true() {
        return certify_mix(pair, opts, regions);
    }
    if regions.in_copar.is_true() {
        let report = brute_force(pair, opts.max_len, &Norm::Euclid)?;
        let resolution = num_rational::Rational64::new(1, opts.resolution_den);
        let (word, certificate) = match maximize_sturmian(pair, resolution, opts.tol) {
            Ok(c) => (
                christoffel(*c.argmax_gamma.numer() as u64, *c.argmax_gamma.denom() as u64)?,
                "copar-sturmian",
            ),
            Err(_) => (report.best_word.clone(), "copar-brute-force"),
        };
        let value = word_root(pair, &word);
        return Ok(Certification {
            candidate: SmpCandidate {
                word: least_rotation(&word),
                value,
                certified: false,
                certificate: certificate.into(),
            },
            jsr: None,
            lower: report.lower.max(value),
            upper: report.upper,
            tied: report.tied,
            gelfand: vec![],
            regions,
        });
    }
    brute_force_only(pair, opts, regions, vec![])
}

fn brute_force_only(
    pair: &MatrixPair,
    opts: &CertifyOptions,
    regions: RegionFlags,
    gelfand: Vec<GelfandScan>,
) -> Result<Certification> {
    let report = brute_force(pair, opts.max_len, &Norm::Euclid)?;
    Ok(Certification {
        candidate: SmpCandidate {
            word: report.best_word.clone(),
            value: report.lower,
            certified: false,
            certificate: "brute-force-only".into(),
        },
        jsr: None,
        lower: report.lower,
        upper: report.upper,
        tied: report.tied,
        gelfand,
        regions,
    })
}

/// Smallest `k <= max_k` with `Mᵏ = ±ρᵏ I` within `tol`, i.e. `M` is a
/// rotation of finite order up to scale.
fn finite_order(m: &Mat2, max_k: usize, tol: f64) -> Option<usize> {
    let rho = m.spectral_radius();
    if rho == 0.0 {
        return None;
    }
    let unit = m.scale(1.0 / rho);
    let mut acc = unit;
    for k in 1..=max_k {
        let s = 0.5 * acc.trace();
        if (acc - Mat2::IDENTITY.scale(s)).max_abs() <= tol && (s.abs() - 1.0).abs() <= tol {
            return Some(k);
        }
        acc = acc * unit;
    }
    None
}

fn certify_mix(pair: &MatrixPair, opts: &CertifyOptions, regions: RegionFlags) -> Result<Certification> {
    // det B <= 0 <= det A orients the SMP as AⁿB, det A <= 0 <= det B as ABⁿ;
    // a vanishing (or tolerance-small) determinant allows both.
    let da = regions.margins.det_a;
    let db = regions.margins.det_b;
    let near = |d: f64| d.abs() <= opts.tol;
    let mut directions = Vec::new();
    if (db <= 0.0 && da >= 0.0) || near(da) || near(db) {
        directions.push(Direction::APowB);
    }
    if (da <= 0.0 && db >= 0.0) || near(da) || near(db) {
        directions.push(Direction::BPowA);
    }

    let scans = directions
        .iter()
        .map(|&d| gelfand_scan(pair, d))
        .collect::<Result<Vec<_>>>()?;

    let mut words = vec![BinaryWord::letter(0), BinaryWord::letter(1)];
    words.extend(scans.iter().map(|s| s.word()));
    let (word, value, tied) = best_of(pair, &words);
    let value = scans.iter().map(|s| s.value).fold(value, f64::max);

    let all_terminated = scans.iter().all(|s| s.terminated);
    // Exceptional case: the powered matrix has finite order up to scale
    // (a rotation), so longer words can tie the certified value.
    let rotation_tie = scans.iter().any(|s| {
        let powered = match s.direction {
            Direction::APowB => pair.a,
            Direction::BPowA => pair.b,
        };
        powered.spectrum().kind == SpectrumKind::ComplexConjugate
            && (powered.spectral_radius() - value).abs() <= opts.tol * value
            && finite_order(&powered, opts.max_len, opts.tol).is_some()
    });

    if !all_terminated || rotation_tie {
        let mut c = brute_force_only(pair, opts, regions, scans)?;
        c.candidate.certificate = if rotation_tie {
            "mix-rotation-downgrade".into()
        } else {
            "mix-scan-capped".into()
        };
        return Ok(c);
    }
    Ok(Certification {
        candidate: SmpCandidate {
            word,
            value,
            certified: true,
            certificate: "mix".into(),
        },
        jsr: Some(value),
        lower: value,
        upper: value,
        tied,
        gelfand: scans,
        regions,
    })
}

/// Cyclic classes with exactly `a` zeros and `b` ones (powers included),
/// sorted by decreasing `ρ(w)^{1/(a+b)}`.
pub fn class_maximizers(pair: &MatrixPair, a: usize, b: usize) -> Result<Vec<(BinaryWord, f64)>> {
    let n = a + b;
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    if n > MAX_BRUTE_FORCE_LEN {
        return Err(Error::WordTooLong {
            requested: n,
            limit: MAX_BRUTE_FORCE_LEN,
        });
    }
    let mut classes: Vec<BinaryWord> = crate::words::all_words(n)
        .filter(|w| w.zeros() == a)
        .map(|w| least_rotation(&w))
        .collect();
    classes.sort();
    classes.dedup();
    let mut scored: Vec<(BinaryWord, f64)> = classes
        .into_iter()
        .map(|w| {
            let v = word_root(pair, &w);
            (w, v)
        })
        .collect();
    scored.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    Ok(scored)
}
