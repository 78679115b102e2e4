//! Region membership for a pair: the algebraic criteria on matrices, the
//! trace-window criteria on five-tuples, and an independent fixed-point
//! oracle on the projective line.

use std::ops::AddAssign;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{is_reducible, FiveTuple, Mat2, MatrixPair, Reducibility, SpectrumKind};
use crate::sampling::{random_pair, stream_rng, Distribution};

/// Three-valued membership. `Indeterminate` means some defining quantity lies
/// within the tolerance of its boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flag {
    True,
    False,
    Indeterminate,
}

impl Flag {
    pub fn is_true(self) -> bool {
        self == Flag::True
    }

    pub fn is_indeterminate(self) -> bool {
        self == Flag::Indeterminate
    }

    pub fn and(self, other: Flag) -> Flag {
        match (self, other) {
            (Flag::False, _) | (_, Flag::False) => Flag::False,
            (Flag::Indeterminate, _) | (_, Flag::Indeterminate) => Flag::Indeterminate,
            _ => Flag::True,
        }
    }

    pub fn or(self, other: Flag) -> Flag {
        self.not().and(other.not()).not()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Flag {
        match self {
            Flag::True => Flag::False,
            Flag::False => Flag::True,
            Flag::Indeterminate => Flag::Indeterminate,
        }
    }

    fn all(flags: &[Flag]) -> Flag {
        flags.iter().fold(Flag::True, |acc, &f| acc.and(f))
    }
}

impl From<bool> for Flag {
    fn from(b: bool) -> Self {
        if b {
            Flag::True
        } else {
            Flag::False
        }
    }
}

impl Serialize for Flag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Flag::True => s.serialize_bool(true),
            Flag::False => s.serialize_bool(false),
            Flag::Indeterminate => s.serialize_str("indeterminate"),
        }
    }
}

/// Sign of a normalized quantity. `Zero` is an exact floating-point zero;
/// `Near` is a nonzero value inside the tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sign {
    Pos,
    Neg,
    Zero,
    Near,
}

impl Sign {
    fn of(v: f64, tol: f64) -> Sign {
        if v == 0.0 {
            Sign::Zero
        } else if v.abs() <= tol {
            Sign::Near
        } else if v > 0.0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    fn positive(self) -> Flag {
        match self {
            Sign::Pos => Flag::True,
            Sign::Near => Flag::Indeterminate,
            _ => Flag::False,
        }
    }

    fn negative(self) -> Flag {
        match self {
            Sign::Neg => Flag::True,
            Sign::Near => Flag::Indeterminate,
            _ => Flag::False,
        }
    }
}

/// Signed boundary distances, each divided by its natural scale so they are
/// invariant under `(A, B) → (αA, βB)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Margins {
    /// `det(AB − BA) / (sA sB)²`
    pub commutator: f64,
    /// `det A / sA²`
    pub det_a: f64,
    pub det_b: f64,
    /// `(tr² − 4 det) / s²` for each matrix
    pub disc_a: f64,
    pub disc_b: f64,
    /// `(|z| − |xy|/2) / (sA sB)`
    pub trace_window: f64,
    /// `z x y / (sA sB)²`
    pub trace_sign: f64,
    /// Distance above the upper window end, for tuple classification.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_above: Option<f64>,
    /// Distance below the lower window end, for tuple classification.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_below: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionFlags {
    pub in_cross: Flag,
    pub in_mix: Flag,
    pub in_neg: Flag,
    pub in_copar: Flag,
    pub in_anti: Flag,
    #[serde(rename = "in_complexS")]
    pub in_complex_s: Flag,
    pub reducible: Flag,
    pub margins: Margins,
}

impl RegionFlags {
    /// Membership in `R_cross ∪ R_mix ∪ R_neg ∪ R_copar`.
    pub fn union4(&self) -> Flag {
        self.in_cross.or(self.in_mix).or(self.in_neg).or(self.in_copar)
    }

    pub fn flags(&self) -> [Flag; 7] {
        [
            self.in_cross,
            self.in_mix,
            self.in_neg,
            self.in_copar,
            self.in_anti,
            self.in_complex_s,
            self.reducible,
        ]
    }

    pub fn any_indeterminate(&self) -> bool {
        self.flags().iter().any(|f| f.is_indeterminate())
    }

    /// Flags only, ignoring margins.
    pub fn same_membership(&self, other: &RegionFlags) -> bool {
        self.flags() == other.flags()
    }

    fn clear_for_reducible(&mut self) {
        self.in_cross = Flag::False;
        self.in_mix = Flag::False;
        self.in_neg = Flag::False;
        self.in_copar = Flag::False;
        self.in_anti = Flag::False;
        self.in_complex_s = Flag::False;
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

/// `det A · det B <= 0`, with an exact zero counting as a definite member.
fn mix_flag(u: Sign, v: Sign) -> Flag {
    match (u, v) {
        (Sign::Zero, _) | (_, Sign::Zero) => Flag::True,
        (Sign::Pos, Sign::Neg) | (Sign::Neg, Sign::Pos) => Flag::True,
        (Sign::Pos, Sign::Pos) | (Sign::Neg, Sign::Neg) => Flag::False,
        _ => Flag::Indeterminate,
    }
}

/// Classification of a matrix pair by the algebraic region descriptions.
pub fn classify(p: &MatrixPair, tol: f64) -> RegionFlags {
    let t = p.five_tuple();
    let sa = p.a.operator_norm_2();
    let sb = p.b.operator_norm_2();
    let sab = sa * sb;

    let margins = Margins {
        commutator: p.normalized_commutator(),
        det_a: ratio(t.u, sa * sa),
        det_b: ratio(t.v, sb * sb),
        disc_a: ratio(p.a.discriminant(), sa * sa),
        disc_b: ratio(p.b.discriminant(), sb * sb),
        trace_window: ratio(t.z.abs() - 0.5 * (t.x * t.y).abs(), sab),
        trace_sign: ratio(t.z * t.x * t.y, sab * sab),
        window_above: None,
        window_below: None,
    };

    let u = Sign::of(margins.det_a, tol);
    let v = Sign::of(margins.det_b, tol);
    let disc_a = Sign::of(margins.disc_a, tol);
    let disc_b = Sign::of(margins.disc_b, tol);
    let comm = Sign::of(margins.commutator, tol);
    let window = Sign::of(margins.trace_window, tol);
    let tsign = Sign::of(margins.trace_sign, tol);

    let diag = disc_a.positive().and(disc_b.positive());
    let glplus = u.positive().and(v.positive());
    let copar_traces = window.positive().and(tsign.positive());
    let hyperbolic_neg_comm = Flag::all(&[glplus, diag, comm.negative()]);

    let reducible = match is_reducible(p, tol) {
        Reducibility::Reducible => Flag::True,
        Reducibility::Irreducible => Flag::False,
        Reducibility::Indeterminate(_) => Flag::Indeterminate,
    };

    let mut flags = RegionFlags {
        in_cross: diag.and(comm.positive()),
        in_mix: mix_flag(u, v),
        in_neg: u.negative().and(v.negative()),
        in_copar: hyperbolic_neg_comm.and(copar_traces),
        in_anti: hyperbolic_neg_comm.and(copar_traces.not()),
        in_complex_s: disc_a.negative().or(disc_b.negative()),
        reducible,
        margins,
    };
    if reducible.is_true() {
        flags.clear_for_reducible();
    }
    flags
}

/// Classification from the five-tuple alone, via the trace window
/// `xy/2 ± √((x² − 4u)(y² − 4v))/2` after flipping signs so that `x, y >= 0`.
pub fn classify_tuple(t: &FiveTuple, tol: f64) -> Result<RegionFlags> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let sa = t.x.abs().max(t.u.abs().sqrt());
    let sb = t.y.abs().max(t.v.abs().sqrt());
    let sab = sa * sb;

    let delta = t.delta();
    let realizability = ratio(4.0 * t.u - t.x * t.x, sa * sa).min(ratio(delta, sab * sab));
    if realizability > tol {
        return Err(Error::Unrealizable {
            margin: (4.0 * t.u - t.x * t.x).min(delta),
        });
    }

    let FiveTuple {
        mut x,
        mut y,
        mut z,
        u,
        v,
    } = *t;
    if x < 0.0 {
        x = -x;
        z = -z;
    }
    if y < 0.0 {
        y = -y;
        z = -z;
    }
    let da = x * x - 4.0 * u;
    let db = y * y - 4.0 * v;
    let half_width = 0.5 * (da.max(0.0) * db.max(0.0)).sqrt();
    let centre = 0.5 * x * y;
    let above = ratio(z - centre - half_width, sab);
    let below = ratio(centre - half_width - z, sab);

    let margins = Margins {
        commutator: ratio(delta, sab * sab),
        det_a: ratio(u, sa * sa),
        det_b: ratio(v, sb * sb),
        disc_a: ratio(da, sa * sa),
        disc_b: ratio(db, sb * sb),
        trace_window: ratio(z.abs() - 0.5 * (x * y).abs(), sab),
        trace_sign: ratio(z * x * y, sab * sab),
        window_above: Some(above),
        window_below: Some(below),
    };

    let su = Sign::of(margins.det_a, tol);
    let sv = Sign::of(margins.det_b, tol);
    let disc_a = Sign::of(margins.disc_a, tol);
    let disc_b = Sign::of(margins.disc_b, tol);
    let s_above = Sign::of(above, tol);
    let s_below = Sign::of(below, tol);

    let diag = disc_a.positive().and(disc_b.positive());
    let glplus = su.positive().and(sv.positive());
    let inside = s_above.negative().and(s_below.negative());

    let reducible = match Sign::of(margins.commutator, tol) {
        Sign::Zero => Flag::True,
        Sign::Near => Flag::Indeterminate,
        _ => Flag::False,
    };

    let mut flags = RegionFlags {
        in_cross: diag.and(inside),
        in_mix: mix_flag(su, sv),
        in_neg: su.negative().and(sv.negative()),
        in_copar: Flag::all(&[glplus, diag, s_above.positive()]),
        in_anti: Flag::all(&[glplus, diag, s_below.positive()]),
        in_complex_s: disc_a.negative().or(disc_b.negative()),
        reducible,
        margins,
    };
    if reducible.is_true() {
        flags.clear_for_reducible();
    }
    Ok(flags)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AxisKind {
    Crossing,
    CoParallel,
    AntiParallel,
    /// Non-interleaved fixed points where a determinant is not positive, so
    /// the parallel/anti-parallel orientation is undefined.
    NonCrossing,
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AxisConfig {
    pub kind: AxisKind,
    /// `[x_A, y_A, x_B, y_B]`: attracting then repelling fixed point of each
    /// Möbius map `t ↦ (at + b)/(ct + d)`; `±inf` encodes the point at infinity.
    pub fixed_points: Option<[f64; 4]>,
}

/// Eigenvector directions `(dominant, other)` as projective points, or `None`
/// unless the eigenvalues are real with distinct moduli (or distinct values
/// of equal modulus, in which case the order is arbitrary).
fn fixed_directions(m: &Mat2) -> Option<([f64; 2], [f64; 2])> {
    let s = m.spectrum();
    if s.kind != SpectrumKind::RealDistinct {
        return None;
    }
    let crate::linalg::Eigenvalues::Real(l1, l2) = s.eigenvalues else {
        return None;
    };
    let eigvec = |lambda: f64| {
        // rows of M − λI annihilate the eigenvector; use the larger row
        let r1 = [m.a11 - lambda, m.a12];
        let r2 = [m.a21, m.a22 - lambda];
        let r = if r1[0].hypot(r1[1]) >= r2[0].hypot(r2[1]) {
            r1
        } else {
            r2
        };
        [-r[1], r[0]]
    };
    Some((eigvec(l1), eigvec(l2)))
}

fn pdet(p: [f64; 2], q: [f64; 2]) -> f64 {
    p[0] * q[1] - p[1] * q[0]
}

fn affine(p: [f64; 2]) -> f64 {
    if p[1] == 0.0 {
        f64::INFINITY
    } else {
        p[0] / p[1]
    }
}

/// Fixed-point configuration of the two Möbius maps on the projective line.
///
/// Points are handled as homogeneous vectors, so `∞` needs no special case:
/// the cross-ratio `[p,q;r,s] = det(p,r)det(q,s) / (det(p,s)det(q,r))` is
/// negative exactly when `{p,q}` separates `{r,s}`.
pub fn geometric_oracle(p: &MatrixPair) -> AxisConfig {
    let degenerate = AxisConfig {
        kind: AxisKind::Degenerate,
        fixed_points: None,
    };
    let (Some((xa, ya)), Some((xb, yb))) = (fixed_directions(&p.a), fixed_directions(&p.b)) else {
        return degenerate;
    };
    let fixed_points = Some([affine(xa), affine(ya), affine(xb), affine(yb)]);

    let d_xa_xb = pdet(xa, xb);
    let d_xa_yb = pdet(xa, yb);
    let d_ya_xb = pdet(ya, xb);
    let d_ya_yb = pdet(ya, yb);
    if d_xa_xb == 0.0 || d_xa_yb == 0.0 || d_ya_xb == 0.0 || d_ya_yb == 0.0 {
        return AxisConfig {
            kind: AxisKind::Degenerate,
            fixed_points,
        };
    }
    let cross_ratio = (d_xa_xb * d_ya_yb) / (d_xa_yb * d_ya_xb);
    if cross_ratio < 0.0 {
        return AxisConfig {
            kind: AxisKind::Crossing,
            fixed_points,
        };
    }
    if !(p.a.det() > 0.0 && p.b.det() > 0.0) {
        return AxisConfig {
            kind: AxisKind::NonCrossing,
            fixed_points,
        };
    }
    // Send y_A to ∞ and x_A to 0: s(q) = det(q, x_A) / det(q, y_A). Both B
    // points land on the same side of 0; the one nearer 0 is the B point
    // adjacent to x_A. The axes are co-directed when that is B's attracting
    // point x_B.
    let s = |q: [f64; 2]| pdet(q, xa) / pdet(q, ya);
    let kind = if s(xb).abs() < s(yb).abs() {
        AxisKind::CoParallel
    } else {
        AxisKind::AntiParallel
    };
    AxisConfig { kind, fixed_points }
}

/// The axis configuration implied by the algebraic flags, for comparison
/// with `geometric_oracle`. `None` when the flags do not pin one down.
pub fn algebraic_axis_kind(f: &RegionFlags) -> Option<AxisKind> {
    if f.reducible.is_true() {
        return Some(AxisKind::Degenerate);
    }
    let diag = f.margins.disc_a > 0.0 && f.margins.disc_b > 0.0;
    if !diag || f.any_indeterminate() {
        return None;
    }
    if f.in_cross.is_true() {
        Some(AxisKind::Crossing)
    } else if f.in_copar.is_true() {
        Some(AxisKind::CoParallel)
    } else if f.in_anti.is_true() {
        Some(AxisKind::AntiParallel)
    } else if f.margins.commutator < 0.0 {
        Some(AxisKind::NonCrossing)
    } else {
        None
    }
}

/// Region counts from a Monte Carlo probe; merged by field-wise addition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RegionCounts {
    pub samples: u64,
    pub cross: u64,
    pub mix: u64,
    pub neg: u64,
    pub copar: u64,
    pub anti: u64,
    pub complex_s: u64,
    pub reducible: u64,
    /// Samples with at least one indeterminate flag.
    pub indeterminate: u64,
    /// Samples definitely in the union of cross, mix, neg and copar.
    pub union4: u64,
    pub cross_and_mix: u64,
    pub cross_and_neg: u64,
    pub copar_and_cross: u64,
    /// Samples outside the union that are neither reducible nor indeterminate.
    pub outside: u64,
}

impl RegionCounts {
    pub const CSV_HEADER: [&'static str; 14] = [
        "samples",
        "cross",
        "mix",
        "neg",
        "copar",
        "anti",
        "complex_s",
        "reducible",
        "indeterminate",
        "union4",
        "cross_and_mix",
        "cross_and_neg",
        "copar_and_cross",
        "outside",
    ];

    pub fn record(&mut self, f: &RegionFlags) {
        let count = |b: bool| u64::from(b);
        self.samples += 1;
        self.cross += count(f.in_cross.is_true());
        self.mix += count(f.in_mix.is_true());
        self.neg += count(f.in_neg.is_true());
        self.copar += count(f.in_copar.is_true());
        self.anti += count(f.in_anti.is_true());
        self.complex_s += count(f.in_complex_s.is_true());
        self.reducible += count(f.reducible.is_true());
        self.indeterminate += count(f.any_indeterminate());
        let union = f.union4().is_true();
        self.union4 += count(union);
        self.cross_and_mix += count(f.in_cross.is_true() && f.in_mix.is_true());
        self.cross_and_neg += count(f.in_cross.is_true() && f.in_neg.is_true());
        self.copar_and_cross += count(f.in_copar.is_true() && f.in_cross.is_true());
        self.outside += count(!union && !f.reducible.is_true() && !f.any_indeterminate());
    }

    pub fn as_row(&self) -> [u64; 14] {
        [
            self.samples,
            self.cross,
            self.mix,
            self.neg,
            self.copar,
            self.anti,
            self.complex_s,
            self.reducible,
            self.indeterminate,
            self.union4,
            self.cross_and_mix,
            self.cross_and_neg,
            self.copar_and_cross,
            self.outside,
        ]
    }

    pub fn union_fraction(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.union4 as f64 / self.samples as f64
        }
    }
}

impl AddAssign for RegionCounts {
    fn add_assign(&mut self, o: RegionCounts) {
        self.samples += o.samples;
        self.cross += o.cross;
        self.mix += o.mix;
        self.neg += o.neg;
        self.copar += o.copar;
        self.anti += o.anti;
        self.complex_s += o.complex_s;
        self.reducible += o.reducible;
        self.indeterminate += o.indeterminate;
        self.union4 += o.union4;
        self.cross_and_mix += o.cross_and_mix;
        self.cross_and_neg += o.cross_and_neg;
        self.copar_and_cross += o.copar_and_cross;
        self.outside += o.outside;
    }
}

/// Samples per independent random stream.
pub const MONTE_CARLO_BLOCK: u64 = 4096;

/// Classify `n` seeded random pairs with iid entries.
///
/// Block `k` covers samples `k·4096 ..` and draws from ChaCha8 stream `k`, so
/// the counts do not depend on the number of worker threads.
pub fn monte_carlo_regions(seed: u64, n: u64, dist: Distribution, tol: f64) -> RegionCounts {
    let blocks = n.div_ceil(MONTE_CARLO_BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = stream_rng(seed, block);
            let len = MONTE_CARLO_BLOCK.min(n - block * MONTE_CARLO_BLOCK);
            let mut counts = RegionCounts::default();
            for _ in 0..len {
                counts.record(&classify(&random_pair(&mut rng, dist), tol));
            }
            counts
        })
        .reduce(RegionCounts::default, |mut a, b| {
            a += b;
            a
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::realize_from_tuple;

    const TOL: f64 = 1e-9;

    fn example_pair() -> MatrixPair {
        MatrixPair::new(Mat2::diag(2.0, 0.5), Mat2::new(1.0, 1.0, 1.0, 1.0))
    }

    fn tuple(x: f64, y: f64, z: f64, u: f64, v: f64) -> FiveTuple {
        FiveTuple::new(x, y, z, u, v)
    }

    #[test]
    fn classify_examples() {
        let f = classify(&example_pair(), TOL);
        assert_eq!(f.in_cross, Flag::True);
        assert_eq!(f.in_mix, Flag::True);
        assert_eq!(f.in_copar, Flag::False);
        assert_eq!(f.reducible, Flag::False);

        let p = realize_from_tuple(&tuple(3.0, 3.0, 8.0, 1.0, 1.0)).unwrap();
        let f = classify(&p, TOL);
        assert_eq!(f.in_copar, Flag::True);
        for flag in [f.in_cross, f.in_mix, f.in_neg, f.in_anti, f.in_complex_s, f.reducible] {
            assert_eq!(flag, Flag::False);
        }
    }

    #[test]
    fn classify_tuple_examples() {
        let f = classify_tuple(&tuple(3.0, 3.0, 8.0, 1.0, 1.0), TOL).unwrap();
        assert_eq!(f.in_copar, Flag::True);
        assert_eq!(f.in_cross, Flag::False);
        let f = classify_tuple(&tuple(3.0, 3.0, 4.0, 1.0, 1.0), TOL).unwrap();
        assert_eq!(f.in_cross, Flag::True);
        let f = classify_tuple(&tuple(3.0, 3.0, 1.0, 1.0, 1.0), TOL).unwrap();
        assert_eq!(f.in_anti, Flag::True);
        assert!(matches!(
            classify_tuple(&tuple(0.0, 0.0, 0.0, 1.0, 1.0), TOL),
            Err(Error::Unrealizable { .. })
        ));
        // negated traces land in the same region
        let f = classify_tuple(&tuple(-3.0, 3.0, -8.0, 1.0, 1.0), TOL).unwrap();
        assert_eq!(f.in_copar, Flag::True);
    }

    #[test]
    fn oracle_examples() {
        let o = geometric_oracle(&example_pair());
        assert_eq!(o.kind, AxisKind::Crossing);
        let fp = o.fixed_points.unwrap();
        assert!(fp[0].is_infinite() && fp[1] == 0.0, "{fp:?}");
        let mut b = [fp[2], fp[3]];
        b.sort_by(f64::total_cmp);
        assert!((b[0] + 1.0).abs() < 1e-15 && (b[1] - 1.0).abs() < 1e-15, "{b:?}");

        let copar = realize_from_tuple(&tuple(3.0, 3.0, 8.0, 1.0, 1.0)).unwrap();
        assert_eq!(geometric_oracle(&copar).kind, AxisKind::CoParallel);
        let anti = realize_from_tuple(&tuple(3.0, 3.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(geometric_oracle(&anti).kind, AxisKind::AntiParallel);

        let rot = MatrixPair::new(Mat2::new(0.0, -1.0, 1.0, 0.0), Mat2::diag(2.0, 1.0));
        assert_eq!(geometric_oracle(&rot).kind, AxisKind::Degenerate);
    }

    #[test]
    fn monte_carlo_zero_samples() {
        assert_eq!(
            monte_carlo_regions(0, 0, Distribution::Normal, TOL),
            RegionCounts::default()
        );
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = monte_carlo_regions(3, 10_000, Distribution::Normal, TOL);
        let b = monte_carlo_regions(3, 10_000, Distribution::Normal, TOL);
        assert_eq!(a, b);
        assert_eq!(a.samples, 10_000);
        assert_eq!(a.copar_and_cross, 0);
    }

    #[test]
    fn flag_json() {
        assert_eq!(serde_json::to_string(&Flag::True).unwrap(), "true");
        assert_eq!(
            serde_json::to_string(&Flag::Indeterminate).unwrap(),
            "\"indeterminate\""
        );
        let s = serde_json::to_value(classify(&example_pair(), TOL)).unwrap();
        assert_eq!(s["in_complexS"], serde_json::json!(false));
    }

    #[test]
    fn reducible_clears_regions() {
        let p = MatrixPair::new(Mat2::diag(2.0, -1.0), Mat2::diag(0.5, 3.0));
        let f = classify(&p, TOL);
        assert_eq!(f.reducible, Flag::True);
        assert!(f.flags()[..6].iter().all(|&x| x == Flag::False));
    }
}
