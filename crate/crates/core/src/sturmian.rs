//! Lyapunov exponents of Sturmian measures and their maximization over the
//! slope in the co-parallel region.
//!
//! For a rational slope `p/q` the Sturmian measure sits on the periodic orbit
//! of the Christoffel word, so `f(p/q) = ln ρ(christoffel(p, q)(A, B)) / q`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{log_spectral_radius, MatrixPair};
use crate::regions::classify;
use crate::words::{christoffel, BinaryWord};

/// Concavity deficits above this abort `maximize_sturmian`.
pub const CONCAVITY_ABORT: f64 = 1e-10;

/// Deficits above this are listed as violations; smaller ones are rounding.
pub const CONCAVITY_REPORT: f64 = 1e-12;

/// Longest Christoffel word evaluated for irrational slopes.
const MAX_CONVERGENT_DEN: i64 = 1 << 24;

fn ser_ratio<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{}/{}", r.numer(), r.denom()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LyapunovSample {
    #[serde(serialize_with = "ser_ratio")]
    pub gamma: Rational64,
    /// `ln ρ / q`; `-inf` when the Christoffel product is nilpotent.
    pub value: f64,
    pub nilpotent: bool,
}

pub fn lyapunov_rational(pair: &MatrixPair, num: u64, den: u64) -> Result<LyapunovSample> {
    let w = christoffel(num, den)?;
    let value = log_spectral_radius(pair, &w) / den as f64;
    Ok(LyapunovSample {
        gamma: Rational64::new(num as i64, den as i64),
        value,
        nilpotent: value == f64::NEG_INFINITY,
    })
}

fn lyap_at(pair: &MatrixPair, g: Rational64) -> Result<f64> {
    Ok(lyapunov_rational(pair, *g.numer() as u64, *g.denom() as u64)?.value)
}

/// Continued-fraction convergents `p_k/q_k` of `gamma`, at most `depth` of them.
pub fn convergents(gamma: f64, depth: usize) -> Vec<Rational64> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut x = gamma;
    for _ in 0..depth {
        let a = x.floor();
        if a > i64::MAX as f64 / 4.0 {
            break;
        }
        let a = a as i64;
        let (h, k) = (a * h1 + h0, a * k1 + k0);
        if k > MAX_CONVERGENT_DEN {
            break;
        }
        out.push(Rational64::new(h, k));
        (h0, h1, k0, k1) = (h1, h, k1, k);
        let frac = x - a as f64;
        if frac <= 1e-15 || (gamma - h as f64 / k as f64).abs() <= f64::EPSILON * gamma.abs() {
            break;
        }
        x = 1.0 / frac;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IrrationalEstimate {
    pub value: f64,
    /// `|f(last convergent) − f(previous convergent)|`; 0 for a single convergent.
    pub increment: f64,
    #[serde(serialize_with = "ser_ratio")]
    pub last_convergent: Rational64,
}

/// Lyapunov exponent at a real slope, through its continued-fraction
/// convergents (the Sturmian measure depends continuously on the slope).
pub fn lyapunov_irrational(pair: &MatrixPair, gamma: f64, depth: usize) -> Result<IrrationalEstimate> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::OutOfRange(format!("slope {gamma} must lie in (0, 1)")));
    }
    if depth == 0 {
        return Err(Error::OutOfRange("depth must be >= 1".into()));
    }
    let cs = convergents(gamma, depth);
    let values = cs.iter().map(|&g| lyap_at(pair, g)).collect::<Result<Vec<f64>>>()?;
    let n = values.len();
    let value = values[n - 1];
    let increment = if n >= 2 { (value - values[n - 2]).abs() } else { 0.0 };
    Ok(IrrationalEstimate {
        value,
        increment,
        last_convergent: cs[n - 1],
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcavityViolation {
    #[serde(serialize_with = "ser_ratio")]
    pub t1: Rational64,
    #[serde(serialize_with = "ser_ratio")]
    pub t2: Rational64,
    #[serde(serialize_with = "ser_ratio")]
    pub t: Rational64,
    /// Chord value minus `f(t)`; positive means concavity fails.
    pub deficit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcavityReport {
    pub grid: Vec<LyapunovSample>,
    pub midpoint_violations: Vec<ConcavityViolation>,
    #[serde(serialize_with = "ser_ratio")]
    pub argmax_gamma: Rational64,
    pub argmax_word: BinaryWord,
    pub max_value: f64,
    #[serde(serialize_with = "ser_ratio")]
    pub resolution: Rational64,
}

fn require_copar(pair: &MatrixPair, tol: f64) -> Result<()> {
    let flags = classify(pair, tol);
    if flags.in_copar.is_true() {
        Ok(())
    } else {
        Err(Error::WrongRegion {
            region: "copar",
            detail: format!(
                "commutator margin {:e}, trace window margin {:e}, reducible {:?}",
                flags.margins.commutator, flags.margins.trace_window, flags.reducible
            ),
        })
    }
}

fn r2f(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Chord audit over sorted samples: for consecutive points `t₁ < t < t₂`,
/// concavity requires `f(t)` to lie on or above the chord.
fn chord_audit(samples: &BTreeMap<Rational64, f64>) -> Vec<ConcavityViolation> {
    let pts: Vec<(Rational64, f64)> = samples.iter().map(|(&g, &v)| (g, v)).collect();
    pts.windows(3)
        .filter_map(|w| {
            let (t1, f1) = w[0];
            let (t, f) = w[1];
            let (t2, f2) = w[2];
            let lam = r2f((t - t1) / (t2 - t1));
            let chord = (1.0 - lam) * f1 + lam * f2;
            let deficit = chord - f;
            (deficit > CONCAVITY_REPORT).then_some(ConcavityViolation { t1, t2, t, deficit })
        })
        .collect()
}

/// Stern–Brocot search for the slope maximizing `f(γ) = λ(μ_γ)`.
///
/// Keeps a node `m` with Farey-neighbour brackets `l < m < r` and probes the
/// two children `l ⊕ m`, `m ⊕ r`. Strict concavity of `f` decides which side
/// holds the maximum; the search stops once `r − l < resolution`.
pub fn maximize_sturmian(pair: &MatrixPair, resolution: Rational64, tol: f64) -> Result<ConcavityReport> {
    if resolution <= Rational64::from_integer(0) {
        return Err(Error::OutOfRange("resolution must be positive".into()));
    }
    require_copar(pair, tol)?;

    let mut cache: BTreeMap<Rational64, f64> = BTreeMap::new();
    let mut f = |g: Rational64| -> Result<f64> {
        if let Some(&v) = cache.get(&g) {
            return Ok(v);
        }
        let v = lyap_at(pair, g)?;
        cache.insert(g, v);
        Ok(v)
    };
    let mediant = |a: Rational64, b: Rational64| Rational64::new(a.numer() + b.numer(), a.denom() + b.denom());

    let mut l = Rational64::new(0, 1);
    let mut r = Rational64::new(1, 1);
    let mut m = Rational64::new(1, 2);
    f(l)?;
    f(r)?;
    while r - l >= resolution {
        let a = mediant(l, m);
        let b = mediant(m, r);
        let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
        if fa > fm {
            r = m;
            m = a;
        } else if fb > fm {
            l = m;
            m = b;
        } else {
            l = a;
            r = b;
        }
    }

    let violations = chord_audit(&cache);
    if let Some(worst) = violations
        .iter()
        .filter(|v| v.deficit > CONCAVITY_ABORT)
        .max_by(|a, b| a.deficit.total_cmp(&b.deficit))
    {
        return Err(Error::ConcavityViolation {
            t1: worst.t1.to_string(),
            t2: worst.t2.to_string(),
            deficit: worst.deficit,
        });
    }

    let (argmax_gamma, max_value) = cache
        .range(l..=r)
        .map(|(&g, &v)| (g, v))
        .max_by(|x, y| x.1.total_cmp(&y.1).then_with(|| y.0.denom().cmp(x.0.denom())))
        .expect("bracket endpoints are evaluated");
    let argmax_word = christoffel(*argmax_gamma.numer() as u64, *argmax_gamma.denom() as u64)?;
    let grid = cache
        .iter()
        .map(|(&gamma, &value)| LyapunovSample {
            gamma,
            value,
            nilpotent: value == f64::NEG_INFINITY,
        })
        .collect();
    Ok(ConcavityReport {
        grid,
        midpoint_violations: violations,
        argmax_gamma,
        argmax_word,
        max_value,
        resolution,
    })
}

/// Farey sequence of order `n` on `[0, 1]`.
pub fn farey(n: i64) -> Vec<Rational64> {
    let mut out: Vec<Rational64> = (1..=n)
        .flat_map(|q| {
            (0..=q)
                .filter(move |p| p.gcd(&q) == 1)
                .map(move |p| Rational64::new(p, q))
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Strict midpoint concavity on the Farey grid of order `max_den`: for every
/// `t₁ < t₂` on the grid, `f((t₁ + t₂)/2) > (f(t₁) + f(t₂))/2`. Midpoints are
/// evaluated wherever they land, whatever their denominator. Deficits up to
/// `CONCAVITY_REPORT` are rounding and are not listed.
pub fn midpoint_audit(pair: &MatrixPair, max_den: i64) -> Result<Vec<ConcavityViolation>> {
    let grid = farey(max_den);
    let values: Vec<f64> = grid.iter().map(|&g| lyap_at(pair, g)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|i| (i + 1..grid.len()).map(move |j| (i, j)))
        .collect();
    let found: Vec<Option<ConcavityViolation>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let t = (grid[i] + grid[j]) / Rational64::from_integer(2);
            let fm = lyap_at(pair, t)?;
            let deficit = 0.5 * (values[i] + values[j]) - fm;
            Ok((deficit > CONCAVITY_REPORT).then_some(ConcavityViolation {
                t1: grid[i],
                t2: grid[j],
                t,
                deficit,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// `ρ(AB) − ρ(A)ρ(B)`, positive throughout the co-parallel region.
pub fn copar_gap(pair: &MatrixPair, tol: f64) -> Result<f64> {
    require_copar(pair, tol)?;
    Ok((pair.a * pair.b).spectral_radius() - pair.a.spectral_radius() * pair.b.spectral_radius())
}
