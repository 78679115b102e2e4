#![allow(dead_code)]

use proptest::prelude::*;
use smplab_core::sampling::{random_pair, stream_rng, Distribution};
use smplab_core::{Mat2, MatrixPair};

pub const TOL: f64 = 1e-9;

pub fn entry() -> impl Strategy<Value = f64> {
    -4.0f64..4.0
}

pub fn mat() -> impl Strategy<Value = Mat2> {
    (entry(), entry(), entry(), entry()).prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
}

pub fn pair() -> impl Strategy<Value = MatrixPair> {
    (mat(), mat()).prop_map(|(a, b)| MatrixPair::new(a, b))
}

/// Seeded normal pairs, for tests that need many draws with a fixed seed.
pub fn normal_pairs(seed: u64, n: usize) -> Vec<MatrixPair> {
    let mut rng = stream_rng(seed, 0);
    (0..n).map(|_| random_pair(&mut rng, Distribution::Normal)).collect()
}

/// First `n` seeded normal pairs accepted by `keep`.
pub fn normal_pairs_where(seed: u64, n: usize, keep: impl Fn(&MatrixPair) -> bool) -> Vec<MatrixPair> {
    let mut rng = stream_rng(seed, 0);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = random_pair(&mut rng, Distribution::Normal);
        if keep(&p) {
            out.push(p);
        }
    }
    out
}

pub fn rel_close(a: f64, b: f64, scale: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * scale.max(1e-300)
}
