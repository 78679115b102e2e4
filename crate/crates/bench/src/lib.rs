//! Shared fixtures for the benchmarks.

use smplab_core::constructions::realize_from_tuple;
use smplab_core::sampling::{random_pair, random_pair_where, stream_rng, Distribution};
use smplab_core::{classify, FiveTuple, MatrixPair};

pub const TOL: f64 = 1e-9;

/// `n` seeded standard-normal pairs, the same on every run.
pub fn normal_pairs(seed: u64, n: usize) -> Vec<MatrixPair> {
    let mut rng = stream_rng(seed, 0);
    (0..n).map(|_| random_pair(&mut rng, Distribution::Normal)).collect()
}

/// A seeded pair satisfying `accept`.
pub fn pair_where(seed: u64, accept: impl FnMut(&MatrixPair) -> bool) -> MatrixPair {
    let mut rng = stream_rng(seed, 1);
    random_pair_where(&mut rng, Distribution::Normal, 100_000, accept).expect("region has positive measure")
}

pub fn cross_pair() -> MatrixPair {
    pair_where(11, |p| classify(p, TOL).in_cross.is_true())
}

pub fn mix_pair() -> MatrixPair {
    pair_where(12, |p| {
        let f = classify(p, TOL);
        f.in_mix.is_true() && !f.in_cross.is_true() && !f.in_neg.is_true()
    })
}

/// Realization of the co-parallel tuple `(3, 3, 8, 1, 1)`.
pub fn copar_pair() -> MatrixPair {
    realize_from_tuple(&FiveTuple::new(3.0, 3.0, 8.0, 1.0, 1.0)).expect("realizable")
}
