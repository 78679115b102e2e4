//! Seeded random pairs. Every sampler draws from a ChaCha8 stream so results
//! are reproducible across platforms and thread counts.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{Mat2, MatrixPair};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    /// iid standard normal entries.
    #[default]
    Normal,
    /// iid uniform entries on `[0, 1)`.
    Uniform01,
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "normal" | "gaussian" => Ok(Distribution::Normal),
            "uniform01" | "uniform" => Ok(Distribution::Uniform01),
            _ => Err(Error::UnknownDistribution(s.to_string())),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distribution::Normal => "normal",
            Distribution::Uniform01 => "uniform01",
        })
    }
}

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_entry<R: Rng + ?Sized>(rng: &mut R, dist: Distribution) -> f64 {
    match dist {
        Distribution::Normal => StandardNormal.sample(rng),
        Distribution::Uniform01 => rng.random::<f64>(),
    }
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, dist: Distribution) -> Mat2 {
    Mat2::new(
        random_entry(rng, dist),
        random_entry(rng, dist),
        random_entry(rng, dist),
        random_entry(rng, dist),
    )
}

pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, dist: Distribution) -> MatrixPair {
    MatrixPair::new(random_matrix(rng, dist), random_matrix(rng, dist))
}

/// Draw pairs until `accept` holds, giving up after `max_tries` draws.
pub fn random_pair_where<R, F>(rng: &mut R, dist: Distribution, max_tries: usize, mut accept: F) -> Option<MatrixPair>
where
    R: Rng + ?Sized,
    F: FnMut(&MatrixPair) -> bool,
{
    (0..max_tries).map(|_| random_pair(rng, dist)).find(|p| accept(p))
}
