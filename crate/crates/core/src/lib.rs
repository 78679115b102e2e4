//! Classification of pairs of real 2×2 matrices by their spectrum-maximizing
//! products, with exact joint spectral radii where the region allows.

pub mod constructions;
pub mod error;
pub mod fricke;
pub mod jsr;
pub mod linalg;
pub mod regions;
pub mod reproduce;
pub mod sampling;
pub mod sturmian;
pub mod words;

pub use error::{Error, Result};
pub use linalg::{FiveTuple, Mat2, MatrixPair};
pub use regions::{classify, classify_tuple, Flag, RegionFlags};
pub use words::BinaryWord;

pub use num_rational::Rational64;
