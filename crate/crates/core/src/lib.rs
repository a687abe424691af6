//! Exact computations in finite p-groups: central series, the spectrum of
//! layers holding elements of order p, and constructions of groups with
//! prescribed spectra.

pub mod constructions;
pub mod cyclo;
pub mod error;
pub mod group;
pub mod linalg;
pub mod series;
pub mod verify;

pub use error::{Error, Result};

/// Resource guards shared by every computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// largest group (or subgroup closure) that may be enumerated
    pub max_order: usize,
    /// largest group handed to the direct-factor search
    pub decompose_bound: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_order: 2_000_000, decompose_bound: 20_000 }
    }
}
