//! Seeded randomness.
//!
//! Every random stage draws from ChaCha8 seeded with `seed_from_u64`, and
//! normals come from `rand_distr::StandardNormal` (ziggurat). Both are
//! reproducible across platforms and releases of their crates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

pub type StageRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> StageRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` independent standard normal draws.
pub fn standard_normals<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<T> {
    (0..n)
        .map(|_| T::of(rng.sample::<f64, _>(StandardNormal)))
        .collect()
}

/// Per-stage seeds of one experiment run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSeeds {
    pub simulation: u64,
    pub sparsify: u64,
    pub sampling: u64,
}

impl StageSeeds {
    /// Derives the three stage seeds from one master seed.
    pub fn from_master(master: u64) -> Self {
        let mut rng = seeded(master);
        Self {
            simulation: rng.random(),
            sparsify: rng.random(),
            sampling: rng.random(),
        }
    }
}

/// Mixes a stage seed with a task index (SplitMix64 finalizer) so that
/// concurrent tasks never share a generator stream.
pub fn task_seed(stage: u64, index: u64) -> u64 {
    let mut z = stage ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
