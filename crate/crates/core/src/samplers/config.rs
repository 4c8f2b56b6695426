use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::point::TropicalPoint;

/// Seedable stream used by every chain.
pub type RandomStream = ChaCha8Rng;

/// Stream for chain `chain_index` of a run seeded with `seed`.
///
/// Parallel chains share the seed and differ in the ChaCha stream id, so
/// their draws never overlap and each chain is reproducible on its own.
pub fn random_stream(seed: u64, chain_index: u64) -> RandomStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain_index);
    rng
}

/// Which point the vertex kernels connect the sampled vertex-hull point to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AnchorMode {
    /// The current inner iterate.
    #[default]
    Walking,
    /// The point the emission started from.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    /// Inner moves per emission.
    pub iterations: usize,
    pub burn_in: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub chain_index: u64,
    /// Membership tolerance for rejection checks and the start point.
    pub tol: f64,
    /// Cap on consecutive rejections in any rejection loop.
    pub max_rejects: u64,
    /// Multiplier applied to the end pieces of extended segments.
    pub extension_scale: f64,
    pub anchor: AnchorMode,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            iterations: 1,
            burn_in: 0,
            n_samples: 1,
            seed: 0,
            chain_index: 0,
            tol: 1e-9,
            max_rejects: 1000,
            extension_scale: 4.0,
            anchor: AnchorMode::Walking,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(domain("iterations must be at least 1"));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(domain("tol must be a non-negative finite number"));
        }
        if !(self.extension_scale >= 1.0 && self.extension_scale.is_finite()) {
            return Err(domain("extension_scale must be finite and at least 1"));
        }
        if self.max_rejects == 0 {
            return Err(domain("max_rejects must be positive"));
        }
        Ok(())
    }

    pub fn rng(&self) -> RandomStream {
        random_stream(self.seed, self.chain_index)
    }
}

#[derive(Debug, Clone)]
pub struct ChainState {
    pub current: TropicalPoint,
    pub rng: RandomStream,
    /// Inner moves taken so far.
    pub step_count: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ChainStats {
    pub emitted: u64,
    pub inner_steps: u64,
    /// Filter proposals, counted by Metropolis-Hastings kernels only.
    pub proposals: u64,
    pub accepted: u64,
    /// Draws thrown away by any rejection loop.
    pub rejected: u64,
}

impl ChainStats {
    pub fn acceptance_rate(&self) -> Option<f64> {
        (self.proposals > 0).then(|| self.accepted as f64 / self.proposals as f64)
    }
}
