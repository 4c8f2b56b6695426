use alloc::format;
use alloc::vec::Vec;

use super::config::{ChainConfig, ChainState, ChainStats};
use super::kernels::Kernel;
use crate::error::{Error, Result};
use crate::point::TropicalPoint;
use crate::polytope::TropicalPolytope;

/// Lazily driven chain; iterating yields emissions after burn-in.
pub struct Chain<'a, K> {
    kernel: &'a K,
    polytope: &'a TropicalPolytope,
    cfg: &'a ChainConfig,
    state: ChainState,
    stats: ChainStats,
    burned: bool,
}

impl<'a, K: Kernel> Chain<'a, K> {
    pub fn new(
        kernel: &'a K,
        polytope: &'a TropicalPolytope,
        x0: &TropicalPoint,
        cfg: &'a ChainConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        kernel.validate(polytope)?;
        if x0.dim() != polytope.dim() {
            return Err(Error::Dimension {
                expected: polytope.dim(),
                found: x0.dim(),
            });
        }
        let d = polytope.distance_to(x0);
        if d > cfg.tol {
            return Err(Error::Precondition(format!(
                "start point {x0} is at distance {d} from the polytope"
            )));
        }
        Ok(Chain {
            kernel,
            polytope,
            cfg,
            state: ChainState {
                current: x0.clone(),
                rng: cfg.rng(),
                step_count: 0,
            },
            stats: ChainStats::default(),
            burned: false,
        })
    }

    pub fn state(&self) -> &ChainState {
        &self.state
    }

    pub fn stats(&self) -> &ChainStats {
        &self.stats
    }

    fn advance(&mut self) -> Result<TropicalPoint> {
        let x = self
            .kernel
            .emit(self.polytope, &mut self.state, self.cfg, &mut self.stats)?;
        self.state.current = x.clone();
        Ok(x)
    }

    /// Next kept emission, running the burn-in first if needed.
    pub fn next_sample(&mut self) -> Result<TropicalPoint> {
        if !self.burned {
            for _ in 0..self.cfg.burn_in {
                self.advance()?;
            }
            self.burned = true;
        }
        let x = self.advance()?;
        self.stats.emitted += 1;
        Ok(x)
    }
}

impl<K: Kernel> Iterator for Chain<'_, K> {
    type Item = Result<TropicalPoint>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_sample())
    }
}

#[derive(Debug, Clone)]
pub struct ChainOutput {
    pub samples: Vec<TropicalPoint>,
    pub stats: ChainStats,
}

/// Burn-in, then `cfg.n_samples` emissions.
pub fn run_chain<K: Kernel>(
    kernel: &K,
    polytope: &TropicalPolytope,
    x0: &TropicalPoint,
    cfg: &ChainConfig,
) -> Result<ChainOutput> {
    let mut chain = Chain::new(kernel, polytope, x0, cfg)?;
    let mut samples = Vec::with_capacity(cfg.n_samples);
    for _ in 0..cfg.n_samples {
        samples.push(chain.next_sample()?);
    }
    Ok(ChainOutput {
        samples,
        stats: chain.stats,
    })
}
