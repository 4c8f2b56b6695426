use alloc::vec::Vec;

use rand::Rng;

use super::cluster::upgma_values;
use super::{ultrametric_values, Ultrametric};
use crate::error::{domain, Result};
use crate::point::diff_range;
use crate::samplers::{ChainConfig, RandomStream};
use crate::segment::{draw_ell, max_plus_point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeHarParams {
    /// Step length multiplying the random direction.
    pub lambda: f64,
}

impl Default for TreeHarParams {
    fn default() -> Self {
        TreeHarParams { lambda: 1.0 }
    }
}

/// Hit-and-run on ultrametrics: perturb, project back with UPGMA, then move
/// to a uniform point of the tropical segment towards the projection.
///
/// Direction entries are uniform on `[0, max(x0)]`, with `x0` the chain's
/// starting point. Iterates are kept as raw distance vectors.
pub struct UltrametricChain {
    m: usize,
    x: Vec<f64>,
    scale: f64,
    lambda: f64,
    rng: RandomStream,
    steps: u64,
}

impl UltrametricChain {
    pub fn new(x0: &Ultrametric, cfg: &ChainConfig, params: &TreeHarParams) -> Result<Self> {
        cfg.validate()?;
        if !(params.lambda > 0.0 && params.lambda.is_finite()) {
            return Err(domain("lambda must be positive and finite"));
        }
        Ok(UltrametricChain {
            m: x0.leaves(),
            x: x0.values().to_vec(),
            scale: x0.as_map().max_value(),
            lambda: params.lambda,
            rng: cfg.rng(),
            steps: 0,
        })
    }

    pub fn current(&self) -> Ultrametric {
        Ultrametric::new_unchecked(self.m, self.x.clone())
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// One inner move.
    pub fn step(&mut self) {
        let y: Vec<f64> = self
            .x
            .iter()
            .map(|xi| {
                let d: f64 = self.rng.random::<f64>() * self.scale;
                xi + self.lambda * d
            })
            .collect();
        let pi = upgma_values(self.m, &y);
        let (lo, hi) = diff_range(&pi, &self.x);
        let ell = draw_ell(lo, hi, &mut self.rng);
        self.x = max_plus_point(&self.x, &pi, ell);
        self.steps += 1;
    }

    /// `iterations` inner moves, returning the new state.
    pub fn emit(&mut self, iterations: usize) -> Ultrametric {
        for _ in 0..iterations {
            self.step();
        }
        self.current()
    }
}

/// Runs the tree chain from `x0`: `cfg.burn_in` discarded emissions, then
/// `cfg.n_samples` kept ones, each `cfg.iterations` moves apart.
pub fn har_ultrametric(
    x0: &Ultrametric,
    cfg: &ChainConfig,
    params: &TreeHarParams,
) -> Result<Vec<Ultrametric>> {
    debug_assert!(ultrametric_values(x0.leaves(), x0.values(), 1e-9));
    let mut chain = UltrametricChain::new(x0, cfg, params)?;
    for _ in 0..cfg.burn_in {
        chain.emit(cfg.iterations);
    }
    Ok((0..cfg.n_samples)
        .map(|_| chain.emit(cfg.iterations))
        .collect())
}
