use rand::Rng;

use super::chain::{run_chain, ChainOutput};
use super::config::{ChainConfig, ChainState, ChainStats};
use super::kernels::Kernel;
use crate::error::{domain, Error, Result};
use crate::point::TropicalPoint;
use crate::polytope::TropicalPolytope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DensityKind {
    /// `exp(-d / σ)`
    Linear,
    /// `exp(-d² / σ)`
    #[default]
    Squared,
}

/// Unnormalized density centred at `mu` in the tropical metric.
#[derive(Debug, Clone)]
pub struct TargetDensity {
    mu: TropicalPoint,
    sigma: f64,
    kind: DensityKind,
}

impl TargetDensity {
    pub fn new(mu: TropicalPoint, sigma: f64, kind: DensityKind) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(domain("sigma must be positive and finite"));
        }
        Ok(TargetDensity { mu, sigma, kind })
    }

    pub fn mu(&self) -> &TropicalPoint {
        &self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    pub fn log_density(&self, x: &TropicalPoint) -> f64 {
        let d = self.mu.distance_to(x);
        match self.kind {
            DensityKind::Linear => -d / self.sigma,
            DensityKind::Squared => -d * d / self.sigma,
        }
    }

    /// `min(1, f(to) / f(from))`, evaluated in log space.
    pub fn acceptance_ratio(&self, from: &TropicalPoint, to: &TropicalPoint) -> f64 {
        libm::exp((self.log_density(to) - self.log_density(from)).min(0.0))
    }
}

/// Metropolis-Hastings filter over a symmetric base kernel. Only accepted
/// proposals are emitted; a rejected proposal is redrawn from the same state.
#[derive(Debug, Clone)]
pub struct MhFilter<K> {
    pub base: K,
    pub target: TargetDensity,
    /// Cap on consecutive rejected proposals for one emission.
    pub max_proposals: u64,
}

impl<K: Kernel> MhFilter<K> {
    pub fn new(base: K, target: TargetDensity) -> Self {
        MhFilter {
            base,
            target,
            max_proposals: 10_000_000,
        }
    }
}

impl<K: Kernel> Kernel for MhFilter<K> {
    fn validate(&self, p: &TropicalPolytope) -> Result<()> {
        if self.target.mu.dim() != p.dim() {
            return Err(Error::Dimension {
                expected: p.dim(),
                found: self.target.mu.dim(),
            });
        }
        self.base.validate(p)
    }

    fn emit(
        &self,
        p: &TropicalPolytope,
        state: &mut ChainState,
        cfg: &ChainConfig,
        stats: &mut ChainStats,
    ) -> Result<TropicalPoint> {
        let log_current = self.target.log_density(&state.current);
        let mut rejects = 0u64;
        loop {
            let proposal = self.base.emit(p, state, cfg, stats)?;
            stats.proposals += 1;
            let log_ratio = (self.target.log_density(&proposal) - log_current).min(0.0);
            let u: f64 = state.rng.random();
            if u < libm::exp(log_ratio) {
                stats.accepted += 1;
                return Ok(proposal);
            }
            stats.rejected += 1;
            rejects += 1;
            if rejects >= self.max_proposals {
                return Err(Error::Mixing {
                    rejects,
                    step: state.step_count,
                });
            }
        }
    }
}

/// Runs the filter from `x0 = mu`, which must lie in `p`.
pub fn mh_filter<K: Kernel>(
    p: &TropicalPolytope,
    base: K,
    target: TargetDensity,
    cfg: &ChainConfig,
) -> Result<ChainOutput> {
    let x0 = target.mu.clone();
    run_chain(&MhFilter::new(base, target), p, &x0, cfg)
}
