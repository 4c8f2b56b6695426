//! Exact uniform samples from a polytope by rejection from its bounding box.

use rand::Rng;
use tropihar_core::samplers::random_stream;
use tropihar_core::{TropicalPoint, TropicalPolytope};

use crate::error::{CliError, Result};

/// Give up if fewer than this fraction of draws are accepted ...
pub const MIN_ACCEPTANCE: f64 = 1e-4;
/// ... once this many draws have been made.
pub const PROBE_DRAWS: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct OracleOutput {
    pub samples: Vec<TropicalPoint>,
    pub draws: u64,
}

impl OracleOutput {
    /// Zero when nothing was drawn.
    pub fn acceptance(&self) -> f64 {
        if self.draws == 0 {
            return 0.0;
        }
        self.samples.len() as f64 / self.draws as f64
    }
}

/// `n` independent uniform points of `p` (membership within `tol`).
pub fn rejection_uniform(
    p: &TropicalPolytope,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<OracleOutput> {
    let bb = p.bounding_box();
    let mut rng = random_stream(seed, u64::MAX);
    let e = p.dim();
    let mut samples = Vec::with_capacity(n);
    let mut draws = 0u64;
    let mut raw = vec![0.0; e];
    while samples.len() < n {
        for ((r, lo), hi) in raw.iter_mut().zip(&bb.lo).zip(&bb.hi).skip(1) {
            *r = lo + rng.random::<f64>() * (hi - lo);
        }
        draws += 1;
        let x = TropicalPoint::new(&raw)?;
        if p.distance_to(&x) <= tol {
            samples.push(x);
        }
        if draws == PROBE_DRAWS {
            let acceptance = samples.len() as f64 / draws as f64;
            if acceptance < MIN_ACCEPTANCE {
                return Err(CliError::OracleInfeasible { acceptance, draws });
            }
        }
    }
    Ok(OracleOutput { samples, draws })
}
