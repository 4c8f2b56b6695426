//! Run drivers: sampling with timing and parallel chains, tree sampling and
//! the diagnostics behind `tropihar diagnose`.

use std::collections::BTreeMap;
use std::path::Path;
use std::thread;
use std::time::Instant;

use tropihar_core::{
    run_chain, ChainConfig, ChainStats, DissimilarityMap, Kernel, MhFilter, TargetDensity,
    TreeHarParams, TreeTopology, TropicalPoint, TropicalPolytope, Ultrametric,
};

use crate::config::{PolytopeSource, RunConfig, TreeRunConfig};
use crate::diagnostics::{marginal_chi_squares, DiagnosticsReport, Ks, Timing};
use crate::error::{CliError, Result};
use crate::formats;
use crate::oracle::rejection_uniform;

#[derive(Debug, Clone)]
pub struct SampleRun {
    pub samples: Vec<TropicalPoint>,
    pub stats: ChainStats,
    pub timing: Timing,
}

impl SampleRun {
    pub fn report(&self, kernel: &str, seed: u64, bins: usize) -> DiagnosticsReport {
        DiagnosticsReport {
            kernel: Some(kernel.to_owned()),
            seed: Some(seed),
            sample_count: self.samples.len(),
            bins,
            acceptance_rate: self.stats.acceptance_rate(),
            rejected: self.stats.rejected,
            inner_steps: self.stats.inner_steps,
            timing: self.timing.clone(),
            ..Default::default()
        }
    }
}

pub fn load_polytope(src: &PolytopeSource, base: &Path) -> Result<TropicalPolytope> {
    match src {
        PolytopeSource::Path(p) => formats::read_polytope(&base.join(p)),
        PolytopeSource::Inline(rows) => formats::polytope_from_rows(rows),
    }
}

fn timing(start: Instant, samples: usize, steps: u64) -> Timing {
    let total = start.elapsed().as_secs_f64();
    Timing {
        total_seconds: total,
        seconds_per_sample: total / samples.max(1) as f64,
        seconds_per_inner_step: (steps > 0).then(|| total / steps as f64),
    }
}

/// Runs `chains` independent chains, chain `c` on stream `c`, splitting
/// `cfg.n_samples` as evenly as possible (earlier chains take the remainder).
pub fn run_chains<K: Kernel + Sync>(
    kernel: &K,
    p: &TropicalPolytope,
    x0: &TropicalPoint,
    cfg: &ChainConfig,
    chains: usize,
) -> Result<SampleRun> {
    let start = Instant::now();
    let configs: Vec<ChainConfig> = (0..chains)
        .map(|c| ChainConfig {
            chain_index: c as u64,
            n_samples: cfg.n_samples / chains + usize::from(c < cfg.n_samples % chains),
            ..cfg.clone()
        })
        .collect();
    let outputs: Vec<_> = if chains == 1 {
        vec![run_chain(kernel, p, x0, &configs[0])]
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = configs
                .iter()
                .map(|c| s.spawn(move || run_chain(kernel, p, x0, c)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("chain thread panicked"))
                .collect()
        })
    };
    let mut samples = Vec::with_capacity(cfg.n_samples);
    let mut stats = ChainStats::default();
    for out in outputs {
        let out = out?;
        samples.extend(out.samples);
        stats.emitted += out.stats.emitted;
        stats.inner_steps += out.stats.inner_steps;
        stats.proposals += out.stats.proposals;
        stats.accepted += out.stats.accepted;
        stats.rejected += out.stats.rejected;
    }
    let timing = timing(start, samples.len(), stats.inner_steps);
    Ok(SampleRun {
        samples,
        stats,
        timing,
    })
}

/// Executes a [`RunConfig`]; `base` resolves a relative polytope path.
pub fn run(cfg: &RunConfig, base: &Path) -> Result<SampleRun> {
    cfg.validate()?;
    let p = load_polytope(&cfg.polytope, base)?;
    let kernel = cfg.har_kernel()?;
    let chain_cfg = cfg.chain_config();
    let point =
        |v: &[f64]| TropicalPoint::new(v).map_err(|e| CliError::config(format!("bad point: {e}")));
    match &cfg.target {
        None => {
            let x0 = match &cfg.x0 {
                Some(v) => point(v)?,
                None => p.vertex(0).clone(),
            };
            run_chains(&kernel, &p, &x0, &chain_cfg, cfg.chains)
        }
        Some(t) => {
            if !kernel.is_symmetric() {
                return Err(CliError::config(format!(
                    "kernel `{}` is not a symmetric proposal; use extrapolation or extrapolation-subset",
                    kernel.name()
                )));
            }
            let mu = point(&t.mu)?;
            let target = TargetDensity::new(mu.clone(), t.sigma, t.density_kind())?;
            run_chains(
                &MhFilter::new(kernel, target),
                &p,
                &mu,
                &chain_cfg,
                cfg.chains,
            )
        }
    }
}

#[derive(Debug, Clone)]
pub struct TreeRun {
    pub samples: Vec<Ultrametric>,
    pub histogram: BTreeMap<TreeTopology, usize>,
    pub timing: Timing,
}

pub fn run_trees(cfg: &TreeRunConfig) -> Result<TreeRun> {
    let map = match cfg.m {
        Some(m) => DissimilarityMap::new(m, cfg.x0.clone()),
        None => DissimilarityMap::from_values(cfg.x0.clone()),
    }
    .map_err(|e| CliError::config(format!("x0: {e}")))?;
    let x0 =
        Ultrametric::new(map, cfg.tie_tol).map_err(|e| CliError::config(format!("x0: {e}")))?;
    let chain_cfg = cfg.chain_config();
    let start = Instant::now();
    let samples =
        tropihar_core::har_ultrametric(&x0, &chain_cfg, &TreeHarParams { lambda: cfg.lambda })?;
    let steps = ((cfg.burn_in + cfg.n_samples) * cfg.iterations) as u64;
    let timing = timing(start, samples.len(), steps);
    let histogram = tropihar_core::topology_histogram(&samples, cfg.tie_tol)?;
    Ok(TreeRun {
        samples,
        histogram,
        timing,
    })
}

/// Chi-square of `samples` against as many oracle points, on every 2D
/// marginal, gridded over the bounding box.
pub fn diagnose_uniformity(
    samples: &[Vec<f64>],
    p: &TropicalPolytope,
    bins: usize,
    seed: u64,
    tol: f64,
) -> Result<DiagnosticsReport> {
    check_dims(samples, p.dim())?;
    let start = Instant::now();
    let oracle = rejection_uniform(p, samples.len(), seed, tol)?;
    let reference: Vec<Vec<f64>> = oracle
        .samples
        .iter()
        .map(|x| x.as_slice().to_vec())
        .collect();
    let canonical: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| TropicalPoint::new(s).map(TropicalPoint::into_vec))
        .collect::<std::result::Result<_, _>>()?;
    let bb = p.bounding_box();
    let chi_square = marginal_chi_squares(&canonical, &reference, &bb.lo, &bb.hi, bins)?;
    Ok(DiagnosticsReport {
        sample_count: samples.len(),
        reference_count: Some(reference.len()),
        bins,
        chi_square,
        timing: timing(start, samples.len(), 0),
        ..Default::default()
    })
}

/// KS test of `d_tr(v, X)` against `Uniform[0, d_tr(u, v)]` for samples `X`
/// on the segment between the two vertices of `p`.
pub fn diagnose_segment(samples: &[Vec<f64>], p: &TropicalPolytope) -> Result<DiagnosticsReport> {
    if p.num_vertices() != 2 {
        return Err(CliError::config(
            "segment mode needs a polytope with exactly two vertices",
        ));
    }
    check_dims(samples, p.dim())?;
    let (u, v) = (p.vertex(0), p.vertex(1));
    let dists = samples
        .iter()
        .map(|s| Ok(v.distance_to(&TropicalPoint::new(s)?)))
        .collect::<Result<Vec<f64>>>()?;
    let ks: Ks = crate::diagnostics::ks_uniform(&dists, 0.0, u.distance_to(v))?;
    Ok(DiagnosticsReport {
        sample_count: samples.len(),
        ks: Some(ks),
        ..Default::default()
    })
}

fn check_dims(samples: &[Vec<f64>], e: usize) -> Result<()> {
    if samples.is_empty() {
        return Err(CliError::config("no samples"));
    }
    if let Some(bad) = samples.iter().find(|s| s.len() != e) {
        return Err(CliError::config(format!(
            "sample has {} coordinates, polytope has {e}",
            bad.len()
        )));
    }
    Ok(())
}

/// Topology histogram of ultrametric rows.
pub fn diagnose_topology(
    m: usize,
    rows: Vec<Vec<f64>>,
    tie_tol: f64,
) -> Result<BTreeMap<TreeTopology, usize>> {
    let us = rows
        .into_iter()
        .map(|r| Ultrametric::new(DissimilarityMap::new(m, r)?, tie_tol))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(tropihar_core::topology_histogram(&us, tie_tol)?)
}
