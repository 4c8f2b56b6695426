//! JSON run configurations.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tropihar_core::{AnchorMode, ChainConfig, DensityKind, HarKernel};

use crate::error::{CliError, Result};

fn one() -> usize {
    1
}
fn default_tol() -> f64 {
    1e-9
}
fn default_max_rejects() -> u64 {
    1000
}
fn default_scale() -> f64 {
    4.0
}
fn default_bins() -> usize {
    20
}
fn default_lambda() -> f64 {
    1.0
}
fn default_tie_tol() -> f64 {
    tropihar_core::ultrametric::DEFAULT_TIE_TOL
}

/// A path to a vertex file or the vertex rows inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolytopeSource {
    Path(PathBuf),
    Inline(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Anchor {
    #[default]
    Walking,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Density {
    Linear,
    #[default]
    Squared,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub mu: Vec<f64>,
    pub sigma: f64,
    #[serde(default)]
    pub kind: Density,
}

impl TargetConfig {
    pub fn density_kind(&self) -> DensityKind {
        match self.kind {
            Density::Linear => DensityKind::Linear,
            Density::Squared => DensityKind::Squared,
        }
    }
}

/// Configuration of a polytope sampling run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kernel: String,
    /// Vertices per move for `vertexnu`.
    #[serde(default)]
    pub nu: Option<usize>,
    pub polytope: PolytopeSource,
    /// Start point; the first vertex when absent.
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
    #[serde(default = "one")]
    pub iterations: usize,
    #[serde(default)]
    pub burn_in: usize,
    pub n_samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_rejects")]
    pub max_rejects: u64,
    #[serde(default = "default_scale")]
    pub extension_scale: f64,
    #[serde(default)]
    pub anchor: Anchor,
    /// Metropolis-Hastings target; the kernel above becomes the proposal.
    #[serde(default)]
    pub target: Option<TargetConfig>,
    /// Independent chains, run in parallel; samples are concatenated in
    /// chain order.
    #[serde(default = "one")]
    pub chains: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default = "default_bins")]
    pub bins: usize,
}

impl RunConfig {
    pub fn har_kernel(&self) -> Result<HarKernel> {
        HarKernel::from_name(&self.kernel, self.nu).map_err(|_| {
            CliError::config(format!(
                "unknown kernel `{}` (expected one of {})",
                self.kernel,
                HarKernel::NAMES.join(", ")
            ))
        })
    }

    pub fn chain_config(&self) -> ChainConfig {
        ChainConfig {
            iterations: self.iterations,
            burn_in: self.burn_in,
            n_samples: self.n_samples,
            seed: self.seed,
            chain_index: 0,
            tol: self.tol,
            max_rejects: self.max_rejects,
            extension_scale: self.extension_scale,
            anchor: match self.anchor {
                Anchor::Walking => AnchorMode::Walking,
                Anchor::Fixed => AnchorMode::Fixed,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.har_kernel()?;
        self.chain_config()
            .validate()
            .map_err(|e| CliError::config(e.to_string()))?;
        if self.chains == 0 {
            return Err(CliError::config("chains must be at least 1"));
        }
        if self.bins == 0 {
            return Err(CliError::config("bins must be at least 1"));
        }
        Ok(())
    }
}

/// Configuration of an ultrametric sampling run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeRunConfig {
    /// Leaf count; inferred from `x0` when absent.
    #[serde(default)]
    pub m: Option<usize>,
    /// Starting ultrametric as a pair vector.
    pub x0: Vec<f64>,
    #[serde(default = "one")]
    pub iterations: usize,
    #[serde(default)]
    pub burn_in: usize,
    pub n_samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    /// Used for the ultrametric check on `x0` and for topology ties.
    #[serde(default = "default_tie_tol")]
    pub tie_tol: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Also write one Newick tree per sample.
    #[serde(default)]
    pub newick: bool,
}

impl TreeRunConfig {
    pub fn chain_config(&self) -> ChainConfig {
        ChainConfig {
            iterations: self.iterations,
            burn_in: self.burn_in,
            n_samples: self.n_samples,
            seed: self.seed,
            ..ChainConfig::default()
        }
    }
}

/// Reads and parses a JSON config; relative paths inside it resolve against
/// the file's directory.
pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<(T, PathBuf)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let cfg = serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((cfg, dir))
}
