use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tropihar::config::{self, OutputFormat, RunConfig, TreeRunConfig};
use tropihar::diagnostics::DiagnosticsReport;
use tropihar::{formats, oracle, run, CliError, Result};
use tropihar_core::tree_from_ultrametric;

#[derive(Parser)]
#[command(
    name = "tropihar",
    version,
    about = "Hit-and-run sampling on tropical polytopes and tree space"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Chi-square against rejection samples from the polytope.
    Uniformity,
    /// KS of distances along a two-vertex polytope.
    Segment,
    /// Topology histogram of ultrametric samples.
    Topology,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a tropical polytope.
    Sample {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        kernel: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Sample ultrametrics (equidistant trees).
    SampleTrees {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Tie tolerance for topologies.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Test a sample file.
    Diagnose {
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Vertex file (JSON or CSV).
        #[arg(long)]
        polytope: Option<PathBuf>,
        /// Sampling config whose polytope to use.
        #[arg(long, conflicts_with = "polytope")]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact uniform samples by rejection.
    Oracle {
        #[arg(long)]
        polytope: Option<PathBuf>,
        #[arg(long, conflicts_with = "polytope")]
        config: Option<PathBuf>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Sample {
            config,
            seed,
            kernel,
            out,
            format,
            tol,
        } => {
            let (mut cfg, base): (RunConfig, _) = config::load(&config)?;
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.kernel = kernel.unwrap_or(cfg.kernel);
            cfg.out = out.or(cfg.out.map(|o| base.join(o)));
            cfg.tol = tol.unwrap_or(cfg.tol);
            if let Some(f) = format {
                cfg.format = match f {
                    Format::Csv => OutputFormat::Csv,
                    Format::Jsonl => OutputFormat::Jsonl,
                };
            }
            let result = run::run(&cfg, &base)?;
            let mut buf = Vec::new();
            match cfg.format {
                OutputFormat::Csv => formats::write_points_csv(&mut buf, &result.samples)?,
                OutputFormat::Jsonl => formats::write_points_jsonl(&mut buf, &result.samples)
                    .map_err(|e| CliError::io("<buffer>", e))?,
            }
            emit(cfg.out.as_deref(), &buf)?;
            sidecar(
                cfg.out.as_deref(),
                "report.json",
                &result.report(&cfg.kernel, cfg.seed, cfg.bins),
            )
        }
        Cmd::SampleTrees {
            config,
            seed,
            out,
            tol,
        } => {
            let (mut cfg, base): (TreeRunConfig, _) = config::load(&config)?;
            cfg.seed = seed.unwrap_or(cfg.seed);
            // Paths inside a config are relative to the config file.
            cfg.out = out.or(cfg.out.map(|o| base.join(o)));
            cfg.tie_tol = tol.unwrap_or(cfg.tie_tol);
            let result = run::run_trees(&cfg)?;
            let mut buf = Vec::new();
            formats::write_ultrametrics_csv(&mut buf, &result.samples)?;
            emit(cfg.out.as_deref(), &buf)?;
            let hist = formats::histogram_json(&result.histogram);
            match cfg.out.as_deref() {
                Some(o) => {
                    formats::write_file(&with_suffix(o, "topologies.json"), hist.as_bytes())?
                }
                None => eprintln!("{hist}"),
            }
            if cfg.newick {
                let mut nwk = String::new();
                for u in &result.samples {
                    nwk.push_str(&formats::newick(&tree_from_ultrametric(
                        u.as_map(),
                        cfg.tie_tol,
                    )?));
                    nwk.push('\n');
                }
                match cfg.out.as_deref() {
                    Some(o) => formats::write_file(&with_suffix(o, "nwk"), nwk.as_bytes())?,
                    None => eprint!("{nwk}"),
                }
            }
            let report = DiagnosticsReport {
                seed: Some(cfg.seed),
                sample_count: result.samples.len(),
                inner_steps: ((cfg.burn_in + cfg.n_samples) * cfg.iterations) as u64,
                timing: result.timing,
                ..Default::default()
            };
            sidecar(cfg.out.as_deref(), "report.json", &report)
        }
        Cmd::Diagnose {
            samples,
            mode,
            polytope,
            config,
            bins,
            seed,
            tol,
            out,
        } => {
            let report_json = match mode {
                Mode::Topology => {
                    let (m, rows) = formats::read_ultrametrics_csv(&samples)?;
                    formats::histogram_json(&run::diagnose_topology(m, rows, tol.max(1e-8))?)
                }
                Mode::Uniformity | Mode::Segment => {
                    let p = polytope_arg(polytope, config)?;
                    let rows = formats::read_points_csv(&samples)?;
                    let mut report = match mode {
                        Mode::Uniformity => run::diagnose_uniformity(&rows, &p, bins, seed, tol)?,
                        _ => run::diagnose_segment(&rows, &p)?,
                    };
                    report.seed = Some(seed);
                    report.bins = bins;
                    serde_json::to_string_pretty(&report).expect("serializable")
                }
            };
            emit(out.as_deref(), format!("{report_json}\n").as_bytes())
        }
        Cmd::Oracle {
            polytope,
            config,
            n,
            seed,
            tol,
            out,
        } => {
            let p = polytope_arg(polytope, config)?;
            let res = oracle::rejection_uniform(&p, n, seed, tol)?;
            let mut buf = Vec::new();
            formats::write_points_csv(&mut buf, &res.samples)?;
            emit(out.as_deref(), &buf)?;
            eprintln!(
                "accepted {} of {} draws ({:.4})",
                res.samples.len(),
                res.draws,
                res.acceptance()
            );
            Ok(())
        }
    }
}

fn polytope_arg(
    polytope: Option<PathBuf>,
    config: Option<PathBuf>,
) -> Result<tropihar_core::TropicalPolytope> {
    match (polytope, config) {
        (Some(p), _) => formats::read_polytope(&p),
        (None, Some(c)) => {
            let (cfg, base): (RunConfig, _) = config::load(&c)?;
            run::load_polytope(&cfg.polytope, &base)
        }
        (None, None) => Err(CliError::config("this mode needs --polytope or --config")),
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => formats::write_file(p, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn sidecar(out: Option<&Path>, suffix: &str, report: &DiagnosticsReport) -> Result<()> {
    let json = serde_json::to_string_pretty(report).expect("serializable");
    match out {
        Some(p) => formats::write_file(&with_suffix(p, suffix), json.as_bytes()),
        None => {
            eprintln!("{json}");
            Ok(())
        }
    }
}
