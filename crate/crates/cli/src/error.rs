use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad configuration, input file or flag combination.
    #[error("config error: {0}")]
    Config(String),

    #[error("cannot read or write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Runtime(#[from] tropihar_core::Error),

    #[error("oracle infeasible: acceptance {acceptance:.2e} after {draws} draws")]
    OracleInfeasible { acceptance: f64, draws: u64 },

    #[error("statistic undefined: {0}")]
    Degenerate(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for bad input caught before sampling, 3 for failures while running.
    pub fn exit_code(&self) -> i32 {
        use tropihar_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Runtime(E::Mixing { .. } | E::DegenerateSegment) => 3,
            CliError::Runtime(_) => 2,
            CliError::OracleInfeasible { .. } | CliError::Degenerate(_) => 3,
        }
    }
}
