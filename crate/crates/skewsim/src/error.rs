use std::path::PathBuf;

use skewsim_core::Error as CoreError;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// Numerical breakdown or anything else that is not the caller's fault.
    pub const INTERNAL: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const REGIME: i32 = 3;
    pub const STATISTICAL: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Json { .. } => exit::CONFIG,
            CliError::Core(e) => match e {
                CoreError::InvalidConfig(_)
                | CoreError::Domain { .. }
                | CoreError::EmptySample
                | CoreError::InfiniteMoment { .. } => exit::CONFIG,
                CoreError::Regime { .. } => exit::REGIME,
                CoreError::Quadrature { .. } | CoreError::Divergence { .. } => exit::INTERNAL,
            },
            CliError::Io { .. } | CliError::Csv { .. } | CliError::Pool(_) => exit::INTERNAL,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
