use blowup_core::blowup_ode::OdeError;
use blowup_core::regions::RegionError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Hypothesis(String),
    #[error("{failed} of {total} verification checks failed")]
    Verification { failed: usize, total: usize },
    #[error("{0}")]
    Runtime(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Process exit code: 1 runtime, 2 hypothesis violation, 3 failed check.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Hypothesis(_) => 2,
            CliError::Verification { .. } => 3,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

impl From<RegionError> for CliError {
    fn from(e: RegionError) -> Self {
        match e {
            RegionError::Hypothesis(_) => CliError::Hypothesis(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<OdeError> for CliError {
    fn from(e: OdeError) -> Self {
        match e {
            OdeError::Params(inner) => inner.into(),
            other => CliError::Runtime(other.to_string()),
        }
    }
}
