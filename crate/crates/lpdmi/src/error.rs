use std::io;
use std::path::PathBuf;

use lpdmi_core::Error as CoreError;

/// Process exit codes.
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Every violated constraint of a config, reported together.
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{}: byte {offset}: {reason}", path.display())]
    Parse { path: PathBuf, offset: u64, reason: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Data(String),
    /// A core failure, labelled with the pipeline stage that raised it.
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: CoreError,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Usage(_) => EXIT_CONFIG,
            Error::Parse { .. } | Error::Io { .. } | Error::Data(_) => EXIT_DATA,
            Error::Stage { source, .. } => match source {
                CoreError::InvalidConfig(_) | CoreError::InvalidSpec(_) | CoreError::InvalidLevel { .. } => EXIT_CONFIG,
                CoreError::NonFinite(_) => EXIT_NUMERIC,
                _ => EXIT_DATA,
            },
        }
    }
}

/// Attaches a stage label to core results.
pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for lpdmi_core::Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|source| Error::Stage { stage, source })
    }
}
