use std::path::PathBuf;

use thiserror::Error;
use xrt_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{dropped} of {requested} rays were trapped (limit 1%)")]
    TooManyTrapped { dropped: usize, requested: usize },
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 1 failed check, 2 input validation, 3 geometry, 4 underdetermined.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Io { .. } | CliError::Invalid(_) => 2,
            CliError::TooManyTrapped { .. } => 3,
            CliError::Core(e) => match e {
                CoreError::Trapped { .. }
                | CoreError::StartOutside(_)
                | CoreError::NotInward
                | CoreError::NotOnBoundary(_)
                | CoreError::OutsideTiling(..)
                | CoreError::PathLeavesTiling(..)
                | CoreError::NotShort { .. }
                | CoreError::NotAdmissible { .. }
                | CoreError::TangentialSector
                | CoreError::DegenerateCone
                | CoreError::ConvexityCheckFailed(_) => 3,
                CoreError::UnderdeterminedLayer { .. } | CoreError::RankDeficient(_) => 4,
                _ => 2,
            },
        }
    }
}
