use std::path::{Path, PathBuf};

use stegabot_core::carriers::CarrierError;
use stegabot_core::formats::FormatError;
use stegabot_core::message::{FrameError, MorseError};
use stegabot_core::motion::MotionError;
use stegabot_core::observer::ObserverError;
use stegabot_core::scheduler::PlanError;
use stegabot_core::steganalysis::SteganalysisError;
use stegabot_core::timing::TimingError;
use thiserror::Error;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("extraction failed: {0}")]
    Extraction(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Format(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Extraction(_) => 4,
            CliError::Io { .. } | CliError::Format(_) => 5,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    /// Errors met while reading a message back out of a carrier.
    pub fn extraction(e: impl Into<CliError>) -> Self {
        match e.into() {
            CliError::Domain(m) => CliError::Extraction(m),
            other => other,
        }
    }
}

impl From<FrameError> for CliError {
    fn from(e: FrameError) -> Self {
        match e {
            FrameError::MagicNotFound { .. }
            | FrameError::ChecksumMismatch { .. }
            | FrameError::TruncatedFrame { .. } => CliError::Extraction(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<CarrierError> for CliError {
    fn from(e: CarrierError) -> Self {
        match e {
            CarrierError::Frame(f) => f.into(),
            CarrierError::InvalidCarrier(m) => CliError::Format(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Format(e.to_string())
    }
}

impl From<MorseError> for CliError {
    fn from(e: MorseError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<PlanError> for CliError {
    fn from(e: PlanError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<MotionError> for CliError {
    fn from(e: MotionError) -> Self {
        match e {
            MotionError::NoPulsesFound => CliError::Extraction(e.to_string()),
            MotionError::InvalidTrajectory(m) => CliError::Format(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<TimingError> for CliError {
    fn from(e: TimingError) -> Self {
        match e {
            TimingError::InvalidTimeline(m) => CliError::Format(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<ObserverError> for CliError {
    fn from(e: ObserverError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<SteganalysisError> for CliError {
    fn from(e: SteganalysisError) -> Self {
        match e {
            SteganalysisError::Carrier(c) => c.into(),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Format(format!("JSON: {e}"))
    }
}
