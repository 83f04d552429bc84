use std::fmt::Display;
use std::io::{BufWriter, Write};
use std::path::Path;

use entdesign_core::designer::{DesignError, WaveformError};
use entdesign_core::dynamics::DynamicsError;
use entdesign_core::experiments::ExperimentError;
use entdesign_core::trajectory::TrajectoryError;

/// A failed command, classified by exit status.
#[derive(Debug)]
pub enum Failure {
    InvalidParameter(String),
    UnreadableInput(String),
    UnwritableOutput(String),
    Computation(String),
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::InvalidParameter(_) => 3,
            Self::UnreadableInput(_) => 4,
            Self::UnwritableOutput(_) => 5,
            Self::Computation(_) => 6,
            Self::Verification(_) => 7,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Self::InvalidParameter(_) => "invalid_parameter",
            Self::UnreadableInput(_) => "unreadable_input",
            Self::UnwritableOutput(_) => "unwritable_output",
            Self::Computation(_) => "computation_failure",
            Self::Verification(_) => "verification_failure",
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::InvalidParameter(m)
            | Self::UnreadableInput(m)
            | Self::UnwritableOutput(m)
            | Self::Computation(m)
            | Self::Verification(m) => m,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "error": { "kind": self.kind(), "exit_code": self.exit_code(), "message": self.message() }
        })
    }

    pub fn invalid(e: impl Display) -> Self {
        Self::InvalidParameter(e.to_string())
    }

    pub fn compute(e: impl Display) -> Self {
        Self::Computation(e.to_string())
    }
}

impl From<TrajectoryError> for Failure {
    fn from(e: TrajectoryError) -> Self {
        match e {
            TrajectoryError::Io { .. } | TrajectoryError::InvalidSamples(_) => Self::UnreadableInput(e.to_string()),
            TrajectoryError::SingularDerivative { .. } => Self::compute(e),
            _ => Self::invalid(e),
        }
    }
}

impl From<DesignError> for Failure {
    fn from(e: DesignError) -> Self {
        match e {
            DesignError::Trajectory(t) => t.into(),
            DesignError::Quadrature { .. } | DesignError::NotUnimodal { .. } | DesignError::Singular { .. } => {
                Self::compute(e)
            }
            _ => Self::invalid(e),
        }
    }
}

impl From<DynamicsError> for Failure {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::InvalidChannel { .. } | DynamicsError::InvalidConfig(_) | DynamicsError::Unsupported(_) => {
                Self::invalid(e)
            }
            _ => Self::compute(e),
        }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Design(e) => e.into(),
            ExperimentError::Dynamics(e) => e.into(),
            ExperimentError::Trajectory(e) => e.into(),
            ExperimentError::InvalidGrid(_) => Self::invalid(e),
            _ => Self::compute(e),
        }
    }
}

/// Reading a waveform file fails as unreadable input whatever the cause.
pub fn waveform_input(e: WaveformError) -> Failure {
    Failure::UnreadableInput(e.to_string())
}

type Render<'a> = dyn FnOnce(&mut dyn Write) -> Result<(), String> + 'a;

/// Render into `path` through a temporary file in the same directory, renamed into place.
pub fn write_atomic(path: &Path, render: Box<Render<'_>>) -> Result<(), Failure> {
    let unwritable = |e: &dyn Display| Failure::UnwritableOutput(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| unwritable(&e))?;
    let mut w = BufWriter::new(tmp);
    render(&mut w).map_err(|e| unwritable(&e))?;
    let tmp = w.into_inner().map_err(|e| unwritable(&e.error().to_string()))?;
    tmp.persist(path).map_err(|e| unwritable(&e.error))?;
    Ok(())
}

/// Write to `path` atomically, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, render: Box<Render<'_>>) -> Result<(), Failure> {
    match path {
        Some(p) => write_atomic(p, render),
        None => {
            let mut buf = Vec::new();
            render(&mut buf).map_err(Failure::compute)?;
            std::io::stdout()
                .write_all(&buf)
                .and_then(|_| std::io::stdout().flush())
                .or_else(|e| match e.kind() {
                    // A closed downstream pipe (`| head`) is not a failure.
                    std::io::ErrorKind::BrokenPipe => Ok(()),
                    _ => Err(Failure::UnwritableOutput(format!("stdout: {e}"))),
                })
        }
    }
}
