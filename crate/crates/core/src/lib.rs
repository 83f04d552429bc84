//! Inverse design of two-qubit entanglement trajectories.
//!
//! A target entanglement curve `f(t)` is turned into an XY coupling
//! waveform `λ(t)` ([`designer`]), which is then checked by forward
//! simulation under unitary and Lindblad dynamics ([`dynamics`]).
//! [`experiments`] scripts the reference studies on top of both.

// Index loops mirror the matrix notation; negated comparisons reject NaN on purpose.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod designer;
pub mod dynamics;
pub mod experiments;
pub mod format;
pub mod quantum;
pub mod trajectory;

use thiserror::Error;

pub use designer::{
    optimize_q, synthesize, AnsatzParams, CouplingWaveform, DesignError, QOptimum, RenormalizationParams,
    WaveformError,
};
pub use dynamics::{
    evolve_closed_form, evolve_ising, evolve_lindblad, evolve_schrodinger, ChannelKind, ChannelSpec, DynamicsError,
    EvolutionResult, IsingParams,
};
pub use experiments::ExperimentError;
pub use quantum::{DensityMatrix, EntanglementValues, PureState2Q, QuantumError};
pub use trajectory::{TargetTrajectory, TrajectoryError};

/// Any failure raised by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Waveform(#[from] WaveformError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Export(#[from] dynamics::ExportError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
}
