//! Two-qubit linear algebra, states and entanglement measures.

mod eigen;
mod matrix;
mod measures;
mod state;

use thiserror::Error;

pub use eigen::{hermitian_eigenvalues, hermitian_map, jacobi_symmetric, SymmetricEigen, JACOBI_MAX_SWEEPS, JACOBI_TOLERANCE};
pub use matrix::{
    lowering2, on_qubit, pauli, pauli2, spin_flip, xy_exchange, Axis, ComplexMatrix2, ComplexMatrix4, Qubit, Vector4,
};
pub use measures::{
    binary_entropy, clamp_unit, concurrence_general, concurrence_x_state, entanglement_of_formation,
    entropy_of_entanglement, linear_entropy, pure_concurrence, pure_state_measures, qubit_entropy,
    qubit_linear_entropy, reduced_state, x_state_measures, EntanglementValues, EIGENVALUE_FLOOR, MEASURE_ROUNDOFF,
};
pub use state::{
    DensityMatrix, InvariantBreach, PureState2Q, HERMITICITY_TOLERANCE, NORMALIZATION_TOLERANCE,
    POSITIVITY_TOLERANCE, TRACE_TOLERANCE, X_STATE_TOLERANCE,
};

pub(crate) use state::check_invariants;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("state is not normalized: Σ|a|² = {norm}")]
    NotNormalized { norm: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(InvariantBreach),
    #[error("Jacobi eigen iteration did not converge after {sweeps} sweeps (relative residual {residual:e})")]
    EigenNoConvergence { sweeps: usize, residual: f64 },
    #[error("input is not an X state: off-pattern entry of modulus {defect:e}")]
    NotXState { defect: f64 },
    #[error("concurrence {0} outside [0, 1]")]
    ConcurrenceOutOfRange(f64),
    #[error("{measure} = {value} is outside [0, 1] beyond round-off")]
    MeasureOutOfRange { measure: &'static str, value: f64 },
}
