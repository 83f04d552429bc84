use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::hermitian_eigenvalues;
use super::matrix::{vector_norm_sqr, ComplexMatrix2, ComplexMatrix4, Qubit, Vector4, ZERO};
use super::QuantumError;

pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-9;
pub const POSITIVITY_TOLERANCE: f64 = 1e-9;
/// Entries outside the X pattern below this are treated as structural zeros.
pub const X_STATE_TOLERANCE: f64 = 1e-8;

/// Normalized two-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState2Q {
    amplitudes: Vector4,
}

impl PureState2Q {
    pub fn new(amplitudes: Vector4) -> Result<Self, QuantumError> {
        let norm = vector_norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > NORMALIZATION_TOLERANCE || !norm.is_finite() {
            return Err(QuantumError::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis state `|index⟩`, index in `0..4`.
    pub fn basis(index: usize) -> Self {
        let mut amplitudes = [ZERO; 4];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    /// `cos η |01⟩ − i sin η |10⟩`, the state reached from `|01⟩` after pulse area `η`.
    pub fn exchange_evolved(eta: f64) -> Self {
        let (s, c) = eta.sin_cos();
        Self {
            amplitudes: [ZERO, Complex64::new(c, 0.0), Complex64::new(0.0, -s), ZERO],
        }
    }

    pub fn amplitudes(&self) -> &Vector4 {
        &self.amplitudes
    }

    pub(crate) fn from_unchecked(amplitudes: Vector4) -> Self {
        Self { amplitudes }
    }

    pub fn norm_sqr(&self) -> f64 {
        vector_norm_sqr(&self.amplitudes)
    }

    pub fn projector(&self) -> ComplexMatrix4 {
        ComplexMatrix4::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix { matrix: self.projector() }
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }

    /// `ψ₀₀ψ₁₁ − ψ₀₁ψ₁₀`; its modulus is half the pure-state concurrence.
    pub fn schmidt_determinant(&self) -> Complex64 {
        let a = &self.amplitudes;
        a[0] * a[3] - a[1] * a[2]
    }

    /// Reduced state of `keep` obtained by tracing out the other qubit.
    pub fn reduced(&self, keep: Qubit) -> ComplexMatrix2 {
        let a = &self.amplitudes;
        // ψ[i][j] = amplitude of |i j⟩
        let psi = [[a[0], a[1]], [a[2], a[3]]];
        let mut m = [[ZERO; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = (0..2)
                    .map(|k| match keep {
                        Qubit::One => psi[r][k] * psi[c][k].conj(),
                        Qubit::Two => psi[k][r] * psi[k][c].conj(),
                    })
                    .sum();
            }
        }
        ComplexMatrix2(m)
    }
}

/// Two-qubit density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix4,
}

/// Which invariant a candidate density matrix broke, and by how much.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum InvariantBreach {
    Hermiticity { defect: f64 },
    Trace { deviation: f64 },
    Positivity { min_eigenvalue: f64 },
}

impl std::fmt::Display for InvariantBreach {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Hermiticity { defect } => write!(f, "max|ρ−ρ†| = {defect:e} > {HERMITICITY_TOLERANCE:e}"),
            Self::Trace { deviation } => write!(f, "|Tr ρ − 1| = {deviation:e} > {TRACE_TOLERANCE:e}"),
            Self::Positivity { min_eigenvalue } => {
                write!(f, "min eigenvalue {min_eigenvalue:e} < −{POSITIVITY_TOLERANCE:e}")
            }
        }
    }
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix4) -> Result<Self, QuantumError> {
        match check_invariants(&matrix)? {
            None => Ok(Self { matrix }),
            Some(breach) => Err(QuantumError::InvalidDensity(breach)),
        }
    }

    pub(crate) fn from_unchecked(matrix: ComplexMatrix4) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed() -> Self {
        Self { matrix: ComplexMatrix4::from_diagonal([0.25; 4]) }
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.matrix
    }

    /// `ρ_{r,c}` with zero-based indices in the fixed basis order.
    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.matrix.0[r][c]
    }

    pub fn population(&self, index: usize) -> f64 {
        self.matrix.0[index][index].re
    }

    /// Largest modulus among entries outside the X pattern
    /// (diagonal plus the `ρ₁₄`, `ρ₂₃` anti-diagonal pairs).
    pub fn x_structure_defect(&self) -> f64 {
        x_structure_defect(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> Result<f64, QuantumError> {
        min_eigenvalue(&self.matrix)
    }

    /// Partial trace over the discarded qubit.
    pub fn reduced(&self, keep: Qubit) -> ComplexMatrix2 {
        let m = &self.matrix.0;
        let mut out = [[ZERO; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = (0..2)
                    .map(|k| match keep {
                        Qubit::One => m[2 * r + k][2 * c + k],
                        Qubit::Two => m[2 * k + r][2 * k + c],
                    })
                    .sum();
            }
        }
        ComplexMatrix2(out)
    }
}

pub(crate) fn x_structure_defect(m: &ComplexMatrix4) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            let on_x = r == c || r + c == 3;
            if !on_x {
                worst = worst.max(m.0[r][c].norm());
            }
        }
    }
    worst
}

/// Smallest eigenvalue; X matrices split into two 2×2 blocks solved in closed form.
pub(crate) fn min_eigenvalue(m: &ComplexMatrix4) -> Result<f64, QuantumError> {
    if x_structure_defect(m) <= 1e-12 {
        let outer = ComplexMatrix2([[m.0[0][0], m.0[0][3]], [m.0[3][0], m.0[3][3]]]);
        let inner = ComplexMatrix2([[m.0[1][1], m.0[1][2]], [m.0[2][1], m.0[2][2]]]);
        Ok(outer.hermitian_eigenvalues()[0].min(inner.hermitian_eigenvalues()[0]))
    } else {
        Ok(hermitian_eigenvalues(m)?[0])
    }
}

/// First invariant breached by `m`, if any.
pub(crate) fn check_invariants(m: &ComplexMatrix4) -> Result<Option<InvariantBreach>, QuantumError> {
    let defect = m.hermiticity_defect();
    if !(defect <= HERMITICITY_TOLERANCE) {
        return Ok(Some(InvariantBreach::Hermiticity { defect }));
    }
    let deviation = (m.trace() - Complex64::new(1.0, 0.0)).norm();
    if !(deviation <= TRACE_TOLERANCE) {
        return Ok(Some(InvariantBreach::Trace { deviation }));
    }
    let min_eigenvalue = min_eigenvalue(&m.hermitian_part())?;
    if min_eigenvalue < -POSITIVITY_TOLERANCE {
        return Ok(Some(InvariantBreach::Positivity { min_eigenvalue }));
    }
    Ok(None)
}
