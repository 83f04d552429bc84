//! Entanglement measures for two qubits.

use serde::{Deserialize, Serialize};

use super::eigen::{hermitian_eigenvalues, hermitian_map};
use super::matrix::{spin_flip, ComplexMatrix2, Qubit};
use super::state::{x_structure_defect, DensityMatrix, PureState2Q, X_STATE_TOLERANCE};
use super::QuantumError;

/// Eigenvalues below this are exact zeros for `x log x`.
pub const EIGENVALUE_FLOOR: f64 = 1e-15;
/// Round-off allowed outside `[0, 1]` before a measure is rejected.
pub const MEASURE_ROUNDOFF: f64 = 1e-9;

/// `S`, `S_L`, `C` and `EoF` at one instant, all clamped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementValues {
    pub entropy: f64,
    pub linear_entropy: f64,
    pub concurrence: f64,
    pub eof: f64,
}

/// Clamp a unit-interval quantity, rejecting violations beyond round-off.
pub fn clamp_unit(value: f64, measure: &'static str) -> Result<f64, QuantumError> {
    if !(-MEASURE_ROUNDOFF..=1.0 + MEASURE_ROUNDOFF).contains(&value) {
        return Err(QuantumError::MeasureOutOfRange { measure, value });
    }
    Ok(value.clamp(0.0, 1.0))
}

fn x_log2_x(x: f64) -> f64 {
    if x < EIGENVALUE_FLOOR {
        0.0
    } else {
        x * x.log2()
    }
}

/// `h(x) = −x log₂x − (1−x) log₂(1−x)`.
pub fn binary_entropy(x: f64) -> f64 {
    -x_log2_x(x) - x_log2_x(1.0 - x)
}

/// Binary entropy given the smaller probability directly, avoiding `1 − (1 − small)`.
fn binary_entropy_of_small(small: f64, large: f64) -> f64 {
    -x_log2_x(small) - x_log2_x(large)
}

/// Von Neumann entropy (bits) of a 2×2 state.
pub fn qubit_entropy(rho: &ComplexMatrix2) -> f64 {
    let [lo, hi] = rho.hermitian_eigenvalues();
    binary_entropy_of_small(lo.max(0.0), hi)
}

/// `2(1 − Tr ρ²)` of a 2×2 state.
pub fn qubit_linear_entropy(rho: &ComplexMatrix2) -> f64 {
    let m = &rho.0;
    let purity = m[0][0].norm_sqr() + m[1][1].norm_sqr() + 2.0 * m[0][1].norm_sqr();
    2.0 * (1.0 - purity)
}

pub fn reduced_state(rho: &DensityMatrix, keep: Qubit) -> ComplexMatrix2 {
    rho.reduced(keep)
}

/// Entropy of entanglement in ebits.
pub fn entropy_of_entanglement(psi: &PureState2Q) -> f64 {
    qubit_entropy(&psi.reduced(Qubit::One)).clamp(0.0, 1.0)
}

pub fn linear_entropy(psi: &PureState2Q) -> f64 {
    qubit_linear_entropy(&psi.reduced(Qubit::One)).clamp(0.0, 1.0)
}

/// `2|ψ₀₀ψ₁₁ − ψ₀₁ψ₁₀|`.
pub fn pure_concurrence(psi: &PureState2Q) -> f64 {
    (2.0 * psi.schmidt_determinant().norm()).min(1.0)
}

/// Wootters concurrence for an arbitrary two-qubit state.
///
/// The decreasing square roots `λᵢ` of the spectrum of `ρ ρ̃`, with
/// `ρ̃ = (σʸ⊗σʸ) ρ* (σʸ⊗σʸ)`, are obtained from the Hermitian matrix
/// `√ρ ρ̃ √ρ`, which has the same spectrum.
pub fn concurrence_general(rho: &DensityMatrix) -> Result<f64, QuantumError> {
    let m = rho.matrix().hermitian_part();
    let root = hermitian_map(&m, |x| x.max(0.0).sqrt())?;
    let flip = spin_flip();
    let tilde = flip * m.conj() * flip;
    let product = (root * tilde * root).hermitian_part();
    let mut lambdas = hermitian_eigenvalues(&product)?;
    for l in lambdas.iter_mut() {
        if *l < -MEASURE_ROUNDOFF {
            return Err(QuantumError::MeasureOutOfRange { measure: "wootters_eigenvalue", value: *l });
        }
        *l = l.max(0.0).sqrt();
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    clamp_unit(c.max(0.0), "concurrence")
}

/// Closed-form concurrence of an X state,
/// `2 max{0, |ρ₂₃| − √(ρ₁₁ρ₄₄), |ρ₁₄| − √(ρ₂₂ρ₃₃)}` (one-based indices).
pub fn concurrence_x_state(rho: &DensityMatrix) -> Result<f64, QuantumError> {
    let defect = x_structure_defect(rho.matrix());
    if defect > X_STATE_TOLERANCE {
        return Err(QuantumError::NotXState { defect });
    }
    let p = |k: usize| rho.population(k).max(0.0);
    let inner = rho.entry(1, 2).norm() - (p(0) * p(3)).sqrt();
    let outer = rho.entry(0, 3).norm() - (p(1) * p(2)).sqrt();
    clamp_unit(2.0 * inner.max(outer).max(0.0), "concurrence")
}

/// `EoF = h((1 + √(1 − C²))/2)`.
pub fn entanglement_of_formation(concurrence: f64) -> Result<f64, QuantumError> {
    if !(0.0..=1.0).contains(&concurrence) {
        return Err(QuantumError::ConcurrenceOutOfRange(concurrence));
    }
    let root = (1.0 - concurrence * concurrence).sqrt();
    let large = 0.5 * (1.0 + root);
    // 1 − large without cancellation
    let small = 0.25 * concurrence * concurrence / large;
    clamp_unit(binary_entropy_of_small(small, large), "eof")
}

/// All four measures for a pure state.
pub fn pure_state_measures(psi: &PureState2Q) -> Result<EntanglementValues, QuantumError> {
    let concurrence = pure_concurrence(psi);
    Ok(EntanglementValues {
        entropy: entropy_of_entanglement(psi),
        linear_entropy: linear_entropy(psi),
        concurrence,
        eof: entanglement_of_formation(concurrence)?,
    })
}

/// Measures for an X state. `entropy` and `linear_entropy` are those of the
/// qubit-1 reduced state, which equal the pure-state measures when `ρ` is pure.
pub fn x_state_measures(rho: &DensityMatrix) -> Result<EntanglementValues, QuantumError> {
    let reduced = rho.reduced(Qubit::One);
    let concurrence = concurrence_x_state(rho)?;
    Ok(EntanglementValues {
        entropy: clamp_unit(qubit_entropy(&reduced), "entropy")?,
        linear_entropy: clamp_unit(qubit_linear_entropy(&reduced), "linear_entropy")?,
        concurrence,
        eof: entanglement_of_formation(concurrence)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::quantum::matrix::{ComplexMatrix4, ZERO};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8};

    fn bell_phi_plus() -> DensityMatrix {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        PureState2Q::new([h, ZERO, ZERO, h]).unwrap().density()
    }

    #[test]
    fn entropy_of_exchange_states() {
        assert_eq!(entropy_of_entanglement(&PureState2Q::exchange_evolved(0.0)), 0.0);
        assert!((entropy_of_entanglement(&PureState2Q::exchange_evolved(FRAC_PI_4)) - 1.0).abs() < 1e-15);
        // h₂(sin²(π/8)) from a 30-digit evaluation
        let s = entropy_of_entanglement(&PureState2Q::exchange_evolved(FRAC_PI_8));
        assert!((s - 0.600_876_036_692_856).abs() < 1e-13, "{s}");
    }

    #[test]
    fn linear_entropy_of_exchange_states() {
        assert_eq!(linear_entropy(&PureState2Q::exchange_evolved(0.0)), 0.0);
        assert!((linear_entropy(&PureState2Q::exchange_evolved(FRAC_PI_4)) - 1.0).abs() < 1e-15);
        assert!((linear_entropy(&PureState2Q::exchange_evolved(FRAC_PI_8)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn general_concurrence_reference_states() {
        assert!((concurrence_general(&bell_phi_plus()).unwrap() - 1.0).abs() < 1e-12);
        assert!(concurrence_general(&DensityMatrix::maximally_mixed()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn werner_state_concurrence_matches_closed_form() {
        for w in [0.2, 1.0 / 3.0, 0.5, 0.8, 0.95] {
            let m = bell_phi_plus().matrix().scale(Complex64::new(w, 0.0))
                + ComplexMatrix4::from_diagonal([0.25 * (1.0 - w); 4]);
            let rho = DensityMatrix::new(m).unwrap();
            let expected = (0.5 * (3.0 * w - 1.0)).max(0.0);
            let c = concurrence_general(&rho).unwrap();
            assert!((c - expected).abs() < 1e-10, "w={w}: {c} vs {expected}");
        }
    }

    #[test]
    fn x_state_concurrence_reference_states() {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let psi_plus = PureState2Q::new([ZERO, h, h, ZERO]).unwrap().density();
        assert!((concurrence_x_state(&psi_plus).unwrap() - 1.0).abs() < 1e-15);
        let diag = DensityMatrix::new(ComplexMatrix4::from_diagonal([0.1, 0.2, 0.3, 0.4])).unwrap();
        assert_eq!(concurrence_x_state(&diag).unwrap(), 0.0);
    }

    #[test]
    fn x_state_formula_rejects_non_x_input() {
        let h = Complex64::new(0.5, 0.0);
        let plus_plus = PureState2Q::new([h, h, h, h]).unwrap().density();
        assert!(matches!(concurrence_x_state(&plus_plus), Err(QuantumError::NotXState { .. })));
    }

    #[test]
    fn eof_reference_values() {
        assert_eq!(entanglement_of_formation(0.0).unwrap(), 0.0);
        assert!((entanglement_of_formation(1.0).unwrap() - 1.0).abs() < 1e-15);
        // h((1+√0.75)/2) from a 30-digit evaluation
        let e = entanglement_of_formation(0.5).unwrap();
        assert!((e - 0.354_578_902_665_269_9).abs() < 1e-13, "{e}");
        assert!(entanglement_of_formation(1.2).is_err());
        assert!(entanglement_of_formation(-0.1).is_err());
    }

    #[test]
    fn eof_strictly_increasing_on_grid() {
        let values: Vec<f64> =
            (1..=1000).map(|k| entanglement_of_formation(k as f64 / 1000.0).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn clamp_accepts_roundoff_only() {
        assert_eq!(clamp_unit(-5e-10, "x").unwrap(), 0.0);
        assert_eq!(clamp_unit(1.0 + 5e-10, "x").unwrap(), 1.0);
        assert!(clamp_unit(-1e-6, "x").is_err());
        assert!(clamp_unit(f64::NAN, "x").is_err());
    }
}
