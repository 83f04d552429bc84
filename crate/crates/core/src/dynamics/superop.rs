//! Sparse Liouville-space generators acting on row-major `vec(ρ)`.
//!
//! With `vec(ρ)[4r + c] = ρ_{rc}`, a sandwich `AρB` becomes `(A ⊗ Bᵀ) vec(ρ)`.

use num_complex::Complex64;

use crate::quantum::{lowering2, on_qubit, pauli2, Axis, ComplexMatrix4, Qubit};

use super::{ChannelKind, ChannelSpec};

pub(crate) type LiouvilleVector = [Complex64; 16];

#[derive(Debug, Clone)]
pub(crate) struct SparseSuperop {
    entries: Vec<(usize, usize, Complex64)>,
}

fn superop_kron(a: &ComplexMatrix4, b: &ComplexMatrix4) -> [[Complex64; 16]; 16] {
    let mut out = [[Complex64::new(0.0, 0.0); 16]; 16];
    for (i, j, k, l) in (0..4).flat_map(|i| (0..4).flat_map(move |j| (0..4).flat_map(move |k| (0..4).map(move |l| (i, j, k, l))))) {
        out[4 * i + k][4 * j + l] = a.0[i][j] * b.0[k][l];
    }
    out
}

impl SparseSuperop {
    fn from_dense(dense: &[[Complex64; 16]; 16]) -> Self {
        let mut entries = Vec::new();
        for (r, row) in dense.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != Complex64::new(0.0, 0.0) {
                    entries.push((r, c, v));
                }
            }
        }
        Self { entries }
    }

    /// `ρ ↦ −i[G, ρ]`.
    pub(crate) fn commutator(generator: &ComplexMatrix4) -> Self {
        let id = ComplexMatrix4::identity();
        let left = superop_kron(generator, &id);
        let right = superop_kron(&id, &generator.transpose());
        let mut dense = [[Complex64::new(0.0, 0.0); 16]; 16];
        for r in 0..16 {
            for c in 0..16 {
                dense[r][c] = Complex64::new(0.0, -1.0) * (left[r][c] - right[r][c]);
            }
        }
        Self::from_dense(&dense)
    }

    /// `Σₖ Lₖ ρ Lₖ† − ½{Lₖ†Lₖ, ρ}` for the channel's jump operators on both qubits.
    pub(crate) fn dissipator(channel: &ChannelSpec) -> Self {
        let (single, scale) = match channel.kind {
            ChannelKind::None => return Self { entries: Vec::new() },
            ChannelKind::AmplitudeDamping => (lowering2(), (2.0 * channel.gamma).sqrt()),
            ChannelKind::PhaseDamping => (pauli2(Axis::Z), channel.gamma.sqrt()),
        };
        let id = ComplexMatrix4::identity();
        let mut dense = [[Complex64::new(0.0, 0.0); 16]; 16];
        for qubit in [Qubit::One, Qubit::Two] {
            let l = on_qubit(&single, qubit).scale(Complex64::new(scale, 0.0));
            let ldl = l.adjoint() * l;
            let jump = superop_kron(&l, &l.conj());
            let anti_left = superop_kron(&ldl, &id);
            let anti_right = superop_kron(&id, &ldl.transpose());
            for r in 0..16 {
                for c in 0..16 {
                    dense[r][c] += jump[r][c] - 0.5 * (anti_left[r][c] + anti_right[r][c]);
                }
            }
        }
        Self::from_dense(&dense)
    }

    /// `out += s · (self · v)`.
    pub(crate) fn apply_scaled_into(&self, s: f64, v: &LiouvilleVector, out: &mut LiouvilleVector) {
        for &(r, c, a) in &self.entries {
            out[r] += s * a * v[c];
        }
    }
}

pub(crate) fn vectorize(m: &ComplexMatrix4) -> LiouvilleVector {
    let mut v = [Complex64::new(0.0, 0.0); 16];
    for r in 0..4 {
        for c in 0..4 {
            v[4 * r + c] = m.0[r][c];
        }
    }
    v
}

pub(crate) fn unvectorize(v: &LiouvilleVector) -> ComplexMatrix4 {
    let mut m = ComplexMatrix4::zeros();
    for r in 0..4 {
        for c in 0..4 {
            m.0[r][c] = v[4 * r + c];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{pauli, xy_exchange};

    fn apply(op: &SparseSuperop, m: &ComplexMatrix4) -> ComplexMatrix4 {
        let mut out = [Complex64::new(0.0, 0.0); 16];
        op.apply_scaled_into(1.0, &vectorize(m), &mut out);
        unvectorize(&out)
    }

    fn sample_matrix() -> ComplexMatrix4 {
        let mut m = ComplexMatrix4::zeros();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = Complex64::new((r * 4 + c) as f64 * 0.1, (r as f64 - c as f64) * 0.05);
            }
        }
        m
    }

    #[test]
    fn commutator_matches_matrix_products() {
        let h = xy_exchange() + pauli(Axis::Z, Qubit::One).scale(Complex64::new(0.3, 0.0));
        let rho = sample_matrix();
        let expected = (h * rho - rho * h).scale(Complex64::new(0.0, -1.0));
        assert!(apply(&SparseSuperop::commutator(&h), &rho).max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn dissipator_matches_matrix_products() {
        let gamma: f64 = 0.37;
        let rho = sample_matrix();
        for (kind, single, scale) in [
            (ChannelKind::AmplitudeDamping, lowering2(), (2.0 * gamma).sqrt()),
            (ChannelKind::PhaseDamping, pauli2(Axis::Z), gamma.sqrt()),
        ] {
            let mut expected = ComplexMatrix4::zeros();
            for q in [Qubit::One, Qubit::Two] {
                let l = on_qubit(&single, q).scale(Complex64::new(scale, 0.0));
                let ldl = l.adjoint() * l;
                expected = expected + l * rho * l.adjoint() - (ldl * rho + rho * ldl).scale(Complex64::new(0.5, 0.0));
            }
            let d = SparseSuperop::dissipator(&ChannelSpec { kind, gamma });
            assert!(apply(&d, &rho).max_abs_diff(&expected) < 1e-14, "{kind:?}");
        }
    }

    #[test]
    fn dissipator_is_trace_preserving() {
        let d = SparseSuperop::dissipator(&ChannelSpec { kind: ChannelKind::AmplitudeDamping, gamma: 1.0 });
        assert!(apply(&d, &sample_matrix()).trace().norm() < 1e-14);
    }
}
