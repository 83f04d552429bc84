//! Fixed-size complex matrices for one and two qubits.
//!
//! Two-qubit operators act on the computational basis in the order
//! `|00⟩, |01⟩, |10⟩, |11⟩`, with qubit 1 as the left (most significant)
//! tensor factor. Index `2*a + b` addresses `|a b⟩`.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Two-qubit amplitude vector in the fixed basis order.
pub type Vector4 = [Complex64; 4];

/// A 2×2 complex matrix (single-qubit operator or reduced state).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix2(pub [[Complex64; 2]; 2]);

impl ComplexMatrix2 {
    pub const fn new(entries: [[Complex64; 2]; 2]) -> Self {
        Self(entries)
    }

    pub fn identity() -> Self {
        Self([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn determinant(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    /// Eigenvalues of a Hermitian 2×2 matrix in ascending order.
    ///
    /// The smaller root is recovered from the determinant to avoid
    /// cancellation when the spectrum is nearly degenerate with zero.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b = self.0[0][1];
        let half_trace = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        let upper = half_trace + radius;
        let lower = if half_trace > 0.0 && upper > 0.0 {
            (a * d - b.norm_sqr()) / upper
        } else {
            half_trace - radius
        };
        [lower, upper]
    }
}

impl Index<(usize, usize)> for ComplexMatrix2 {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.0[r][c]
    }
}

/// A 4×4 complex matrix in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix4(pub [[Complex64; 4]; 4]);

impl Default for ComplexMatrix4 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl ComplexMatrix4 {
    pub const fn new(entries: [[Complex64; 4]; 4]) -> Self {
        Self(entries)
    }

    pub const fn zeros() -> Self {
        Self([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::from_diagonal([1.0; 4])
    }

    pub fn from_diagonal(diag: [f64; 4]) -> Self {
        let mut m = Self::zeros();
        for (k, d) in diag.into_iter().enumerate() {
            m.0[k][k] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &Vector4, v: &Vector4) -> Self {
        let mut m = Self::zeros();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = u[r] * v[c].conj();
            }
        }
        m
    }

    /// `a ⊗ b`, with `a` acting on qubit 1.
    pub fn kron(a: &ComplexMatrix2, b: &ComplexMatrix2) -> Self {
        let mut m = Self::zeros();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                    }
                }
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = self.0[c][r].conj();
            }
        }
        m
    }

    /// Elementwise complex conjugate.
    pub fn conj(&self) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z = z.conj());
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = self.0[c][r];
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|k| self.0[k][k]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn apply(&self, v: &Vector4) -> Vector4 {
        let mut out = [ZERO; 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|c| self.0[r][c] * v[c]).sum();
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// Largest modulus of `self - self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `(self + self†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(Complex64::new(0.5, 0.0))
    }
}

impl Index<(usize, usize)> for ComplexMatrix4 {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.0[r][c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix4 {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.0[r][c]
    }
}

impl Add for ComplexMatrix4 {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for r in 0..4 {
            for c in 0..4 {
                self.0[r][c] += rhs.0[r][c];
            }
        }
        self
    }
}

impl Sub for ComplexMatrix4 {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for r in 0..4 {
            for c in 0..4 {
                self.0[r][c] -= rhs.0[r][c];
            }
        }
        self
    }
}

impl Neg for ComplexMatrix4 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for ComplexMatrix4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for r in 0..4 {
            for k in 0..4 {
                let a = self.0[r][k];
                if a == ZERO {
                    continue;
                }
                for c in 0..4 {
                    m.0[r][c] += a * rhs.0[k][c];
                }
            }
        }
        m
    }
}

/// Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Which qubit an operator acts on; qubit 1 is the left tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubit {
    One,
    Two,
}

impl Qubit {
    pub fn other(self) -> Self {
        match self {
            Qubit::One => Qubit::Two,
            Qubit::Two => Qubit::One,
        }
    }
}

/// Single-qubit Pauli matrix.
pub fn pauli2(axis: Axis) -> ComplexMatrix2 {
    match axis {
        Axis::X => ComplexMatrix2([[ZERO, ONE], [ONE, ZERO]]),
        Axis::Y => ComplexMatrix2([[ZERO, -I], [I, ZERO]]),
        Axis::Z => ComplexMatrix2([[ONE, ZERO], [ZERO, -ONE]]),
    }
}

/// Lowering operator `|0⟩⟨1|`; `|0⟩` is the ground state.
pub fn lowering2() -> ComplexMatrix2 {
    ComplexMatrix2([[ZERO, ONE], [ZERO, ZERO]])
}

/// Embed a single-qubit operator on `qubit`, identity on the other.
pub fn on_qubit(op: &ComplexMatrix2, qubit: Qubit) -> ComplexMatrix4 {
    match qubit {
        Qubit::One => ComplexMatrix4::kron(op, &ComplexMatrix2::identity()),
        Qubit::Two => ComplexMatrix4::kron(&ComplexMatrix2::identity(), op),
    }
}

/// `σ^axis` on `qubit` tensored with identity on the other qubit.
pub fn pauli(axis: Axis, qubit: Qubit) -> ComplexMatrix4 {
    on_qubit(&pauli2(axis), qubit)
}

/// `σ_y ⊗ σ_y`, the spin-flip used by the Wootters construction.
pub fn spin_flip() -> ComplexMatrix4 {
    let y = pauli2(Axis::Y);
    ComplexMatrix4::kron(&y, &y)
}

/// Exchange generator `(σ₁ˣσ₂ˣ + σ₁ʸσ₂ʸ)/2 = |01⟩⟨10| + |10⟩⟨01|`.
pub fn xy_exchange() -> ComplexMatrix4 {
    let xx = pauli(Axis::X, Qubit::One) * pauli(Axis::X, Qubit::Two);
    let yy = pauli(Axis::Y, Qubit::One) * pauli(Axis::Y, Qubit::Two);
    (xx + yy).scale(Complex64::new(0.5, 0.0))
}

#[cfg(test)]
pub(crate) fn basis_vector(index: usize) -> Vector4 {
    let mut v = [ZERO; 4];
    v[index] = ONE;
    v
}

pub(crate) fn vector_norm_sqr(v: &Vector4) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}
