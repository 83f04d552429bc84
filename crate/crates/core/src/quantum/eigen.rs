//! Cyclic Jacobi eigensolver for small real symmetric matrices, and the
//! Hermitian 4×4 problem mapped onto it.
//!
//! A Hermitian `A = X + iY` is embedded as the real symmetric
//! `[[X, -Y], [Y, X]]`. The embedding is an algebra homomorphism, so every
//! eigenvalue of `A` appears twice and any spectral function `g(A)` can be
//! read back from the blocks of `g(embedding)`.

use num_complex::Complex64;

use super::matrix::ComplexMatrix4;
use super::QuantumError;

/// Off-diagonal Frobenius norm target, relative to the full norm.
pub const JACOBI_TOLERANCE: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `a = V diag(values) Vᵀ`; column `k` of `vectors` pairs
/// with `values[k]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: [[f64; N]; N],
}

fn off_diagonal_norm<const N: usize>(a: &[[f64; N]; N]) -> f64 {
    let mut s = 0.0;
    for p in 0..N {
        for q in 0..N {
            if p != q {
                s += a[p][q] * a[p][q];
            }
        }
    }
    s.sqrt()
}

pub fn jacobi_symmetric<const N: usize>(mut a: [[f64; N]; N]) -> Result<SymmetricEigen<N>, QuantumError> {
    let mut v = [[0.0; N]; N];
    for (k, row) in v.iter_mut().enumerate() {
        row[k] = 1.0;
    }
    let scale = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok(SymmetricEigen { values: [0.0; N], vectors: v });
    }
    let target = JACOBI_TOLERANCE * scale;

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(QuantumError::EigenNoConvergence {
                sweeps,
                residual: off_diagonal_norm(&a) / scale,
            });
        }
        sweeps += 1;
        for p in 0..N - 1 {
            for q in p + 1..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                // Rotation angle annihilating a[p][q]; t = tan θ, smaller root.
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut values = [0.0; N];
    for (k, val) in values.iter_mut().enumerate() {
        *val = a[k][k];
    }
    Ok(SymmetricEigen { values, vectors: v })
}

fn embed(a: &ComplexMatrix4) -> [[f64; 8]; 8] {
    let mut m = [[0.0; 8]; 8];
    for r in 0..4 {
        for c in 0..4 {
            let z = a.0[r][c];
            m[r][c] = z.re;
            m[r + 4][c + 4] = z.re;
            m[r][c + 4] = -z.im;
            m[r + 4][c] = z.im;
        }
    }
    // exact symmetry keeps the rotations well defined
    for r in 0..8 {
        for c in r + 1..8 {
            let s = 0.5 * (m[r][c] + m[c][r]);
            m[r][c] = s;
            m[c][r] = s;
        }
    }
    m
}

/// Eigenvalues of a Hermitian 4×4 matrix, ascending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix4) -> Result<[f64; 4], QuantumError> {
    let eig = jacobi_symmetric(embed(a))?;
    let mut doubled = eig.values;
    doubled.sort_by(f64::total_cmp);
    let mut out = [0.0; 4];
    for (k, o) in out.iter_mut().enumerate() {
        *o = 0.5 * (doubled[2 * k] + doubled[2 * k + 1]);
    }
    Ok(out)
}

/// `g(a)` for Hermitian `a`, applying `g` to each eigenvalue.
pub fn hermitian_map(a: &ComplexMatrix4, g: impl Fn(f64) -> f64) -> Result<ComplexMatrix4, QuantumError> {
    let eig = jacobi_symmetric(embed(a))?;
    let mapped: Vec<f64> = eig.values.iter().map(|&x| g(x)).collect();
    let mut big = [[0.0; 8]; 8];
    for (r, row) in big.iter_mut().enumerate() {
        for (c, out) in row.iter_mut().enumerate() {
            *out = (0..8).map(|k| eig.vectors[r][k] * mapped[k] * eig.vectors[c][k]).sum();
        }
    }
    let mut m = ComplexMatrix4::zeros();
    for r in 0..4 {
        for c in 0..4 {
            let re = 0.5 * (big[r][c] + big[r + 4][c + 4]);
            let im = 0.5 * (big[r + 4][c] - big[r][c + 4]);
            m.0[r][c] = Complex64::new(re, im);
        }
    }
    Ok(m)
}
