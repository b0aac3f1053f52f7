//! Spectral quantities of dense complex matrices.
//!
//! Hermitian eigendecompositions come from cyclic complex Jacobi rotations.
//! Singular values are the square roots of the eigenvalues of `A*A`, and the
//! trace norm is their sum.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::matrix::{ComplexMatrix, HermitianMatrix, MatrixError};

/// Maximum number of Jacobi sweeps.
pub const MAX_SWEEPS: usize = 100;
/// Sweeps stop once the off-diagonal Frobenius norm falls below this multiple of `‖A‖_F`.
pub const OFF_DIAGONAL_THRESHOLD: f64 = 1e-13;
/// Absolute floor used by the definiteness tests.
pub const PSD_ABSOLUTE_FLOOR: f64 = 1e-14;
/// Default relative tolerance for the definiteness tests.
pub const DEFAULT_PSD_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectraError {
    #[error(
        "Jacobi eigensolver did not converge on {dim}x{dim} matrix after {sweeps} sweeps \
         (off-diagonal residual {residual:e}, ‖A‖_F = {frobenius:e})"
    )]
    NoConvergence {
        dim: usize,
        sweeps: usize,
        residual: f64,
        frobenius: f64,
    },
    #[error("spectral map produced a non-finite value at eigenvalue {eigenvalue}")]
    NonFiniteSpectralValue { eigenvalue: f64 },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// `A = U diag(λ) U*` with eigenvalues sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.max_eigenvalue().abs().max(self.min_eigenvalue().abs())
    }

    /// `U diag(values) U*`.
    pub fn compose(&self, values: &[f64]) -> HermitianMatrix {
        let n = self.dim();
        let u = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &v) in values.iter().enumerate() {
                    acc += u[(i, k)] * u[(j, k)].conj() * v;
                }
                out[(i, j)] = acc;
            }
        }
        HermitianMatrix::hermitian_part(&out)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.compose(&self.eigenvalues)
    }

    /// `λ_min ≥ -max(tol · max(1, ρ), 1e-14)`.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -self.definiteness_threshold(tol)
    }

    /// `λ_min > max(tol · max(1, ρ), 1e-14)`.
    pub fn is_positive_definite(&self, tol: f64) -> bool {
        self.min_eigenvalue() > self.definiteness_threshold(tol)
    }

    fn definiteness_threshold(&self, tol: f64) -> f64 {
        (tol * self.spectral_radius().max(1.0)).max(PSD_ABSOLUTE_FLOOR)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation that zeroes it.
pub fn hermitian_eigendecomposition(
    a: &HermitianMatrix,
) -> Result<SpectralDecomposition, SpectraError> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let frobenius = m.frobenius_norm();
    let threshold = OFF_DIAGONAL_THRESHOLD * frobenius;

    let mut converged = frobenius == 0.0;
    let mut sweeps = 0;
    while !converged {
        if off_diagonal_norm(&m) <= threshold {
            converged = true;
            break;
        }
        if sweeps == MAX_SWEEPS {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(SpectraError::NoConvergence {
            dim: n,
            sweeps,
            residual: off_diagonal_norm(&m),
            frobenius,
        });
    }

    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable: equal eigenvalues keep Jacobi output order.
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, col)] = v[(row, k)];
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    libm::sqrt(acc)
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = m.dim();
    let b = m[(p, q)];
    let modulus = b.norm();
    if modulus == 0.0 {
        return;
    }
    let phase = b / modulus; // e^{iθ}
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;

    let theta = (aqq - app) / (2.0 * modulus);
    let t = if theta >= 0.0 {
        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;

    // U = D R with D = diag(1, e^{-iθ}) on (p, q) and R = [[c, s], [-s, c]].
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = phase.conj() * (-s);
    let uqq = phase.conj() * c;

    for k in 0..n {
        let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = mkp * upp + mkq * uqp;
        m[(k, q)] = mkp * upq + mkq * uqq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
    for k in 0..n {
        let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = upp.conj() * mpk + uqp.conj() * mqk;
        m[(q, k)] = upq.conj() * mpk + uqq.conj() * mqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
}

/// Singular values, descending, as square roots of the eigenvalues of `A*A`.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>, SpectraError> {
    let gram = HermitianMatrix::hermitian_part(&a.adjoint().try_mul(a)?);
    let decomposition = hermitian_eigendecomposition(&gram)?;
    Ok(decomposition
        .eigenvalues
        .iter()
        .map(|&l| libm::sqrt(l.max(0.0)))
        .collect())
}

/// Sum of the singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64, SpectraError> {
    Ok(singular_values(a)?.iter().sum())
}

/// Trace norm of a Hermitian matrix as `Σ |λ_i|`.
///
/// Agrees with [`trace_norm`] and avoids squaring the spectrum, which keeps
/// small eigenvalues accurate.
pub fn hermitian_trace_norm(a: &HermitianMatrix) -> Result<f64, SpectraError> {
    Ok(hermitian_eigendecomposition(a)?
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .sum())
}

pub fn is_positive_semidefinite(a: &HermitianMatrix, tol: f64) -> Result<bool, SpectraError> {
    Ok(hermitian_eigendecomposition(a)?.is_positive_semidefinite(tol))
}

pub fn is_positive_definite(a: &HermitianMatrix, tol: f64) -> Result<bool, SpectraError> {
    Ok(hermitian_eigendecomposition(a)?.is_positive_definite(tol))
}

pub fn min_eigenvalue(a: &HermitianMatrix) -> Result<f64, SpectraError> {
    Ok(hermitian_eigendecomposition(a)?.min_eigenvalue())
}

/// `U diag(map(λ_i)) U*`.
pub fn apply_spectral_function(
    a: &HermitianMatrix,
    map: impl Fn(f64) -> f64,
) -> Result<HermitianMatrix, SpectraError> {
    let decomposition = hermitian_eigendecomposition(a)?;
    let mut mapped = Vec::with_capacity(decomposition.dim());
    for &l in &decomposition.eigenvalues {
        let value = map(l);
        if !value.is_finite() {
            return Err(SpectraError::NonFiniteSpectralValue { eigenvalue: l });
        }
        mapped.push(value);
    }
    Ok(decomposition.compose(&mapped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn reconstruction_residual(a: &HermitianMatrix, d: &SpectralDecomposition) -> f64 {
        (d.reconstruct().as_matrix() - a.as_matrix()).frobenius_norm()
    }

    fn unitarity_residual(u: &ComplexMatrix) -> f64 {
        (&(&u.adjoint() * u) - &ComplexMatrix::identity(u.dim())).frobenius_norm()
    }

    #[test]
    fn identity_eigenvalues() {
        let d = hermitian_eigendecomposition(&HermitianMatrix::identity(2)).unwrap();
        assert_eq!(d.eigenvalues, [1.0, 1.0]);
        assert!(unitarity_residual(&d.eigenvectors) <= 1e-10);
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let a = HermitianMatrix::from_diagonal(&[-1.0, 3.0]);
        let d = hermitian_eigendecomposition(&a).unwrap();
        assert_eq!(d.eigenvalues, [3.0, -1.0]);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(
                    d.eigenvectors[(i, j)].norm(),
                    if i != j { 1.0 } else { 0.0 }
                );
            }
        }
    }

    #[test]
    fn real_symmetric_two_by_two() {
        // λ² - 4λ + 3 = 0
        let a = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let d = hermitian_eigendecomposition(&a).unwrap();
        assert_abs_diff_eq!(d.eigenvalues[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.eigenvalues[1], 1.0, epsilon = 1e-14);
        assert!(reconstruction_residual(&a, &d) <= 1e-10 * (1.0 + a.as_matrix().frobenius_norm()));
    }

    #[test]
    fn complex_hermitian_pauli_y() {
        let a = HermitianMatrix::new(
            ComplexMatrix::new(
                2,
                alloc::vec![
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, -1.0),
                    Complex64::new(0.0, 1.0),
                    Complex64::new(0.0, 0.0),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let d = hermitian_eigendecomposition(&a).unwrap();
        assert_abs_diff_eq!(d.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.eigenvalues[1], -1.0, epsilon = 1e-14);
        assert!(reconstruction_residual(&a, &d) <= 1e-12);
    }

    #[test]
    fn zero_matrix_decomposes() {
        let d = hermitian_eigendecomposition(&HermitianMatrix::zeros(3)).unwrap();
        assert_eq!(d.eigenvalues, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn singular_values_examples() {
        assert_eq!(
            singular_values(&ComplexMatrix::identity(3)).unwrap(),
            [1.0, 1.0, 1.0]
        );
        let nilpotent = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(singular_values(&nilpotent).unwrap(), [2.0, 0.0]);
    }

    #[test]
    fn trace_norm_examples() {
        assert_eq!(trace_norm(&ComplexMatrix::identity(4)).unwrap(), 4.0);
        assert_eq!(
            trace_norm(&ComplexMatrix::from_diagonal(&[1.0, -2.0])).unwrap(),
            3.0
        );
        let nilpotent = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(trace_norm(&nilpotent).unwrap(), 2.0);
        assert_eq!(
            hermitian_trace_norm(&HermitianMatrix::from_diagonal(&[1.0, -2.0])).unwrap(),
            3.0
        );
    }

    #[test]
    fn definiteness_examples() {
        let tol = 1e-10;
        let id = HermitianMatrix::identity(2);
        assert!(is_positive_semidefinite(&id, tol).unwrap());
        assert!(is_positive_definite(&id, tol).unwrap());

        let singular = HermitianMatrix::from_diagonal(&[1.0, 0.0]);
        assert!(is_positive_semidefinite(&singular, tol).unwrap());
        assert!(!is_positive_definite(&singular, tol).unwrap());

        let indefinite = HermitianMatrix::from_diagonal(&[1.0, -1e-3]);
        assert!(!is_positive_semidefinite(&indefinite, tol).unwrap());
        assert!(!is_positive_definite(&indefinite, tol).unwrap());
    }

    #[test]
    fn definiteness_threshold_is_relative() {
        let big = HermitianMatrix::from_diagonal(&[1e6, -1e-5]);
        assert!(is_positive_semidefinite(&big, 1e-10).unwrap());
        let small = HermitianMatrix::from_diagonal(&[1.0, -1e-5]);
        assert!(!is_positive_semidefinite(&small, 1e-10).unwrap());
    }

    #[test]
    fn spectral_function_examples() {
        let a = HermitianMatrix::from_diagonal(&[4.0, 9.0]);
        let root = apply_spectral_function(&a, |l| libm::sqrt(l.max(0.0))).unwrap();
        assert_abs_diff_eq!(root.as_matrix()[(0, 0)].re, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(root.as_matrix()[(1, 1)].re, 3.0, epsilon = 1e-14);

        let id = HermitianMatrix::identity(3);
        let mapped = apply_spectral_function(&id, |l| 5.0 * l - 2.0).unwrap();
        assert!((mapped.as_matrix() - &ComplexMatrix::identity(3).scale(3.0)).max_abs() < 1e-14);

        let b = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let half = apply_spectral_function(&b, |l| l / 2.0).unwrap();
        assert!((half.as_matrix() - &b.as_matrix().scale(0.5)).max_abs() < 1e-14);
    }

    #[test]
    fn spectral_function_rejects_non_finite() {
        let a = HermitianMatrix::from_diagonal(&[1.0, -4.0]);
        let err = apply_spectral_function(&a, libm::sqrt).unwrap_err();
        assert_eq!(
            err,
            SpectraError::NonFiniteSpectralValue { eigenvalue: -4.0 }
        );
    }
}
