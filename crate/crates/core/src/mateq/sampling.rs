//! Seeded random matrices and the trace-norm ball sampler.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::fixpoint::{DomainSampler, NormedPointAdapter};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::spectra::{hermitian_eigendecomposition, hermitian_trace_norm};

/// `n x n` matrix with independent standard normal real and imaginary parts.
pub fn random_complex_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let data: Vec<Complex64> = (0..n * n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    ComplexMatrix::new(n, data).expect("normal samples are finite")
}

/// `(G + G*)/2` for a random complex Gaussian `G`.
pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&random_complex_matrix(rng, n))
}

/// Eigenvector matrix of a random Hermitian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    hermitian_eigendecomposition(&random_hermitian(rng, n))
        .expect("Jacobi converges on Gaussian samples")
        .eigenvectors
}

/// Hermitian matrices with `‖X‖ = u a`, `u` uniform on `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSampler {
    pub dim: usize,
    pub radius: f64,
}

impl DomainSampler for BallSampler {
    type Point = HermitianMatrix;

    fn sample(&self, rng: &mut ChaCha8Rng) -> HermitianMatrix {
        loop {
            let h = random_hermitian(rng, self.dim);
            let norm = hermitian_trace_norm(&h).unwrap_or(0.0);
            let u = 1.0 - rng.random::<f64>();
            if norm > 0.0 {
                return h.scale(u * self.radius / norm);
            }
        }
    }
}

/// Trace-norm distance on Hermitian matrices.
#[derive(Debug, Clone, Copy, Default)]
pub struct TraceNormSpace;

impl NormedPointAdapter for TraceNormSpace {
    type Point = HermitianMatrix;

    fn distance(&self, x: &HermitianMatrix, y: &HermitianMatrix) -> f64 {
        x.try_sub(y)
            .ok()
            .and_then(|d| hermitian_trace_norm(&d).ok())
            .unwrap_or(f64::NAN)
    }

    fn is_finite(&self, x: &HermitianMatrix) -> bool {
        x.as_matrix().is_finite()
    }
}
