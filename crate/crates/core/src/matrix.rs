//! Dense square complex matrices and the Hermitian subtype.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

/// Errors raised while building matrices.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix dimension must be positive")]
    EmptyMatrix,
    #[error("expected {expected} entries for a square matrix, got {actual}")]
    NotSquare { expected: usize, actual: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian: defect {defect:e} exceeds tolerance {tolerance:e}")]
    NotHermitian { defect: f64, tolerance: f64 },
}

/// Dense `n x n` complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting non-square or non-finite input.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self, MatrixError> {
        if dim == 0 {
            return Err(MatrixError::EmptyMatrix);
        }
        if data.len() != dim * dim {
            return Err(MatrixError::NotSquare {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        if let Some(k) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(MatrixError::NonFinite {
                row: k / dim,
                col: k % dim,
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, MatrixError> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(MatrixError::NotSquare {
                    expected: dim * dim,
                    actual: rows.iter().map(Vec::len).sum(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    /// Real matrix from nested rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, MatrixError> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim)
    }

    /// Conjugate transpose `A*`.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `max |a_ij - conj(a_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut defect = 0.0f64;
        for i in 0..n {
            for j in i..n {
                defect = defect.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        defect
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    fn check_dim(&self, other: &Self) -> Result<(), MatrixError> {
        if self.dim != other.dim {
            return Err(MatrixError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// `A* M A`.
    pub fn congruence(&self, inner: &Self) -> Result<Self, MatrixError> {
        self.adjoint().try_mul(inner)?.try_mul(self)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

// Operator impls panic on dimension mismatch; use the `try_*` forms on untrusted input.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs)
            .expect("dimension mismatch in matrix addition")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.try_sub(rhs)
            .expect("dimension mismatch in matrix subtraction")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.try_mul(rhs)
            .expect("dimension mismatch in matrix product")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-1.0)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            f.write_str("[")?;
            for (j, z) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}{:+}i", z.re, z.im)?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

/// Relative tolerance on the Hermitian defect accepted (and symmetrized away) at construction.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// A Hermitian matrix. The stored matrix is exactly `(A + A*)/2` of its input.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    base: ComplexMatrix,
    hermiticity_defect: f64,
}

impl HermitianMatrix {
    /// Accepts `m` when `max |a_ij - conj(a_ji)| <= 1e-12 (1 + max |a_ij|)` and symmetrizes it.
    pub fn new(m: ComplexMatrix) -> Result<Self, MatrixError> {
        let defect = m.hermiticity_defect();
        let tolerance = HERMITIAN_TOLERANCE * (1.0 + m.max_abs());
        if defect > tolerance {
            return Err(MatrixError::NotHermitian { defect, tolerance });
        }
        Ok(Self::symmetrize(m, defect))
    }

    /// `(A + A*)/2` for any square `A`, regardless of its defect.
    pub fn hermitian_part(m: &ComplexMatrix) -> Self {
        let defect = m.hermiticity_defect();
        Self::symmetrize(m.clone(), defect)
    }

    fn symmetrize(mut m: ComplexMatrix, defect: f64) -> Self {
        let n = m.dim;
        for i in 0..n {
            m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        Self {
            base: m,
            hermiticity_defect: defect,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::symmetrize(ComplexMatrix::identity(dim), 0.0)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::symmetrize(ComplexMatrix::zeros(dim), 0.0)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::symmetrize(ComplexMatrix::from_diagonal(diag), 0.0)
    }

    /// Real symmetric matrix from nested rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, MatrixError> {
        Self::new(ComplexMatrix::from_real_rows(rows)?)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.base.dim
    }

    #[inline]
    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.base
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.base
    }

    /// Defect of the input this matrix was built from.
    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::symmetrize(self.base.scale(factor), 0.0)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MatrixError> {
        Ok(Self::symmetrize(self.base.try_add(&other.base)?, 0.0))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, MatrixError> {
        Ok(Self::symmetrize(self.base.try_sub(&other.base)?, 0.0))
    }

    /// `A* H A`, Hermitian by construction.
    pub fn congruence(&self, a: &ComplexMatrix) -> Result<Self, MatrixError> {
        Ok(Self::hermitian_part(&a.congruence(&self.base)?))
    }
}

impl AsRef<ComplexMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.base
    }
}

#[cfg(feature = "serde")]
mod serde_impls {
    use super::*;
    use alloc::format;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    // Row-major nested arrays of `[re, im]` pairs.
    impl Serialize for ComplexMatrix {
        fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
            let rows: Vec<Vec<[f64; 2]>> = self
                .rows()
                .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
                .collect();
            rows.serialize(serializer)
        }
    }

    impl<'de> Deserialize<'de> for ComplexMatrix {
        fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
            let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
            let rows: Vec<Vec<Complex64>> = rows
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|[re, im]| Complex64::new(re, im))
                        .collect()
                })
                .collect();
            ComplexMatrix::from_rows(&rows).map_err(|e| D::Error::custom(format!("{e}")))
        }
    }

    impl Serialize for HermitianMatrix {
        fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
            self.base.serialize(serializer)
        }
    }

    impl<'de> Deserialize<'de> for HermitianMatrix {
        fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
            let m = ComplexMatrix::deserialize(deserializer)?;
            HermitianMatrix::new(m).map_err(|e| D::Error::custom(format!("{e}")))
        }
    }
}
