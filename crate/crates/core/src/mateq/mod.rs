//! Pairs of nonlinear matrix equations
//!
//! ```text
//! X = Q₁ ± Σᵢ Aᵢ* F(X) Aᵢ
//! X = Q₂ ± Σᵢ Aᵢ* G(X) Aᵢ
//! ```
//!
//! over Hermitian matrices with the trace norm. A common solution is a common
//! fixed point of the induced maps `f(X) = Q₁ ± Σ Aᵢ* F(X) Aᵢ` and
//! `g(X) = Q₂ ± Σ Aᵢ* G(X) Aᵢ`.

mod conditions;
mod maps;
mod sampling;
mod solve;

pub use conditions::*;
pub use maps::*;
pub use sampling::*;
pub use solve::*;

use alloc::vec::Vec;

use crate::matrix::{ComplexMatrix, HermitianMatrix, MatrixError};
use crate::spectra::{
    hermitian_trace_norm, is_positive_definite, trace_norm, SpectraError, DEFAULT_PSD_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatEqError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("Q must be positive definite")]
    QNotPositiveDefinite,
    #[error("coefficient A[{index}] has dimension {found}, expected {expected}")]
    CoefficientDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("equations have dimensions {first} and {second}")]
    DimensionMismatch { first: usize, second: usize },
    #[error("both equations must share the same coefficient list A₁..Aₘ")]
    CoefficientMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }
}

/// One equation `X = Q ± Σ Aᵢ* F(X) Aᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationSpec {
    q: HermitianMatrix,
    sign: Sign,
    coefficients: Vec<ComplexMatrix>,
    map: MapKind,
}

impl EquationSpec {
    /// Validates that `Q` is positive definite and every `Aᵢ` matches its dimension.
    pub fn new(
        q: HermitianMatrix,
        sign: Sign,
        coefficients: Vec<ComplexMatrix>,
        map: MapKind,
    ) -> Result<Self, MatEqError> {
        map.validate()?;
        let n = q.dim();
        for (index, a) in coefficients.iter().enumerate() {
            if a.dim() != n {
                return Err(MatEqError::CoefficientDimension {
                    index,
                    expected: n,
                    found: a.dim(),
                });
            }
        }
        if !is_positive_definite(&q, DEFAULT_PSD_TOLERANCE)? {
            return Err(MatEqError::QNotPositiveDefinite);
        }
        Ok(Self {
            q,
            sign,
            coefficients,
            map,
        })
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn q(&self) -> &HermitianMatrix {
        &self.q
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn coefficients(&self) -> &[ComplexMatrix] {
        &self.coefficients
    }

    pub fn map(&self) -> MapKind {
        self.map
    }

    fn check_dim(&self, x: &HermitianMatrix) -> Result<(), MatEqError> {
        if x.dim() != self.dim() {
            return Err(MatrixError::DimensionMismatch {
                left: self.dim(),
                right: x.dim(),
            }
            .into());
        }
        Ok(())
    }

    /// `Σ Aᵢ* F(X) Aᵢ`.
    pub fn coupling_term(&self, x: &HermitianMatrix) -> Result<HermitianMatrix, MatEqError> {
        self.check_dim(x)?;
        let n = self.dim();
        if self.map == MapKind::Zero {
            return Ok(HermitianMatrix::zeros(n));
        }
        let fx = self.map.apply(x)?;
        let mut sum = ComplexMatrix::zeros(n);
        for a in &self.coefficients {
            sum = sum.try_add(&a.congruence(fx.as_matrix())?)?;
        }
        Ok(HermitianMatrix::hermitian_part(&sum))
    }

    /// The induced map `X ↦ Q ± Σ Aᵢ* F(X) Aᵢ`.
    pub fn induced_map(&self, x: &HermitianMatrix) -> Result<HermitianMatrix, MatEqError> {
        let coupling = self.coupling_term(x)?;
        Ok(self.q.try_add(&coupling.scale(self.sign.factor()))?)
    }

    /// `‖X − Q ∓ Σ Aᵢ* F(X) Aᵢ‖`, i.e. `‖X − f(X)‖`.
    pub fn residual(&self, x: &HermitianMatrix) -> Result<f64, MatEqError> {
        let fx = self.induced_map(x)?;
        Ok(hermitian_trace_norm(&x.try_sub(&fx)?)?)
    }
}

/// Free-function form of [`EquationSpec::induced_map`].
pub fn induced_map(
    spec: &EquationSpec,
) -> impl Fn(&HermitianMatrix) -> Result<HermitianMatrix, MatEqError> + '_ {
    move |x| spec.induced_map(x)
}

pub fn residuals(spec: &EquationSpec, x: &HermitianMatrix) -> Result<f64, MatEqError> {
    spec.residual(x)
}

/// `Σ ‖Aᵢ*‖ ‖Aᵢ‖` in the trace norm.
pub fn coefficient_constant(coefficients: &[ComplexMatrix]) -> Result<f64, MatEqError> {
    let mut k = 0.0;
    for a in coefficients {
        k += trace_norm(&a.adjoint())? * trace_norm(a)?;
    }
    Ok(k)
}

/// `k` for two equations, which must share their coefficient list.
pub fn compute_k(first: &EquationSpec, second: &EquationSpec) -> Result<f64, MatEqError> {
    if first.coefficients != second.coefficients {
        return Err(MatEqError::CoefficientMismatch);
    }
    coefficient_constant(&first.coefficients)
}

/// Two equations with a shared dimension and coefficient list.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationPair {
    first: EquationSpec,
    second: EquationSpec,
    k: f64,
}

impl EquationPair {
    pub fn new(first: EquationSpec, second: EquationSpec) -> Result<Self, MatEqError> {
        if first.dim() != second.dim() {
            return Err(MatEqError::DimensionMismatch {
                first: first.dim(),
                second: second.dim(),
            });
        }
        let k = compute_k(&first, &second)?;
        Ok(Self { first, second, k })
    }

    /// The same equation twice.
    pub fn single(spec: EquationSpec) -> Self {
        let k = coefficient_constant(&spec.coefficients).expect("validated coefficients");
        Self {
            first: spec.clone(),
            second: spec,
            k,
        }
    }

    pub fn first(&self) -> &EquationSpec {
        &self.first
    }

    pub fn second(&self) -> &EquationSpec {
        &self.second
    }

    pub fn dim(&self) -> usize {
        self.first.dim()
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `max(k1(F), k1(G))` from closed-form bounds, when both maps have one.
    pub fn auto_k1(&self, radius: f64) -> Option<f64> {
        Some(
            self.first
                .map
                .auto_k1(radius)?
                .max(self.second.map.auto_k1(radius)?),
        )
    }

    pub fn f(&self, x: &HermitianMatrix) -> Result<HermitianMatrix, MatEqError> {
        self.first.induced_map(x)
    }

    pub fn g(&self, x: &HermitianMatrix) -> Result<HermitianMatrix, MatEqError> {
        self.second.induced_map(x)
    }
}
