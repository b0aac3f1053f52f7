//! Alternating solver for a common solution.

use alloc::vec::Vec;

use super::conditions::sample_points;
use super::sampling::TraceNormSpace;
use super::{EquationPair, MatEqError};
use crate::fixpoint::{alternate_iterate, uniqueness_probe, UniquenessReport, Verdict};
use crate::matrix::HermitianMatrix;
use crate::spectra::{hermitian_eigendecomposition, hermitian_trace_norm, DEFAULT_PSD_TOLERANCE};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TraceSummary {
    pub verdict: Verdict,
    pub steps: usize,
    pub gaps: Vec<f64>,
    pub final_gap: Option<f64>,
    pub residual_f: Option<f64>,
    pub residual_g: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SolveReport {
    pub tolerance: f64,
    pub radius: f64,
    pub trace: TraceSummary,
    /// Present only on convergence.
    pub solution: Option<HermitianMatrix>,
    /// Last iterate, whatever the verdict.
    pub final_iterate: HermitianMatrix,
    /// `‖X − Q₁ ∓ Σ Aᵢ* F(X) Aᵢ‖` at the final iterate.
    pub residual_1: Option<f64>,
    pub residual_2: Option<f64>,
    pub min_eigenvalue: Option<f64>,
    pub positive_definite: bool,
    pub trace_norm: Option<f64>,
    /// `‖X̂‖ ≤ a`.
    pub within_ball: bool,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.trace.verdict == Verdict::Converged
    }
}

/// Runs the alternating iteration on the induced maps, starting at `Q₁` unless `x0` is given.
pub fn solve_common(
    pair: &EquationPair,
    a: f64,
    tol: f64,
    max_iter: usize,
    x0: Option<HermitianMatrix>,
) -> Result<SolveReport, MatEqError> {
    if !(tol > 0.0) || max_iter < 2 {
        return Err(MatEqError::InvalidParameter(
            "need tol > 0 and max_iter >= 2",
        ));
    }
    let x0 = x0.unwrap_or_else(|| pair.first().q().clone());
    if x0.dim() != pair.dim() {
        return Err(MatEqError::DimensionMismatch {
            first: pair.dim(),
            second: x0.dim(),
        });
    }
    let trace = alternate_iterate(
        |x: &HermitianMatrix| pair.f(x).ok(),
        |x: &HermitianMatrix| pair.g(x).ok(),
        x0,
        &TraceNormSpace,
        tol,
        max_iter,
    );

    let z = trace.last().clone();
    let diverged = matches!(trace.verdict, Verdict::DivergedNonFinite { .. });
    let (residual_1, residual_2, min_eigenvalue, norm) = if diverged {
        (None, None, None, None)
    } else {
        (
            Some(pair.first().residual(&z)?),
            Some(pair.second().residual(&z)?),
            Some(hermitian_eigendecomposition(&z)?.min_eigenvalue()),
            Some(hermitian_trace_norm(&z)?),
        )
    };
    let positive_definite = match min_eigenvalue {
        Some(_) => hermitian_eigendecomposition(&z)?.is_positive_definite(DEFAULT_PSD_TOLERANCE),
        None => false,
    };

    Ok(SolveReport {
        tolerance: tol,
        radius: a,
        trace: TraceSummary {
            verdict: trace.verdict,
            steps: trace.steps(),
            final_gap: trace.gaps.last().copied(),
            residual_f: trace.residual_f,
            residual_g: trace.residual_g,
            gaps: trace.gaps,
        },
        solution: (trace.verdict == Verdict::Converged).then(|| z.clone()),
        final_iterate: z,
        residual_1,
        residual_2,
        min_eigenvalue,
        positive_definite,
        trace_norm: norm,
        within_ball: norm.is_some_and(|v| v <= a),
    })
}

/// Solves from `starts` seeded ball points and compares the limits.
pub fn probe_uniqueness(
    pair: &EquationPair,
    a: f64,
    tol: f64,
    max_iter: usize,
    starts: usize,
    seed: u64,
) -> UniquenessReport<HermitianMatrix> {
    let points = sample_points(pair.dim(), a, starts, seed);
    uniqueness_probe(
        |x: &HermitianMatrix| pair.f(x).ok(),
        |x: &HermitianMatrix| pair.g(x).ok(),
        &points,
        &TraceNormSpace,
        tol,
        max_iter,
    )
}
