//! Sampled checks of the sufficient conditions for a unique common
//! positive definite solution in the ball `‖X‖ ≤ a`:
//!
//! * (i) `‖Q₁‖, ‖Q₂‖ ≤ a − k k₁ n` with `k = Σ ‖Aᵢ*‖ ‖Aᵢ‖`;
//! * (ii) at every `X` in the ball, one of the sign-appropriate definiteness
//!   conditions holds (`Σ Aᵢ* F(X) Aᵢ ⪰ O` for `+`, `Q ≻ Σ Aᵢ* F(X) Aᵢ` for `−`);
//! * (iii) `2 k k₁ + λ(Q₁ − Q₂) ≤ max{|‖S_F(X)‖ − ‖X ∓ Q₁‖|, |‖S_G(Y)‖ − ‖Y ∓ Q₂‖|}/(n + 1) − α ‖X − Y‖`.
//!
//! Conditions (ii) and (iii) quantify over the whole ball; the checkers
//! only see seeded samples, so a pass is evidence, never proof.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sampling::{BallSampler, TraceNormSpace};
use super::{EquationPair, EquationSpec, MatEqError, Sign};
use crate::controls::ControlBundle;
use crate::fixpoint::{certify_contractive_inequality, DomainSampler, InequalityCertificate};
use crate::matrix::HermitianMatrix;
use crate::spectra::{
    hermitian_eigendecomposition, hermitian_trace_norm, singular_values, DEFAULT_PSD_TOLERANCE,
};

pub const DEFAULT_ALPHA: f64 = 1e-6;
/// Slack on `‖f(X)‖ ≤ a` in the self-map check.
pub const SELF_MAP_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConditionI {
    pub k: f64,
    pub k1: f64,
    pub radius: f64,
    /// `a − k k₁ n`.
    pub bound: f64,
    pub norm_q1: f64,
    pub norm_q2: f64,
    /// `a − k k₁ n − ‖Q₁‖`.
    pub margin_1: f64,
    pub margin_2: f64,
    pub pass: bool,
}

pub fn check_condition_i(pair: &EquationPair, a: f64, k1: f64) -> Result<ConditionI, MatEqError> {
    if !(a > 0.0) || !(k1 >= 0.0) {
        return Err(MatEqError::InvalidParameter("need a > 0 and k1 >= 0"));
    }
    let n = pair.dim() as f64;
    let bound = a - pair.k() * k1 * n;
    let norm_q1 = hermitian_trace_norm(pair.first().q())?;
    let norm_q2 = hermitian_trace_norm(pair.second().q())?;
    let margin_1 = bound - norm_q1;
    let margin_2 = bound - norm_q2;
    Ok(ConditionI {
        k: pair.k(),
        k1,
        radius: a,
        bound,
        norm_q1,
        norm_q2,
        margin_1,
        margin_2,
        pass: margin_1 >= 0.0 && margin_2 >= 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize),
    serde(rename_all = "snake_case")
)]
pub enum DefinitenessBranch {
    /// `Σ Aᵢ* F(X) Aᵢ ⪰ O`
    CouplingSemidefinite,
    /// `Q ≻ Σ Aᵢ* F(X) Aᵢ`
    DominatedByQ,
}

impl DefinitenessBranch {
    pub fn for_sign(sign: Sign) -> Self {
        match sign {
            Sign::Plus => Self::CouplingSemidefinite,
            Sign::Minus => Self::DominatedByQ,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BranchSummary {
    pub branch: DefinitenessBranch,
    /// Smallest eigenvalue of the tested matrix over the samples.
    pub min_eigenvalue: f64,
    /// Smallest margin over the samples; `>= 0` (semidefinite) or `> 0` (definite) passes.
    pub min_margin: f64,
    /// The branch held at every sample.
    pub uniform: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConditionII {
    pub samples: usize,
    pub seed: u64,
    pub first: BranchSummary,
    pub second: BranchSummary,
    /// `min over X of max(margin_first(X), margin_second(X))`.
    pub worst_pointwise_margin: f64,
    /// Samples where neither branch held.
    pub failing_samples: Vec<usize>,
    pub pass: bool,
    pub sampled_not_proven: bool,
}

struct BranchEval {
    min_eigenvalue: f64,
    margin: f64,
    holds: bool,
}

fn evaluate_branch(spec: &EquationSpec, x: &HermitianMatrix) -> Result<BranchEval, MatEqError> {
    let coupling = spec.coupling_term(x)?;
    Ok(match DefinitenessBranch::for_sign(spec.sign()) {
        DefinitenessBranch::CouplingSemidefinite => {
            let d = hermitian_eigendecomposition(&coupling)?;
            let threshold = threshold(&d.eigenvalues);
            let margin = d.min_eigenvalue() + threshold;
            BranchEval {
                min_eigenvalue: d.min_eigenvalue(),
                margin,
                holds: margin >= 0.0,
            }
        }
        DefinitenessBranch::DominatedByQ => {
            let d = hermitian_eigendecomposition(&spec.q().try_sub(&coupling)?)?;
            let threshold = threshold(&d.eigenvalues);
            let margin = d.min_eigenvalue() - threshold;
            BranchEval {
                min_eigenvalue: d.min_eigenvalue(),
                margin,
                holds: margin > 0.0,
            }
        }
    })
}

// Same scale rule as `SpectralDecomposition::is_positive_semidefinite`.
fn threshold(eigenvalues: &[f64]) -> f64 {
    let radius = eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    (DEFAULT_PSD_TOLERANCE * radius.max(1.0)).max(crate::spectra::PSD_ABSOLUTE_FLOOR)
}

/// Checks condition (ii) pointwise at `samples` seeded points of the ball.
pub fn check_condition_ii(
    pair: &EquationPair,
    a: f64,
    samples: usize,
    seed: u64,
) -> Result<ConditionII, MatEqError> {
    let points = sample_points(pair.dim(), a, samples, seed);
    let mut report = condition_ii_on(pair, &points)?;
    report.seed = seed;
    Ok(report)
}

/// Condition (ii) at explicit points.
pub fn condition_ii_on(
    pair: &EquationPair,
    points: &[HermitianMatrix],
) -> Result<ConditionII, MatEqError> {
    if points.is_empty() {
        return Err(MatEqError::InvalidParameter("need at least one sample"));
    }
    let mut first = summary(pair.first().sign());
    let mut second = summary(pair.second().sign());
    let mut worst = f64::INFINITY;
    let mut failing = Vec::new();
    for (index, x) in points.iter().enumerate() {
        let b1 = evaluate_branch(pair.first(), x)?;
        let b2 = evaluate_branch(pair.second(), x)?;
        accumulate(&mut first, &b1);
        accumulate(&mut second, &b2);
        worst = worst.min(b1.margin.max(b2.margin));
        if !b1.holds && !b2.holds {
            failing.push(index);
        }
    }
    Ok(ConditionII {
        samples: points.len(),
        seed: 0,
        first,
        second,
        worst_pointwise_margin: worst,
        pass: failing.is_empty(),
        failing_samples: failing,
        sampled_not_proven: true,
    })
}

fn summary(sign: Sign) -> BranchSummary {
    BranchSummary {
        branch: DefinitenessBranch::for_sign(sign),
        min_eigenvalue: f64::INFINITY,
        min_margin: f64::INFINITY,
        uniform: true,
    }
}

fn accumulate(summary: &mut BranchSummary, eval: &BranchEval) {
    summary.min_eigenvalue = summary.min_eigenvalue.min(eval.min_eigenvalue);
    summary.min_margin = summary.min_margin.min(eval.margin);
    summary.uniform &= eval.holds;
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PairViolation {
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConditionIII {
    pub samples: usize,
    pub seed: u64,
    pub alpha: f64,
    /// `2 k k₁ + σ_max(Q₁ − Q₂)`, the binding left-hand side.
    pub lhs: f64,
    /// `min (rhs − lhs)` over the sampled pairs.
    pub worst_margin: f64,
    /// Sorted by margin, then index.
    pub violations: Vec<PairViolation>,
    pub pass: bool,
    pub sampled_not_proven: bool,
}

/// Checks condition (iii) on `samples` seeded pairs `(X, Y)` from the ball.
///
/// The pair sequence matches [`certify_derived_inequality`] with the same seed.
pub fn check_condition_iii(
    pair: &EquationPair,
    a: f64,
    k1: f64,
    alpha: f64,
    samples: usize,
    seed: u64,
) -> Result<ConditionIII, MatEqError> {
    let sampler = BallSampler {
        dim: pair.dim(),
        radius: a,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(HermitianMatrix, HermitianMatrix)> = (0..samples)
        .map(|_| {
            let x = sampler.sample(&mut rng);
            let y = sampler.sample(&mut rng);
            (x, y)
        })
        .collect();
    let mut report = condition_iii_on(pair, k1, alpha, &pairs)?;
    report.seed = seed;
    Ok(report)
}

/// Condition (iii) at explicit pairs.
pub fn condition_iii_on(
    pair: &EquationPair,
    k1: f64,
    alpha: f64,
    pairs: &[(HermitianMatrix, HermitianMatrix)],
) -> Result<ConditionIII, MatEqError> {
    if !(alpha > 0.0) {
        return Err(MatEqError::InvalidParameter("alpha must be positive"));
    }
    if pairs.is_empty() {
        return Err(MatEqError::InvalidParameter("need at least one sample"));
    }
    let n = pair.dim() as f64;
    let q_diff = pair.first().q().try_sub(pair.second().q())?;
    let sigma_max = singular_values(q_diff.as_matrix())?[0];
    let lhs = 2.0 * pair.k() * k1 + sigma_max;

    let mut worst = f64::INFINITY;
    let mut violations = Vec::new();
    for (index, (x, y)) in pairs.iter().enumerate() {
        let tx = imbalance(pair.first(), x)?;
        let ty = imbalance(pair.second(), y)?;
        let rhs = tx.max(ty) / (n + 1.0) - alpha * hermitian_trace_norm(&x.try_sub(y)?)?;
        let margin = rhs - lhs;
        worst = worst.min(margin);
        if margin < 0.0 {
            violations.push(PairViolation {
                index,
                lhs,
                rhs,
                margin,
            });
        }
    }
    violations.sort_by(|a, b| a.margin.total_cmp(&b.margin).then(a.index.cmp(&b.index)));
    Ok(ConditionIII {
        samples: pairs.len(),
        seed: 0,
        alpha,
        lhs,
        worst_margin: worst,
        pass: violations.is_empty(),
        violations,
        sampled_not_proven: true,
    })
}

/// `|‖Σ Aᵢ* F(X) Aᵢ‖ − ‖X ∓ Q‖|`, with `X − Q` for `+` equations and `X + Q` for `−`.
fn imbalance(spec: &EquationSpec, x: &HermitianMatrix) -> Result<f64, MatEqError> {
    let coupling = hermitian_trace_norm(&spec.coupling_term(x)?)?;
    let shifted = match spec.sign() {
        Sign::Plus => x.try_sub(spec.q())?,
        Sign::Minus => x.try_add(spec.q())?,
    };
    Ok((coupling - hermitian_trace_norm(&shifted)?).abs())
}

/// Certifies `‖f(X) − g(Y)‖ ≤ max{n/(n+1) ‖f(X) − X‖, n/(n+1) ‖g(Y) − Y‖} − n α ‖X − Y‖`
/// on seeded pairs from the ball.
pub fn certify_derived_inequality(
    pair: &EquationPair,
    a: f64,
    alpha: f64,
    samples: usize,
    seed: u64,
) -> InequalityCertificate<HermitianMatrix> {
    certify_with_bundle(
        pair,
        &ControlBundle::trace_norm_bundle(pair.dim(), alpha),
        a,
        samples,
        seed,
    )
}

/// Certifies the contractive inequality of the induced maps for any bundle.
pub fn certify_with_bundle(
    pair: &EquationPair,
    bundle: &ControlBundle,
    a: f64,
    samples: usize,
    seed: u64,
) -> InequalityCertificate<HermitianMatrix> {
    certify_contractive_inequality(
        |x: &HermitianMatrix| pair.f(x).ok(),
        |x: &HermitianMatrix| pair.g(x).ok(),
        bundle,
        &BallSampler {
            dim: pair.dim(),
            radius: a,
        },
        &TraceNormSpace,
        samples,
        seed,
    )
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SelfMapReport {
    pub samples: usize,
    pub radius: f64,
    pub max_norm_f: f64,
    pub max_norm_g: f64,
    pub pass: bool,
}

/// Checks `‖f(X)‖, ‖g(X)‖ ≤ a` on seeded ball points.
pub fn check_self_map(
    pair: &EquationPair,
    a: f64,
    samples: usize,
    seed: u64,
) -> Result<SelfMapReport, MatEqError> {
    let mut max_f = 0.0f64;
    let mut max_g = 0.0f64;
    for x in sample_points(pair.dim(), a, samples, seed) {
        max_f = max_f.max(hermitian_trace_norm(&pair.f(&x)?)?);
        max_g = max_g.max(hermitian_trace_norm(&pair.g(&x)?)?);
    }
    Ok(SelfMapReport {
        samples,
        radius: a,
        max_norm_f: max_f,
        max_norm_g: max_g,
        pass: max_f <= a + SELF_MAP_SLACK && max_g <= a + SELF_MAP_SLACK,
    })
}

/// All condition results for one pair.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConditionReport {
    pub k: f64,
    pub k1: f64,
    pub radius: f64,
    pub alpha: f64,
    pub samples: usize,
    pub seed: u64,
    pub condition_i: ConditionI,
    pub condition_ii: ConditionII,
    pub condition_iii: ConditionIII,
    pub sampled_not_proven: bool,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.condition_i.pass && self.condition_ii.pass && self.condition_iii.pass
    }
}

pub fn check_conditions(
    pair: &EquationPair,
    a: f64,
    k1: f64,
    alpha: f64,
    samples: usize,
    seed: u64,
) -> Result<ConditionReport, MatEqError> {
    Ok(ConditionReport {
        k: pair.k(),
        k1,
        radius: a,
        alpha,
        samples,
        seed,
        condition_i: check_condition_i(pair, a, k1)?,
        condition_ii: check_condition_ii(pair, a, samples, seed)?,
        condition_iii: check_condition_iii(pair, a, k1, alpha, samples, seed)?,
        sampled_not_proven: true,
    })
}

pub(crate) fn sample_points(dim: usize, a: f64, samples: usize, seed: u64) -> Vec<HermitianMatrix> {
    let sampler = BallSampler { dim, radius: a };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| sampler.sample(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mateq::MapKind;
    use crate::matrix::ComplexMatrix;
    use alloc::vec;

    fn scalar(v: f64) -> HermitianMatrix {
        HermitianMatrix::from_diagonal(&[v])
    }

    fn scalar_pair(map: MapKind) -> EquationPair {
        EquationPair::single(
            EquationSpec::new(
                scalar(1.0),
                Sign::Plus,
                vec![ComplexMatrix::identity(1)],
                map,
            )
            .unwrap(),
        )
    }

    #[test]
    fn condition_i_examples() {
        let zero = scalar_pair(MapKind::Zero);
        assert!(check_condition_i(&zero, 2.0, 0.0).unwrap().pass);

        let half = scalar_pair(MapKind::ScaledIdentity { c: 0.5 });
        let k1 = half.auto_k1(4.0).unwrap();
        assert_eq!(k1, 2.0);
        let report = check_condition_i(&half, 4.0, k1).unwrap();
        assert!(report.pass);
        assert_eq!(report.margin_1, 1.0);

        let report = check_condition_i(&half, 2.5, 2.0).unwrap();
        assert!(!report.pass);
        assert_eq!(report.margin_1, -0.5);
        assert_eq!(report.margin_2, -0.5);
    }

    #[test]
    fn condition_ii_psd_map_passes() {
        let pair = EquationPair::single(
            EquationSpec::new(
                HermitianMatrix::identity(3),
                Sign::Plus,
                vec![ComplexMatrix::identity(3).scale(0.3)],
                MapKind::SpectralPower { c: 1.0, p: 0.5 },
            )
            .unwrap(),
        );
        let report = check_condition_ii(&pair, 5.0, 60, 4).unwrap();
        assert!(report.pass);
        assert!(report.first.uniform && report.second.uniform);
        assert!(report.worst_pointwise_margin >= 0.0);
    }

    #[test]
    fn condition_ii_negative_map_fails() {
        let pair = EquationPair::single(
            EquationSpec::new(
                HermitianMatrix::identity(2),
                Sign::Plus,
                vec![ComplexMatrix::identity(2)],
                MapKind::ScaledIdentity { c: -1.0 },
            )
            .unwrap(),
        );
        let report = condition_ii_on(&pair, &[HermitianMatrix::identity(2)]).unwrap();
        assert!(!report.pass);
        assert_eq!(report.failing_samples, [0]);
        assert!(report.worst_pointwise_margin < 0.0);
        assert!(!check_condition_ii(&pair, 2.0, 20, 1).unwrap().pass);
    }

    #[test]
    fn condition_ii_minus_variant() {
        let pair = EquationPair::single(
            EquationSpec::new(
                HermitianMatrix::identity(2).scale(10.0),
                Sign::Minus,
                vec![ComplexMatrix::identity(2).scale(0.5)],
                MapKind::ScaledIdentity { c: 0.01 },
            )
            .unwrap(),
        );
        let report = check_condition_ii(&pair, 1.0, 50, 8).unwrap();
        assert!(report.pass);
        assert_eq!(report.first.branch, DefinitenessBranch::DominatedByQ);
        // λ_min(10 I − 0.0025 X) ≥ 10 − 0.0025.
        assert!(report.first.min_eigenvalue >= 10.0 - 0.0025);
    }

    #[test]
    fn condition_ii_either_branch_suffices() {
        let first = EquationSpec::new(
            HermitianMatrix::identity(1),
            Sign::Plus,
            vec![ComplexMatrix::identity(1)],
            MapKind::ScaledIdentity { c: 1.0 },
        )
        .unwrap();
        let second = EquationSpec::new(
            HermitianMatrix::identity(1),
            Sign::Plus,
            vec![ComplexMatrix::identity(1)],
            MapKind::ScaledIdentity { c: -1.0 },
        )
        .unwrap();
        let pair = EquationPair::new(first, second).unwrap();
        let report = condition_ii_on(&pair, &[scalar(1.0), scalar(-1.0)]).unwrap();
        assert!(report.pass);
        assert!(!report.first.uniform && !report.second.uniform);
    }

    #[test]
    fn condition_iii_scalar_examples() {
        let pair = scalar_pair(MapKind::Zero);
        let pairs = [(scalar(3.0), scalar(2.0))];
        let report = condition_iii_on(&pair, 0.0, 0.01, &pairs).unwrap();
        assert_eq!(report.lhs, 0.0);
        assert!((report.worst_margin - 0.99).abs() < 1e-15);
        assert!(report.pass);

        let report = condition_iii_on(&pair, 0.0, 2.0, &pairs).unwrap();
        assert!((report.worst_margin + 1.0).abs() < 1e-15);
        assert!(!report.pass);
        assert_eq!(report.violations.len(), 1);
    }

    #[test]
    fn condition_iii_degenerate_zero_margin() {
        let pair = scalar_pair(MapKind::Zero);
        let q = pair.first().q().clone();
        let report = condition_iii_on(&pair, 0.0, 1.0, &[(q.clone(), q)]).unwrap();
        assert_eq!(report.worst_margin, 0.0);
        assert!(report.pass);
    }

    #[test]
    fn condition_iii_minus_uses_x_plus_q() {
        let pair = EquationPair::single(
            EquationSpec::new(
                scalar(1.0),
                Sign::Minus,
                vec![ComplexMatrix::identity(1)],
                MapKind::Zero,
            )
            .unwrap(),
        );
        // |0 − |X + 1|| / 2 at X = Y = −1 is 0.
        let report = condition_iii_on(&pair, 0.0, 0.5, &[(scalar(-1.0), scalar(-1.0))]).unwrap();
        assert_eq!(report.worst_margin, 0.0);
    }

    #[test]
    fn condition_iii_lhs_uses_largest_singular_value() {
        let first = EquationSpec::new(
            HermitianMatrix::from_diagonal(&[3.0, 1.0]),
            Sign::Plus,
            vec![],
            MapKind::Zero,
        )
        .unwrap();
        let second = EquationSpec::new(
            HermitianMatrix::from_diagonal(&[1.0, 2.0]),
            Sign::Plus,
            vec![],
            MapKind::Zero,
        )
        .unwrap();
        let pair = EquationPair::new(first, second).unwrap();
        let x = HermitianMatrix::identity(2);
        let report = condition_iii_on(&pair, 0.0, 1.0, &[(x.clone(), x)]).unwrap();
        assert!((report.lhs - 2.0).abs() < 1e-14);
    }

    #[test]
    fn derived_inequality_with_constant_maps() {
        let pair = scalar_pair(MapKind::Zero);
        let cert = certify_derived_inequality(&pair, 4.0, 1e-6, 200, 12);
        assert_eq!(cert.pairs_checked, 200);
        assert!(cert.holds(), "{:?}", cert.violations.first());
    }

    #[test]
    fn derived_inequality_tracks_condition_iii() {
        // α = 2 breaks (iii) on most pairs; the derived inequality fails on the same indices.
        let pair = scalar_pair(MapKind::Zero);
        let cond = check_condition_iii(&pair, 4.0, 0.0, 2.0, 100, 5).unwrap();
        let cert = certify_derived_inequality(&pair, 4.0, 2.0, 100, 5);
        assert!(!cond.pass && !cert.holds());
        let mut from_cond: Vec<usize> = cond.violations.iter().map(|v| v.index).collect();
        let mut from_cert: Vec<usize> = cert.violations.iter().map(|v| v.index).collect();
        from_cond.sort();
        from_cert.sort();
        assert!(from_cert.iter().all(|i| from_cond.contains(i)));
    }

    #[test]
    fn self_map_holds_under_condition_i() {
        let pair = EquationPair::single(
            EquationSpec::new(
                HermitianMatrix::from_diagonal(&[1.0, 0.5]),
                Sign::Plus,
                vec![ComplexMatrix::identity(2).scale(0.2)],
                MapKind::ScaledIdentity { c: 1.0 },
            )
            .unwrap(),
        );
        let a = 3.0;
        let k1 = pair.auto_k1(a).unwrap();
        assert!(check_condition_i(&pair, a, k1).unwrap().pass);
        assert!(check_self_map(&pair, a, 100, 77).unwrap().pass);
    }

    #[test]
    fn reports_are_deterministic() {
        let pair = scalar_pair(MapKind::SpectralTanh { c: 0.1 });
        let a = check_conditions(&pair, 3.0, 0.1, 1e-3, 40, 9).unwrap();
        let b = check_conditions(&pair, 3.0, 0.1, 1e-3, 40, 9).unwrap();
        assert_eq!(a, b);
    }
}
