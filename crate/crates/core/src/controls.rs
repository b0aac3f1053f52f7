//! Control functions for contractive inequalities.
//!
//! An altering distance function `φ: [0, ∞) → [0, ∞)` is continuous,
//! monotone increasing and vanishes exactly at zero. A [`PsiControl`] is the
//! two-argument control `ψ` bounding `φ(‖f(x) − g(y)‖) + φ₁(‖x − y‖)`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Tolerance used when comparing control values on a grid.
pub const COMPARISON_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ControlError {
    #[error("control argument {0} is outside [0, ∞)")]
    Domain(f64),
    #[error("control function produced non-finite value at {0}")]
    NonFinite(f64),
    #[error("unknown control function id `{0}`")]
    UnknownId(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// A named scalar function resolved from a [`ControlRegistry`].
#[derive(Clone)]
pub struct CustomScalar {
    pub id: String,
    pub eval: fn(f64) -> f64,
}

/// A named two-argument function resolved from a [`ControlRegistry`].
#[derive(Clone)]
pub struct CustomBinary {
    pub id: String,
    pub eval: fn(f64, f64) -> f64,
}

impl fmt::Debug for CustomScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("CustomScalar").field(&self.id).finish()
    }
}

impl fmt::Debug for CustomBinary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("CustomBinary").field(&self.id).finish()
    }
}

impl PartialEq for CustomScalar {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl PartialEq for CustomBinary {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

/// Candidate altering distance function.
#[derive(Debug, Clone, PartialEq)]
pub enum AlteringDistanceFn {
    /// `c t`
    Linear {
        slope: f64,
    },
    /// `c t` for `t <= cap_at`, `cap_value` beyond.
    CappedLinear {
        slope: f64,
        cap_at: f64,
        cap_value: f64,
    },
    /// `c t^p`
    Power {
        coefficient: f64,
        exponent: f64,
    },
    Custom(CustomScalar),
}

impl AlteringDistanceFn {
    pub const IDENTITY: Self = Self::Linear { slope: 1.0 };

    pub fn linear(slope: f64) -> Self {
        Self::Linear { slope }
    }

    pub fn evaluate(&self, t: f64) -> Result<f64, ControlError> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(ControlError::Domain(t));
        }
        let value = match self {
            Self::Linear { slope } => slope * t,
            Self::CappedLinear {
                slope,
                cap_at,
                cap_value,
            } => {
                if t <= *cap_at {
                    slope * t
                } else {
                    *cap_value
                }
            }
            Self::Power {
                coefficient,
                exponent,
            } => {
                if t == 0.0 {
                    0.0
                } else {
                    coefficient * libm::pow(t, *exponent)
                }
            }
            Self::Custom(custom) => (custom.eval)(t),
        };
        if !value.is_finite() {
            return Err(ControlError::NonFinite(t));
        }
        Ok(value)
    }

    /// Whether the kind is strictly increasing by construction (custom kinds are not assumed to be).
    pub fn is_strict_kind(&self) -> bool {
        match self {
            Self::Linear { slope } => *slope > 0.0,
            Self::Power {
                coefficient,
                exponent,
            } => *coefficient > 0.0 && *exponent > 0.0,
            Self::CappedLinear { .. } | Self::Custom(_) => false,
        }
    }
}

/// Two-argument control `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub enum PsiControl {
    /// `φ(max{α t₁, α t₂})`
    MaxAlphaPhi {
        alpha: f64,
        phi: AlteringDistanceFn,
    },
    /// `scale (t₁ + t₂)` when both arguments are at most `threshold`, `fallback` otherwise.
    SumScaled {
        scale: f64,
        threshold: f64,
        fallback: f64,
    },
    Custom(CustomBinary),
}

impl PsiControl {
    pub fn evaluate(&self, t1: f64, t2: f64) -> Result<f64, ControlError> {
        for t in [t1, t2] {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(ControlError::Domain(t));
            }
        }
        let value = match self {
            Self::MaxAlphaPhi { alpha, phi } => phi.evaluate((alpha * t1).max(alpha * t2))?,
            Self::SumScaled {
                scale,
                threshold,
                fallback,
            } => {
                if t1 <= *threshold && t2 <= *threshold {
                    scale * (t1 + t2)
                } else {
                    *fallback
                }
            }
            Self::Custom(custom) => (custom.eval)(t1, t2),
        };
        if !value.is_finite() {
            return Err(ControlError::NonFinite(t1.max(t2)));
        }
        Ok(value)
    }
}

/// The triple `(φ, ψ, φ₁)` of a contractive inequality
/// `φ(‖f(x) − g(y)‖) ≤ ψ(‖x − f(x)‖, ‖y − g(y)‖) − φ₁(‖x − y‖)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlBundle {
    pub phi: AlteringDistanceFn,
    pub phi1: AlteringDistanceFn,
    pub psi: PsiControl,
}

impl ControlBundle {
    /// `φ(t) = t`, `φ₁(t) = n α t`, `ψ = φ(max{n/(n+1) t₁, n/(n+1) t₂})` for dimension `n`.
    pub fn trace_norm_bundle(n: usize, alpha: f64) -> Self {
        let n = n as f64;
        Self {
            phi: AlteringDistanceFn::IDENTITY,
            phi1: AlteringDistanceFn::linear(n * alpha),
            psi: PsiControl::MaxAlphaPhi {
                alpha: n / (n + 1.0),
                phi: AlteringDistanceFn::IDENTITY,
            },
        }
    }
}

/// Points at which control properties are sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum SamplingGrid {
    /// `0, step, 2 step, …` up to `max`.
    Uniform { max: f64, step: f64 },
    /// `0` plus `points` log-uniform values on `[max · 10^-decades, max]`.
    LogUniform {
        max: f64,
        points: usize,
        decades: f64,
    },
}

impl SamplingGrid {
    pub fn log_uniform(max: f64) -> Self {
        Self::LogUniform {
            max,
            points: 512,
            decades: 12.0,
        }
    }

    /// Sorted, deduplicated sample points including 0.
    pub fn points(&self) -> Vec<f64> {
        let mut pts = Vec::new();
        pts.push(0.0);
        match *self {
            Self::Uniform { max, step } => {
                assert!(step > 0.0 && max >= 0.0, "uniform grid needs positive step");
                let count = libm::round(max / step) as usize;
                pts.extend((1..=count).map(|k| (k as f64 * step).min(max)));
            }
            Self::LogUniform {
                max,
                points,
                decades,
            } => {
                assert!(max > 0.0 && points > 0, "log grid needs positive extent");
                let lo = -decades;
                for k in 0..points {
                    let frac = if points == 1 {
                        1.0
                    } else {
                        k as f64 / (points - 1) as f64
                    };
                    pts.push(max * libm::pow(10.0, lo * (1.0 - frac)));
                }
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize),
    serde(rename_all = "snake_case")
)]
pub enum Monotonicity {
    Strict,
    /// Monotone with at least one flat step.
    NonDecreasingOnly,
    Violated,
}

/// `t < t'` with `φ(t) > φ(t') + 1e-12`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MonotonicityViolation {
    pub t: f64,
    pub t_later: f64,
    pub value: f64,
    pub value_later: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AdfReport {
    pub samples: usize,
    pub monotonicity: Monotonicity,
    pub monotonicity_violations: Vec<MonotonicityViolation>,
    /// First sampled plateau `(t, t')` with `φ(t) = φ(t')`.
    pub first_plateau: Option<(f64, f64)>,
    pub zero_at_zero: bool,
    /// Sampled `t > 0` where `φ(t) = 0`.
    pub zeros_off_origin: Vec<f64>,
    /// Largest jump `|φ(t_{k+1}) − φ(t_k)|` between neighbouring grid points.
    pub continuity_modulus: f64,
    /// Grid step at which that jump occurred.
    pub continuity_step: f64,
    pub evaluation_errors: Vec<f64>,
}

impl AdfReport {
    /// Monotone and zero exactly at zero on the grid. Plateaus are allowed.
    pub fn passes(&self) -> bool {
        self.monotonicity != Monotonicity::Violated
            && self.zero_at_zero
            && self.zeros_off_origin.is_empty()
            && self.evaluation_errors.is_empty()
    }
}

/// Samples monotonicity, zero-iff-zero and a continuity modulus of `phi` on `grid`.
pub fn verify_adf_properties(phi: &AlteringDistanceFn, grid: &SamplingGrid) -> AdfReport {
    let mut ts = Vec::new();
    let mut values = Vec::new();
    let mut evaluation_errors = Vec::new();
    for t in grid.points() {
        match phi.evaluate(t) {
            Ok(v) => {
                ts.push(t);
                values.push(v);
            }
            Err(_) => evaluation_errors.push(t),
        }
    }

    let mut violations = Vec::new();
    let mut first_plateau = None;
    let mut running_max: Option<(f64, f64)> = None;
    let mut modulus = 0.0f64;
    let mut modulus_step = 0.0;
    for k in 0..ts.len() {
        if let Some((t_max, v_max)) = running_max {
            if v_max > values[k] + COMPARISON_SLACK {
                violations.push(MonotonicityViolation {
                    t: t_max,
                    t_later: ts[k],
                    value: v_max,
                    value_later: values[k],
                });
            }
        }
        if running_max.is_none_or(|(_, v)| values[k] > v) {
            running_max = Some((ts[k], values[k]));
        }
        if k > 0 {
            let jump = (values[k] - values[k - 1]).abs();
            if jump > modulus {
                modulus = jump;
                modulus_step = ts[k] - ts[k - 1];
            }
            if first_plateau.is_none() && values[k] == values[k - 1] {
                first_plateau = Some((ts[k - 1], ts[k]));
            }
        }
    }

    let monotonicity = if !violations.is_empty() {
        Monotonicity::Violated
    } else if first_plateau.is_some() {
        Monotonicity::NonDecreasingOnly
    } else {
        Monotonicity::Strict
    };
    let zero_at_zero = ts.first() == Some(&0.0) && values[0] == 0.0;
    let zeros_off_origin = ts
        .iter()
        .zip(&values)
        .filter(|(&t, &v)| t > 0.0 && v == 0.0)
        .map(|(&t, _)| t)
        .collect();

    AdfReport {
        samples: ts.len(),
        monotonicity,
        monotonicity_violations: violations,
        first_plateau,
        zero_at_zero,
        zeros_off_origin,
        continuity_modulus: modulus,
        continuity_step: modulus_step,
        evaluation_errors,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DominanceViolation {
    pub t1: f64,
    pub t2: f64,
    pub psi: f64,
    pub phi_t1: f64,
    pub phi_t2: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DominanceReport {
    pub checked: usize,
    pub psi_at_origin: f64,
    pub violations: Vec<DominanceViolation>,
}

impl DominanceReport {
    pub fn passes(&self) -> bool {
        self.psi_at_origin == 0.0 && self.violations.is_empty()
    }
}

/// Checks `ψ(t₁, t₂) < φ(t₁)` or `ψ(t₁, t₂) < φ(t₂)` on every grid pair other than the origin.
pub fn verify_psi_dominance(bundle: &ControlBundle, grid: &SamplingGrid) -> DominanceReport {
    let pts = grid.points();
    let phi: Vec<f64> = pts
        .iter()
        .map(|&t| bundle.phi.evaluate(t).unwrap_or(f64::NAN))
        .collect();
    let mut violations = Vec::new();
    let mut checked = 0;
    for (i, &t1) in pts.iter().enumerate() {
        for (j, &t2) in pts.iter().enumerate() {
            if t1 == 0.0 && t2 == 0.0 {
                continue;
            }
            checked += 1;
            let psi = bundle.psi.evaluate(t1, t2).unwrap_or(f64::NAN);
            // NaN comparisons are false, so evaluation failures count as violations.
            if !(psi < phi[i] || psi < phi[j]) {
                violations.push(DominanceViolation {
                    t1,
                    t2,
                    psi,
                    phi_t1: phi[i],
                    phi_t2: phi[j],
                });
            }
        }
    }
    DominanceReport {
        checked,
        psi_at_origin: bundle.psi.evaluate(0.0, 0.0).unwrap_or(f64::NAN),
        violations,
    }
}

/// Bound on `ψ` required when `f` and `g` are not assumed continuous.
///
/// The condition is checked under two readings: `ψ(t₁, t₂) ≤ φ(t₁)` as
/// literally printed, and the symmetric `ψ(t₁, t₂) ≤ min{φ(t₁), φ(t₂)}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RelaxedBoundReport {
    pub checked: usize,
    pub literal_violations: Vec<DominanceViolation>,
    pub symmetric_violations: Vec<DominanceViolation>,
}

pub fn verify_psi_relaxed_bound(bundle: &ControlBundle, grid: &SamplingGrid) -> RelaxedBoundReport {
    let pts = grid.points();
    let phi: Vec<f64> = pts
        .iter()
        .map(|&t| bundle.phi.evaluate(t).unwrap_or(f64::NAN))
        .collect();
    let mut literal = Vec::new();
    let mut symmetric = Vec::new();
    for (i, &t1) in pts.iter().enumerate() {
        for (j, &t2) in pts.iter().enumerate() {
            let psi = bundle.psi.evaluate(t1, t2).unwrap_or(f64::NAN);
            let v = DominanceViolation {
                t1,
                t2,
                psi,
                phi_t1: phi[i],
                phi_t2: phi[j],
            };
            if !(psi <= phi[i] + COMPARISON_SLACK) {
                literal.push(v);
            }
            if !(psi <= phi[i].min(phi[j]) + COMPARISON_SLACK) {
                symmetric.push(v);
            }
        }
    }
    RelaxedBoundReport {
        checked: pts.len() * pts.len(),
        literal_violations: literal,
        symmetric_violations: symmetric,
    }
}

/// Named built-in control functions that configs may reference by id.
#[derive(Debug, Clone)]
pub struct ControlRegistry {
    scalars: Vec<CustomScalar>,
    binaries: Vec<CustomBinary>,
}

impl Default for ControlRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl ControlRegistry {
    pub fn empty() -> Self {
        Self {
            scalars: Vec::new(),
            binaries: Vec::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut registry = Self::empty();
        registry.register_scalar("sqrt", libm::sqrt);
        registry.register_scalar("log1p", libm::log1p);
        registry.register_scalar("tanh", libm::tanh);
        registry.register_scalar("t_over_one_plus_t", |t| t / (1.0 + t));
        registry.register_binary("half_max", |a, b| 0.5 * a.max(b));
        registry.register_binary("sum", |a, b| a + b);
        registry
    }

    /// Registers (or replaces) a scalar function.
    pub fn register_scalar(&mut self, id: &str, eval: fn(f64) -> f64) {
        self.scalars.retain(|c| c.id != id);
        self.scalars.push(CustomScalar {
            id: id.into(),
            eval,
        });
    }

    pub fn register_binary(&mut self, id: &str, eval: fn(f64, f64) -> f64) {
        self.binaries.retain(|c| c.id != id);
        self.binaries.push(CustomBinary {
            id: id.into(),
            eval,
        });
    }

    pub fn scalar(&self, id: &str) -> Result<AlteringDistanceFn, ControlError> {
        self.scalars
            .iter()
            .find(|c| c.id == id)
            .map(|c| AlteringDistanceFn::Custom(c.clone()))
            .ok_or_else(|| ControlError::UnknownId(id.into()))
    }

    pub fn binary(&self, id: &str) -> Result<PsiControl, ControlError> {
        self.binaries
            .iter()
            .find(|c| c.id == id)
            .map(|c| PsiControl::Custom(c.clone()))
            .ok_or_else(|| ControlError::UnknownId(id.into()))
    }

    pub fn scalar_ids(&self) -> impl Iterator<Item = &str> {
        self.scalars.iter().map(|c| c.id.as_str())
    }

    pub fn binary_ids(&self) -> impl Iterator<Item = &str> {
        self.binaries.iter().map(|c| c.id.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use approx::assert_abs_diff_eq;

    fn example_phi() -> AlteringDistanceFn {
        AlteringDistanceFn::CappedLinear {
            slope: 0.2,
            cap_at: 0.1,
            cap_value: 0.02,
        }
    }

    fn example_bundle() -> ControlBundle {
        ControlBundle {
            phi: example_phi(),
            phi1: AlteringDistanceFn::linear(1.0 / 160.0),
            psi: PsiControl::SumScaled {
                scale: 1.0 / 20.0,
                threshold: 0.1,
                fallback: 0.01,
            },
        }
    }

    #[test]
    fn evaluate_phi_examples() {
        let n = 3.0;
        let alpha = 0.25;
        let phi1 = AlteringDistanceFn::linear(n * alpha);
        assert_eq!(phi1.evaluate(2.0).unwrap(), n * alpha * 2.0);
        assert_abs_diff_eq!(example_phi().evaluate(0.05).unwrap(), 0.01, epsilon = 1e-17);
        assert_eq!(example_phi().evaluate(0.5).unwrap(), 0.02);
        for phi in [
            phi1,
            example_phi(),
            AlteringDistanceFn::Power {
                coefficient: 2.0,
                exponent: 0.5,
            },
            ControlRegistry::builtin().scalar("sqrt").unwrap(),
        ] {
            assert_eq!(phi.evaluate(0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn negative_arguments_are_domain_errors() {
        assert_eq!(
            AlteringDistanceFn::IDENTITY.evaluate(-1.0),
            Err(ControlError::Domain(-1.0))
        );
        assert!(matches!(
            example_bundle().psi.evaluate(0.0, -0.5),
            Err(ControlError::Domain(_))
        ));
        assert!(AlteringDistanceFn::IDENTITY.evaluate(f64::NAN).is_err());
    }

    #[test]
    fn evaluate_psi_examples() {
        let t = libm::ldexp(1.0, -7);
        assert_abs_diff_eq!(
            example_bundle().psi.evaluate(0.0, t).unwrap(),
            t / 20.0,
            epsilon = 1e-20
        );
        assert_eq!(example_bundle().psi.evaluate(0.0, 0.0).unwrap(), 0.0);
        let psi = PsiControl::MaxAlphaPhi {
            alpha: 0.5,
            phi: AlteringDistanceFn::linear(1.0),
        };
        assert_eq!(psi.evaluate(2.0, 3.0).unwrap(), 1.5);
        assert_eq!(psi.evaluate(0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn linear_passes_adf_check() {
        let report = verify_adf_properties(
            &AlteringDistanceFn::linear(1.0),
            &SamplingGrid::Uniform {
                max: 1.0,
                step: 0.01,
            },
        );
        assert_eq!(report.samples, 101);
        assert!(report.passes());
        assert_eq!(report.monotonicity, Monotonicity::Strict);
        assert!(report.continuity_modulus <= 0.0100001);
    }

    #[test]
    fn decreasing_map_is_reported() {
        let mut registry = ControlRegistry::empty();
        registry.register_scalar("one_minus_t", |t| 1.0 - t);
        let phi = registry.scalar("one_minus_t").unwrap();
        let report = verify_adf_properties(
            &phi,
            &SamplingGrid::Uniform {
                max: 1.0,
                step: 0.01,
            },
        );
        assert_eq!(report.monotonicity, Monotonicity::Violated);
        assert_eq!(report.monotonicity_violations.len(), 100);
        assert!(!report.zero_at_zero);
        assert!(!report.passes());
    }

    #[test]
    fn capped_example_phi_is_non_decreasing_only() {
        let report = verify_adf_properties(
            &example_phi(),
            &SamplingGrid::Uniform {
                max: 0.2,
                step: 0.01,
            },
        );
        assert_eq!(report.monotonicity, Monotonicity::NonDecreasingOnly);
        let (t, t_later) = report.first_plateau.unwrap();
        assert!(t > 0.1 - 1e-9 && t_later > 0.1);
        assert!(report.passes());
    }

    #[test]
    fn example_bundle_dominance_holds() {
        let report = verify_psi_dominance(
            &example_bundle(),
            &SamplingGrid::Uniform {
                max: 0.1,
                step: 0.001,
            },
        );
        assert_eq!(report.checked, 101 * 101 - 1);
        assert!(
            report.passes(),
            "{:?}",
            &report.violations[..3.min(report.violations.len())]
        );
        let report = verify_psi_dominance(&example_bundle(), &SamplingGrid::log_uniform(0.1));
        assert!(report.passes());
    }

    #[test]
    fn sum_psi_violates_dominance_everywhere() {
        let bundle = ControlBundle {
            phi: AlteringDistanceFn::linear(1.0),
            phi1: AlteringDistanceFn::linear(1.0),
            psi: ControlRegistry::builtin().binary("sum").unwrap(),
        };
        let grid = SamplingGrid::Uniform {
            max: 1.0,
            step: 0.1,
        };
        let report = verify_psi_dominance(&bundle, &grid);
        assert_eq!(report.violations.len(), report.checked);
    }

    #[test]
    fn max_alpha_phi_dominance() {
        let bundle = ControlBundle {
            phi: AlteringDistanceFn::Power {
                coefficient: 1.0,
                exponent: 2.0,
            },
            phi1: AlteringDistanceFn::linear(1.0),
            psi: PsiControl::MaxAlphaPhi {
                alpha: 0.9,
                phi: AlteringDistanceFn::Power {
                    coefficient: 1.0,
                    exponent: 2.0,
                },
            },
        };
        assert!(verify_psi_dominance(&bundle, &SamplingGrid::log_uniform(10.0)).passes());
    }

    #[test]
    fn relaxed_bound_readings_differ() {
        // ψ = φ(t₂) meets the literal reading only where φ(t₂) ≤ φ(t₁).
        let mut registry = ControlRegistry::empty();
        registry.register_binary("second", |_, b| b);
        let bundle = ControlBundle {
            phi: AlteringDistanceFn::linear(1.0),
            phi1: AlteringDistanceFn::linear(1.0),
            psi: registry.binary("second").unwrap(),
        };
        let report = verify_psi_relaxed_bound(
            &bundle,
            &SamplingGrid::Uniform {
                max: 1.0,
                step: 0.5,
            },
        );
        assert_eq!(report.checked, 9);
        assert_eq!(report.literal_violations.len(), 3);
        assert_eq!(report.symmetric_violations.len(), 3);

        let half = ControlBundle {
            psi: PsiControl::MaxAlphaPhi {
                alpha: 0.5,
                phi: AlteringDistanceFn::linear(1.0),
            },
            ..bundle
        };
        let report = verify_psi_relaxed_bound(
            &half,
            &SamplingGrid::Uniform {
                max: 1.0,
                step: 0.5,
            },
        );
        // (0.5, 1): ψ = 0.5 ≤ φ(0.5); (0, t): ψ = t/2 > 0 = φ(0).
        assert_eq!(report.literal_violations.len(), 2);
        assert_eq!(report.symmetric_violations.len(), 4);
    }

    #[test]
    fn registry_lookup() {
        let registry = ControlRegistry::builtin();
        assert!(registry.scalar_ids().any(|id| id == "log1p"));
        assert_eq!(
            registry.scalar("nope"),
            Err(ControlError::UnknownId("nope".to_string()))
        );
        assert!(registry.binary("half_max").is_ok());
    }

    #[test]
    fn log_grid_shape() {
        let pts = SamplingGrid::log_uniform(2.0).points();
        assert_eq!(pts.len(), 513);
        assert_eq!(pts[0], 0.0);
        assert_eq!(*pts.last().unwrap(), 2.0);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }
}
