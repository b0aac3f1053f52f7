//! Exact model of a finite-support subset of `ℓ∞`.
//!
//! The set is `C = {e₀, e₇, e₈, …}` with `e₀ = 0` and `eᵢ` the sequence whose
//! only non-zero term is `2⁻ⁱ` at position `i`. The maps are `f ≡ e₀` and
//! `g(e₀) = e₀`, `g(eᵢ) = eᵢ₊₅`. Their unique common fixed point is `e₀`.
//!
//! All inequality checks here are carried out in exact rational arithmetic.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::controls::{AlteringDistanceFn, ControlBundle, PsiControl};
use crate::fixpoint::{
    alternate_iterate, uniqueness_probe, DomainSampler, InequalityCertificate, IterationTrace,
    NormedPointAdapter, UniquenessReport, Violation,
};

/// Smallest basis index in `C`.
pub const FIRST_INDEX: u32 = 7;
/// Index shift applied by `g`.
pub const G_SHIFT: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize),
    serde(rename_all = "snake_case")
)]
pub enum LinfPoint {
    Zero,
    Basis(u32),
}

impl LinfPoint {
    /// `eᵢ`, or `None` when `i < 7`.
    pub fn basis(i: u32) -> Option<Self> {
        (i >= FIRST_INDEX).then_some(Self::Basis(i))
    }

    /// `‖x‖∞`.
    pub fn norm(&self) -> Dyadic {
        match *self {
            Self::Zero => Dyadic::ZERO,
            Self::Basis(i) => Dyadic::pow2_neg(i),
        }
    }
}

impl fmt::Display for LinfPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => f.write_str("e0"),
            Self::Basis(i) => write!(f, "e{i}"),
        }
    }
}

/// A non-negative dyadic rational `numerator / 2^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Dyadic {
    pub numerator: u64,
    pub exponent: u32,
}

impl Dyadic {
    pub const ZERO: Self = Self {
        numerator: 0,
        exponent: 0,
    };

    /// `2⁻ᵏ`.
    pub fn pow2_neg(k: u32) -> Self {
        Self {
            numerator: 1,
            exponent: k,
        }
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator),
            BigInt::one() << self.exponent as usize,
        )
    }

    pub fn to_f64(self) -> f64 {
        libm::ldexp(self.numerator as f64, -(self.exponent as i32))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

/// Sup-norm distance. Distinct basis points have disjoint supports.
pub fn linf_distance(x: LinfPoint, y: LinfPoint) -> Dyadic {
    match (x, y) {
        _ if x == y => Dyadic::ZERO,
        (LinfPoint::Zero, p) | (p, LinfPoint::Zero) => p.norm(),
        (LinfPoint::Basis(i), LinfPoint::Basis(j)) => Dyadic::pow2_neg(i.min(j)),
    }
}

/// `f(x) = e₀`.
pub fn example_f(_: LinfPoint) -> LinfPoint {
    LinfPoint::Zero
}

/// `g(e₀) = e₀`, `g(eᵢ) = eᵢ₊₅`.
pub fn example_g(x: LinfPoint) -> LinfPoint {
    match x {
        LinfPoint::Zero => LinfPoint::Zero,
        LinfPoint::Basis(i) => LinfPoint::Basis(i + G_SHIFT),
    }
}

pub type PointMap = fn(LinfPoint) -> LinfPoint;

pub fn example_maps() -> (PointMap, PointMap) {
    (example_f, example_g)
}

/// Floating-point form of the controls:
/// `φ(t) = 2t/10` up to `1/10` then `2/100`; `φ₁(t) = t/160`;
/// `ψ(t₁, t₂) = (t₁ + t₂)/20` when both are at most `1/10`, else `1/100`.
pub fn example_bundle() -> ControlBundle {
    ControlBundle {
        phi: AlteringDistanceFn::CappedLinear {
            slope: 0.2,
            cap_at: 0.1,
            cap_value: 0.02,
        },
        phi1: AlteringDistanceFn::linear(1.0 / 160.0),
        psi: PsiControl::SumScaled {
            scale: 1.0 / 20.0,
            threshold: 0.1,
            fallback: 0.01,
        },
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact evaluation of the example controls, with a configurable `φ₁` slope.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactExampleControls {
    pub phi1_slope: BigRational,
}

impl Default for ExactExampleControls {
    fn default() -> Self {
        Self {
            phi1_slope: ratio(1, 160),
        }
    }
}

impl ExactExampleControls {
    /// Controls with `φ₁(t) = t/8`, for which the inequality fails.
    pub fn faulty() -> Self {
        Self {
            phi1_slope: ratio(1, 8),
        }
    }

    pub fn phi(&self, t: &BigRational) -> BigRational {
        if *t <= ratio(1, 10) {
            t * ratio(2, 10)
        } else {
            ratio(2, 100)
        }
    }

    pub fn phi1(&self, t: &BigRational) -> BigRational {
        t * &self.phi1_slope
    }

    pub fn psi(&self, t1: &BigRational, t2: &BigRational) -> BigRational {
        let tenth = ratio(1, 10);
        if *t1 <= tenth && *t2 <= tenth {
            (t1 + t2) / BigInt::from(20)
        } else {
            ratio(1, 100)
        }
    }
}

/// Exact sides of the inequality for one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSides {
    /// `φ(‖f(x) − g(y)‖)`
    pub phi: BigRational,
    /// `φ₁(‖x − y‖)`
    pub phi1: BigRational,
    /// `ψ(‖x − f(x)‖, ‖y − g(y)‖)`
    pub psi: BigRational,
}

impl ExactSides {
    /// `ψ − φ₁ − φ`.
    pub fn margin(&self) -> BigRational {
        &self.psi - &self.phi1 - &self.phi
    }

    pub fn holds(&self) -> bool {
        &self.phi + &self.phi1 <= self.psi
    }
}

pub fn exact_sides(controls: &ExactExampleControls, x: LinfPoint, y: LinfPoint) -> ExactSides {
    let fx = example_f(x);
    let gy = example_g(y);
    ExactSides {
        phi: controls.phi(&linf_distance(fx, gy).to_rational()),
        phi1: controls.phi1(&linf_distance(x, y).to_rational()),
        psi: controls.psi(
            &linf_distance(x, fx).to_rational(),
            &linf_distance(y, gy).to_rational(),
        ),
    }
}

/// `{e₀, e₇, …, e_max_index}`.
pub fn truncated_domain(max_index: u32) -> Vec<LinfPoint> {
    core::iter::once(LinfPoint::Zero)
        .chain((FIRST_INDEX..=max_index).map(LinfPoint::Basis))
        .collect()
}

/// Checks the inequality exactly on every ordered pair of the truncated domain.
pub fn exhaustive_case_check(max_index: u32) -> InequalityCertificate<LinfPoint> {
    exhaustive_case_check_with(max_index, &ExactExampleControls::default())
}

pub fn exhaustive_case_check_with(
    max_index: u32,
    controls: &ExactExampleControls,
) -> InequalityCertificate<LinfPoint> {
    assert!(max_index >= 8, "max_index must be at least 8");
    let domain = truncated_domain(max_index);
    let mut worst: Option<BigRational> = None;
    let mut violations = Vec::new();
    let mut index = 0;
    for &x in &domain {
        for &y in &domain {
            let sides = exact_sides(controls, x, y);
            let margin = sides.margin();
            if margin < BigRational::zero() {
                violations.push((
                    margin.clone(),
                    Violation {
                        index,
                        x,
                        y,
                        lhs: to_f64(&sides.phi),
                        rhs: to_f64(&(&sides.psi - &sides.phi1)),
                        margin: to_f64(&margin),
                    },
                ));
            }
            if worst.as_ref().is_none_or(|w| margin < *w) {
                worst = Some(margin);
            }
            index += 1;
        }
    }
    violations.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.index.cmp(&b.1.index)));
    InequalityCertificate {
        pairs_checked: index,
        exhaustive: true,
        seed: 0,
        worst_margin: worst.as_ref().map_or(f64::INFINITY, to_f64),
        violations: violations.into_iter().map(|(_, v)| v).collect(),
        evaluation_failures: 0,
    }
}

fn to_f64(r: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Sup-norm adapter for the fixpoint engine. Distances `2⁻ⁱ` are exact in `f64`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinfSpace;

impl NormedPointAdapter for LinfSpace {
    type Point = LinfPoint;

    fn distance(&self, x: &LinfPoint, y: &LinfPoint) -> f64 {
        linf_distance(*x, *y).to_f64()
    }
}

/// Finite truncation of `C`, enumerated exhaustively.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedDomain {
    pub max_index: u32,
}

impl DomainSampler for TruncatedDomain {
    type Point = LinfPoint;

    fn sample(&self, rng: &mut ChaCha8Rng) -> LinfPoint {
        let k = rng.random_range(FIRST_INDEX - 1..=self.max_index);
        if k < FIRST_INDEX {
            LinfPoint::Zero
        } else {
            LinfPoint::Basis(k)
        }
    }

    fn enumerate(&self) -> Option<Vec<LinfPoint>> {
        Some(truncated_domain(self.max_index))
    }
}

pub fn iterate_from(start: LinfPoint, tol: f64, max_iter: usize) -> IterationTrace<LinfPoint> {
    alternate_iterate(
        |x: &LinfPoint| Some(example_f(*x)),
        |x: &LinfPoint| Some(example_g(*x)),
        start,
        &LinfSpace,
        tol,
        max_iter,
    )
}

pub fn probe_uniqueness(
    starts: &[LinfPoint],
    tol: f64,
    max_iter: usize,
) -> UniquenessReport<LinfPoint> {
    uniqueness_probe(
        |x: &LinfPoint| Some(example_f(*x)),
        |x: &LinfPoint| Some(example_g(*x)),
        starts,
        &LinfSpace,
        tol,
        max_iter,
    )
}
