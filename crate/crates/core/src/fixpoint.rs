//! Alternating iteration toward a common fixed point of two self-maps.
//!
//! Starting from `x₀` the engine builds `x₂ₖ₊₁ = f(x₂ₖ)` and
//! `x₂ₖ₊₂ = g(x₂ₖ₊₁)`, tracks the gaps `sₙ = ‖xₙ − xₙ₊₁‖` and stops once the
//! last gap and both residuals `‖z − f(z)‖`, `‖z − g(z)‖` are within
//! tolerance. The same engine serves maps without a continuity guarantee;
//! there the final residuals are the only convergence evidence.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::controls::ControlBundle;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;
/// Slack allowed when checking that gaps do not increase.
pub const GAP_SLACK: f64 = 1e-12;

/// Norm-induced distance on a point type.
pub trait NormedPointAdapter {
    type Point: Clone;

    /// `‖x − y‖`.
    fn distance(&self, x: &Self::Point, y: &Self::Point) -> f64;

    /// False when any coordinate of `x` is NaN or infinite.
    fn is_finite(&self, _x: &Self::Point) -> bool {
        true
    }
}

/// Source of points in the closed set the maps act on.
pub trait DomainSampler {
    type Point;

    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Point;

    /// Every point of the domain, when it is finite.
    fn enumerate(&self) -> Option<Vec<Self::Point>> {
        None
    }
}

/// A scalar line with `|x − y|`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RealLine;

impl NormedPointAdapter for RealLine {
    type Point = f64;

    fn distance(&self, x: &f64, y: &f64) -> f64 {
        (x - y).abs()
    }

    fn is_finite(&self, x: &f64) -> bool {
        x.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize),
    serde(rename_all = "snake_case")
)]
pub enum Verdict {
    Converged,
    MaxIterations,
    /// The map (or a distance) produced a non-finite value at iterate `index`.
    DivergedNonFinite {
        index: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace<P> {
    /// `x₀, x₁, …`; odd indices come from `f`, even indices `≥ 2` from `g`.
    pub iterates: Vec<P>,
    /// `gaps[n] = ‖xₙ − xₙ₊₁‖`.
    pub gaps: Vec<f64>,
    /// `‖z − f(z)‖` at the final iterate `z`, absent after divergence.
    pub residual_f: Option<f64>,
    pub residual_g: Option<f64>,
    pub verdict: Verdict,
}

impl<P> IterationTrace<P> {
    /// Number of map applications.
    pub fn steps(&self) -> usize {
        self.gaps.len()
    }

    pub fn last(&self) -> &P {
        self.iterates.last().expect("trace always holds x0")
    }

    pub fn converged(&self) -> bool {
        self.verdict == Verdict::Converged
    }
}

/// Runs the alternating iteration.
///
/// Maps return `None` when they cannot produce a point (for example a
/// failed inner computation); this is treated like a non-finite result.
pub fn alternate_iterate<A, F, G>(
    f: F,
    g: G,
    x0: A::Point,
    adapter: &A,
    tol: f64,
    max_iter: usize,
) -> IterationTrace<A::Point>
where
    A: NormedPointAdapter,
    F: Fn(&A::Point) -> Option<A::Point>,
    G: Fn(&A::Point) -> Option<A::Point>,
{
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(max_iter >= 2, "max_iter must be at least 2");

    let mut iterates = alloc::vec![x0];
    let mut gaps = Vec::new();

    for n in 0..max_iter {
        let current = &iterates[n];
        let next = if n % 2 == 0 { f(current) } else { g(current) };
        let Some(next) = next.filter(|p| adapter.is_finite(p)) else {
            return diverged(iterates, gaps, n + 1);
        };
        let gap = adapter.distance(current, &next);
        if !gap.is_finite() {
            return diverged(iterates, gaps, n + 1);
        }
        iterates.push(next);
        gaps.push(gap);

        if gap <= tol {
            let (rf, rg) = match residuals(&f, &g, adapter, &iterates[n + 1]) {
                Some(r) => r,
                None => return diverged(iterates, gaps, n + 2),
            };
            if rf <= tol && rg <= tol {
                return IterationTrace {
                    iterates,
                    gaps,
                    residual_f: Some(rf),
                    residual_g: Some(rg),
                    verdict: Verdict::Converged,
                };
            }
        }
    }

    let (residual_f, residual_g) = match residuals(&f, &g, adapter, iterates.last().unwrap()) {
        Some((rf, rg)) => (Some(rf), Some(rg)),
        None => (None, None),
    };
    IterationTrace {
        iterates,
        gaps,
        residual_f,
        residual_g,
        verdict: Verdict::MaxIterations,
    }
}

fn residuals<A, F, G>(f: &F, g: &G, adapter: &A, z: &A::Point) -> Option<(f64, f64)>
where
    A: NormedPointAdapter,
    F: Fn(&A::Point) -> Option<A::Point>,
    G: Fn(&A::Point) -> Option<A::Point>,
{
    let fz = f(z).filter(|p| adapter.is_finite(p))?;
    let gz = g(z).filter(|p| adapter.is_finite(p))?;
    let rf = adapter.distance(z, &fz);
    let rg = adapter.distance(z, &gz);
    (rf.is_finite() && rg.is_finite()).then_some((rf, rg))
}

fn diverged<P>(iterates: Vec<P>, gaps: Vec<f64>, index: usize) -> IterationTrace<P> {
    IterationTrace {
        iterates,
        gaps,
        residual_f: None,
        residual_g: None,
        verdict: Verdict::DivergedNonFinite { index },
    }
}

/// One sampled pair where the contractive inequality fails.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Violation<P> {
    /// Sample number, or the pair's position in the enumeration.
    pub index: usize,
    pub x: P,
    pub y: P,
    /// `φ(‖f(x) − g(y)‖)`
    pub lhs: f64,
    /// `ψ(‖x − f(x)‖, ‖y − g(y)‖) − φ₁(‖x − y‖)`
    pub rhs: f64,
    pub margin: f64,
}

/// Sampled evidence for `φ(‖f(x) − g(y)‖) ≤ ψ(‖x − f(x)‖, ‖y − g(y)‖) − φ₁(‖x − y‖)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct InequalityCertificate<P> {
    pub pairs_checked: usize,
    /// True when every pair of a finite domain was checked.
    pub exhaustive: bool,
    pub seed: u64,
    /// `min (rhs − lhs)` over the checked pairs.
    pub worst_margin: f64,
    /// Sorted by margin, then by index.
    pub violations: Vec<Violation<P>>,
    /// Pairs skipped because a map or control could not be evaluated.
    pub evaluation_failures: usize,
}

impl<P> InequalityCertificate<P> {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.evaluation_failures == 0
    }

    pub fn map_points<Q>(self, mut op: impl FnMut(P) -> Q) -> InequalityCertificate<Q> {
        InequalityCertificate {
            pairs_checked: self.pairs_checked,
            exhaustive: self.exhaustive,
            seed: self.seed,
            worst_margin: self.worst_margin,
            violations: self
                .violations
                .into_iter()
                .map(|v| Violation {
                    index: v.index,
                    x: op(v.x),
                    y: op(v.y),
                    lhs: v.lhs,
                    rhs: v.rhs,
                    margin: v.margin,
                })
                .collect(),
            evaluation_failures: self.evaluation_failures,
        }
    }
}

/// Evaluates the contractive inequality on `pairs` seeded random pairs, or on
/// every ordered pair when the sampler enumerates a finite domain.
#[allow(clippy::too_many_arguments)]
pub fn certify_contractive_inequality<A, S, F, G>(
    f: F,
    g: G,
    bundle: &ControlBundle,
    sampler: &S,
    adapter: &A,
    pairs: usize,
    seed: u64,
) -> InequalityCertificate<A::Point>
where
    A: NormedPointAdapter,
    S: DomainSampler<Point = A::Point>,
    F: Fn(&A::Point) -> Option<A::Point>,
    G: Fn(&A::Point) -> Option<A::Point>,
{
    assert!(pairs >= 1, "at least one pair is required");

    let mut worst = f64::INFINITY;
    let mut violations = Vec::new();
    let mut failures = 0;
    let mut checked = 0;

    let mut check = |index: usize, x: &A::Point, y: &A::Point| {
        checked += 1;
        match inequality_sides(&f, &g, bundle, adapter, x, y) {
            Some((lhs, rhs)) => {
                let margin = rhs - lhs;
                worst = worst.min(margin);
                if margin < 0.0 {
                    violations.push(Violation {
                        index,
                        x: x.clone(),
                        y: y.clone(),
                        lhs,
                        rhs,
                        margin,
                    });
                }
            }
            None => failures += 1,
        }
    };

    let exhaustive = match sampler.enumerate() {
        Some(points) => {
            let mut index = 0;
            for x in &points {
                for y in &points {
                    check(index, x, y);
                    index += 1;
                }
            }
            true
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for index in 0..pairs {
                let x = sampler.sample(&mut rng);
                let y = sampler.sample(&mut rng);
                check(index, &x, &y);
            }
            false
        }
    };

    violations.sort_by(|a, b| a.margin.total_cmp(&b.margin).then(a.index.cmp(&b.index)));
    InequalityCertificate {
        pairs_checked: checked,
        exhaustive,
        seed,
        worst_margin: worst,
        violations,
        evaluation_failures: failures,
    }
}

fn inequality_sides<A, F, G>(
    f: &F,
    g: &G,
    bundle: &ControlBundle,
    adapter: &A,
    x: &A::Point,
    y: &A::Point,
) -> Option<(f64, f64)>
where
    A: NormedPointAdapter,
    F: Fn(&A::Point) -> Option<A::Point>,
    G: Fn(&A::Point) -> Option<A::Point>,
{
    let fx = f(x)?;
    let gy = g(y)?;
    let lhs = bundle.phi.evaluate(adapter.distance(&fx, &gy)).ok()?;
    let psi = bundle
        .psi
        .evaluate(adapter.distance(x, &fx), adapter.distance(y, &gy))
        .ok()?;
    let phi1 = bundle.phi1.evaluate(adapter.distance(x, y)).ok()?;
    Some((lhs, psi - phi1))
}

/// `gaps[index] > gaps[index − 1] + 1e-12`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GapIncrease {
    pub index: usize,
    pub previous: f64,
    pub current: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GapReport {
    pub gaps_checked: usize,
    pub increases: Vec<GapIncrease>,
}

impl GapReport {
    pub fn is_monotone(&self) -> bool {
        self.increases.is_empty()
    }
}

pub fn gap_monotonicity_check<P>(trace: &IterationTrace<P>) -> GapReport {
    gap_monotonicity(&trace.gaps)
}

/// Lists every position where the gap sequence increases.
pub fn gap_monotonicity(gaps: &[f64]) -> GapReport {
    let increases = gaps
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] > w[0] + GAP_SLACK)
        .map(|(k, w)| GapIncrease {
            index: k + 1,
            previous: w[0],
            current: w[1],
        })
        .collect();
    GapReport {
        gaps_checked: gaps.len(),
        increases,
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ProbeRun<P> {
    pub start: usize,
    pub verdict: Verdict,
    pub steps: usize,
    pub limit: P,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LimitDistance {
    pub first: usize,
    pub second: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct UniquenessReport<P> {
    pub runs: Vec<ProbeRun<P>>,
    /// Distances between limits of converged runs.
    pub distances: Vec<LimitDistance>,
    /// Pairs whose limits are more than `10 tol` apart.
    pub flagged: Vec<LimitDistance>,
}

impl<P> UniquenessReport<P> {
    pub fn all_converged(&self) -> bool {
        self.runs.iter().all(|r| r.verdict == Verdict::Converged)
    }

    pub fn unique(&self) -> bool {
        self.all_converged() && self.flagged.is_empty()
    }
}

/// Runs the iteration from every start and compares the converged limits.
pub fn uniqueness_probe<A, F, G>(
    f: F,
    g: G,
    starts: &[A::Point],
    adapter: &A,
    tol: f64,
    max_iter: usize,
) -> UniquenessReport<A::Point>
where
    A: NormedPointAdapter,
    F: Fn(&A::Point) -> Option<A::Point>,
    G: Fn(&A::Point) -> Option<A::Point>,
{
    assert!(
        starts.len() >= 2,
        "uniqueness probe needs at least two starts"
    );
    let runs: Vec<ProbeRun<A::Point>> = starts
        .iter()
        .enumerate()
        .map(|(start, x0)| {
            let trace = alternate_iterate(&f, &g, x0.clone(), adapter, tol, max_iter);
            ProbeRun {
                start,
                verdict: trace.verdict,
                steps: trace.steps(),
                limit: trace.last().clone(),
            }
        })
        .collect();

    let mut distances = Vec::new();
    for (i, a) in runs.iter().enumerate() {
        for b in &runs[i + 1..] {
            if a.verdict == Verdict::Converged && b.verdict == Verdict::Converged {
                distances.push(LimitDistance {
                    first: a.start,
                    second: b.start,
                    distance: adapter.distance(&a.limit, &b.limit),
                });
            }
        }
    }
    let flagged = distances
        .iter()
        .copied()
        .filter(|d| !(d.distance <= 10.0 * tol))
        .collect();
    UniquenessReport {
        runs,
        distances,
        flagged,
    }
}
