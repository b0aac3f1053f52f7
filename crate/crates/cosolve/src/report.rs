use cosolve_core::fixpoint::{GapReport, InequalityCertificate, UniquenessReport, Verdict};
use cosolve_core::linf::LinfPoint;
use cosolve_core::mateq::{ConditionReport, K1Report, SelfMapReport, SolveReport};
use cosolve_core::matrix::HermitianMatrix;
use serde::Serialize;

use crate::config::ProblemConfig;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Verify,
    Solve,
    ExampleLinf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violation,
    NonConvergence,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Pass => 0,
            Self::Violation => 2,
            Self::NonConvergence => 3,
        }
    }
}

/// Effective parameters after flag overrides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemSummary {
    pub n: usize,
    pub k: f64,
    pub k1: f64,
    pub k1_auto: bool,
    pub radius: f64,
    pub alpha: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinfIteration {
    pub start: LinfPoint,
    pub verdict: Verdict,
    pub steps: usize,
    pub limit: LinfPoint,
    pub gaps: Vec<f64>,
    pub residual_f: Option<f64>,
    pub residual_g: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinfReport {
    pub max_index: u32,
    pub fault_injected: bool,
    /// Slope of `φ₁` as an exact fraction.
    pub phi1_slope: String,
    pub certificate: InequalityCertificate<LinfPoint>,
    pub iteration: LinfIteration,
    pub uniqueness: UniquenessReport<LinfPoint>,
    pub limit_is_e0: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Command,
    pub status: Status,
    pub exit_code: i32,
    /// Human-readable list of failed checks.
    pub findings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<ProblemConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<ConditionReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub k1_checks: Vec<K1Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_map: Option<SelfMapReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<InequalityCertificate<HermitianMatrix>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub custom_certificate: Option<InequalityCertificate<HermitianMatrix>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_report: Option<GapReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniqueness: Option<UniquenessReport<HermitianMatrix>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linf: Option<LinfReport>,
    /// The only field allowed to differ between identical runs.
    pub wall_time_ms: f64,
}

impl RunReport {
    pub(crate) fn new(command: Command) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            command,
            status: Status::Pass,
            exit_code: 0,
            findings: Vec::new(),
            config: None,
            problem: None,
            conditions: None,
            k1_checks: Vec::new(),
            self_map: None,
            certificate: None,
            custom_certificate: None,
            solve: None,
            gap_report: None,
            uniqueness: None,
            linf: None,
            wall_time_ms: 0.0,
        }
    }

    pub(crate) fn finish(mut self, status: Status, started: std::time::Instant) -> Self {
        self.status = status;
        self.exit_code = status.exit_code();
        self.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
        self
    }

    /// Pretty JSON. `f64` values use the shortest representation that parses
    /// back to the same bits; non-finite values become `null`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
