use std::time::Instant;

use cosolve_core::fixpoint::{gap_monotonicity, Verdict};
use cosolve_core::linf::{
    exhaustive_case_check_with, iterate_from, probe_uniqueness as linf_uniqueness,
    truncated_domain, ExactExampleControls, LinfPoint, FIRST_INDEX,
};
use cosolve_core::mateq::{
    certify_derived_inequality, certify_with_bundle, check_conditions, check_self_map,
    probe_uniqueness, solve_common, MapDescriptor, MatEqError,
};

use crate::config::{ConfigError, Problem, ProblemConfig};
use crate::report::{Command, LinfIteration, LinfReport, ProblemSummary, RunReport, Status};

/// Starts used by the uniqueness probe after a solve.
pub const PROBE_STARTS: usize = 5;
pub const DEFAULT_MAX_INDEX: u32 = 50;

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("computation failed: {0}")]
    Compute(#[from] MatEqError),
}

/// Command-line values that take precedence over the config.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tolerance: Option<f64>,
    pub max_iterations: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, config: &mut ProblemConfig) {
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(samples) = self.samples {
            config.samples = samples;
        }
        if let Some(tol) = self.tolerance {
            config.tolerance = tol;
        }
        if let Some(max_iter) = self.max_iterations {
            config.max_iterations = max_iter;
        }
    }
}

/// Condition checkers and inequality certificates; exit 0 iff nothing was violated.
pub fn verify(config: ProblemConfig, overrides: &Overrides) -> Result<RunReport, CommandError> {
    let started = Instant::now();
    let (mut report, problem) = prepare(Command::Verify, config, overrides)?;
    run_checks(&mut report, &problem)?;
    let status = if report.findings.is_empty() {
        Status::Pass
    } else {
        Status::Violation
    };
    Ok(report.finish(status, started))
}

/// Checks plus the alternating solve. The exit status reflects convergence
/// only; failed hypotheses are listed in `findings`.
pub fn solve(config: ProblemConfig, overrides: &Overrides) -> Result<RunReport, CommandError> {
    let started = Instant::now();
    let (mut report, problem) = prepare(Command::Solve, config, overrides)?;
    run_checks(&mut report, &problem)?;

    let solved = solve_common(
        &problem.pair,
        problem.radius,
        problem.tolerance,
        problem.max_iterations,
        None,
    )?;
    let converged = solved.converged();
    if converged {
        let gaps = gap_monotonicity(&solved.trace.gaps);
        if !gaps.is_monotone() {
            report.findings.push(format!(
                "gap sequence increased {} time(s)",
                gaps.increases.len()
            ));
        }
        report.gap_report = Some(gaps);
        if !solved.positive_definite {
            report
                .findings
                .push("solution is not positive definite".into());
        }
        if !solved.within_ball {
            report
                .findings
                .push("solution lies outside the ball".into());
        }
    } else {
        report.findings.push(format!(
            "iteration did not converge: {:?}",
            solved.trace.verdict
        ));
    }
    report.solve = Some(solved);

    let probe = probe_uniqueness(
        &problem.pair,
        problem.radius,
        problem.tolerance,
        problem.max_iterations,
        PROBE_STARTS,
        problem.seed,
    );
    if converged && !probe.unique() {
        report.findings.push(format!(
            "{} pair(s) of probe limits differ",
            probe.flagged.len()
        ));
    }
    report.uniqueness = Some(probe);

    let status = if converged {
        Status::Pass
    } else {
        Status::NonConvergence
    };
    Ok(report.finish(status, started))
}

fn prepare(
    command: Command,
    mut config: ProblemConfig,
    overrides: &Overrides,
) -> Result<(RunReport, Problem), CommandError> {
    overrides.apply(&mut config);
    let problem = config.build()?;
    let mut report = RunReport::new(command);
    report.problem = Some(ProblemSummary {
        n: problem.pair.dim(),
        k: problem.pair.k(),
        k1: problem.k1,
        k1_auto: problem.k1_auto,
        radius: problem.radius,
        alpha: problem.alpha,
        tolerance: problem.tolerance,
        max_iterations: problem.max_iterations,
        seed: problem.seed,
        samples: problem.samples,
    });
    report.config = Some(config);
    Ok((report, problem))
}

fn run_checks(report: &mut RunReport, p: &Problem) -> Result<(), CommandError> {
    let conditions = check_conditions(&p.pair, p.radius, p.k1, p.alpha, p.samples, p.seed)?;
    let findings = &mut report.findings;
    if !conditions.condition_i.pass {
        findings.push(format!(
            "condition (i): max(‖Q₁‖, ‖Q₂‖) exceeds a − k k₁ n = {}",
            conditions.condition_i.bound
        ));
    }
    if !conditions.condition_ii.pass {
        findings.push(format!(
            "condition (ii): neither definiteness branch holds at {} of {} samples",
            conditions.condition_ii.failing_samples.len(),
            conditions.condition_ii.samples
        ));
    }
    if !conditions.condition_iii.pass {
        findings.push(format!(
            "condition (iii): {} of {} sampled pairs violate it",
            conditions.condition_iii.violations.len(),
            conditions.condition_iii.samples
        ));
    }

    for (i, spec) in [p.pair.first(), p.pair.second()].into_iter().enumerate() {
        let descriptor = MapDescriptor {
            kind: spec.map(),
            declared_k1: p.k1,
            radius: p.radius,
        };
        let check = descriptor.check_k1_soundness(p.pair.dim(), p.samples, p.seed)?;
        if !check.pass {
            findings.push(format!(
                "k1 = {} is unsound for equation {}: observed {}",
                p.k1,
                i + 1,
                check.observed_max
            ));
        }
        report.k1_checks.push(check);
    }

    if conditions.condition_i.pass {
        let self_map = check_self_map(&p.pair, p.radius, p.samples, p.seed)?;
        if !self_map.pass {
            findings.push("induced maps leave the ball".into());
        }
        report.self_map = Some(self_map);
    }

    let certificate = certify_derived_inequality(&p.pair, p.radius, p.alpha, p.samples, p.seed);
    if !certificate.holds() {
        findings.push(format!(
            "derived contractive inequality fails on {} of {} pairs",
            certificate.violations.len(),
            certificate.pairs_checked
        ));
    }
    report.certificate = Some(certificate);

    if let Some(bundle) = &p.controls {
        let custom = certify_with_bundle(&p.pair, bundle, p.radius, p.samples, p.seed);
        if !custom.holds() {
            findings.push(format!(
                "configured controls fail on {} of {} pairs",
                custom.violations.len(),
                custom.pairs_checked
            ));
        }
        report.custom_certificate = Some(custom);
    }

    report.conditions = Some(conditions);
    Ok(())
}

/// The exact ℓ∞ fixture: exhaustive certificate, iteration from `e₇`, and a
/// uniqueness probe over every start.
pub fn example_linf(
    max_index: u32,
    tolerance: f64,
    max_iterations: usize,
    inject_fault: bool,
) -> Result<RunReport, CommandError> {
    let started = Instant::now();
    if max_index < FIRST_INDEX + 1 {
        return Err(ConfigError::Invalid {
            field: "max-index".into(),
            message: format!("must be at least {}", FIRST_INDEX + 1),
        }
        .into());
    }
    if tolerance.is_nan() || tolerance <= 0.0 || max_iterations < 2 {
        return Err(ConfigError::Invalid {
            field: "tol/max-iter".into(),
            message: "need tol > 0 and max-iter >= 2".into(),
        }
        .into());
    }
    let controls = if inject_fault {
        ExactExampleControls::faulty()
    } else {
        ExactExampleControls::default()
    };
    let certificate = exhaustive_case_check_with(max_index, &controls);

    let start = LinfPoint::Basis(FIRST_INDEX);
    let trace = iterate_from(start, tolerance, max_iterations);
    let limit = *trace.last();
    let iteration = LinfIteration {
        start,
        verdict: trace.verdict,
        steps: trace.steps(),
        limit,
        residual_f: trace.residual_f,
        residual_g: trace.residual_g,
        gaps: trace.gaps,
    };
    let uniqueness = linf_uniqueness(&truncated_domain(max_index), tolerance, max_iterations);
    let limit_is_e0 = iteration.verdict == Verdict::Converged
        && limit == LinfPoint::Zero
        && uniqueness.all_converged()
        && uniqueness.runs.iter().all(|r| r.limit == LinfPoint::Zero);

    let mut report = RunReport::new(Command::ExampleLinf);
    if !certificate.holds() {
        report.findings.push(format!(
            "contractive inequality fails on {} of {} pairs",
            certificate.violations.len(),
            certificate.pairs_checked
        ));
    }
    if !limit_is_e0 {
        report
            .findings
            .push("iteration does not settle on e₀ from every start".into());
    }
    let status = if report.findings.is_empty() {
        Status::Pass
    } else {
        Status::Violation
    };
    report.linf = Some(LinfReport {
        max_index,
        fault_injected: inject_fault,
        phi1_slope: controls.phi1_slope.to_string(),
        certificate,
        iteration,
        uniqueness,
        limit_is_e0,
    });
    Ok(report.finish(status, started))
}
