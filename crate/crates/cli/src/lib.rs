//! Library side of the `scissor` command: config handling, report writers
//! and the four commands.
//!
//! Exit codes: 0 success, 1 invalid input, 2 singular point, 3 no feasible
//! placement, 4 verification failure.

pub mod config;
pub mod output;

use std::fmt;
use std::path::Path;

use serde::Serialize;

use scissor_core::verify::{self, Summary, Tolerances};
use scissor_core::{analyze_at, grid_search, refine, sweep, SingularityPolicy};

use crate::config::{load, theta_from_degrees};
use crate::output::{OptimizeReport, SweepRecord};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_SINGULAR: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Text for standard output plus the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct AnalyzeReport {
    theta_deg: f64,
    theta_rad: f64,
    height_m: f64,
    actuator_length_m: f64,
    dh_dl: f64,
    force_n: f64,
}

pub fn cmd_analyze(config: &Path, theta_deg: f64) -> Result<Outcome, CliError> {
    let cfg = load(config)?;
    let theta = theta_from_degrees("--theta-deg", theta_deg)?;
    let policy = SingularityPolicy::for_lift(&cfg.lift);
    let row = analyze_at(&cfg.lift, &cfg.placement, theta, &policy)
        .map_err(|e| CliError::invalid(e.to_string()))?;
    let (Some(dh_dl), Some(force_n)) = (row.dh_dl, row.force) else {
        return Err(CliError {
            code: EXIT_SINGULAR,
            message: format!(
                "singular point at theta = {theta_deg} deg: dh/dl denominator is zero \
                 (|denominator| <= {:e}) or the actuator length vanishes",
                policy.eps_denominator()
            ),
        });
    };
    let report = AnalyzeReport {
        theta_deg,
        theta_rad: theta,
        height_m: row.height,
        actuator_length_m: row.length,
        dh_dl,
        force_n,
    };
    let mut stdout = serde_json::to_string_pretty(&report).expect("plain struct serializes");
    stdout.push('\n');
    Ok(Outcome {
        code: EXIT_OK,
        stdout,
    })
}

/// Sweep rows for a config, shared by the `sweep` command and tests.
pub fn sweep_records(config: &Path, samples: usize) -> Result<Vec<SweepRecord>, CliError> {
    let cfg = load(config)?;
    if samples < 2 {
        return Err(CliError::invalid(format!(
            "--samples: must be at least 2, got {samples}"
        )));
    }
    let policy = SingularityPolicy::for_lift(&cfg.lift);
    let rows = sweep(&cfg.lift, &cfg.placement, &cfg.domain, samples, &policy)
        .map_err(|e| CliError::invalid(e.to_string()))?;
    Ok(rows.iter().map(SweepRecord::from).collect())
}

pub fn render_sweep(records: &[SweepRecord], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => output::to_csv(records).map_err(|e| CliError::invalid(e.to_string())),
        Format::Json => output::to_json(records).map_err(|e| CliError::invalid(e.to_string())),
        Format::Svg => Ok(output::to_svg(records)),
    }
}

pub fn cmd_sweep(
    config: &Path,
    samples: usize,
    format: Format,
    out: &Path,
) -> Result<Outcome, CliError> {
    let records = sweep_records(config, samples)?;
    write_file(out, &render_sweep(&records, format)?)?;
    let singular = records.iter().filter(|r| r.singular).count();
    Ok(Outcome {
        code: EXIT_OK,
        stdout: format!(
            "wrote {} rows ({singular} singular) to {}\n",
            records.len(),
            out.display()
        ),
    })
}

/// Runs the configured search and renders its report.
pub fn optimize_report(config: &Path) -> Result<OptimizeReport, CliError> {
    let cfg = load(config)?;
    let search = cfg
        .search
        .ok_or_else(|| CliError::invalid("search: section missing from config"))?;
    let policy = SingularityPolicy::for_lift(&cfg.lift);
    let result =
        grid_search(&search.problem, &policy).map_err(|e| CliError::invalid(e.to_string()))?;
    let refined = match (search.refine, result.best()) {
        (true, Some(best)) => Some(
            refine(&search.problem, &best.placement, &policy)
                .map_err(|e| CliError::invalid(e.to_string()))?,
        ),
        _ => None,
    };
    Ok(OptimizeReport::new(
        search.problem.objective().name(),
        &result,
        refined.as_ref(),
    ))
}

pub fn cmd_optimize(config: &Path, out: &Path) -> Result<Outcome, CliError> {
    let report = optimize_report(config)?;
    let json = report
        .to_json()
        .map_err(|e| CliError::invalid(e.to_string()))?;
    write_file(out, &json)?;
    match &report.best {
        Some(b) => Ok(Outcome {
            code: EXIT_OK,
            stdout: format!(
                "best of {}: a = {}, b = {}, i = {}, slope = {}, objective = {}\n",
                report.candidates,
                b.a,
                b.b,
                b.i,
                b.slope,
                b.objective.expect("feasible entries carry an objective")
            ),
        }),
        None => Ok(Outcome {
            code: EXIT_INFEASIBLE,
            stdout: format!(
                "no feasible placement among {} candidates; report written to {}\n",
                report.candidates,
                out.display()
            ),
        }),
    }
}

fn describe_worst(name: &str, s: &verify::SuiteResult) -> String {
    match s.worst {
        Some(w) => {
            let p = w.placement;
            let range = match w.theta_end {
                Some(end) => format!("theta in [{}, {}] rad", w.theta, end),
                None => format!("theta = {} rad", w.theta),
            };
            format!(
                "{name}: worst at a = {}, b = {}, i = {}, slope = {}, {range}",
                p.a,
                p.b,
                p.i,
                p.slope.as_str()
            )
        }
        None => format!("{name}: no samples"),
    }
}

pub fn format_summary(s: &Summary, trials: usize, seed: u64) -> String {
    let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
    let t = &s.tolerances;
    format!(
        "trials {trials}, seed {seed}\n\
         length      max rel dev {:e} (tol {:e}) {}\n\
         derivative  max rel dev {:e} (tol {:e}) {}\n\
         energy      max rel dev {:e} (tol {:e}) {}\n",
        s.length.max_deviation,
        t.length,
        mark(s.length_ok()),
        s.derivative.max_deviation,
        t.derivative,
        mark(s.derivative_ok()),
        s.energy.max_deviation,
        t.energy,
        mark(s.energy_ok()),
    )
}

pub fn cmd_verify(config: &Path, trials: usize, seed: u64) -> Result<Outcome, CliError> {
    let cfg = load(config)?;
    if trials == 0 {
        return Err(CliError::invalid("--trials: must be at least 1"));
    }
    if cfg.lift.effective_load() == 0.0 {
        return Err(CliError::invalid(
            "lift: load_n + lift_weight_n / 2 must be > 0 for the energy check",
        ));
    }
    let summary = verify::run(&cfg.lift, &cfg.domain, trials, seed, Tolerances::default())
        .map_err(|e| CliError::invalid(e.to_string()))?;
    let mut stdout = format_summary(&summary, trials, seed);
    if summary.passed() {
        return Ok(Outcome {
            code: EXIT_OK,
            stdout,
        });
    }
    for (name, ok, suite) in [
        ("length", summary.length_ok(), &summary.length),
        ("derivative", summary.derivative_ok(), &summary.derivative),
        ("energy", summary.energy_ok(), &summary.energy),
    ] {
        if !ok {
            stdout.push_str(&describe_worst(name, suite));
            stdout.push('\n');
        }
    }
    Ok(Outcome {
        code: EXIT_VERIFY_FAILED,
        stdout,
    })
}
