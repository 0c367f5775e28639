//! Command-line front end for the `theta-metric` crate.
//!
//! A [`JobSpec`] is parsed from the command line, every referenced input is
//! loaded and validated up front, and only then is the command executed.
//! The result is a [`RunReport`]; human output is rendered from its JSON
//! form.
//!
//! Exit codes: `0` all checks passed or the solver converged, `1` violations
//! or non-convergence (the report carries witnesses), `2` input or
//! configuration error.

mod commands;
mod load;
mod output;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;
use theta_metric::InverseMode;

pub use output::{render_human, to_json};

pub const DEFAULT_SEED: u64 = 0x7e7a;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug, Clone)]
#[command(name = "thetam", version, about = "Validate theta-metric spaces and solve fixed-point problems")]
pub struct JobSpec {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub inputs: Inputs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Inputs {
    /// Action JSON file, or `builtin:<kind>[:key=value,...]`.
    #[arg(long, global = true)]
    pub action: Option<String>,
    /// Space JSON file, or `builtin:<fixture>`.
    #[arg(long, global = true)]
    pub space: Option<String>,
    /// Map (or multimap, for `endpoint`) JSON file, or `builtin:<fixture>`.
    #[arg(long, global = true)]
    pub map: Option<String>,
    /// Caristi JSON file (`gamma` and `psi`), or `builtin:<fixture>`.
    #[arg(long, global = true)]
    pub caristi: Option<String>,
    /// Comparison tolerance (validate-space) or fixed-point tolerance (banach).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,
    /// Print the JSON report instead of the human summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Root range for the inverse action.
    #[arg(long, global = true, default_value_t = InverseMode::Strict)]
    pub mode: InverseMode,
}

#[derive(Subcommand, Serialize, Debug, Clone)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Sampled check of the action conditions and inverse-action properties.
    CheckAction {
        #[arg(long, default_value_t = 11)]
        grid: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 10.0)]
        cap: f64,
    },
    /// Inverse action `t` with `θ(t, s) = r`.
    Eta {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        s: f64,
    },
    /// Identity, symmetry and relaxed triangle inequality on a finite space.
    ValidateSpace {
        /// Check the ordinary triangle inequality instead.
        #[arg(long)]
        plain: bool,
    },
    /// Open ball with an openness witness for each member.
    Ball {
        #[arg(long)]
        center: String,
        #[arg(long)]
        radius: f64,
    },
    /// Disjoint balls around distinct points (all pairs if none given).
    Separate {
        #[arg(long, requires = "y")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
    },
    /// Smallest `m > 2n` with `θ(1/m, 1/m) < 1/n`.
    UniformityBase {
        #[arg(long, default_value_t = 1)]
        n: u64,
        /// Sweep `n = 1..=n_max` instead.
        #[arg(long)]
        n_max: Option<u64>,
    },
    /// Picard iteration of a finite map.
    Banach {
        #[arg(long)]
        start: Option<String>,
        #[arg(long, default_value_t = 1_000)]
        max_iter: usize,
    },
    /// Fixed point as the minimal element of the Caristi order.
    Caristi,
    /// Endpoint of a multivalued map via the Caristi order.
    Endpoint,
    /// List the bundled fixtures, or print one as JSON.
    Fixtures { name: Option<String> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckAction { .. } => "check-action",
            Command::Eta { .. } => "eta",
            Command::ValidateSpace { .. } => "validate-space",
            Command::Ball { .. } => "ball",
            Command::Separate { .. } => "separate",
            Command::UniformityBase { .. } => "uniformity-base",
            Command::Banach { .. } => "banach",
            Command::Caristi => "caristi",
            Command::Endpoint => "endpoint",
            Command::Fixtures { .. } => "fixtures",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => EXIT_PASS,
            Status::Fail => EXIT_FAIL,
            Status::Error => EXIT_INPUT,
        }
    }
}

/// Everything a run produces. `timing_ms` is serialized last so reports
/// can be compared byte for byte up to that field.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    pub exit_code: i32,
    pub config: Value,
    pub result: Value,
    pub violations: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timing_ms: f64,
}

/// Loads every input, then executes the command.
pub fn run(job: &JobSpec) -> RunReport {
    let started = Instant::now();
    let command = job.command.name().to_string();
    let mut report = match load::load(job) {
        Err(e) => RunReport {
            command,
            status: Status::Error,
            exit_code: EXIT_INPUT,
            config: Value::Null,
            result: Value::Null,
            violations: Vec::new(),
            error: Some(format!("{e:#}")),
            timing_ms: 0.0,
        },
        Ok(loaded) => {
            let out = commands::execute(job, &loaded);
            let status = if out.passed { Status::Pass } else { Status::Fail };
            RunReport {
                command,
                status,
                exit_code: status.exit_code(),
                config: loaded.config,
                result: out.result,
                violations: out.violations,
                error: out.error,
                timing_ms: 0.0,
            }
        }
    };
    report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    report
}
