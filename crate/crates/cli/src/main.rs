use std::fs;
use std::process::ExitCode;

use clap::Parser;
use theta_metric_cli::{render_human, run, to_json, JobSpec, EXIT_INPUT};

fn main() -> ExitCode {
    let job = JobSpec::parse();
    let report = run(&job);
    let json = to_json(&report);
    if let Some(path) = &job.inputs.json_out {
        if let Err(e) = fs::write(path, &json) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    }
    if job.inputs.json {
        print!("{json}");
    } else {
        print!("{}", render_human(&report));
    }
    ExitCode::from(report.exit_code as u8)
}
