//! Command-line front end for `peanoquad-core`.
//!
//! Every subcommand produces one [`output::Record`], rendered as json (the
//! default), csv or text. Exit codes: 0 on success, 1 for usage and parse
//! errors, 2 when certification, the panel budget or a tolerance check fails.

pub mod args;
mod commands;
pub mod output;

use args::{Cli, Command};
use output::Record;

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub record: Record,
    /// Diagnostic for the error stream, if any.
    pub stderr: Option<String>,
    /// Replaces the generic text rendering when set.
    pub text: Option<String>,
}

impl Outcome {
    fn new(record: Record) -> Outcome {
        Outcome {
            record,
            stderr: None,
            text: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.record.status.exit_code()
    }

    pub fn render(&self, format: output::Format) -> String {
        match (&self.text, format) {
            (Some(text), output::Format::Text) => text.clone(),
            _ => self.record.render(format),
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let start = std::time::Instant::now();
    let mut outcome = match &cli.command {
        Command::Integrate(a) => commands::integrate(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::VerifyKernels(a) => commands::verify_kernels(a),
        Command::Parse(a) => commands::parse(a),
    };
    outcome.record.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    outcome
}
