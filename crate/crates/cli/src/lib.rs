//! Commands behind the `fanstate` binary. Each command renders its whole output
//! into a string, so repeated invocations can be compared byte for byte.

pub mod args;
pub mod generate;
pub mod output;
pub mod qfunc;
pub mod sweep;
pub mod verify;

use std::fs;
use std::io::{self, Write};

pub use args::{Cli, Command, Format};
pub use generate::{generate, GenerateConfig, RunReport};
pub use output::Table;
pub use verify::{run_verify, VerifyConfig, VerifyReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] fanstate_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    VerificationFailed,
    UsageError,
    Deviation,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::VerificationFailed => 1,
            Status::UsageError => 2,
            Status::Deviation => 3,
        }
    }
}

impl CliError {
    /// Every error is reported as a usage error: they all stem from arguments
    /// the engines reject or from an unwritable destination.
    pub fn status(&self) -> Status {
        Status::UsageError
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub text: String,
    pub status: Status,
    pub warnings: Vec<String>,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Self {
            text,
            status: Status::Success,
            warnings: Vec::new(),
        }
    }
}

fn table_text(table: &Table, format: Option<Format>) -> Result<String, CliError> {
    match format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(table.to_csv()),
        Format::Json => table.to_json(),
    }
}

pub fn render(command: &Command) -> Result<Rendered, CliError> {
    match command {
        Command::Generate(a) => {
            let report = generate(&GenerateConfig {
                alpha: a.alpha,
                atoms: a.atoms,
                basis: a.basis.into(),
                tau_order: a.tau_order.into(),
                verify: a.verify,
            })?;
            let text = match a.output.format.unwrap_or(Format::Json) {
                Format::Json => output::to_json(&report)?,
                Format::Csv => output::flat_csv(&report)?,
            };
            let mut rendered = Rendered::ok(text);
            if let Some(dev) = report.max_deviation() {
                if !(dev <= generate::DEVIATION_LIMIT) {
                    rendered.status = Status::Deviation;
                    rendered
                        .warnings
                        .push(format!("engine/oracle deviation {dev:e} exceeds {:e}", generate::DEVIATION_LIMIT));
                }
            }
            Ok(rendered)
        }
        Command::Sweep(a) => {
            let rs = || sweep::linspace(a.r_min, a.r_max, a.r_steps, "r");
            let table = match a.kind {
                args::SweepKind::Fig3 => {
                    sweep::single_atom_table(&a.radii, &sweep::linspace(a.tau_min, a.tau_max, a.tau_steps, "tau")?)?
                }
                args::SweepKind::Fig4 => sweep::p1_table(&rs()?, a.tau_order.map(Into::into))?,
                args::SweepKind::Fig5 => sweep::pk_table(&rs()?)?,
            };
            Ok(Rendered::ok(table_text(&table, a.output.format)?))
        }
        Command::Qfunc(a) => {
            let grid = qfunc::fan_q_grid(a.alpha, a.k, a.bounds, a.res)?;
            Ok(Rendered::ok(table_text(&qfunc::grid_table(&grid), a.output.format)?))
        }
        Command::Verify(a) => {
            if !(a.tol_scale.is_finite() && a.tol_scale >= 0.0) {
                return Err(CliError::Usage(format!("--tol-scale must be finite and >= 0, got {}", a.tol_scale)));
            }
            let report = run_verify(VerifyConfig {
                seed: a.seed,
                cases: a.cases,
                tol_scale: a.tol_scale,
            })?;
            let mut rendered = Rendered::ok(report.render());
            if a.cases == 0 {
                rendered.warnings.push("--cases 0: no checks were run".into());
            }
            if !report.passed() {
                rendered.status = Status::VerificationFailed;
            }
            Ok(rendered)
        }
    }
}

fn destination(command: &Command) -> &str {
    match command {
        Command::Generate(a) => &a.output.out,
        Command::Sweep(a) => &a.output.out,
        Command::Qfunc(a) => &a.output.out,
        Command::Verify(a) => &a.out,
    }
}

/// Renders `command`, writes the result to its destination and returns the exit status.
pub fn execute(command: &Command) -> Result<Status, CliError> {
    let rendered = render(command)?;
    for w in &rendered.warnings {
        eprintln!("warning: {w}");
    }
    match destination(command) {
        "-" => {
            let mut stdout = io::stdout().lock();
            match stdout.write_all(rendered.text.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
        path => fs::write(path, &rendered.text)?,
    }
    Ok(rendered.status)
}
