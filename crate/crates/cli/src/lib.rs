//! Command line front end for the `eventuality` engine.
//!
//! A scenario (a shipped preset or a JSON file) declares spaces, a state,
//! observables and observers; each command evaluates one engine operation
//! on it and renders the result as aligned text, CSV or JSON.

pub mod commands;
pub mod error;
pub mod render;
pub mod scenario;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgGroup, Parser};
use eventuality::LogBase;

pub use commands::{run, Command, Options};
pub use error::{CliError, Result};
pub use render::{Cell, Format, RenderedTable, Report};
pub use scenario::{load_scenario, Scenario, Source};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LogBaseArg {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    E,
}

impl From<LogBaseArg> for LogBase {
    fn from(arg: LogBaseArg) -> Self {
        match arg {
            LogBaseArg::Two => LogBase::Two,
            LogBaseArg::E => LogBase::Natural,
        }
    }
}

/// Quantum probability calculator driven by scenario files.
#[derive(Debug, Parser)]
#[command(name = "eventuality", version, about)]
#[command(group(ArgGroup::new("input").required(true).args(["preset", "scenario"])))]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// Built-in scenario: coin, stern-gerlach, cat-box or cat-master.
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,

    /// Scenario file in the JSON schema.
    #[arg(long, value_name = "FILE")]
    pub scenario: Option<PathBuf>,

    /// Structural tolerance for state and observable validation.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,

    /// Tolerance of the adequate-correlation diagnosis in `joint` and `check`.
    #[arg(long, default_value_t = 0.01)]
    pub correlation_tol: f64,

    /// Logarithm base of information capacities.
    #[arg(long, value_enum, default_value = "2")]
    pub log_base: LogBaseArg,

    /// Fractional digits in text output.
    #[arg(long, default_value_t = 6)]
    pub precision: usize,

    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,

    /// Observable for gross, collapse, luder and branches; the conditioning
    /// observable for conditional.
    #[arg(long)]
    pub observable: Option<String>,

    /// Channel label for collapse and conditional. Collapse defaults to the
    /// first channel of positive probability.
    #[arg(long)]
    pub channel: Option<String>,

    /// Row observable for joint and conditional.
    #[arg(long)]
    pub rows: Option<String>,

    /// Column observable for joint and conditional.
    #[arg(long)]
    pub cols: Option<String>,
}

/// What a process run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn positive_tolerance(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be positive and finite (got {value})"
        )))
    }
}

pub fn invoke(cli: &Cli) -> Result<String> {
    positive_tolerance("tol", cli.tol)?;
    positive_tolerance("correlation-tol", cli.correlation_tol)?;
    let source = match (&cli.preset, &cli.scenario) {
        (Some(name), _) => Source::Preset(name.clone()),
        (None, Some(path)) => Source::File(path.display().to_string()),
        (None, None) => return Err(CliError::Usage("give --preset or --scenario".into())),
    };
    let scenario = load_scenario(&source, cli.tol)?;
    let opts = Options {
        tol: cli.tol,
        correlation_tol: cli.correlation_tol,
        log_base: cli.log_base.into(),
        observable: cli.observable.clone(),
        channel: cli.channel.clone(),
        rows: cli.rows.clone(),
        cols: cli.cols.clone(),
    };
    let report = run(cli.command, &scenario, &opts)?;
    Ok(render::render(&report, cli.format, cli.precision))
}

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match invoke(&cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
