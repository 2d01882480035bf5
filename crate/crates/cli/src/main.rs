mod args;
mod commands;
mod verify;

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use residual_trace_core::{Error, SchemaError};
use serde_json::Value;

use args::{Cli, Command};

/// Failure of a command, split by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable files: exit 2.
    Usage(String),
    /// Input that does not match the schema: exit 2.
    Schema(SchemaError),
    /// A named invariant fails: exit 1.
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) | CliError::Schema(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Schema(e) => write!(f, "schema: {e}"),
            CliError::Domain(m) => write!(f, "{m}"),
        }
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Schema(e)
    }
}

/// Routes a library error through its module-qualified message.
pub fn domain<E: Into<Error>>(e: E) -> CliError {
    match e.into() {
        Error::Schema(s) => CliError::Schema(s),
        other => CliError::Domain(other.to_string()),
    }
}

pub fn read_json(path: Option<&Path>) -> Result<Value, CliError> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?
        }
        None => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
        }
    }
    serde_json::from_str(&text).map_err(|e| CliError::Schema(SchemaError::new("$", format!("not valid JSON: {e}"))))
}

/// Writes `v` as canonical JSON (sorted keys, compact) plus a newline.
pub fn write_json(path: Option<&Path>, v: &Value) -> Result<(), CliError> {
    let mut text = residual_trace_core::algebra::json::canonical_string(v);
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Usage(format!("cannot write standard output: {e}")))
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("RESIDUAL_TRACE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("RESIDUAL_TRACE_THREADS must be a non-negative integer, got {raw:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure threads: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Trace { io, count } => commands::trace(&io, count as usize),
        Command::Reconstruct {
            io,
            dmax,
            fiber,
            report,
        } => commands::reconstruct(&io, dmax as usize, &fiber, report.as_deref()),
        Command::Radon {
            io,
            kmax,
            check_closedness,
        } => commands::radon(&io, kmax as usize, check_closedness),
        Command::Continue {
            io,
            dmax,
            max_num_deg,
            max_den_deg,
            report,
        } => commands::continue_traces(&io, dmax as usize, max_num_deg as usize, max_den_deg as usize, report.as_deref()),
        Command::Verify {
            seed,
            instances,
            tolerance,
            current,
            output,
        } => verify::run(seed, instances as usize, tolerance, current.as_deref(), output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
