use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

const SCHEMAS: &str = r#"JSON SCHEMAS

  poly      {"vars": ["x","y"], "terms": [{"coeff": "3/2", "exps": [1,0]}, ...]}
            Coefficients are decimal "p/q" or "p" strings; "exps" has one entry
            per variable. Output lists terms in descending graded-lex order.
  ratfunc   {"num": <poly>, "den": <poly>}, reduced, with the leading
            coefficient of "den" equal to 1.
  current   {"n": N, "P": <poly>, "r": <poly>} over N+1 variables, the last
            one being the fiber variable. P must be monic in it; r is reduced
            mod P and any common factor with P is cancelled.
            The zero current is {"n": N, "vars": [...], "zero": true}.
  traces    {"u": [<ratfunc>, ...]} over the N base variables. Entries may
            also be given as bare <poly> objects.
  series    {"series": [{"x0": "1", "coeffs": ["1", "-1/2", ...]}, ...]}
            Taylor coefficients of u_0, u_1, ... at a common base point x0
            (one base variable).

All output is canonical: object keys sorted, no insignificant whitespace.

EXIT STATUS
  0 success, 1 domain error (a named invariant fails), 2 usage or schema error.

ENVIRONMENT
  RESIDUAL_TRACE_THREADS   worker threads for `verify` (0 or unset = all cores)"#;

/// Traces, reconstruction and Abel-Radon transforms of residual currents
/// `r dx∧dy / P` in exact rational arithmetic.
#[derive(Parser, Debug)]
#[command(name = "residual-trace", version, after_long_help = SCHEMAS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Io {
    /// Input file (default: standard input)
    pub input: Option<PathBuf>,
    /// Output file (default: standard output)
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the traces u_0..u_{count-1} of a current. Reads <current>, writes <traces>.
    #[command(after_long_help = SCHEMAS)]
    Trace {
        #[command(flatten)]
        io: Io,
        /// Number of trace entries
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
    },
    /// Recover the minimal current from its traces. Reads <traces>, writes <current>.
    #[command(after_long_help = SCHEMAS)]
    Reconstruct {
        #[command(flatten)]
        io: Io,
        /// Largest fiber degree to try
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        dmax: u64,
        /// Name of the fiber variable of the output current
        #[arg(long, default_value = "y")]
        fiber: String,
        /// Write the reconstruction report (JSON) here
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Abel-Radon transform u_k(a,b), k = 0..kmax. Reads <current>.
    #[command(after_long_help = SCHEMAS)]
    Radon {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 4)]
        kmax: u64,
        /// Also check d/db_i u_{k+n} = d/da_i u_{k+n-1} for k = 0..kmax-n
        #[arg(long)]
        check_closedness: bool,
    },
    /// Detect rational traces from Taylor data and reconstruct. Reads <series>, writes <current>.
    #[command(after_long_help = SCHEMAS)]
    Continue {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        dmax: u64,
        /// Numerator degree bound for each trace
        #[arg(long, default_value_t = 6)]
        max_num_deg: u64,
        /// Denominator degree bound for each trace
        #[arg(long, default_value_t = 2)]
        max_den_deg: u64,
        /// Write the reconstruction report (JSON) here
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the self-check suites on random instances (or on one given current).
    #[command(after_long_help = SCHEMAS)]
    Verify {
        #[arg(long, default_value_t = 20240917)]
        seed: u64,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        instances: u64,
        /// Relative tolerance of the numeric oracle: |exact - numeric| <= tol * max(1, |exact|)
        #[arg(long, default_value_t = 1e-8, value_parser = positive_float)]
        tolerance: f64,
        /// Check this current instead of random ones
        #[arg(long)]
        current: Option<PathBuf>,
        /// Output file for the JSON report (default: standard output)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn positive_float(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be a positive finite number".into())
    }
}
