//! Command-line surface. Every command produces one [`OutputDocument`];
//! `w --grid` can also write CSV.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 physicality or
//! admissibility failure.

mod commands;
pub mod document;
pub mod state;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{cmd_p_table, cmd_reconstruct, cmd_sweep, cmd_verify, cmd_w, WRequest};
pub use document::{InputDocument, OutputDocument, SCHEMA_VERSION};
pub use state::{NamedState, StateSpec};

use crate::error::SpinError;
use crate::spin::DEFAULT_TOL;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONPHYSICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "quasispin", version, about = "Spin-1/2 quasiprobabilities, tomograms and reconstructions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Tolerance for physicality and admissibility checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Doc)]
    pub format: Format,
    /// Seed for commands that sample random states.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Doc,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReconstructMode {
    FromP,
    FromWAxes,
    FromWIntegral,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasiprobability table of a state, with marginals and admissibility.
    PTable {
        #[arg(long)]
        state: StateSpec,
    },
    /// Tomographic probabilities along one direction or on a (θ, φ) grid.
    W {
        #[arg(long)]
        state: StateSpec,
        #[arg(long, allow_negative_numbers = true, conflicts_with = "grid", requires = "phi")]
        theta: Option<f64>,
        #[arg(long, allow_negative_numbers = true, conflicts_with = "grid", requires = "theta")]
        phi: Option<f64>,
        /// Third Euler angle; w does not depend on it.
        #[arg(long, allow_negative_numbers = true, conflicts_with = "grid", requires = "theta")]
        psi: Option<f64>,
        /// n×n grid: Gauss-Legendre θ nodes, uniform φ nodes.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Rebuild a density matrix from a JSON input document.
    Reconstruct {
        #[arg(long, value_enum)]
        mode: ReconstructMode,
        input: PathBuf,
    },
    /// Check a p table and/or an axis triple from a JSON input document.
    Verify { input: PathBuf },
    /// Check every round trip on seeded random states.
    Sweep {
        #[arg(long)]
        trials: u64,
    },
}

/// Rendered result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Text destined for `--output` or stdout, if any.
    pub body: Option<String>,
    /// Diagnostics for stderr.
    pub messages: Vec<String>,
    pub exit_code: i32,
}

impl Outcome {
    fn usage(message: String) -> Self {
        Outcome { body: None, messages: vec![message], exit_code: EXIT_USAGE }
    }
}

/// Exit code for a library error.
pub fn exit_code_for(err: &SpinError) -> i32 {
    match err {
        SpinError::InvalidArgument(_) | SpinError::IndexOutOfRange(_) => EXIT_USAGE,
        _ => EXIT_NONPHYSICAL,
    }
}

/// Errors raised before a document exists.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Spin(SpinError),
}

impl From<SpinError> for CliError {
    fn from(e: SpinError) -> Self {
        CliError::Spin(e)
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    if !(g.tol >= 0.0 && g.tol.is_finite()) {
        return Outcome::usage(format!("--tol must be a finite non-negative number, got {}", g.tol));
    }
    if g.format == Format::Csv && !matches!(cli.command, Command::W { grid: Some(_), .. }) {
        return Outcome::usage("--format csv is only available for `w --grid`".into());
    }
    let result = match &cli.command {
        Command::PTable { state } => Ok(cmd_p_table(state, g.tol)),
        Command::W { state, theta, phi, psi, grid } => {
            let request = match (grid, theta, phi) {
                (Some(n), _, _) => Ok(WRequest::Grid(*n)),
                (None, Some(t), Some(p)) => Ok(WRequest::Single { theta: *t, phi: *p, psi: psi.unwrap_or(0.0) }),
                _ => Err(CliError::Usage("w needs --theta and --phi, or --grid".into())),
            };
            request.and_then(|r| cmd_w(state, &r, g.tol))
        }
        Command::Reconstruct { mode, input } => read_input(input).and_then(|doc| cmd_reconstruct(&doc, *mode, g.tol)),
        Command::Verify { input } => read_input(input).and_then(|doc| cmd_verify(&doc, g.tol)),
        Command::Sweep { trials } => cmd_sweep(*trials, g.seed, g.tol),
    };
    let doc = match result {
        Ok(doc) => doc,
        Err(CliError::Usage(m)) => return Outcome::usage(m),
        Err(CliError::Spin(e)) => return Outcome { body: None, messages: vec![e.to_string()], exit_code: exit_code_for(&e) },
    };
    let exit_code = if doc.passed { EXIT_OK } else { EXIT_NONPHYSICAL };
    let body = match g.format {
        Format::Doc => doc.to_json(),
        Format::Csv => commands::w_csv(doc.w_samples.as_deref().unwrap_or_default()),
    };
    Outcome { body: Some(body), messages: doc.errors.clone(), exit_code }
}

fn read_input(path: &std::path::Path) -> Result<InputDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("cannot parse {}: {e}", path.display())))
}
