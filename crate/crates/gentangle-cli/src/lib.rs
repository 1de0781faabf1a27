//! Implementation of the `gentangle` binary: file schemas, report rendering,
//! and the command bodies. Split out as a library so integration tests can
//! exercise the schemas and commands directly.

pub mod commands;
pub mod io;
pub mod report;

use clap::{Args, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    /// Bad input: unreadable file, schema violation, invariant failure (exit 2).
    Validation(String),
    /// A computation failed or produced an inconsistent result (exit 1).
    Numerical(String),
    /// A verification suite ran and has failing properties; the report is
    /// still printed (exit 1).
    Property(Box<report::Report>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct RunOpts {
    /// Certification tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// RNG seed; identical seeds give byte-identical output.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Optimizer restarts (default depends on the command).
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Sample count for probes.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Known analytic maximal purity, bypassing its estimation.
    #[arg(long)]
    pub p_star: Option<f64>,
    /// Decomposition length for the convex roof (default rank²).
    #[arg(long)]
    pub roof_length: Option<usize>,
    /// Additionally report the rescaled measure (P*−P_S)/(P*−P_min).
    #[arg(long, default_value_t = false)]
    pub rescaled: bool,
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
}
