//! `gentangle` — batch front door for generalized-entanglement analysis.
//!
//! Subcommands: purity, gue-test, max-purity, roof, cone, maps, verify.
//! Exit codes: 0 success, 1 numerical or property failure, 2 input or
//! validation error.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use gentangle_cli::report::Report;
use gentangle_cli::{commands, CliError, OutFormat, RunOpts};

#[derive(Debug, Parser)]
#[command(name = "gentangle", version, about = "Generalized entanglement relative to distinguished observable subspaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Relative purity and reduced coordinates of a state.
    Purity {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Certify a pure state as generalized unentangled or entangled.
    #[command(name = "gue-test")]
    GueTest {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Maximal relative purity over the pure-state sphere.
    #[command(name = "max-purity")]
    MaxPurity {
        #[arg(long)]
        system: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Convex-roof upper bound of the purity-deficit measure on a mixed state.
    Roof {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Cone-pair summary of the system: dimensions, trace preservation,
    /// sampled reduced-body bounds.
    Cone {
        #[arg(long)]
        system: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Analyze a map file against the system: trace preservation,
    /// liftability, lifted action, extremality probe.
    Maps {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run a built-in verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        system: Option<PathBuf>,
        #[command(flatten)]
        opts: RunOpts,
    },
}

impl Command {
    fn opts(&self) -> &RunOpts {
        match self {
            Command::Purity { opts, .. }
            | Command::GueTest { opts, .. }
            | Command::MaxPurity { opts, .. }
            | Command::Roof { opts, .. }
            | Command::Cone { opts, .. }
            | Command::Maps { opts, .. }
            | Command::Verify { opts, .. } => opts,
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Purity {
            system,
            state,
            opts,
        } => commands::cmd_purity(system, state, opts),
        Command::GueTest {
            system,
            state,
            opts,
        } => commands::cmd_gue_test(system, state, opts),
        Command::MaxPurity { system, opts } => commands::cmd_max_purity(system, opts),
        Command::Roof {
            system,
            state,
            opts,
        } => commands::cmd_roof(system, state, opts),
        Command::Cone { system, opts } => commands::cmd_cone(system, opts),
        Command::Maps { system, map, opts } => commands::cmd_maps(system, map, opts),
        Command::Verify {
            suite,
            system,
            opts,
        } => commands::cmd_verify(suite, system.as_deref(), opts),
    }
}

fn render(report: &Report, out: OutFormat) -> String {
    match out {
        OutFormat::Json => report.to_json(),
        OutFormat::Csv => report.to_csv(),
    }
}

fn main() {
    let cli = Cli::parse();
    let out_format = cli.command.opts().out;
    let code = match dispatch(&cli) {
        Ok(report) => {
            print!("{}", render(&report, out_format));
            0
        }
        Err(CliError::Property(report)) => {
            print!("{}", render(&report, out_format));
            eprintln!("error: verification suite has failing properties");
            1
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}
