//! Command-line front end: argument parsing, configuration, and the
//! subcommands behind the `zeromass` binary.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{Outcome, Suite};
use crate::config::{Overrides, RunConfig};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_FAIL: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "zeromass", version, about = "Verification suites and spectral runs for massless wave equations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory for report.json and series.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Grid points per axis.
    #[arg(long, global = true, value_name = "N")]
    pub grid: Option<usize>,
    /// Number of snapshots.
    #[arg(long, global = true, value_name = "N")]
    pub steps: Option<usize>,
    /// Snapshot interval.
    #[arg(long, global = true, value_name = "X")]
    pub dt: Option<f64>,
    /// Run independent suites on this many threads.
    #[arg(long, global = true, value_name = "K", default_value_t = 1)]
    pub parallel: usize,
    /// Also write plot.py for the CSV series.
    #[arg(long, global = true)]
    pub plot: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SuiteArg {
    Duality,
    Neutrino,
    Constraints,
    Generalized,
    All,
}

impl SuiteArg {
    pub fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Duality => vec![Suite::Duality],
            SuiteArg::Neutrino => vec![Suite::Neutrino],
            SuiteArg::Constraints => vec![Suite::Constraints],
            SuiteArg::Generalized => vec![Suite::Generalized],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact identities of every representation, commutant, projector and transform.
    VerifyAlgebra,
    /// Symbolic equivalence of each representation/packing pair with Maxwell's equations.
    VerifyEquivalence,
    /// Numerical suites.
    Run {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
    /// Snapshot dumps (binary and CSV) of one formulation.
    Export {
        #[arg(long, default_value = "SIGMA_RS")]
        formulation: zeromass_sim::Formulation,
        /// Snapshot indices; defaults to the first and last.
        #[arg(long = "snapshot", value_name = "S")]
        snapshots: Vec<usize>,
        /// Skip the CSV files.
        #[arg(long)]
        binary_only: bool,
    },
}

impl GlobalArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            out: self.out.clone(),
            seed: self.seed,
            grid: self.grid,
            steps: self.steps,
            dt: self.dt,
            plot: self.plot,
        }
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run_cli(cli: Cli) -> u8 {
    let cfg = match RunConfig::load(cli.global.config.as_deref(), &cli.global.overrides()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_USAGE;
        }
    };
    if cli.global.parallel == 0 {
        eprintln!("error: --parallel must be at least 1");
        return EXIT_USAGE;
    }
    let result: anyhow::Result<Outcome> = match cli.command {
        Command::VerifyAlgebra => commands::verify_algebra(&cfg),
        Command::VerifyEquivalence => commands::verify_equivalence(&cfg),
        Command::Run { suite } => commands::run(&cfg, &suite.suites(), cli.global.parallel),
        Command::Export {
            formulation,
            snapshots,
            binary_only,
        } => {
            let snaps = if snapshots.is_empty() {
                vec![0, cfg.grid.steps - 1]
            } else {
                snapshots
            };
            commands::export(&cfg, formulation, &snaps, binary_only)
        }
    };
    match result {
        Ok(out) => {
            for line in &out.summary {
                println!("{line}");
            }
            println!("report: {}", out.report_path.display());
            if out.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}
