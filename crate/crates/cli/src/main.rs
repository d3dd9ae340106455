//! `nilsys`: invariants, systolic-growth bounds and lattice checks for
//! rational nilpotent Lie algebras.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nilsys_core::algebra::FlagMode;
use nilsys_core::constraints::ConstraintClass;

#[derive(Parser, Debug)]
#[command(name = "nilsys", version, about = "Systolic growth of nilpotent Lie algebras")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Solid flag used for the lower bound.
    #[arg(long, global = true, value_enum, default_value_t = Flag::Auto)]
    flag: Flag,
    /// Witness bases n; lattices are built at r = n^q.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [2u64, 3, 5])]
    r_samples: Vec<u64>,
    /// Constraint classes to drop (debug ablation).
    #[arg(long, global = true, value_delimiter = ',')]
    disable_constraints: Vec<ConstraintClass>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural invariants, solid flag and Carnot-graded constants.
    Info(Source),
    /// Lower and upper exponent bounds with certificates and witnesses.
    Bounds(Source),
    /// Check a user lattice in the dilated algebra g[r].
    Verify {
        #[command(flatten)]
        source: Source,
        /// One basis vector per line, in the algebra's coordinates.
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        r: String,
    },
    /// List catalog entries, or print one in the text format.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        param: Option<String>,
    },
    /// Expected versus computed exponents over the reproduction set.
    Report {
        /// Comma-separated entry names or labels; an empty list selects nothing.
        #[arg(long)]
        filter: Option<String>,
    },
}

/// Exactly one of a file and `--catalog`.
#[derive(Args, Debug)]
pub struct Source {
    file: Option<PathBuf>,
    #[arg(long)]
    catalog: Option<String>,
    #[arg(long)]
    param: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Flag {
    Auto,
    LcsOnly,
}

impl From<Flag> for FlagMode {
    fn from(f: Flag) -> Self {
        match f {
            Flag::Auto => FlagMode::Auto,
            Flag::LcsOnly => FlagMode::LcsOnly,
        }
    }
}

/// Why a command did not succeed; the variant fixes the exit code.
#[derive(Debug)]
pub enum Failure {
    /// A check ran and failed (exit 1).
    Check(String),
    /// The input could not be read or is invalid (exit 2).
    Input(String),
}

pub type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = String::new();
    let outcome = run(&cli, &mut out);
    // A closed pipe (`nilsys report | head`) is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("nilsys: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("nilsys: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, out: &mut String) -> Outcome {
    let config = input::bounds_config(cli)?;
    match &cli.command {
        Command::Info(source) => commands::info(out, &input::load(source)?, cli.flag.into(), cli.json),
        Command::Bounds(source) => commands::bounds(out, &input::load(source)?, &config, cli.json),
        Command::Verify { source, lattice, r } => {
            let a = input::load(source)?;
            let rows = input::lattice_rows(lattice, a.dim())?;
            let r = input::scale(r)?;
            commands::verify(out, &a, &rows, &r, config.node_limit, cli.json)
        }
        Command::Catalog { name, param } => commands::catalog(out, name.as_deref(), param.as_deref()),
        Command::Report { filter } => commands::report(out, filter.as_deref(), &config, cli.json),
    }
}
