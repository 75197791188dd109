//! `slocc`: convertibility, separability and normal forms from the command line.
//!
//! Exit codes: 0 affirmative, 1 negative, 2 input error, 3 unsupported class.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use slocc_core::numerics::Tolerances;

use crate::commands::{exit_code, Outcome};

#[derive(Parser)]
#[command(name = "slocc", version, about = "Decide SLOCC convertibility of two-qubit states")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Equality tolerance for input validation and replay checks.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the ordered weights and the monotones E1, E2, E3.
    Monotones {
        /// State file, or - for stdin.
        state: PathBuf,
    },
    /// Decide whether SOURCE can be converted into TARGET.
    Convert {
        source: PathBuf,
        target: PathBuf,
        /// Decision procedure.
        #[arg(long, default_value = "monotones")]
        method: String,
    },
    /// Decide separability of a symmetric four-qubit state given by its r-matrix.
    Separable {
        rmatrix: PathBuf,
        /// Decision procedure.
        #[arg(long, default_value = "cross-check")]
        method: String,
    },
    /// Reduce a two-qubit state to its SLOCC normal form.
    NormalForm { state: PathBuf },
    /// Apply the separable map given by an r-matrix to a Bell-diagonal state.
    ApplyMap { rmatrix: PathBuf, state: PathBuf },
    /// Run the built-in numerical checks.
    Selfcheck {
        /// Run only the named check.
        #[arg(long)]
        only: Option<String>,
    },
}

fn run(cli: &Cli) -> Result<Outcome> {
    let mut tol = Tolerances::default();
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            bail!("--tol must be a positive finite number, got {t}");
        }
        tol = tol.with_equality(t);
    }
    let stdin_uses = match &cli.command {
        Command::Convert { source, target, .. } => [source, target].iter().filter(|p| p.as_os_str() == "-").count(),
        Command::ApplyMap { rmatrix, state } => [rmatrix, state].iter().filter(|p| p.as_os_str() == "-").count(),
        _ => 0,
    };
    if stdin_uses > 1 {
        bail!("at most one input may be read from stdin");
    }
    let load = |p: &PathBuf| input::load(p, &tol);
    match &cli.command {
        Command::Monotones { state } => commands::monotones(&load(state)?, &tol),
        Command::Convert { source, target, method } => commands::convert(&load(source)?, &load(target)?, method, &tol),
        Command::Separable { rmatrix, method } => commands::separable(&load(rmatrix)?, method, &tol),
        Command::NormalForm { state } => commands::normal_form(&load(state)?, &tol),
        Command::ApplyMap { rmatrix, state } => commands::apply_map(&load(rmatrix)?, &load(state)?, &tol),
        Command::Selfcheck { only } => commands::selfcheck(cli.seed, only.as_deref(), &tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable output"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
