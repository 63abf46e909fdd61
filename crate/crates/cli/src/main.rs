//! `nhkitaev`: sweeps and tables for the non-Hermitian dimerized Kitaev-Hubbard chain.
//!
//! Exit codes: 0 success, 1 usage error, 2 capacity error, 3 solver failure.

mod commands;
mod options;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use options::Options;

#[derive(Parser)]
#[command(name = "nhkitaev", version, about = "Exact diagonalization sweeps for the non-Hermitian Kitaev-Hubbard chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degeneracy measure over a (U, eta) grid for each chain length
    Sweep(Options),
    /// Exact gap-closing lines U(eta) from the formula and a numeric search
    Boundary(Options),
    /// Ground-manifold correlator profile per chain length
    Correlator(Options),
    /// Grid sweep over several lengths plus the extrapolated layer
    Extrapolate(Options),
    /// Bands over k and the gap class in the solvable limit
    Bands(Options),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (run, opts): (fn(&Options) -> Result<(), commands::Failure>, Options) = match cli.command {
        Command::Sweep(o) => (commands::sweep, o),
        Command::Boundary(o) => (commands::boundary, o),
        Command::Correlator(o) => (commands::correlator, o),
        Command::Extrapolate(o) => (commands::extrapolate, o),
        Command::Bands(o) => (commands::bands, o),
    };
    let result = opts.resolve().map_err(commands::Failure::Usage).and_then(|o| run(&o));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code() as u8)
        }
    }
}
