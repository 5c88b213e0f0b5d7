//! `sseq`: verify and construct shift-equivalence certificates from JSON files.
//!
//! Exit codes: 0 when every check passes, 1 on a mathematical failure,
//! 2 on usage or parse errors.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sseq_core::spectral::DEFAULT_K_MAX;
use sseq_core::Rational;

#[derive(Parser, Debug)]
#[command(name = "sseq", version, about = "Exact shift-equivalence certificates")]
pub struct Cli {
    /// Print the full JSON report instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify an elementary, strong or plain shift-equivalence witness file.
    Verify {
        #[arg(value_enum)]
        kind: WitnessKind,
        file: PathBuf,
    },
    /// Shrink a nilpotent matrix and clear the traces of its companion up to K.
    Clear {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=6))]
        k: u32,
    },
    /// Check the nonzero-spectrum conditions for a polynomial.
    Spectra(SpectraArgs),
    /// Check the ℚ[t²,t³,z,z⁻¹] fixture.
    Badring {
        /// Perturb one entry first (negative control).
        #[arg(long, hide = true)]
        tamper: bool,
    },
    /// Assemble G from a primitive C and a small M0.
    Assemble {
        c_file: PathBuf,
        m_file: PathBuf,
        #[arg(long)]
        eps: Rational,
    },
    /// Build the block companion of a polynomial matrix over tR[t].
    Sharp {
        file: PathBuf,
        /// Block count (defaults to the degree).
        #[arg(long)]
        k: Option<usize>,
        /// Block size (defaults to the matrix size).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Reduce a nonnegative nilpotent matrix to [0] by a verified chain.
    ReduceNilpotent { file: PathBuf },
    /// Run the randomized property suites.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Cases per randomized suite.
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

#[derive(Args, Debug)]
pub struct SpectraArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Integer)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=200))]
    pub n_max: u32,
    #[arg(long, default_value_t = DEFAULT_K_MAX as u32, value_parser = clap::value_parser!(u32).range(1..=50))]
    pub k_max: u32,
    #[arg(long, default_value = "1/1000000")]
    pub tol: Rational,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum WitnessKind {
    Esse,
    Sse,
    Se,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ModeArg {
    Integer,
    Dense,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli.command) {
        Ok(report) => {
            if cli.json {
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                let _ = writeln!(std::io::stdout().lock(), "{text}");
            } else {
                commands::print_summary(&report);
            }
            ExitCode::from(if report.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
