//! asw: exact computations on Artin-Schreier-Witt towers over P^1.
//!
//! Subcommands: `formula` (combinatorial a-number formulas), `anumber`
//! (Cartier kernel dimensions for a tower spec), `newton` (T-adic Newton
//! versus Hodge polygons), `lfunction` (Euler products against Fredholm
//! determinants) and `verify` (structural check suites). Reports go to
//! stdout as JSON (CSV with `--csv`); a human summary goes to stderr.
//!
//! Exit codes: 0 success, 1 failed verification or internal assertion,
//! 2 invalid parameters or spec.

mod commands;
mod report;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "asw",
    version,
    about = "Artin-Schreier-Witt tower computations"
)]
pub struct Cli {
    /// Seed for randomized sweeps (recorded in reports).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Emit CSV instead of JSON on stdout.
    #[arg(long, global = true)]
    pub csv: bool,

    /// Emit JSON on stdout (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,

    /// Omit timestamp and timings so identical inputs give identical bytes.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    /// Override the spec-file lift convention for single-coordinate
    /// coefficients.
    #[arg(long, global = true, value_parser = ["teichmuller", "integer"])]
    pub lift: Option<String>,

    /// Lambda mode for formula bounds: "empirical[:N]" or "safe".
    #[arg(long, global = true, default_value = "empirical")]
    pub lambda: String,

    /// Packaged reproduction suites: "table1" (with anumber) or
    /// "dp1sequence" (with formula).
    #[arg(long, global = true, value_parser = ["table1", "dp1sequence"])]
    pub preset: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Closed-form a-number value with cutoff parameters and error bound.
    Formula {
        /// Prime (required unless a preset supplies it).
        #[arg(short)]
        p: Option<u64>,
        /// Ramification invariant (required unless a preset supplies it).
        #[arg(short)]
        d: Option<u64>,
        #[arg(short, default_value_t = 1)]
        r: u64,
        #[arg(short, default_value_t = 1)]
        n: u32,
    },
    /// Higher a-numbers of a tower by exact Cartier kernel computation.
    Anumber {
        /// Tower spec file (optional when --preset is given).
        specfile: Option<PathBuf>,
        #[arg(short)]
        n: Option<usize>,
        /// Largest Cartier iterate to report.
        #[arg(short, default_value_t = 1)]
        r: u32,
    },
    /// T-adic Newton polygon of the Fredholm determinant against HP(d).
    Newton {
        specfile: PathBuf,
        #[arg(short)]
        n: Option<usize>,
        /// Nuclear matrix truncation size (default: large enough to certify
        /// the polygon up to T-valuation p^n).
        #[arg(short)]
        t: Option<usize>,
        /// s-degree for the Euler-product agreement check.
        #[arg(short = 'D', default_value_t = 3)]
        s_degree: u32,
        /// Euler factor convention.
        #[arg(long, default_value = "inverted-geometric",
              value_parser = ["inverted-geometric", "inverted", "plain-geometric", "plain"])]
        convention: String,
    },
    /// Character values and truncated L-series data.
    Lfunction {
        specfile: PathBuf,
        #[arg(short)]
        n: Option<usize>,
        #[arg(short = 'D', default_value_t = 3)]
        s_degree: u32,
        #[arg(short)]
        t: Option<usize>,
        #[arg(long, default_value = "inverted-geometric",
              value_parser = ["inverted-geometric", "inverted", "plain-geometric", "plain"])]
        convention: String,
    },
    /// Structural verification suites (exit 1 on any failure).
    Verify {
        specfile: PathBuf,
        #[arg(short)]
        n: Option<usize>,
        #[arg(long, default_value = "all",
              value_parser = ["taunit", "triangular", "trace", "module", "all"])]
        suite: String,
    },
}

fn main() -> ExitCode {
    // Raising the level cap is an explicit opt-in: Witt carries blow up
    // quickly past length 3.
    if let Ok(cap) = std::env::var("ASW_MAX_LEVEL") {
        if let Ok(cap) = cap.parse::<usize>() {
            asw::witt::set_level_cap(cap);
        }
    }
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                asw::Error::InvalidParams(_)
                | asw::Error::SpecViolation(_)
                | asw::Error::Parse(_)
                | asw::Error::Mismatch(_)
                | asw::Error::Truncation(_) => 2u8,
                _ => 1u8,
            };
            ExitCode::from(code)
        }
    }
}
