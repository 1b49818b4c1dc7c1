//! `qnull`: construct, verify and search subspace null designs over GF(q).
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error.

mod commands;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qnull", version, about = "Subspace null designs over GF(q)")]
pub struct Cli {
    /// Emit machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for verification and searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the k-dimensional subspaces of GF(q)^n in canonical order.
    Enumerate {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Build the Wilson matrix W_{q;t,k} in coordinate form.
    Wilson {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build one of the explicit null designs.
    Construct {
        #[arg(long, value_enum)]
        kind: DesignKind,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        /// Uniform dimension (uniform designs only).
        #[arg(long)]
        k: Option<usize>,
        /// Coefficient modulus (lower-bound designs only; default p).
        #[arg(long)]
        r: Option<u32>,
        /// Use a random flag u < v < w drawn from this seed instead of the standard one.
        #[arg(long)]
        chain_seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a design file is null of strength T over Z_R.
    Verify {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        t: usize,
        /// Coefficient modulus (default p).
        #[arg(long)]
        r: Option<u32>,
    },
    /// Largest strength at which a design file is null.
    Strength {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        t_max: Option<usize>,
        #[arg(long)]
        r: Option<u32>,
    },
    /// Rank of a coordinate-form matrix over GF(p) or Q.
    Rank {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum)]
        over: Over,
        #[arg(long)]
        p: Option<u32>,
    },
    /// Minimum weight of a nonzero kernel vector over GF(p).
    Minweight {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        cap: usize,
        #[arg(long, value_enum, default_value = "support")]
        mode: Mode,
        /// Seed for the randomized mode.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Information sets tried by the randomized mode.
        #[arg(long, default_value_t = 200)]
        iterations: u32,
    },
    /// Minimum support of a nonzero kernel vector over Q.
    Minsupport {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        cap: usize,
    },
    /// Run the full reproduction grid and report PASS/FAIL per check.
    Reproduce {
        /// Keep only rows carrying one of these tags (e.g. q2, binmin, uniform) or id prefixes.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Also run the slow checks.
        #[arg(long)]
        extended: bool,
        /// Corrupt one matrix (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DesignKind {
    Lb,
    Uniform,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Over {
    Gf,
    Q,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Kernel,
    Support,
    Randomized,
}

/// How a command ended, mapped onto the exit code contract.
pub enum Outcome {
    Ok,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    match commands::run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
