mod commands;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use conftc::Coefficients;

/// Exact cohomology, TC certificates and moving-obstacle reduction for
/// configuration spaces of Euclidean space.
#[derive(Parser, Debug)]
#[command(name = "conftc", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Ambient dimension m.
    #[arg(long, global = true)]
    pub m: Option<u32>,
    /// Number of robots n.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Number of stationary obstacles p.
    #[arg(long, global = true, default_value_t = 0)]
    pub p: u32,
    /// Number of stages s.
    #[arg(long, global = true, default_value_t = 2)]
    pub s: u32,
    /// Coefficients: integers (z) or mod2 (z2); defaults from the parity of m.
    #[arg(long, global = true)]
    pub coeff: Option<Coefficients>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Override the round-trip/commutation tolerance of the numeric commands.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the normal form of an expression (slotted atoms live in the s-fold tensor power).
    Reduce { expr: String },
    /// List basis monomials.
    Basis {
        /// Only monomials with this many factors.
        #[arg(long, conflicts_with = "degree")]
        factors: Option<usize>,
        /// Only monomials of this cohomological degree (a multiple of m-1).
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Closed-form TC_s with the matching case of the table.
    Tc,
    /// Lusternik-Schnirelmann category.
    Cat,
    /// Build and verify a certificate: pi, mu_s, w_s, nu_s or pi_punctured.
    Certify {
        kind: String,
        /// Write the record to this directory as a regression fixture.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Exhaustive zero-divisor cup-length search over degree-(m-1) factors.
    Zcl {
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Build the isotopy for an instance file and report its diagnostics.
    Isotopy { file: PathBuf },
    /// Plan a path around moving obstacles for an instance file.
    Plan { file: PathBuf },
}

/// A check that ran and failed; exits with status 1.
#[derive(Debug)]
pub struct Failure(pub String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for Failure {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match &cli.command {
        Command::Reduce { expr } => commands::reduce(g, expr),
        Command::Basis { factors, degree } => commands::basis(g, *factors, *degree),
        Command::Tc => commands::tc(g),
        Command::Cat => commands::cat(g),
        Command::Certify { kind, golden } => commands::certify(g, kind, golden.as_deref()),
        Command::Zcl { max_len } => commands::zcl(g, *max_len),
        Command::Isotopy { file } => commands::isotopy(g, file),
        Command::Plan { file } => commands::plan(g, file),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<Failure>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
