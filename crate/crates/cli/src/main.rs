mod commands;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use latsym::Error;

#[derive(Parser, Debug)]
#[command(name = "latsym", version, about = "Exact isospectral reductions and latent symmetries of finite Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Exact R_S(H) over the site set, poles and nonlinear spectrum.
    Reduce,
    /// Latent permutation group over the site set.
    Latent,
    /// Degeneracy predictions from the latent group and their verification.
    Degeneracy,
    /// Generalized exchange symmetry for a cospectral pair.
    Ges,
    /// Complement multiplets of the site set.
    Multiplets,
    /// Couple a new site to multiplets and certify the reduction shift.
    Extend,
    /// Run every self-check on one input.
    Verify,
    /// Run one analysis over every graph file in a directory.
    Batch,
    /// Print or write a built-in fixture as a graph file.
    Fixture,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Data,
    Latex,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Options {
    /// Graph file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Built-in fixture instead of a file, e.g. `triangle`, `ring:6`, `latent-d3:7`.
    #[arg(long, global = true)]
    pub fixture: Option<String>,
    /// One-based site set, e.g. `1,2,3`.
    #[arg(long, global = true)]
    pub sites: Option<String>,
    /// One-based site pair for `ges`, e.g. `1,2`.
    #[arg(long, global = true)]
    pub pair: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Seed for the randomized relabelling checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_cluster: f64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_basis: f64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_ges: f64,
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub tol_commute: f64,
    #[arg(long, global = true, default_value_t = 10)]
    pub max_latent_sites: usize,
    #[arg(long, global = true, default_value_t = 12)]
    pub max_global_sites: usize,
    #[arg(long, global = true, default_value_t = 40_320)]
    pub max_group_order: usize,
    /// Largest multiplet size searched.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_size: usize,
    /// Decimal digits for floating-point matrices.
    #[arg(long, global = true, default_value_t = 6)]
    pub digits: usize,
    /// Extension plan file for `extend`.
    #[arg(long, global = true)]
    pub plan: Option<PathBuf>,
    /// Report destination; for `extend` and `fixture` the graph file written.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Input directory for `batch`.
    #[arg(long, global = true)]
    pub dir: Option<PathBuf>,
    /// Analysis run by `batch` on every input.
    #[arg(long, global = true, value_enum)]
    pub analysis: Option<Command>,
    /// Fixture name for `fixture` (same syntax as `--fixture`).
    #[arg(long, global = true)]
    pub name: Option<String>,
    /// Run searches and sweeps on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Leave wall-clock timings out of reports.
    #[arg(long, global = true)]
    pub no_timings: bool,
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Input(_) => 2,
        Error::Precondition(_) | Error::Bound(_) | Error::Pole { .. } => 3,
        Error::Numerical { .. } => 4,
    }
}

fn init_threads() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var("LATSYM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // fails only if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match commands::run(cli.command, &cli.opts) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("latsym: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
