mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::CliError;

/// Count and enumerate topologies on finite sets, compute fixed-point
/// counts under prime-cycle actions, resolve k(n) directly and by CRT, and
/// verify the congruence identities these quantities satisfy.
#[derive(Parser)]
#[command(name = "topocount", version, about)]
pub(crate) struct Cli {
    /// Path of the persistent result cache.
    #[arg(long, global = true, default_value = "./topocount-cache.json")]
    pub(crate) cache: PathBuf,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub(crate) format: Format,

    /// Worker threads for the enumeration engines. Results are identical
    /// for every value.
    #[arg(long, global = true, default_value_t = 1)]
    pub(crate) jobs: usize,

    #[command(subcommand)]
    pub(crate) command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum KindArg {
    #[value(name = "T", alias = "t")]
    T,
    #[value(name = "T0", alias = "t0")]
    T0,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum MethodArg {
    Auto,
    Naive,
    Backtrack,
    Partition,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum KnMethodArg {
    Direct,
    Crt,
    Both,
}

#[derive(Subcommand)]
pub(crate) enum Command {
    /// Count topologies (T) or T0 topologies (T0) on n points.
    Count(CountArgs),
    /// Count the topologies on p + n points invariant under a p-cycle that
    /// fixes the other n points.
    Fixed(FixedArgs),
    /// Compute k(n), the prime-independent residue of T(p + n) mod p.
    Kn(KnArgs),
    /// Check the congruence identities instance by instance.
    Verify(VerifyArgs),
    /// Inspect or reset the result cache.
    Cache(CacheArgs),
}

#[derive(Args)]
pub(crate) struct CountArgs {
    /// Which sequence to count.
    #[arg(long, value_enum)]
    pub(crate) kind: KindArg,
    /// Ground-set size.
    #[arg(long)]
    pub(crate) n: usize,
    /// Counting engine. `auto` serves warm cache entries and otherwise
    /// picks the cheapest engine in reach; naming an engine forces a
    /// recomputation.
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub(crate) method: MethodArg,
}

#[derive(Args)]
pub(crate) struct FixedArgs {
    /// Prime cycle length.
    #[arg(long)]
    pub(crate) p: usize,
    /// Number of points the cycle leaves fixed.
    #[arg(long)]
    pub(crate) n: usize,
    /// Restrict to T0 topologies.
    #[arg(long)]
    pub(crate) t0: bool,
}

#[derive(Args)]
pub(crate) struct KnArgs {
    #[arg(long)]
    pub(crate) n: usize,
    /// `direct` counts invariant topologies, `crt` solves the residue
    /// system, `both` cross-checks them.
    #[arg(long, value_enum, default_value_t = KnMethodArg::Both)]
    pub(crate) method: KnMethodArg,
    /// Primes for the crt route (comma separated); defaults to every prime
    /// within enumeration reach.
    #[arg(long, value_delimiter = ',')]
    pub(crate) primes: Option<Vec<usize>>,
}

#[derive(Args)]
pub(crate) struct VerifyArgs {
    /// One of: tpk, t0_shift, t0_pk, t0_fix_equality, bounds, k_match.
    #[arg(long, conflicts_with = "all")]
    pub(crate) theorem: Option<String>,
    /// Run every verifier.
    #[arg(long)]
    pub(crate) all: bool,
}

#[derive(Args)]
pub(crate) struct CacheArgs {
    #[command(subcommand)]
    pub(crate) action: CacheAction,
}

#[derive(Subcommand)]
pub(crate) enum CacheAction {
    /// Print the cache contents.
    Show,
    /// Delete the cache file.
    Clear,
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes (e.g. `topocount kn .. | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::OutOfRange(_) => ExitCode::from(2),
            CliError::Cache(_) => ExitCode::from(3),
            CliError::MethodDisagreement(_) => ExitCode::from(4),
        }
    }
}
