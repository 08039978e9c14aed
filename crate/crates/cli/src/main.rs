//! Command-line front end: compute, verify and tabulate KL and Z-polynomials
//! of Dowling geometries.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dowling_kl::GroupSpec;

#[derive(Parser, Debug)]
#[command(name = "dowling-kl", version, about = "Exact KL and Z-polynomials of Dowling geometries")]
pub struct Cli {
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, env = "DOWLING_KL_THREADS")]
    pub threads: Option<usize>,

    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// P and Z of one geometry Q_n(G).
    Pz(PzArgs),
    /// Scaled P for n = 1..max_n.
    Table(TableArgs),
    /// Cross-checks between independent computations.
    Verify(VerifyArgs),
    /// Real-rootedness, interlacing and total-positivity certificates.
    Roots(RootsArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

#[derive(Args, Debug)]
pub struct PzArgs {
    #[arg(long)]
    pub n: usize,
    /// Symbolic in q (the default when no group is given).
    #[arg(long, conflicts_with = "group")]
    pub symbolic: bool,
    /// Concrete group, `cyclic:m` or `sym:k`, via an explicit lattice.
    #[arg(long)]
    pub group: Option<GroupSpec>,
    /// Report P(t/q^2); symbolic only.
    #[arg(long)]
    pub scaled: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Upper bound on explicit lattice size.
    #[arg(long)]
    pub max_flats: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long)]
    pub max_n: usize,
    #[arg(long)]
    pub scaled: bool,
    /// Accepted for symmetry with `pz`; tables are always symbolic.
    #[arg(long)]
    pub symbolic: bool,
    #[arg(long, value_enum, default_value_t = Format::Latex)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Theorem1,
    Lattice,
    Genfun,
    Labelings,
    Leading,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub max_n: Option<usize>,
    #[arg(long)]
    pub max_m: Option<usize>,
    /// Groups for the lattice and labeling suites.
    #[arg(long, value_delimiter = ',')]
    pub groups: Vec<GroupSpec>,
}

#[derive(Args, Debug)]
pub struct RootsArgs {
    /// Check n = 1..max_n (pairs up to (max_n, max_n - 1)).
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Sample values of q.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1i64, 2, 3, 4, 5])]
    pub q: Vec<i64>,
    /// Sturm real-rootedness of P and Z.
    #[arg(long)]
    pub sturm: bool,
    /// Positive definiteness of consecutive Bezoutians at each q.
    #[arg(long)]
    pub interlace: bool,
    /// Symbolic total-positivity certificates of consecutive Bezoutians.
    #[arg(long)]
    pub tp: bool,
    /// A single pair such as `P6,P5` or `Z4,Z3`.
    #[arg(long)]
    pub pair: Option<String>,
    /// With `--pair`: print the symbolic matrix and certificate.
    #[arg(long)]
    pub symbolic: bool,
    /// Integer coefficients, ascending, of a polynomial to test with Sturm.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
