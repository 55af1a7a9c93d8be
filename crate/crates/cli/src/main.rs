//! `lapseq`: command-line front end for the sequence transform library.
//!
//! Exit codes: 0 success, 1 computation error, 2 usage error, 3 a
//! verification check came out false.

mod commands;
mod output;
mod parse;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use commands::{Outcome, UsageError};

#[derive(Parser, Debug)]
#[command(name = "lapseq", version, about = "Laplace-type sequence transforms, inversions and recurrence solving")]
pub struct Cli {
    /// Output document format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Tolerance override; must be positive.
    #[arg(long, global = true, value_parser = parse::positive)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Forward images φ_0(s)..φ_N(s) by quadrature, with the closed form when known.
    #[command(allow_negative_numbers = true)]
    Transform(TransformArgs),
    /// Fourier–Laguerre coefficients from the image, with reconstruction error.
    #[command(allow_negative_numbers = true)]
    InvertLaguerre(LaguerreArgs),
    /// Exact inverse of a rational image by residues.
    #[command(allow_negative_numbers = true)]
    InvertResidue(ResidueArgs),
    /// Exact backward-difference operations on a rational sequence.
    #[command(allow_negative_numbers = true)]
    Nabla(NablaArgs),
    /// Closed-form solution of a constant-coefficient linear recurrence.
    #[command(allow_negative_numbers = true)]
    SolveDiffeq(DiffeqArgs),
    /// Check a worked mapped-equation example.
    VerifyMapped(MappedArgs),
    /// Hurwitz zeta by Euler–Maclaurin and by its integral representation.
    #[command(allow_negative_numbers = true)]
    Zeta(ZetaArgs),
    /// Exact sweeps of the combinatorial identities.
    VerifyIdentities(IdentityArgs),
    /// Print the table of elementary images.
    Table,
    /// Run the acceptance-criteria battery.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FnName {
    Const,
    Exp,
    Power,
    PowerExp,
    Sin,
    Cos,
    Log,
    OneOverOneMinusExpNeg,
    CustomTableRow,
}

/// A source function chosen from the built-in vocabulary.
#[derive(Args, Debug, Clone)]
pub struct FunctionArgs {
    #[arg(long = "fn", value_enum)]
    pub function: FnName,
    /// First parameter (rate, exponent or constant).
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Second parameter (decay of power-exp).
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Row name for `--fn custom-table-row` (see `lapseq table`).
    #[arg(long)]
    pub row: Option<String>,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct LaguerreArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Points at which to reconstruct the function.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub x: Vec<f64>,
}

#[derive(Args, Debug)]
pub struct ResidueArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Index of the image used for the inversion.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NablaOp {
    /// ∇_s^p φ_n for n ≥ p.
    Power,
    /// Recover φ_{n-p} from the differences.
    Unshift,
    /// Image of f^(p), using --init for the low indices.
    Derivative,
}

#[derive(Args, Debug)]
pub struct NablaArgs {
    /// Sequence φ_0, φ_1, ... as rationals.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse::rational, required = true)]
    pub values: Vec<BigRational>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse::rational)]
    pub s: BigRational,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, value_enum, default_value_t = NablaOp::Power)]
    pub op: NablaOp,
    /// f(0), f'(0), ... for `--op derivative`.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse::rational)]
    pub init: Vec<BigRational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Transform,
    Direct,
}

#[derive(Args, Debug)]
pub struct DiffeqArgs {
    /// a_0, ..., a_p of Σ a_k f_{n-k} = g_n.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse::rational, required = true)]
    pub coeffs: Vec<BigRational>,
    /// f_0, ..., f_{p-1}.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse::rational)]
    pub init: Vec<BigRational>,
    /// Explicit right-hand side g_0, g_1, ...
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse::rational, conflicts_with = "geometric")]
    pub rhs: Vec<BigRational>,
    /// Geometric right-hand side `c,r` meaning g_n = c r^n.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse::rational, num_args = 1)]
    pub geometric: Vec<BigRational>,
    /// Horizon of the residual check.
    #[arg(long, default_value_t = lapseq::diffeq::DEFAULT_N_CHECK)]
    pub check: usize,
    #[arg(long, value_enum, default_value_t = Route::Transform)]
    pub route: Route,
}

#[derive(Args, Debug)]
pub struct MappedArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(4..=6))]
    pub case: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    /// Divide the k-th term by k!.
    K,
    /// Divide the k-th term by (k-1)!.
    KMinusOne,
}

#[derive(Args, Debug)]
pub struct ZetaArgs {
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Also report this many partial sums of the Bernoulli-polynomial series.
    #[arg(long)]
    pub bernoulli_terms: Option<usize>,
    #[arg(long, value_enum, default_value_t = Variant::KMinusOne)]
    pub variant: Variant,
}

#[derive(Args, Debug)]
pub struct IdentityArgs {
    /// 1, 2, 3, laguerre, bonnet, table or all.
    #[arg(long, default_value = "all")]
    pub which: String,
    /// Sweep bound; defaults to each identity's full range.
    #[arg(long)]
    pub max_m: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    TableCoefficient,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    #[arg(long, value_enum, default_value_t = ProfileArg::Full)]
    pub profile: ProfileArg,
    /// Deliberately break one ingredient to confirm the battery notices.
    #[arg(long, value_enum)]
    pub inject_fault: Option<FaultArg>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("usage error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot start {jobs} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(outcome) => emit(&cli, outcome),
        Err(commands::Failure::Usage(UsageError(msg))) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(cli: &Cli, outcome: Outcome) -> ExitCode {
    let text = match cli.format {
        Format::Json => output::to_json(&outcome.document),
        Format::Csv => outcome.csv,
        Format::Text => outcome.text,
    };
    print!("{text}");
    if outcome.verified {
        ExitCode::SUCCESS
    } else {
        if let Some(reason) = outcome.failure {
            eprintln!("verification failed: {reason}");
        }
        ExitCode::from(3)
    }
}
