use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "junta-forge",
    version,
    about = "Junta approximation and exact verification for shifted set families"
)]
pub struct Cli {
    /// Emit CSV instead of JSON reports.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Directory for reports and generated artifacts.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Wall-clock allowance in seconds for exhaustive searches.
    #[arg(long, global = true, value_name = "SECONDS")]
    pub budget: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a property of one or more family files.
    Check(CheckArgs),
    /// Extract juntas from family files.
    Extract(ExtractArgs),
    /// Generate families from a named construction.
    Gen(GenArgs),
    /// Run a named verification sweep.
    VerifyTheorem(VerifyArgs),
    /// Re-render stored reports; exits 1 if any contains a failure.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Shifted,
    CrossT,
    CrossDependent,
    CrossUnion,
    CrossAgreeing,
    Hitting,
    Dichotomy,
    Lemcross,
    Lemshift,
    Lemhls,
    Bt,
}

#[derive(Debug, Args)]
pub struct HittingArgs {
    /// Weights, comma separated rationals (default: all 1).
    #[arg(long, value_name = "LIST")]
    pub alpha: Option<String>,
    /// Offset q (a rational for hitting systems, an integer for cross-union).
    #[arg(long)]
    pub q: Option<String>,
    /// Levels at which the hyperplane may be hit (default: all of [n]).
    #[arg(long, value_name = "LIST")]
    pub levels: Option<String>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub property: Property,
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Intersection size t (also t′ for dichotomy/lemcross, shadow level for bt).
    #[arg(long)]
    pub t: Option<usize>,
    /// Prefix length for lemshift.
    #[arg(long)]
    pub s: Option<usize>,
    #[command(flatten)]
    pub hitting: HittingArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExtractMode {
    Pair,
    PairCor,
    Hitting,
    Biased,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    I,
    Ii,
    Iii,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(value_enum)]
    pub mode: ExtractMode,
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long)]
    pub t: Option<usize>,
    /// Residual exponent r (a rational in hitting and biased modes).
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
    #[arg(long)]
    pub eps: Option<String>,
    /// Logarithm base C for regime (iii): a rational >= 2 or `e`.
    #[arg(long)]
    pub bigc: Option<String>,
    /// Biases p_i for biased mode, comma separated.
    #[arg(long, value_name = "LIST")]
    pub p: Option<String>,
    /// Skip the hypothesis checks on the inputs.
    #[arg(long)]
    pub no_hypothesis_check: bool,
    #[command(flatten)]
    pub hitting: HittingArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    RandomShifted,
    CrossTPair,
    CrossDependent,
    RandomCrossDependent,
    CrossUnion,
    CrossAgreeing,
    Hitting,
    EmcExtremal,
    Threshold,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub construction: Construction,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Uniformity of the second family of a cross-t pair (default: k).
    #[arg(long)]
    pub kb: Option<usize>,
    /// Per-family uniformities, comma separated (`*` for arbitrary sets).
    #[arg(long, value_name = "LIST")]
    pub ks: Option<String>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random draws per family.
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
    #[command(flatten)]
    pub hitting: HittingArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub name: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub instances: Option<usize>,
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub xmax: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

/// The kebab-case name clap accepts for `c`.
pub fn construction_name(c: Construction) -> &'static str {
    match c {
        Construction::RandomShifted => "random-shifted",
        Construction::CrossTPair => "cross-t-pair",
        Construction::CrossDependent => "cross-dependent",
        Construction::RandomCrossDependent => "random-cross-dependent",
        Construction::CrossUnion => "cross-union",
        Construction::CrossAgreeing => "cross-agreeing",
        Construction::Hitting => "hitting",
        Construction::EmcExtremal => "emc-extremal",
        Construction::Threshold => "threshold",
    }
}
