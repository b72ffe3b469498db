mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "wmtc", version, about = "Modular data and lambda-brackets for affine and exceptional W-algebras")]
struct Cli {
    /// Worker threads for Weyl-group sums (0 = library default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Root-system data: Cartan matrix, positive roots, exponents, Weyl group order.
    Roots(RootsArgs),
    /// Label sets for the integrable, principal or subregular pipelines.
    Weights(WeightsArgs),
    /// Formal characters as exact q-series.
    Char(CharArgs),
    /// Unitary S-matrix as JSON.
    Smatrix(SmatrixArgs),
    /// Verlinde fusion rules from an S-matrix file.
    Fusion(FusionArgs),
    /// Lambda-brackets of a preset free-field algebra.
    Ope(OpeArgs),
    /// Runs the property suites and prints a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct RootsArgs {
    #[arg(long = "type")]
    pub cartan: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Integrable,
    Principal,
    Subregular,
}

#[derive(Args, Debug, Serialize)]
pub struct LevelArgs {
    /// Integrable level.
    #[arg(long, conflicts_with_all = ["p", "q"])]
    pub level: Option<i64>,
    /// Numerator of `k + h^vee = p/q`.
    #[arg(long, requires = "q")]
    pub p: Option<i64>,
    /// Denominator of `k + h^vee = p/q`.
    #[arg(long, requires = "p")]
    pub q: Option<i64>,
}

#[derive(Args, Debug, Serialize)]
pub struct WeightsArgs {
    #[arg(long = "type")]
    pub cartan: String,
    #[arg(long, value_enum, default_value = "principal")]
    pub variant: Variant,
    #[command(flatten)]
    pub level: LevelArgs,
    /// Distinguished simple root (0-based) or `auto`.
    #[arg(long, default_value = "auto")]
    pub alpha_star: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharKind {
    /// Vacuum (or `--weight`) module of the affine algebra.
    Affine,
    /// Generator-tower vacuum character of the principal W-algebra.
    WVacuum,
    /// Two-variable character of the principal sl2 BRST complex.
    Brst,
}

#[derive(Args, Debug, Serialize)]
pub struct CharArgs {
    #[arg(long = "type", default_value = "A1")]
    pub cartan: String,
    #[arg(long, value_enum, default_value = "affine")]
    pub kind: CharKind,
    #[command(flatten)]
    pub level: LevelArgs,
    /// Finite highest weight in Dynkin labels, comma separated (integrable only).
    #[arg(long)]
    pub weight: Option<String>,
    /// Last q-power kept (inclusive).
    #[arg(long, default_value_t = 10)]
    pub order: i64,
    /// Emit weight-indexed coefficients instead of the y = 1 specialization.
    #[arg(long)]
    pub two_var: bool,
    /// Specialize `e^mu -> y^{<mu, x>}` at the cocharacter `x` (comma-separated rationals).
    #[arg(long)]
    pub y_spec: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeArg {
    Default,
    Alt,
}

#[derive(Args, Debug, Serialize)]
pub struct SmatrixArgs {
    #[arg(long, value_enum, default_value = "integrable")]
    pub variant: Variant,
    #[arg(long = "type")]
    pub cartan: String,
    #[command(flatten)]
    pub level: LevelArgs,
    #[arg(long, default_value = "auto")]
    pub alpha_star: String,
    #[arg(long, value_enum, default_value = "default")]
    pub probe: ProbeArg,
    /// Resumable checkpoint for the subregular kernel sum.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Work chunks processed between checkpoint writes.
    #[arg(long, default_value_t = 64)]
    pub checkpoint_interval: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
pub struct FusionArgs {
    /// S-matrix JSON written by `smatrix`.
    #[arg(long)]
    pub from: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to the `--out` extension, else JSON.
    #[arg(long, value_enum)]
    pub format: Option<TableFormat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Heisenberg,
    Sugawara,
    FermionCurrent,
    BrstSl2,
}

#[derive(Args, Debug, Serialize)]
pub struct OpeArgs {
    #[arg(long, value_enum)]
    pub preset: Preset,
    #[arg(long = "type", default_value = "A1")]
    pub cartan: String,
    /// `name=value`, value a rational or a symbol, e.g. `k=k` or `k=3/2`.
    #[arg(long = "param")]
    pub params: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// Reduced instance sets.
    #[arg(long)]
    pub quick: bool,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if cli.threads > 0 {
        wmtc_core::par::set_threads(cli.threads);
    }
    match cli.command {
        Command::Roots(a) => commands::roots(&a),
        Command::Weights(a) => commands::weights(&a),
        Command::Char(a) => commands::character(&a),
        Command::Smatrix(a) => commands::smatrix(&a, cli.threads),
        Command::Fusion(a) => commands::fusion(&a),
        Command::Ope(a) => commands::ope(&a),
        Command::Verify(a) => verify::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let body = serde_json::json!({
                "error": { "kind": "validation", "exit_code": output::EXIT_VALIDATION, "message": e.to_string().trim() }
            });
            eprintln!("{body}");
            return ExitCode::from(output::EXIT_VALIDATION as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, body) = output::error_json(&e);
            eprintln!("{body}");
            ExitCode::from(code as u8)
        }
    }
}
