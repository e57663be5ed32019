mod commands;
mod config;
mod literal;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::Config;

/// Exact decoupling exponents, induction matrices, rank certificates and
/// solution counts for moment manifolds.
#[derive(Debug, Parser)]
#[command(name = "decoupling", version)]
struct Cli {
    /// TOML file with one table per subcommand; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decoupling exponents of a set at one or more p.
    Exponents(ExponentsArgs),
    /// The induction matrix, its fixed vector and the identity residuals.
    Matrix(MatrixArgs),
    /// Generic-rank certificates for the tangent-space matrices.
    Transversality(TransversalityArgs),
    /// Solution counts J_s(X) and their growth rate.
    Count(CountArgs),
    /// Bounded exhaustive checks across all modules.
    Audit(AuditArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct SetArgs {
    /// Box literal, e.g. "box d=2 k=[1,3] deg<=3".
    #[arg(long = "box", conflicts_with = "set")]
    pub box_literal: Option<String>,
    /// Explicit literal, e.g. "set d=2 {(1,0),(0,1)}".
    #[arg(long)]
    pub set: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExponentsArgs {
    #[command(flatten)]
    pub target: SetArgs,
    /// Comma-separated exponents p >= 2, e.g. "4,8/3".
    #[arg(long)]
    pub p: Option<String>,
    /// Include the recursion trace.
    #[arg(long)]
    pub trace: bool,
    /// Run the worked-example regression table instead of a query.
    #[arg(long)]
    pub paper_examples: bool,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub target: SetArgs,
    /// Exponent used for the q/t scale exponents (the matrix itself does not depend on it).
    #[arg(long)]
    pub p: Option<String>,
    /// json or table.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct TransversalityArgs {
    #[command(subcommand)]
    pub action: Option<TransversalityAction>,
    #[command(flatten)]
    pub target: SetArgs,
    /// Derivative order l.
    #[arg(long)]
    pub l: Option<u32>,
    /// JSON file with integer basis rows; defaults to the full space.
    #[arg(long)]
    pub subspace: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum TransversalityAction {
    /// Rank bound and combinatorial checks over all small boxes.
    AuditExhaustive(ExhaustiveArgs),
}

#[derive(Debug, Args)]
pub struct ExhaustiveArgs {
    #[arg(long)]
    pub max_d: Option<usize>,
    #[arg(long)]
    pub max_cap: Option<u32>,
    /// Largest degree cap k of the boxes.
    #[arg(long)]
    pub max_degree: Option<u32>,
    /// Seeded random subspaces per box and order.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub target: SetArgs,
    /// Tuple length s.
    #[arg(long)]
    pub s: Option<u32>,
    /// Comma-separated box sizes X.
    #[arg(long = "X")]
    pub x: Option<String>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Abort before building a table estimated above this size.
    #[arg(long)]
    pub mem_cap_bytes: Option<u64>,
    /// Write the table for the largest X to this file.
    #[arg(long)]
    pub dump_table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long)]
    pub max_d: Option<usize>,
    #[arg(long)]
    pub max_cap: Option<u32>,
    #[arg(long)]
    pub max_degree: Option<u32>,
    /// Comma-separated exponents, each >= 2.
    #[arg(long)]
    pub p_grid: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated subset of exponents,matrix,transversality,count.
    #[arg(long)]
    pub suites: Option<String>,
}

fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<bool> {
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Exponents(a) => commands::exponents(a, &config.exponents, out),
        Command::Matrix(a) => commands::matrix(a, &config.matrix, out),
        Command::Transversality(a) => commands::transversality(a, &config.transversality, out),
        Command::Count(a) => commands::count(a, &config.count, out),
        Command::Audit(a) => commands::audit(a, &config.audit, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{first}");
            return ExitCode::from(2);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
