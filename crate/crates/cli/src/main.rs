//! `conspace`: sizes, relations and audits for concept-space files.

mod commands;
mod expected;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Exit codes.
const EXIT_VALIDATION: u8 = 1;
const EXIT_TOLERANCE: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "conspace",
    version,
    about = "Fuzzy concepts in conceptual spaces"
)]
pub struct Cli {
    /// Concept-space file (JSON).
    #[arg(long, global = true)]
    pub space: Option<PathBuf>,

    /// Uniform α levels used by betweenness.
    #[arg(long, global = true, default_value_t = 101,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub alpha_levels: u32,

    /// Monte-Carlo samples; accepts forms like `1e6`.
    #[arg(long = "mc-samples", visible_alias = "samples", global = true,
          default_value = "1e6", value_parser = parse_count)]
    pub mc_samples: u64,

    /// Seed for every random stream; decimal or 0x-prefixed hex.
    #[arg(long, global = true, default_value = "0x5EED", value_parser = parse_seed)]
    pub seed: u64,

    /// Parameters used to compare sizes or measure betweenness.
    /// Defaults: `second` for sub/impl/sims, `uniform` for betweenness.
    #[arg(long, global = true, value_enum)]
    pub context: Option<ContextArg>,

    /// Numerator of Sub when the cores are disjoint.
    #[arg(long, global = true, value_enum, default_value_t = DisjointArg::MaxMin)]
    pub disjoint: DisjointArg,

    /// How the Jaccard similarity measures the union.
    #[arg(long, global = true, value_enum, default_value_t = UnionArg::Unification)]
    pub union: UnionArg,

    /// Expected-values file to diff `table` against.
    #[arg(long, global = true)]
    pub expected: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a space file; print one line per concept.
    Validate,
    /// Concept sizes (all concepts when none are named).
    Size { concepts: Vec<String> },
    /// One relation between named concepts.
    Relate {
        #[arg(value_enum)]
        relation: Relation,
        concepts: Vec<String>,
    },
    /// Size/subsethood/similarity and betweenness tables.
    Table,
    /// Audit closed forms against brute-force references.
    Oracle {
        /// Hyperball identities and hit counting (no space needed).
        #[arg(long)]
        hyperball: bool,
        /// Re-run betweenness with a denser α grid and more candidates.
        #[arg(long)]
        betweenness_dense: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Relation {
    Sub,
    Impl,
    Sims,
    Simj,
    Between,
    BetweenSoft,
    BetweenInt,
    CrispSub,
    CrispBetween,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ContextArg {
    Second,
    Uniform,
    First,
    /// Betweenness only: mean of the three concepts' weights.
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DisjointArg {
    MaxMin,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnionArg {
    Unification,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return if n > 0 {
            Ok(n)
        } else {
            Err("must be positive".into())
        };
    }
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v >= 1.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(format!("`{s}` is not a positive integer"))
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("`{s}`: {e}"))
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    Validation(anyhow::Error),
    Usage(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Validation(e)
    }
}

impl From<concept_space::Error> for Failure {
    fn from(e: concept_space::Error) -> Self {
        Failure::Validation(e.into())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            let text = match cli.format {
                Format::Tsv => outcome.report.tsv(),
                Format::Json => outcome.report.json() + "\n",
            };
            print!("{text}");
            if outcome.within_tolerance {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_TOLERANCE)
            }
        }
        Err(Failure::Validation(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_seeds() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("250"), Ok(250));
        assert!(parse_count("0").is_err());
        assert!(parse_count("1.5").is_err());
        assert_eq!(parse_seed("0x5EED"), Ok(24301));
        assert_eq!(parse_seed("7"), Ok(7));
        assert!(parse_seed("seven").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
