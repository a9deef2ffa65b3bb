//! `semfeat`: ontology-based similarity for features, terms and datasets.

mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semfeat_core::similarity::{DEFAULT_ALPHA, DEFAULT_BETA};
use semfeat_core::{Aggregator, Symmetrization};

use failure::{code, Failure};

#[derive(Debug, Parser)]
#[command(
    name = "semfeat",
    version,
    about = "Semantic similarity of annotated features and datasets"
)]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Ontology as a `child<TAB>parent` edge list.
    #[arg(
        long,
        global = true,
        value_name = "PATH",
        conflicts_with = "ontology_obo"
    )]
    pub ontology_edges: Option<PathBuf>,
    /// Ontology as an OBO file (`[Term]` stanzas, `is_a` edges only).
    #[arg(long, global = true, value_name = "PATH")]
    pub ontology_obo: Option<PathBuf>,
    /// Term labels as `id<TAB>label[<TAB>synonym]*`.
    #[arg(long, global = true, value_name = "PATH")]
    pub labels: Option<PathBuf>,
    /// Dataset annotation catalog (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub catalog: Option<PathBuf>,
    /// Ontology release recorded in outputs; defaults to the catalog's.
    #[arg(long, global = true, value_name = "TEXT")]
    pub ontology_version: Option<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_BETA)]
    pub beta: f64,
    #[arg(long, global = true, value_enum, default_value_t = SymArg::Mean)]
    pub symmetrize: SymArg,
    #[arg(long, global = true, value_enum, default_value_t = AggArg::Mean)]
    pub agg: AggArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Emit `1 - similarity` instead of similarity (matrix).
    #[arg(long, global = true)]
    pub distance: bool,
    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Limit the number of rows (terms, search).
    #[arg(long, global = true, value_name = "K")]
    pub top: Option<usize>,
    /// Include per-term best matches (doss).
    #[arg(long, global = true)]
    pub verbose: bool,
    /// Worker threads for parallel work; defaults to all cores.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse the ontology and report its size.
    Validate,
    /// Similarity between two terms.
    TermSim { t1: String, t2: String },
    /// Pairwise similarity of every annotated term in the catalog.
    Matrix,
    /// Directed similarity of dataset D1 against D2.
    Doss { d1: String, d2: String },
    /// Directed similarity between every pair of datasets.
    DossMatrix,
    /// Per-dataset annotation coverage.
    Stats,
    /// Most frequently annotated terms.
    Terms,
    /// Look up terms by label or synonym.
    Search { query: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SymArg {
    AsPrinted,
    Mean,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AggArg {
    Mean,
    Median,
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl From<SymArg> for Symmetrization {
    fn from(s: SymArg) -> Self {
        match s {
            SymArg::AsPrinted => Symmetrization::AsPrinted,
            SymArg::Mean => Symmetrization::MeanOfDirections,
        }
    }
}

impl From<AggArg> for Aggregator {
    fn from(a: AggArg) -> Self {
        match a {
            AggArg::Mean => Aggregator::Mean,
            AggArg::Median => Aggregator::Median,
            AggArg::Min => Aggregator::Min,
            AggArg::Max => Aggregator::Max,
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.opts.threads {
        Some(0) => Err(Failure::usage("--threads must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::usage(e.to_string()))?;
            pool.install(|| commands::dispatch(&cli))
        }
        None => commands::dispatch(&cli),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let status = if err.use_stderr() { code::USAGE } else { 0 };
            let _ = err.print();
            return ExitCode::from(status);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code)
        }
    }
}
