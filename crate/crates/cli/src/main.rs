//! Single entry point wiring the library into reproducible file-based
//! pipelines. Every report embeds the producing config hash and seed.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use error::CliError;

#[derive(Parser)]
#[command(name = "rarekg", version, about = "Knowledge-graph pipelines for rare disease diagnosis evaluation")]
struct Cli {
    /// Run configuration file (JSON). Flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Global random seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory override.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Evaluate even when some cases cannot be scored.
    #[arg(long, global = true)]
    allow_unevaluable: bool,

    /// Replay cache file; satisfies remote lookups without network I/O.
    #[arg(long, global = true)]
    replay: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the knowledge graph snapshot and validation report.
    Build,
    /// Rank candidate diseases for each case.
    Rank {
        /// "base-ic" or "bidirectional"
        #[arg(long, default_value = "base-ic")]
        method: String,
        /// Number of ranked diagnoses to keep per case.
        #[arg(long, default_value_t = 20)]
        k: usize,
    },
    /// Retrieve a ranked disease context block for a phenotype set.
    Retrieve {
        /// Query phenotype ids (repeatable), e.g. HP:0001250.
        #[arg(long = "phenotype", required = true)]
        phenotypes: Vec<String>,
        #[arg(long, default_value_t = 20)]
        k: usize,
        /// Disable descendant propagation when matching query terms.
        #[arg(long)]
        exact: bool,
    },
    /// Generate synthetic phenotype-only cases for a disease.
    Simulate {
        /// Target disease id, e.g. ORPHA:905.
        #[arg(long)]
        disease: String,
        /// Number of cases; seeds are seed, seed+1, ...
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Slice cases incrementally or by single-field ablation.
    Slice {
        /// "incremental" or "ablation"
        #[arg(long)]
        mode: String,
    },
    /// Score model prediction lists against confirmed diagnoses.
    Eval,
    /// Composite difficulty and key-phenotype tiers for a cohort.
    Difficulty,
    /// Aggregate eight-dimension diagnostic-quality scorecards.
    Finder {
        /// Scorecards file (JSON array).
        #[arg(long)]
        scorecards: PathBuf,
    },
    /// Fit the global linear surrogate on a prepared design matrix.
    Surrogate {
        /// Design file: {features, rows, response}.
        #[arg(long)]
        design: PathBuf,
    },
    /// Split case features into ontology-mappable and not.
    Evidence {
        /// Features file: array of {case_id, features}.
        #[arg(long)]
        features: PathBuf,
    },
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.out_dir = out.clone();
    }

    match &cli.command {
        Command::Build => commands::cmd_build(&config),
        Command::Rank { method, k } => commands::cmd_rank(&config, method, *k),
        Command::Retrieve {
            phenotypes,
            k,
            exact,
        } => commands::cmd_retrieve(&config, phenotypes, *k, *exact),
        Command::Simulate { disease, count } => commands::cmd_simulate(&config, disease, *count),
        Command::Slice { mode } => commands::cmd_slice(&config, mode),
        Command::Eval => commands::cmd_eval(
            &config,
            cli.allow_unevaluable,
            cli.replay.as_deref(),
        ),
        Command::Difficulty => commands::cmd_difficulty(&config),
        Command::Finder { scorecards } => commands::cmd_finder(&config, scorecards),
        Command::Surrogate { design } => commands::cmd_surrogate(&config, design),
        Command::Evidence { features } => commands::cmd_evidence(&config, features),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // Machine-readable error record on stderr alongside the
            // human-readable message.
            eprintln!("error: {e}");
            let record = serde_json::json!({
                "error": e.to_string(),
                "exit_code": e.exit_code(),
            });
            eprintln!("{record}");
            ExitCode::from(e.exit_code())
        }
    }
}
