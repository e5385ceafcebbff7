//! `mteval`: build benchmarks, train subword tokenizers, score hypotheses,
//! and validate benchmark directories from one binary.
//!
//! Exit codes: 0 on success (including `--help`/`--version`), 1 on usage
//! errors (bad flags or config file), 2 on data errors (unreadable inputs,
//! failed validation). Diagnostics go to stderr; data goes to stdout or to
//! the files a subcommand writes.
//!
//! Configuration precedence is flags > `--config` file > built-in defaults.
//! The registry default can also come from the `MTEVAL_REGISTRY` environment
//! variable (weaker than both). Subcommands that write files also write an
//! audit JSON next to their output recording every effective value, so a
//! build or training run can be reproduced from its artifacts alone.

mod commands;
mod context;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::context::{CliError, Context};

#[derive(Parser)]
#[command(
    name = "mteval",
    version,
    about = "Machine-translation benchmark and metric toolkit"
)]
struct Cli {
    /// Language registry TSV (default: bundled registry, or $MTEVAL_REGISTRY).
    #[arg(long, global = true)]
    registry: Option<PathBuf>,

    /// Language-sets TSV accompanying --registry.
    #[arg(long, global = true)]
    sets_file: Option<PathBuf>,

    /// JSON file supplying defaults for flags (explicit flags win).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a benchmark directory from a corpus manifest.
    BuildBenchmark(BuildBenchmarkArgs),
    /// Train a subword model from monolingual sources.
    TrainTokenizer(TrainTokenizerArgs),
    /// Score one hypothesis file against one reference file.
    Score(ScoreArgs),
    /// Score a run directory over a benchmark and render the category table.
    Report(ReportArgs),
    /// Check a benchmark directory against the format's invariants.
    Validate(ValidateArgs),
}

#[derive(clap::Args)]
struct BuildBenchmarkArgs {
    /// Corpus manifest TSV (source_name, path, format, src, tgt, tier,
    /// official_splits). Relative corpus paths resolve against it.
    #[arg(long)]
    manifest: PathBuf,

    /// Output directory; created if missing.
    #[arg(long)]
    out: PathBuf,

    /// Build seed (default 0).
    #[arg(long)]
    seed: Option<u64>,

    /// Per-split caps as train,dev,test (default 5000,50,200).
    #[arg(long)]
    caps: Option<String>,

    /// Split ratios as train,dev,test for corpora without official splits
    /// (default 0.8,0.1,0.1).
    #[arg(long)]
    ratios: Option<String>,

    /// Quality tiers to keep, comma-separated (default gold,human).
    #[arg(long)]
    tiers: Option<String>,

    /// Pairs with fewer total examples than this share all examples across
    /// both directions instead of splitting them (default 1000).
    #[arg(long)]
    scarce_threshold: Option<usize>,
}

#[derive(clap::Args)]
struct TrainTokenizerArgs {
    /// Monolingual sources TSV: one `lang<TAB>path` row per language.
    /// Relative paths resolve against it.
    #[arg(long)]
    manifest: PathBuf,

    /// Output model file; an audit JSON is written beside it.
    #[arg(long)]
    out: PathBuf,

    /// Sampling temperature (default 0.3).
    #[arg(long)]
    alpha: Option<f64>,

    /// Maximum vocabulary size (default 250000).
    #[arg(long)]
    vocab_size: Option<usize>,

    /// Lines to sample for training (default: total lines across sources).
    #[arg(long)]
    budget: Option<usize>,

    /// Sampling seed (default 0).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricKind {
    Bleu,
    Spbleu,
    Chrf,
}

#[derive(clap::Args)]
struct ScoreArgs {
    /// Hypothesis file, one segment per line.
    #[arg(long)]
    hyp: PathBuf,

    /// Reference file, line-aligned with the hypothesis file.
    #[arg(long = "ref")]
    reference: PathBuf,

    /// Metric to compute.
    #[arg(long, value_enum)]
    metric: MetricKind,

    /// Subword model (required for spbleu).
    #[arg(long, required_if_eq("metric", "spbleu"))]
    model: Option<PathBuf>,

    /// Emit the full score object as JSON instead of a summary line.
    #[arg(long)]
    json: bool,

    /// BLEU smoothing: exponential, none, or floor:F (default exponential).
    #[arg(long)]
    smoothing: Option<String>,

    /// Lowercase both sides before scoring (default: case is preserved).
    #[arg(long)]
    lowercase: bool,

    /// Maximum BLEU n-gram order (default 4).
    #[arg(long)]
    max_order: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatKind {
    Tsv,
    Json,
    Markdown,
}

#[derive(clap::Args)]
struct ReportArgs {
    /// Run directory: {src}-{tgt}.hyp files plus optional run.tsv metadata.
    #[arg(long)]
    run: PathBuf,

    /// Benchmark directory produced by build-benchmark.
    #[arg(long)]
    benchmark: PathBuf,

    /// Split to score against.
    #[arg(long, default_value = "test")]
    split: String,

    /// Subword model; enables the subword BLEU column.
    #[arg(long)]
    model: Option<PathBuf>,

    /// Language set deciding the supported/unsupported rows.
    #[arg(long, default_value = "spbleu101_supported")]
    sets: String,

    /// Output format for the category table.
    #[arg(long, value_enum, default_value_t = FormatKind::Markdown)]
    format: FormatKind,

    /// Weight category means by segment count instead of averaging
    /// directions equally.
    #[arg(long)]
    weighted: bool,

    /// BLEU smoothing: exponential, none, or floor:F (default exponential).
    #[arg(long)]
    smoothing: Option<String>,

    /// Lowercase both sides before scoring (default: case is preserved).
    #[arg(long)]
    lowercase: bool,
}

#[derive(clap::Args)]
struct ValidateArgs {
    /// Benchmark directory to check.
    #[arg(long)]
    benchmark: PathBuf,

    /// Also compare per-direction counts and split totals against the
    /// bundled reference benchmark.
    #[arg(long)]
    expect_reference: bool,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests print to stdout and succeed; every
            // other parse failure is a usage error. Clap's default exit
            // code of 2 is reserved for data errors here, so remap.
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };

    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("mteval: {}", err.message());
            err.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let ctx = Context::resolve(cli.registry, cli.sets_file, cli.config)?;
    match cli.command {
        Command::BuildBenchmark(args) => commands::build_benchmark::cmd(&ctx, args),
        Command::TrainTokenizer(args) => commands::train_tokenizer::cmd(&ctx, args),
        Command::Score(args) => commands::score::cmd(&ctx, args),
        Command::Report(args) => commands::report::cmd(&ctx, args),
        Command::Validate(args) => commands::validate::cmd(&ctx, args),
    }
}
