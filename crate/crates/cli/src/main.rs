//! Command-line interface for the stylomech authorship verification pipeline.
//!
//! One subcommand per pipeline stage: clean text, extract profiles, compare
//! pairs, build datasets, train and evaluate the forest, verify authorship of
//! a document pair, synthesize corpora, and print classification reports.
//! Exit codes: 0 success, 1 usage error, 2 data or format error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl From<stylomech::Error> for CliError {
    fn from(e: stylomech::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "stylomech",
    version,
    about = "Pairwise authorship verification for English and Romanized Sinhala"
)]
struct Cli {
    /// Key=value configuration file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clean raw text: strip emoji, URLs, media placeholders, collapse whitespace
    Clean(CleanArgs),
    /// Print the stylometric profile of one text
    Profile(ProfileArgs),
    /// Compare two texts into a similarity record
    Compare(CompareArgs),
    /// Build a labeled pair dataset from an author-labeled corpus directory
    BuildDataset(BuildDatasetArgs),
    /// Train a random forest on a dataset CSV
    Train(TrainArgs),
    /// Split a dataset, train on the train side, report on the test side
    Evaluate(EvaluateArgs),
    /// Score whether two texts share an author, using a trained model
    Verify(VerifyArgs),
    /// Generate a synthetic author-labeled corpus
    Synth(SynthArgs),
    /// Print a classification report from confusion-matrix counts
    Report(ReportArgs),
}

#[derive(Args)]
struct CleanArgs {
    /// Input text file.
    input: PathBuf,
    /// Keep pictograph codepoints.
    #[arg(long)]
    keep_emoji: bool,
    /// Keep URLs.
    #[arg(long)]
    keep_urls: bool,
    /// Keep media placeholders such as "<Media omitted>".
    #[arg(long)]
    keep_media: bool,
    /// Do not collapse whitespace runs.
    #[arg(long)]
    no_collapse: bool,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    /// Language mode: english or rs.
    #[arg(long)]
    mode: Option<String>,
    /// Input text file.
    input: PathBuf,
    /// Romanized Sinhala word list overriding the shipped lexicon.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    mode: Option<String>,
    /// First text file.
    a: PathBuf,
    /// Second text file.
    b: PathBuf,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildDatasetArgs {
    #[arg(long)]
    mode: Option<String>,
    /// Corpus root laid out as <corpus>/<author_id>/<doc>.txt.
    #[arg(long)]
    corpus: PathBuf,
    /// Number of same-author pairs to sample.
    #[arg(long)]
    n_same: Option<usize>,
    /// Number of different-author pairs to sample.
    #[arg(long)]
    n_diff: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Split each document into chunks of roughly this many words first.
    #[arg(long)]
    target_words: Option<usize>,
    /// Drop features with variance below this after deduplication.
    #[arg(long)]
    variance_threshold: Option<f64>,
    /// Output CSV path; provenance goes to a .prov.tsv sidecar.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ForestFlags {
    /// Number of trees.
    #[arg(long)]
    trees: Option<usize>,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    min_leaf: Option<usize>,
    /// Features drawn per split; defaults to ceil(sqrt(n_features)).
    #[arg(long)]
    mtry: Option<usize>,
    /// Train each tree on the full dataset instead of a bootstrap resample.
    #[arg(long)]
    no_bootstrap: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TrainArgs {
    /// Dataset CSV produced by build-dataset.
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    forest: ForestFlags,
    /// Model file output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    data: PathBuf,
    /// Fraction of rows used for training.
    #[arg(long)]
    train_fraction: Option<f64>,
    /// Plain shuffle split instead of a stratified one.
    #[arg(long)]
    no_stratify: bool,
    /// Score threshold mapping the regressor output to labels.
    #[arg(long)]
    threshold: Option<f64>,
    #[command(flatten)]
    forest: ForestFlags,
    /// Also write the report text here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also save the trained model here.
    #[arg(long)]
    save_model: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Trained model file.
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    mode: Option<String>,
    /// Suspect author's text file.
    a: PathBuf,
    /// Anonymous text file.
    b: PathBuf,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    authors: Option<usize>,
    #[arg(long)]
    docs_per_author: Option<usize>,
    /// Words per generated document.
    #[arg(long)]
    words: Option<usize>,
    /// Author-to-author parameter spread in [0, 1]; 0 makes authors identical.
    #[arg(long)]
    spread: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Corpus output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Confusion counts true0_pred0,true0_pred1,true1_pred0,true1_pred1.
    #[arg(long)]
    counts: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
