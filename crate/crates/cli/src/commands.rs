//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use stylomech::dataset::{self, PairDataset};
use stylomech::english::PosTag;
use stylomech::eval;
use stylomech::forest::{self, ForestParams};
use stylomech::pairwise::{compare_profiles, StyleProfile};
use stylomech::romanized::{classify_word, en_si_ratio, RsLexicon, WordLanguage};
use stylomech::synth::{self, AuthorStyleParams};
use stylomech::text::{clean, tokenize, Chunk, CleanPolicy, LanguageMode, PUNCT_MARKS};
use stylomech::{ConfusionMatrix, Forest};

use crate::config::ConfigFile;
use crate::{Cli, CliError, Command, ForestFlags};

const DEFAULT_SEED: u64 = 42;

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = ConfigFile::load(cli.config.as_deref())?;
    match cli.command {
        Command::Clean(args) => cmd_clean(args, &cfg),
        Command::Profile(args) => cmd_profile(args, &cfg),
        Command::Compare(args) => cmd_compare(args, &cfg),
        Command::BuildDataset(args) => cmd_build_dataset(args, &cfg),
        Command::Train(args) => cmd_train(args, &cfg),
        Command::Evaluate(args) => cmd_evaluate(args, &cfg),
        Command::Verify(args) => cmd_verify(args, &cfg),
        Command::Synth(args) => cmd_synth(args, &cfg),
        Command::Report(args) => cmd_report(args, &cfg),
    }
}

fn parse_mode(flag: Option<String>, cfg: &ConfigFile) -> Result<LanguageMode, CliError> {
    let value = cfg
        .resolve_opt(flag, "mode")?
        .ok_or_else(|| CliError::Usage("--mode is required (english or rs)".into()))?;
    LanguageMode::from_str(&value).map_err(|e| CliError::Usage(e.to_string()))
}

fn load_lexicon(flag: Option<PathBuf>, cfg: &ConfigFile) -> Result<RsLexicon, CliError> {
    let path = cfg.resolve_opt(flag, "lexicon")?;
    match path {
        Some(p) => Ok(RsLexicon::with_rs_words_from_file(&p)?),
        None => Ok(RsLexicon::shipped().clone()),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn forest_params(flags: &ForestFlags, cfg: &ConfigFile) -> Result<ForestParams, CliError> {
    let defaults = ForestParams::default();
    Ok(ForestParams {
        n_trees: cfg.resolve(flags.trees, "trees", defaults.n_trees)?,
        max_depth: cfg.resolve(flags.max_depth, "max-depth", defaults.max_depth)?,
        min_samples_leaf: cfg.resolve(flags.min_leaf, "min-leaf", defaults.min_samples_leaf)?,
        mtry: cfg.resolve_opt(flags.mtry, "mtry")?,
        bootstrap: !flags.no_bootstrap,
        seed: cfg.resolve(flags.seed, "seed", DEFAULT_SEED)?,
    })
}

fn cmd_clean(args: crate::CleanArgs, _cfg: &ConfigFile) -> Result<(), CliError> {
    let policy = CleanPolicy {
        strip_emoji: !args.keep_emoji,
        strip_urls: !args.keep_urls,
        strip_media_placeholders: !args.keep_media,
        collapse_whitespace: !args.no_collapse,
    };
    let text = read_text(&args.input)?;
    let mut cleaned = clean(&text, &policy);
    cleaned.push('\n');
    emit(&cleaned, args.out.as_deref())
}

fn mark_name(mark: char) -> &'static str {
    match mark {
        ',' => "comma",
        '.' => "period",
        ';' => "semicolon",
        ':' => "colon",
        '!' => "exclamation",
        '?' => "question",
        '\'' => "apostrophe",
        '"' => "quote",
        '-' => "hyphen",
        '(' => "lparen",
        ')' => "rparen",
        _ => "other",
    }
}

fn cmd_profile(args: crate::ProfileArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let mode = parse_mode(args.mode, cfg)?;
    let text = read_text(&args.input)?;
    let cleaned = clean(&text, &CleanPolicy::default());
    let mut out = String::new();
    match mode {
        LanguageMode::English => {
            let p = stylomech::english::english_profile(&cleaned)?;
            let _ = writeln!(out, "mode english");
            for tag in PosTag::ALL {
                let rate = p.pos_freq.get(&tag).copied().unwrap_or(0.0);
                let _ = writeln!(out, "pos.{} {rate}", tag.as_str());
            }
            let _ = writeln!(out, "voice.active {}", p.voice.active);
            let _ = writeln!(out, "voice.passive {}", p.voice.passive);
            let _ = writeln!(out, "voice.passive_ratio {}", p.voice.passive_ratio);
            for mark in PUNCT_MARKS {
                let rate = p.punct_freq.get(&mark).copied().unwrap_or(0.0);
                let _ = writeln!(out, "punct.{} {rate}", mark_name(mark));
            }
            let _ = writeln!(out, "sent.mean {}", p.sent_stats.mean);
            let _ = writeln!(out, "sent.std {}", p.sent_stats.std);
            for (bin, share) in ["1_5", "6_10", "11_20", "21_40", "41_plus"]
                .iter()
                .zip(p.sent_stats.histogram)
            {
                let _ = writeln!(out, "sent.hist.{bin} {share}");
            }
            for (word, rate) in &p.func_freq {
                let _ = writeln!(out, "func.{word} {rate}");
            }
            let _ = writeln!(
                out,
                "richness.type_token_ratio {}",
                p.richness.type_token_ratio
            );
            let _ = writeln!(out, "richness.hapax_ratio {}", p.richness.hapax_ratio);
            let _ = writeln!(
                out,
                "richness.mean_word_length {}",
                p.richness.mean_word_length
            );
            let _ = writeln!(out, "graph.nodes {}", p.graph.out_degree.len());
            let _ = writeln!(out, "graph.edges {}", p.graph.edges.len());
        }
        LanguageMode::RomanizedSinhala => {
            let lexicon = load_lexicon(args.lexicon, cfg)?;
            let chunk = Chunk::new(tokenize(&cleaned), None)?;
            let mut english = 0usize;
            let mut sinhala = 0usize;
            let mut unknown = 0usize;
            for word in chunk.folded_words() {
                match classify_word(&word, &lexicon) {
                    WordLanguage::English => english += 1,
                    WordLanguage::RomanizedSinhala => sinhala += 1,
                    WordLanguage::Unknown => unknown += 1,
                }
            }
            let _ = writeln!(out, "mode rs");
            let _ = writeln!(out, "tokens {}", chunk.tokens.len());
            let _ = writeln!(out, "words {}", chunk.word_count());
            let _ = writeln!(out, "english {english}");
            let _ = writeln!(out, "sinhala {sinhala}");
            let _ = writeln!(out, "unknown {unknown}");
            let _ = writeln!(out, "en_si_ratio {}", en_si_ratio(&chunk, &lexicon)?);
        }
    }
    emit(&out, args.out.as_deref())
}

fn text_profile(path: &Path, mode: LanguageMode) -> Result<StyleProfile, CliError> {
    let text = read_text(path)?;
    let cleaned = clean(&text, &CleanPolicy::default());
    let profile = match mode {
        LanguageMode::English => StyleProfile::from_english_text(&cleaned),
        LanguageMode::RomanizedSinhala => {
            StyleProfile::from_romanized_text(&cleaned, Some(path.display().to_string()))
        }
    };
    profile.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn cmd_compare(args: crate::CompareArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let mode = parse_mode(args.mode, cfg)?;
    let lexicon = load_lexicon(args.lexicon, cfg)?;
    let pa = text_profile(&args.a, mode)?;
    let pb = text_profile(&args.b, mode)?;
    let record = compare_profiles(&pa, &pb, Some(&lexicon))?;
    let mut out = String::new();
    for (name, value) in record.feature_names.iter().zip(&record.values) {
        let _ = writeln!(out, "{name}={value}");
    }
    emit(&out, args.out.as_deref())
}

fn cmd_build_dataset(args: crate::BuildDatasetArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let mode = parse_mode(args.mode, cfg)?;
    let n_same = cfg
        .resolve_opt(args.n_same, "n-same")?
        .ok_or_else(|| CliError::Usage("--n-same is required".into()))?;
    let n_diff = cfg
        .resolve_opt(args.n_diff, "n-diff")?
        .ok_or_else(|| CliError::Usage("--n-diff is required".into()))?;
    let seed = cfg.resolve(args.seed, "seed", DEFAULT_SEED)?;
    let threshold = cfg.resolve(
        args.variance_threshold,
        "variance-threshold",
        dataset::DEFAULT_VARIANCE_THRESHOLD,
    )?;
    let target_words = cfg.resolve_opt(args.target_words, "target-words")?;
    let lexicon = load_lexicon(args.lexicon, cfg)?;

    let mut corpus = dataset::load_corpus(&args.corpus, mode)?;
    if let Some(w) = target_words {
        corpus = dataset::chunk_corpus(&corpus, w)?;
    }
    let raw = dataset::build_pairs(&corpus, n_same, n_diff, seed, Some(&lexicon))?;
    let deduped = dataset::dedupe(&raw);
    let (filtered, report) = dataset::variance_filter(&deduped, threshold)?;
    dataset::write_csv(&filtered, &args.out)?;

    println!("documents {}", corpus.docs.len());
    println!("pairs {}", raw.len());
    println!("after_dedupe {}", deduped.len());
    println!("dropped_features {}", report.dropped.join(","));
    println!("kept_features {}", filtered.feature_names.join(","));
    println!("wrote {}", args.out.display());
    Ok(())
}

fn load_dataset(path: &Path) -> Result<PairDataset, CliError> {
    dataset::read_csv(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn cmd_train(args: crate::TrainArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let params = forest_params(&args.forest, cfg)?;
    let ds = load_dataset(&args.data)?;
    let forest = forest::train_forest(&ds, &params)?;
    forest::save_model(&forest, &args.out)?;
    println!("rows {}", ds.len());
    println!("features {}", ds.feature_names.len());
    if let Some(oob) = forest.oob_error {
        println!("oob_error {oob}");
    }
    let mut importances = forest::feature_importance(&forest);
    importances.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    for (name, share) in importances.iter().take(5) {
        println!("importance {name} {share}");
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn evaluate_dataset(
    ds: &PairDataset,
    params: &ForestParams,
    train_fraction: f64,
    stratified: bool,
    threshold: f64,
) -> Result<(Forest, String), CliError> {
    let (train, test) = eval::split(ds, train_fraction, params.seed, stratified)?;
    let forest = forest::train_forest(&train, params)?;
    let mut preds = Vec::with_capacity(test.len());
    let mut labels = Vec::with_capacity(test.len());
    for row in 0..test.len() {
        let record = test.record(row);
        let score = forest::predict(&forest, &record)?;
        preds.push(forest::classify(score, threshold));
        labels.push(test.rows[row].label);
    }
    let cm = eval::confusion(&preds, &labels)?;
    let report = eval::report(&cm)?;
    let mut text = String::new();
    let _ = writeln!(text, "train_rows {}", train.len());
    let _ = writeln!(text, "test_rows {}", test.len());
    let _ = writeln!(
        text,
        "confusion {} {} {} {}",
        cm.counts[0][0], cm.counts[0][1], cm.counts[1][0], cm.counts[1][1]
    );
    text.push_str(&eval::format_report(&report));
    Ok((forest, text))
}

fn cmd_evaluate(args: crate::EvaluateArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let params = forest_params(&args.forest, cfg)?;
    let train_fraction = cfg.resolve(args.train_fraction, "train-fraction", 0.8)?;
    let threshold = cfg.resolve(args.threshold, "threshold", 0.5)?;
    let ds = load_dataset(&args.data)?;
    let (forest, text) =
        evaluate_dataset(&ds, &params, train_fraction, !args.no_stratify, threshold)?;
    if let Some(path) = &args.save_model {
        forest::save_model(&forest, path)?;
    }
    if let Some(path) = &args.out {
        std::fs::write(path, &text)?;
    }
    print!("{text}");
    Ok(())
}

fn cmd_verify(args: crate::VerifyArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let mode = parse_mode(args.mode, cfg)?;
    let threshold = cfg.resolve(args.threshold, "threshold", 0.5)?;
    let lexicon = load_lexicon(args.lexicon, cfg)?;
    let forest = forest::load_model(&args.model)?;
    let pa = text_profile(&args.a, mode)?;
    let pb = text_profile(&args.b, mode)?;
    // The model may keep a variance-filtered subset of the raw features.
    let record = compare_profiles(&pa, &pb, Some(&lexicon))?
        .project(&forest.feature_names)
        .map_err(|_| {
            CliError::Data(format!(
                "model features do not match a {} comparison; was the model trained in this mode?",
                mode.as_str()
            ))
        })?;
    let score = forest::predict(&forest, &record)?;
    let label = forest::classify(score, threshold);
    println!("score={score:.4} label={label} threshold={threshold}");
    Ok(())
}

fn cmd_synth(args: crate::SynthArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let mode = parse_mode(args.mode, cfg)?;
    let authors = cfg.resolve(args.authors, "authors", 10)?;
    let docs_per_author = cfg.resolve(args.docs_per_author, "docs-per-author", 4)?;
    let words = cfg.resolve(args.words, "words", 200)?;
    let spread = cfg.resolve(args.spread, "spread", 0.5)?;
    let seed = cfg.resolve(args.seed, "seed", DEFAULT_SEED)?;

    let base = AuthorStyleParams::for_mode(mode);
    let corpus = synth::gen_corpus(&base, authors, docs_per_author, words, spread, seed)?;

    for doc in &corpus.docs {
        let path = args.out.join(&doc.id);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&path, &doc.doc.text)?;
    }
    let mut cfg_text = String::new();
    let _ = writeln!(cfg_text, "# synthetic corpus parameters");
    let _ = writeln!(cfg_text, "mode={}", mode.as_str());
    let _ = writeln!(cfg_text, "authors={authors}");
    let _ = writeln!(cfg_text, "docs-per-author={docs_per_author}");
    let _ = writeln!(cfg_text, "words={words}");
    let _ = writeln!(cfg_text, "spread={spread}");
    let _ = writeln!(cfg_text, "seed={seed}");
    std::fs::write(args.out.join("synth.cfg"), cfg_text)?;

    println!(
        "wrote {} documents for {authors} authors under {}",
        corpus.docs.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_report(args: crate::ReportArgs, _cfg: &ConfigFile) -> Result<(), CliError> {
    let cells: Vec<usize> = args
        .counts
        .split(',')
        .map(|c| {
            c.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--counts: invalid count {c:?}")))
        })
        .collect::<Result<_, _>>()?;
    if cells.len() != 4 {
        return Err(CliError::Usage(
            "--counts needs exactly four comma-separated integers".into(),
        ));
    }
    let cm = ConfusionMatrix::new([[cells[0], cells[1]], [cells[2], cells[3]]]);
    let report = eval::report(&cm)?;
    emit(&eval::format_report(&report), args.out.as_deref())
}
