//! Black-box tests of the command-line surface: exit codes, output formats,
//! and the config-file override rules.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_stylomech")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("failed to launch the CLI")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

struct Workspace {
    dir: PathBuf,
}

impl Workspace {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("stylomech-cli-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        Self { dir }
    }

    fn write(&self, name: &str, content: &str) -> PathBuf {
        let path = self.dir.join(name);
        std::fs::write(&path, content).unwrap();
        path
    }
}

impl Drop for Workspace {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.dir);
    }
}

/// Build a tiny trained English model for verify tests.
fn build_model(ws: &Workspace) {
    for args in [
        vec![
            "synth",
            "--mode",
            "english",
            "--authors",
            "4",
            "--docs-per-author",
            "3",
            "--words",
            "150",
            "--spread",
            "0.6",
            "--seed",
            "5",
            "--out",
            "corpus",
        ],
        vec![
            "build-dataset",
            "--mode",
            "english",
            "--corpus",
            "corpus",
            "--n-same",
            "8",
            "--n-diff",
            "8",
            "--seed",
            "5",
            "--out",
            "pairs.csv",
        ],
        vec![
            "train",
            "--data",
            "pairs.csv",
            "--trees",
            "25",
            "--seed",
            "5",
            "--out",
            "model.txt",
        ],
    ] {
        let out = run_in(&ws.dir, &args);
        assert!(out.status.success(), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn unknown_subcommand_exits_one() {
    let ws = Workspace::new("usage");
    let out = run_in(&ws.dir, &["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_mode_exits_one() {
    let ws = Workspace::new("badmode");
    ws.write("a.txt", "Some text here.");
    let out = run_in(&ws.dir, &["profile", "--mode", "klingon", "a.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("language mode"));
}

#[test]
fn help_exits_zero() {
    let ws = Workspace::new("help");
    let out = run_in(&ws.dir, &["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_csv_exits_two_with_line() {
    let ws = Workspace::new("badcsv");
    ws.write("bad.csv", "f0,label\n0.5,1\noops,0\n");
    let out = run_in(&ws.dir, &["train", "--data", "bad.csv", "--out", "m.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "stderr: {}", stderr(&out));
}

#[test]
fn verify_prints_score_line() {
    let ws = Workspace::new("verify");
    build_model(&ws);
    let out = run_in(
        &ws.dir,
        &[
            "verify",
            "--model",
            "model.txt",
            "--mode",
            "english",
            "corpus/author000/doc000.txt",
            "corpus/author000/doc001.txt",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let line = stdout(&out);
    assert!(
        line.starts_with("score=0.") || line.starts_with("score=1."),
        "unexpected verify output: {line}"
    );
    assert!(line.contains(" label="));
    assert!(line.trim_end().ends_with("threshold=0.5"));
}

#[test]
fn verify_threshold_flag_changes_label() {
    let ws = Workspace::new("threshold");
    build_model(&ws);
    let args = [
        "verify",
        "--model",
        "model.txt",
        "--mode",
        "english",
        "corpus/author000/doc000.txt",
        "corpus/author000/doc001.txt",
    ];
    let strict: Vec<&str> = args.iter().copied().chain(["--threshold", "1.0"]).collect();
    let out = run_in(&ws.dir, &strict);
    let text = stdout(&out);
    // A score of exactly 1.0 still maps to label 1; anything below does not.
    if text.contains("score=1.0000") {
        assert!(text.contains("label=1"));
    } else {
        assert!(text.contains("label=0"), "output: {text}");
    }
}

#[test]
fn report_prints_requested_matrix() {
    let ws = Workspace::new("report");
    let out = run_in(&ws.dir, &["report", "--counts", "54,2,9,16"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("0.86"));
    assert!(text.contains("0.96"));
    assert!(text.contains("0.91"));
    assert!(text.contains("81"));
}

#[test]
fn report_rejects_malformed_counts() {
    let ws = Workspace::new("badreport");
    assert_eq!(
        run_in(&ws.dir, &["report", "--counts", "1,2,3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run_in(&ws.dir, &["report", "--counts", "a,b,c,d"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn clean_applies_default_policy() {
    let ws = Workspace::new("clean");
    ws.write("dirty.txt", "hello \u{1F60A} world see http://x.y now");
    let out = run_in(&ws.dir, &["clean", "dirty.txt"]);
    assert_eq!(stdout(&out), "hello world see now\n");
}

#[test]
fn compare_emits_rs_feature_lines() {
    let ws = Workspace::new("compare");
    ws.write("a.txt", "mama gedara giya ada");
    ws.write("b.txt", "mma gedra giya ada ok");
    let out = run_in(&ws.dir, &["compare", "--mode", "rs", "a.txt", "b.txt"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    for name in [
        "ratio_abs_diff=",
        "aligned_count=",
        "total_edit_distance=",
        "mean_normalized_distance=",
        "unaligned_fraction=",
    ] {
        assert!(text.contains(name), "missing {name} in {text}");
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let ws = Workspace::new("config");
    ws.write("a.txt", "Mama gedara giya ada.");
    ws.write("run.cfg", "mode=rs\n");
    // Config provides the mode.
    let out = run_in(&ws.dir, &["profile", "--config", "run.cfg", "a.txt"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("mode rs"));
    // The flag overrides the config value.
    let out = run_in(
        &ws.dir,
        &[
            "profile", "--config", "run.cfg", "--mode", "english", "a.txt",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("mode english"));
}

#[test]
fn custom_lexicon_overrides_shipped_words() {
    let ws = Workspace::new("lexicon");
    ws.write("a.txt", "blorptak zim zim blorptak");
    ws.write("words.txt", "# custom forms\nblorptak\nzim\n");
    // With the shipped lexicon these words are unknown and there is no ratio.
    let out = run_in(&ws.dir, &["profile", "--mode", "rs", "a.txt"]);
    assert_eq!(out.status.code(), Some(2));
    // With the custom lexicon they classify as Romanized Sinhala.
    let out = run_in(
        &ws.dir,
        &["profile", "--mode", "rs", "--lexicon", "words.txt", "a.txt"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("sinhala 4"));
}

#[test]
fn synth_writes_corpus_layout_and_config() {
    let ws = Workspace::new("synth");
    let out = run_in(
        &ws.dir,
        &[
            "synth",
            "--mode",
            "rs",
            "--authors",
            "3",
            "--docs-per-author",
            "2",
            "--words",
            "60",
            "--spread",
            "0.4",
            "--seed",
            "9",
            "--out",
            "corpus",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for a in 0..3 {
        for d in 0..2 {
            let path = ws.dir.join(format!("corpus/author{a:03}/doc{d:03}.txt"));
            assert!(path.is_file(), "missing {}", path.display());
        }
    }
    let cfg = std::fs::read_to_string(ws.dir.join("corpus/synth.cfg")).unwrap();
    assert!(cfg.contains("mode=rs"));
    assert!(cfg.contains("seed=9"));
}

#[test]
fn build_dataset_writes_provenance_sidecar() {
    let ws = Workspace::new("sidecar");
    build_model(&ws);
    let prov = std::fs::read_to_string(ws.dir.join("pairs.prov.tsv")).unwrap();
    assert_eq!(prov.lines().count(), 16);
    let first = prov.lines().next().unwrap();
    let fields: Vec<&str> = first.split('\t').collect();
    assert_eq!(fields.len(), 3);
    assert_eq!(fields[0], "0");
    assert!(fields[1].contains("author"));
}

#[test]
fn evaluate_writes_report_file() {
    let ws = Workspace::new("evalout");
    build_model(&ws);
    let out = run_in(
        &ws.dir,
        &[
            "evaluate",
            "--data",
            "pairs.csv",
            "--trees",
            "25",
            "--seed",
            "5",
            "--out",
            "report.txt",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = std::fs::read_to_string(ws.dir.join("report.txt")).unwrap();
    assert!(report.contains("precision"));
    assert!(report.contains("weighted avg"));
    assert_eq!(stdout(&out), report);
}

#[test]
fn chunked_dataset_build_succeeds() {
    let ws = Workspace::new("chunked");
    let out = run_in(
        &ws.dir,
        &[
            "synth",
            "--mode",
            "rs",
            "--authors",
            "3",
            "--docs-per-author",
            "2",
            "--words",
            "240",
            "--spread",
            "0.5",
            "--seed",
            "3",
            "--out",
            "corpus",
        ],
    );
    assert!(out.status.success());
    let out = run_in(
        &ws.dir,
        &[
            "build-dataset",
            "--mode",
            "rs",
            "--corpus",
            "corpus",
            "--target-words",
            "80",
            "--n-same",
            "12",
            "--n-diff",
            "12",
            "--seed",
            "3",
            "--out",
            "pairs.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    // Chunking at 80 words turns each 240-word doc into several units.
    let text = stdout(&out);
    let docs_line = text.lines().find(|l| l.starts_with("documents")).unwrap();
    let count: usize = docs_line
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(count > 6, "expected chunked documents, got {count}");
}
