//! Labeled pair datasets: construction from an author-labeled corpus,
//! deduplication, variance filtering, and CSV persistence.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pairwise::{compare_profiles, SimilarityRecord, StyleProfile};
use crate::rng::SplitMix64;
use crate::romanized::RsLexicon;
use crate::text::{chunk, clean, tokenize, CleanPolicy, LanguageMode, RawDocument};

/// Default variance cutoff: features below it carry no signal.
pub const DEFAULT_VARIANCE_THRESHOLD: f64 = 0.05;

/// One corpus document with a stable identifier.
#[derive(Debug, Clone)]
pub struct CorpusDoc {
    pub id: String,
    pub doc: RawDocument,
}

/// An author-labeled collection of documents, all in one language mode.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub mode: LanguageMode,
    pub docs: Vec<CorpusDoc>,
}

impl Corpus {
    pub fn new(mode: LanguageMode) -> Self {
        Self {
            mode,
            docs: Vec::new(),
        }
    }

    pub fn push(&mut self, id: String, author_id: String, text: String) {
        self.docs.push(CorpusDoc {
            id,
            doc: RawDocument::new(text, Some(author_id), self.mode),
        });
    }

    pub fn author_count(&self) -> usize {
        let mut authors: Vec<&str> = self
            .docs
            .iter()
            .filter_map(|d| d.doc.author_id.as_deref())
            .collect();
        authors.sort_unstable();
        authors.dedup();
        authors.len()
    }
}

/// Load a corpus from the `corpus/<author_id>/<doc>.txt` layout. Entries are
/// read in sorted order so document ids are stable across runs.
pub fn load_corpus(dir: &Path, mode: LanguageMode) -> Result<Corpus> {
    let mut corpus = Corpus::new(mode);
    let mut author_dirs: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    author_dirs.sort();
    for author_dir in author_dirs {
        let author = author_dir
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| Error::Schema("author directory name is not valid unicode".into()))?
            .to_string();
        let mut files: Vec<PathBuf> = std::fs::read_dir(&author_dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        for file in files {
            let name = file
                .file_name()
                .and_then(|n| n.to_str())
                .ok_or_else(|| Error::Schema("document file name is not valid unicode".into()))?;
            let text = std::fs::read_to_string(&file)?;
            corpus.push(format!("{author}/{name}"), author.clone(), text);
        }
    }
    if corpus.docs.is_empty() {
        return Err(Error::InsufficientCorpus(format!(
            "no documents under {}",
            dir.display()
        )));
    }
    Ok(corpus)
}

/// Split every document into chunks of roughly `target_words` word tokens.
/// Each chunk becomes its own document with id `<doc_id>#<k>`; chunk text is
/// the chunk's tokens joined with single spaces.
pub fn chunk_corpus(corpus: &Corpus, target_words: usize) -> Result<Corpus> {
    let mut out = Corpus::new(corpus.mode);
    for doc in &corpus.docs {
        let cleaned = clean(&doc.doc.text, &CleanPolicy::default());
        let tokens = tokenize(&cleaned);
        let chunks = chunk(&tokens, target_words).map_err(|e| Error::Document {
            id: doc.id.clone(),
            source: Box::new(e),
        })?;
        for (k, c) in chunks.into_iter().enumerate() {
            let text: Vec<String> = c.tokens.into_iter().map(|t| t.text).collect();
            out.push(
                format!("{}#{k}", doc.id),
                doc.doc.author_id.clone().unwrap_or_default(),
                text.join(" "),
            );
        }
    }
    Ok(out)
}

/// A row of a labeled pair dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRow {
    pub values: Vec<f64>,
    /// 1 = same author, 0 = different authors.
    pub label: u8,
}

/// Labeled similarity records sharing one feature schema.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PairDataset {
    pub feature_names: Vec<String>,
    pub rows: Vec<DatasetRow>,
    /// Per-row (doc_id_a, doc_id_b). Empty when provenance is unknown, for
    /// example after reading a CSV.
    pub provenance: Vec<(String, String)>,
}

impl PairDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn label_counts(&self) -> (usize, usize) {
        let ones = self.rows.iter().filter(|r| r.label == 1).count();
        (self.rows.len() - ones, ones)
    }

    /// Turn one row back into a standalone record.
    pub fn record(&self, row: usize) -> SimilarityRecord {
        SimilarityRecord {
            feature_names: self.feature_names.clone(),
            values: self.rows[row].values.clone(),
            label: Some(self.rows[row].label),
        }
    }
}

/// Variances seen by the filter and the columns it dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceReport {
    pub variances: Vec<(String, f64)>,
    pub dropped: Vec<String>,
    pub threshold: f64,
}

fn doc_profile(doc: &CorpusDoc) -> Result<StyleProfile> {
    let cleaned = clean(&doc.doc.text, &CleanPolicy::default());
    let profile = match doc.doc.language_mode {
        LanguageMode::English => StyleProfile::from_english_text(&cleaned),
        LanguageMode::RomanizedSinhala => {
            StyleProfile::from_romanized_text(&cleaned, Some(doc.id.clone()))
        }
    };
    profile.map_err(|e| Error::Document {
        id: doc.id.clone(),
        source: Box::new(e),
    })
}

fn sample_without_replacement(
    pool: &mut [(usize, usize)],
    n: usize,
    rng: &mut SplitMix64,
) -> Vec<(usize, usize)> {
    for k in 0..n {
        let j = k + rng.gen_index(pool.len() - k);
        pool.swap(k, j);
    }
    pool[..n].to_vec()
}

/// Build a labeled dataset by sampling `n_same` same-author pairs and
/// `n_diff` different-author pairs uniformly without replacement.
///
/// Deterministic for a fixed seed: documents are taken in sorted-id order,
/// the same-author pool is sampled first, and rows appear in sampled order
/// (same-author rows first). A document is never paired with itself.
pub fn build_pairs(
    corpus: &Corpus,
    n_same: usize,
    n_diff: usize,
    seed: u64,
    lexicon: Option<&RsLexicon>,
) -> Result<PairDataset> {
    let mut docs: Vec<&CorpusDoc> = corpus.docs.iter().collect();
    docs.sort_by(|a, b| a.id.cmp(&b.id));

    let mut same_pool = Vec::new();
    let mut diff_pool = Vec::new();
    for i in 0..docs.len() {
        for j in i + 1..docs.len() {
            if docs[i].doc.author_id == docs[j].doc.author_id {
                same_pool.push((i, j));
            } else {
                diff_pool.push((i, j));
            }
        }
    }
    if same_pool.len() < n_same {
        return Err(Error::InsufficientCorpus(format!(
            "{} same-author pairs available, {n_same} requested",
            same_pool.len()
        )));
    }
    if diff_pool.len() < n_diff {
        return Err(Error::InsufficientCorpus(format!(
            "{} different-author pairs available, {n_diff} requested",
            diff_pool.len()
        )));
    }

    let mut rng = SplitMix64::new(seed);
    let same = sample_without_replacement(&mut same_pool, n_same, &mut rng);
    let diff = sample_without_replacement(&mut diff_pool, n_diff, &mut rng);

    // Profile each referenced document once, in parallel.
    let mut needed: Vec<usize> = same
        .iter()
        .chain(diff.iter())
        .flat_map(|&(i, j)| [i, j])
        .collect();
    needed.sort_unstable();
    needed.dedup();
    let profiles: HashMap<usize, StyleProfile> = needed
        .par_iter()
        .map(|&i| doc_profile(docs[i]).map(|p| (i, p)))
        .collect::<Result<_>>()?;

    let pairs: Vec<((usize, usize), u8)> = same
        .into_iter()
        .map(|p| (p, 1u8))
        .chain(diff.into_iter().map(|p| (p, 0u8)))
        .collect();
    let records: Vec<SimilarityRecord> = pairs
        .par_iter()
        .map(|&((i, j), label)| {
            compare_profiles(&profiles[&i], &profiles[&j], lexicon)
                .map(|r| r.with_label(label))
                .map_err(|e| Error::Document {
                    id: format!("{} x {}", docs[i].id, docs[j].id),
                    source: Box::new(e),
                })
        })
        .collect::<Result<_>>()?;

    let feature_names = records[0].feature_names.clone();
    let mut ds = PairDataset {
        feature_names,
        rows: Vec::new(),
        provenance: Vec::new(),
    };
    for (record, &((i, j), _)) in records.into_iter().zip(&pairs) {
        debug_assert_eq!(record.feature_names, ds.feature_names);
        ds.rows.push(DatasetRow {
            values: record.values,
            label: record.label.unwrap(),
        });
        ds.provenance.push((docs[i].id.clone(), docs[j].id.clone()));
    }
    Ok(ds)
}

fn row_key(row: &DatasetRow) -> Vec<u64> {
    // Normalize -0.0 so value-equal rows share a key.
    let mut key: Vec<u64> = row
        .values
        .iter()
        .map(|&v| (if v == 0.0 { 0.0f64 } else { v }).to_bits())
        .collect();
    key.push(row.label as u64);
    key
}

/// Drop rows whose (values, label) duplicate an earlier row, preserving
/// order. Rows with equal values but different labels are kept and reported
/// on stderr: deleting them silently would bias the classes.
pub fn dedupe(ds: &PairDataset) -> PairDataset {
    let mut seen: HashMap<Vec<u64>, ()> = HashMap::new();
    let mut value_labels: HashMap<Vec<u64>, u8> = HashMap::new();
    let mut out = PairDataset {
        feature_names: ds.feature_names.clone(),
        rows: Vec::new(),
        provenance: Vec::new(),
    };
    let mut conflicts = 0usize;
    for (idx, row) in ds.rows.iter().enumerate() {
        let key = row_key(row);
        if seen.contains_key(&key) {
            continue;
        }
        seen.insert(key, ());
        let value_only: Vec<u64> = row
            .values
            .iter()
            .map(|&v| (if v == 0.0 { 0.0f64 } else { v }).to_bits())
            .collect();
        if let Some(&other) = value_labels.get(&value_only) {
            if other != row.label {
                conflicts += 1;
            }
        } else {
            value_labels.insert(value_only, row.label);
        }
        out.rows.push(row.clone());
        if let Some(p) = ds.provenance.get(idx) {
            out.provenance.push(p.clone());
        }
    }
    if conflicts > 0 {
        eprintln!("warning: {conflicts} duplicate value rows carry conflicting labels; kept");
    }
    out
}

fn column_variance(rows: &[DatasetRow], col: usize) -> f64 {
    let n = rows.len() as f64;
    let mean = rows.iter().map(|r| r.values[col]).sum::<f64>() / n;
    rows.iter()
        .map(|r| (r.values[col] - mean).powi(2))
        .sum::<f64>()
        / n
}

/// Remove feature columns whose population variance falls below `threshold`.
pub fn variance_filter(ds: &PairDataset, threshold: f64) -> Result<(PairDataset, VarianceReport)> {
    if ds.rows.len() < 2 {
        return Err(Error::TooFewRows {
            need: 2,
            have: ds.rows.len(),
        });
    }
    let mut variances = Vec::new();
    let mut keep = Vec::new();
    let mut dropped = Vec::new();
    for (col, name) in ds.feature_names.iter().enumerate() {
        let var = column_variance(&ds.rows, col);
        variances.push((name.clone(), var));
        if var < threshold {
            dropped.push(name.clone());
        } else {
            keep.push(col);
        }
    }
    let filtered = PairDataset {
        feature_names: keep.iter().map(|&c| ds.feature_names[c].clone()).collect(),
        rows: ds
            .rows
            .iter()
            .map(|r| DatasetRow {
                values: keep.iter().map(|&c| r.values[c]).collect(),
                label: r.label,
            })
            .collect(),
        provenance: ds.provenance.clone(),
    };
    Ok((
        filtered,
        VarianceReport {
            variances,
            dropped,
            threshold,
        },
    ))
}

fn validate_feature_name(name: &str) -> Result<()> {
    if name.is_empty() || name == "label" {
        return Err(Error::Schema(format!("invalid feature name {name:?}")));
    }
    if name.contains(',') || name.contains('\n') || name.contains('\r') {
        return Err(Error::Schema(format!(
            "feature name {name:?} contains a CSV delimiter"
        )));
    }
    Ok(())
}

/// Derive the provenance sidecar path: `<stem>.prov.tsv` next to the CSV.
pub fn provenance_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("prov.tsv")
}

/// Write the dataset as CSV: feature columns then a final `label` column.
/// Floats serialize in shortest round-trip form, so `read_csv` restores them
/// exactly. Provenance, when present, goes to a `<stem>.prov.tsv` sidecar.
pub fn write_csv(ds: &PairDataset, path: &Path) -> Result<()> {
    for name in &ds.feature_names {
        validate_feature_name(name)?;
    }
    let mut out = String::new();
    for name in &ds.feature_names {
        out.push_str(name);
        out.push(',');
    }
    out.push_str("label\n");
    for row in &ds.rows {
        for v in &row.values {
            let _ = write!(out, "{v},");
        }
        let _ = writeln!(out, "{}", row.label);
    }
    std::fs::write(path, out)?;

    if !ds.provenance.is_empty() {
        let mut prov = String::new();
        for (idx, (a, b)) in ds.provenance.iter().enumerate() {
            let _ = writeln!(prov, "{idx}\t{a}\t{b}");
        }
        std::fs::write(provenance_path(path), prov)?;
    }
    Ok(())
}

/// Read a dataset written by [`write_csv`]. Provenance is not restored.
pub fn read_csv(path: &Path) -> Result<PairDataset> {
    let content = std::fs::read_to_string(path)?;
    // lines() already strips \r\n, so foreign line endings parse fine.
    let mut lines = content.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Schema("empty file".into()))?;
    let mut columns: Vec<&str> = header.split(',').collect();
    match columns.pop() {
        Some("label") => {}
        _ => return Err(Error::Schema("header must end with a label column".into())),
    }
    if columns.is_empty() {
        return Err(Error::Schema("header has no feature columns".into()));
    }
    for name in &columns {
        validate_feature_name(name)?;
    }
    let feature_names: Vec<String> = columns.iter().map(|s| s.to_string()).collect();

    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != feature_names.len() + 1 {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "expected {} cells, found {}",
                    feature_names.len() + 1,
                    cells.len()
                ),
            });
        }
        let mut values = Vec::with_capacity(feature_names.len());
        for cell in &cells[..cells.len() - 1] {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("non-numeric cell {cell:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("non-finite cell {cell:?}"),
                });
            }
            values.push(v);
        }
        let label: u8 = match *cells.last().unwrap() {
            "0" => 0,
            "1" => 1,
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("label must be 0 or 1, found {other:?}"),
                })
            }
        };
        rows.push(DatasetRow { values, label });
    }
    Ok(PairDataset {
        feature_names,
        rows,
        provenance: Vec::new(),
    })
}
