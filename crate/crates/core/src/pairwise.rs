//! Reduce two style profiles to a fixed-order similarity record: the numeric
//! representation the model trains on instead of text.

use std::collections::{BTreeMap, BTreeSet};

use crate::english::{self, EnglishProfile, PosTag, TransitionGraph};
use crate::error::{Error, Result};
use crate::romanized::{self, RsLexicon};
use crate::text::{Chunk, LanguageMode, PUNCT_MARKS};

/// A text's extracted style, ready for pairwise comparison.
///
/// English texts carry a full [`EnglishProfile`]; Romanized Sinhala texts
/// carry their token chunk, because the Sinhala features are inherently
/// pairwise. Either side may carry injected named scalars (for example an
/// externally computed score) that enter the record as absolute differences.
#[derive(Debug, Clone)]
pub enum StyleProfile {
    English {
        profile: Box<EnglishProfile>,
        injected: BTreeMap<String, f64>,
    },
    Romanized {
        chunk: Chunk,
        injected: BTreeMap<String, f64>,
    },
}

impl StyleProfile {
    pub fn mode(&self) -> LanguageMode {
        match self {
            StyleProfile::English { .. } => LanguageMode::English,
            StyleProfile::Romanized { .. } => LanguageMode::RomanizedSinhala,
        }
    }

    pub fn injected(&self) -> &BTreeMap<String, f64> {
        match self {
            StyleProfile::English { injected, .. } => injected,
            StyleProfile::Romanized { injected, .. } => injected,
        }
    }

    pub fn injected_mut(&mut self) -> &mut BTreeMap<String, f64> {
        match self {
            StyleProfile::English { injected, .. } => injected,
            StyleProfile::Romanized { injected, .. } => injected,
        }
    }

    /// Extract an English profile from cleaned text.
    pub fn from_english_text(text: &str) -> Result<Self> {
        Ok(StyleProfile::English {
            profile: Box::new(english::english_profile(text)?),
            injected: BTreeMap::new(),
        })
    }

    /// Wrap cleaned Romanized Sinhala text as a single chunk.
    pub fn from_romanized_text(text: &str, source_doc: Option<String>) -> Result<Self> {
        Ok(StyleProfile::Romanized {
            chunk: Chunk::new(crate::text::tokenize(text), source_doc)?,
            injected: BTreeMap::new(),
        })
    }
}

/// A fixed-order numeric comparison of one text pair, optionally labeled with
/// 1 (same author) or 0 (different authors).
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityRecord {
    pub feature_names: Vec<String>,
    pub values: Vec<f64>,
    pub label: Option<u8>,
}

impl SimilarityRecord {
    pub fn new(feature_names: Vec<String>, values: Vec<f64>, label: Option<u8>) -> Result<Self> {
        if feature_names.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: feature_names.len(),
                right: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("record values must be finite".into()));
        }
        if let Some(l) = label {
            if l > 1 {
                return Err(Error::InvalidParams(format!(
                    "label must be 0 or 1, got {l}"
                )));
            }
        }
        Ok(Self {
            feature_names,
            values,
            label,
        })
    }

    pub fn with_label(mut self, label: u8) -> Self {
        self.label = Some(label);
        self
    }

    /// Select the named features, in the given order. Used to line a fresh
    /// record up with a model trained after variance filtering.
    pub fn project(&self, names: &[String]) -> Result<SimilarityRecord> {
        let values = names
            .iter()
            .map(|n| {
                self.feature_names
                    .iter()
                    .position(|f| f == n)
                    .map(|i| self.values[i])
                    .ok_or(Error::SchemaMismatch)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(SimilarityRecord {
            feature_names: names.to_vec(),
            values,
            label: self.label,
        })
    }
}

/// Euclidean (L2) distance between two equal-length vectors.
pub fn group_distance(sub_a: &[f64], sub_b: &[f64]) -> Result<f64> {
    if sub_a.len() != sub_b.len() || sub_a.is_empty() {
        return Err(Error::LengthMismatch {
            left: sub_a.len(),
            right: sub_b.len(),
        });
    }
    Ok(sub_a
        .iter()
        .zip(sub_b)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Cosine similarity over union-keyed edge probability vectors and Jaccard
/// similarity over edge sets.
pub fn graph_similarity(g_a: &TransitionGraph, g_b: &TransitionGraph) -> Result<(f64, f64)> {
    if g_a.is_empty() || g_b.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut dot = 0.0;
    let mut norm_a = 0.0;
    let mut norm_b = 0.0;
    for (edge, &p) in &g_a.edges {
        norm_a += p * p;
        if let Some(&q) = g_b.edges.get(edge) {
            dot += p * q;
        }
    }
    for &q in g_b.edges.values() {
        norm_b += q * q;
    }
    // sqrt of the product keeps self-similarity exactly 1: for identical
    // graphs dot, norm_a, and norm_b accumulate in the same key order.
    let cosine = dot / (norm_a * norm_b).sqrt();

    let intersection = g_a
        .edges
        .keys()
        .filter(|e| g_b.edges.contains_key(*e))
        .count();
    let union = g_a.edges.len() + g_b.edges.len() - intersection;
    let jaccard = intersection as f64 / union as f64;
    Ok((cosine, jaccard))
}

fn pos_vector(profile: &EnglishProfile) -> Vec<f64> {
    PosTag::ALL
        .iter()
        .map(|t| profile.pos_freq.get(t).copied().unwrap_or(0.0))
        .collect()
}

fn punct_vector(profile: &EnglishProfile) -> Vec<f64> {
    PUNCT_MARKS
        .iter()
        .map(|m| profile.punct_freq.get(m).copied().unwrap_or(0.0))
        .collect()
}

fn sent_vector(profile: &EnglishProfile) -> Vec<f64> {
    let s = &profile.sent_stats;
    let mut v = vec![s.mean, s.std];
    v.extend_from_slice(&s.histogram);
    v
}

fn union_keyed(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> (Vec<f64>, Vec<f64>) {
    let keys: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    let va = keys
        .iter()
        .map(|k| a.get(*k).copied().unwrap_or(0.0))
        .collect();
    let vb = keys
        .iter()
        .map(|k| b.get(*k).copied().unwrap_or(0.0))
        .collect();
    (va, vb)
}

fn injected_features(
    a: &BTreeMap<String, f64>,
    b: &BTreeMap<String, f64>,
    names: &mut Vec<String>,
    values: &mut Vec<f64>,
) {
    let keys: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    for k in keys {
        let va = a.get(k).copied().unwrap_or(0.0);
        let vb = b.get(k).copied().unwrap_or(0.0);
        names.push(format!("inj_{k}"));
        values.push((va - vb).abs());
    }
}

/// Names of the English-mode record, in emission order.
pub const ENGLISH_FEATURES: [&str; 8] = [
    "pos_dist",
    "punct_dist",
    "sent_dist",
    "func_dist",
    "richness_dist",
    "voice_dist",
    "graph_cosine",
    "graph_jaccard",
];

/// Names of the Romanized Sinhala record, in emission order. The two per-chunk
/// ratios enter only as their absolute difference so the record is symmetric
/// in its arguments.
pub const RS_FEATURES: [&str; 5] = [
    "ratio_abs_diff",
    "aligned_count",
    "total_edit_distance",
    "mean_normalized_distance",
    "unaligned_fraction",
];

/// Compare two profiles of the same mode into a similarity record.
///
/// English mode emits per-group Euclidean distances in [`ENGLISH_FEATURES`]
/// order, with sparse maps 0-filled over the union of keys, then the two
/// graph similarities. Two empty graphs compare as identical (1, 1); one
/// empty graph against a non-empty one as disjoint (0, 0). Romanized Sinhala
/// mode emits [`RS_FEATURES`]. Injected scalars append as `inj_<name>`
/// absolute differences in sorted name order.
pub fn compare_profiles(
    p_a: &StyleProfile,
    p_b: &StyleProfile,
    lexicon: Option<&RsLexicon>,
) -> Result<SimilarityRecord> {
    match (p_a, p_b) {
        (
            StyleProfile::English {
                profile: a,
                injected: inj_a,
            },
            StyleProfile::English {
                profile: b,
                injected: inj_b,
            },
        ) => {
            let mut names: Vec<String> = ENGLISH_FEATURES.iter().map(|s| s.to_string()).collect();
            let (func_a, func_b) = union_keyed(&a.func_freq, &b.func_freq);
            let (cosine, jaccard) = match (a.graph.is_empty(), b.graph.is_empty()) {
                (false, false) => graph_similarity(&a.graph, &b.graph)?,
                (true, true) => (1.0, 1.0),
                _ => (0.0, 0.0),
            };
            let mut values = vec![
                group_distance(&pos_vector(a), &pos_vector(b))?,
                group_distance(&punct_vector(a), &punct_vector(b))?,
                group_distance(&sent_vector(a), &sent_vector(b))?,
                if func_a.is_empty() {
                    0.0
                } else {
                    group_distance(&func_a, &func_b)?
                },
                group_distance(
                    &[
                        a.richness.type_token_ratio,
                        a.richness.hapax_ratio,
                        a.richness.mean_word_length,
                    ],
                    &[
                        b.richness.type_token_ratio,
                        b.richness.hapax_ratio,
                        b.richness.mean_word_length,
                    ],
                )?,
                group_distance(&[a.voice.passive_ratio], &[b.voice.passive_ratio])?,
                cosine,
                jaccard,
            ];
            injected_features(inj_a, inj_b, &mut names, &mut values);
            SimilarityRecord::new(names, values, None)
        }
        (
            StyleProfile::Romanized {
                chunk: a,
                injected: inj_a,
            },
            StyleProfile::Romanized {
                chunk: b,
                injected: inj_b,
            },
        ) => {
            let lexicon = lexicon.ok_or(Error::MissingLexicon)?;
            let f = romanized::rs_pair_features(a, b, lexicon)?;
            let mut names: Vec<String> = RS_FEATURES.iter().map(|s| s.to_string()).collect();
            let mut values = vec![
                f.ratio_abs_diff,
                f.aligned_count as f64,
                f.total_edit_distance as f64,
                f.mean_normalized_distance,
                f.unaligned_fraction,
            ];
            injected_features(inj_a, inj_b, &mut names, &mut values);
            SimilarityRecord::new(names, values, None)
        }
        _ => Err(Error::ModeMismatch),
    }
}
