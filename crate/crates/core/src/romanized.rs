//! Romanized Sinhala pairwise features: word-language classification, the
//! English-to-Sinhala ratio, consonant-skeleton alignment of similar words
//! across two chunks, and Levenshtein edit-distance aggregation.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::text::Chunk;

const RS_LEXICON_TXT: &str = include_str!("../data/rs_lexicon.txt");
const EN_COMMON_TXT: &str = include_str!("../data/en_common.txt");

/// Unit-cost edit distance between two strings, over Unicode scalar values.
///
/// Two-row dynamic program; symmetric, zero iff the inputs are equal.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = (up + 1)
                .min(row[j] + 1)
                .min(diag + if ca == cb { 0 } else { 1 });
            diag = up;
        }
    }
    row[b.len()]
}

/// Case-fold and drop the vowels a, e, i, o, u, keeping everything else in
/// order. Vowel-insensitive key for matching ad-hoc Romanized Sinhala
/// spellings. Idempotent.
pub fn consonant_skeleton(word: &str) -> String {
    word.to_lowercase()
        .chars()
        .filter(|c| !matches!(c, 'a' | 'e' | 'i' | 'o' | 'u'))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordLanguage {
    English,
    RomanizedSinhala,
    Unknown,
}

/// Word lists driving the language split.
///
/// English membership wins: any form present in both lists is removed from
/// the Romanized Sinhala side at construction, keeping the sets disjoint.
#[derive(Debug, Clone)]
pub struct RsLexicon {
    rs_words: BTreeSet<String>,
    en_words: BTreeSet<String>,
    rs_skeletons: BTreeSet<String>,
}

impl RsLexicon {
    pub fn new<I, J>(rs_words: I, en_words: J) -> Self
    where
        I: IntoIterator<Item = String>,
        J: IntoIterator<Item = String>,
    {
        let en_words: BTreeSet<String> = en_words.into_iter().map(|w| w.to_lowercase()).collect();
        let rs_words: BTreeSet<String> = rs_words
            .into_iter()
            .map(|w| w.to_lowercase())
            .filter(|w| !w.is_empty() && !en_words.contains(w))
            .collect();
        let rs_skeletons = rs_words.iter().map(|w| consonant_skeleton(w)).collect();
        Self {
            rs_words,
            en_words,
            rs_skeletons,
        }
    }

    /// The lexicon shipped with the crate.
    pub fn shipped() -> &'static RsLexicon {
        static SHIPPED: LazyLock<RsLexicon> = LazyLock::new(|| {
            RsLexicon::new(
                RS_LEXICON_TXT
                    .lines()
                    .map(str::to_string)
                    .filter(|l| !l.is_empty()),
                EN_COMMON_TXT
                    .lines()
                    .map(str::to_string)
                    .filter(|l| !l.is_empty()),
            )
        });
        &SHIPPED
    }

    /// Shipped English list with Romanized Sinhala forms read from a file,
    /// one word per line, `#` comments allowed.
    pub fn with_rs_words_from_file(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path)?;
        let rs = content
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string);
        Ok(Self::new(
            rs,
            EN_COMMON_TXT
                .lines()
                .map(str::to_string)
                .filter(|l| !l.is_empty()),
        ))
    }

    pub fn rs_len(&self) -> usize {
        self.rs_words.len()
    }

    pub fn en_len(&self) -> usize {
        self.en_words.len()
    }
}

/// Classify one word against the lexicon. English by exact membership first,
/// then Romanized Sinhala by exact membership or skeleton match, else
/// Unknown.
pub fn classify_word(word: &str, lexicon: &RsLexicon) -> WordLanguage {
    let folded = word.to_lowercase();
    if lexicon.en_words.contains(&folded) {
        return WordLanguage::English;
    }
    if lexicon.rs_words.contains(&folded)
        || lexicon.rs_skeletons.contains(&consonant_skeleton(&folded))
    {
        return WordLanguage::RomanizedSinhala;
    }
    WordLanguage::Unknown
}

/// English-word count over Romanized-Sinhala-word count for one chunk,
/// ignoring Unknown words. When the chunk has English words but no Sinhala
/// ones the ratio saturates to the English count.
pub fn en_si_ratio(chunk: &Chunk, lexicon: &RsLexicon) -> Result<f64> {
    let mut english = 0usize;
    let mut sinhala = 0usize;
    for word in chunk.folded_words() {
        match classify_word(&word, lexicon) {
            WordLanguage::English => english += 1,
            WordLanguage::RomanizedSinhala => sinhala += 1,
            WordLanguage::Unknown => {}
        }
    }
    if english + sinhala == 0 {
        return Err(Error::NoClassifiableWords);
    }
    Ok(if sinhala == 0 {
        english as f64
    } else {
        english as f64 / sinhala as f64
    })
}

/// One side of the alignment candidate pool: a chunk's non-English words with
/// their positions and skeletons.
fn alignment_candidates(chunk: &Chunk, lexicon: &RsLexicon) -> Vec<(usize, String, String)> {
    chunk
        .folded_words()
        .into_iter()
        .enumerate()
        .filter(|(_, w)| classify_word(w, lexicon) != WordLanguage::English)
        .map(|(pos, w)| {
            let skel = consonant_skeleton(&w);
            (pos, w, skel)
        })
        .collect()
}

/// Pair up similar Romanized Sinhala words across two chunks.
///
/// Candidates are non-English (Sinhala or Unknown) words. Pairs whose
/// consonant skeletons are within Levenshtein distance 1 are taken greedily
/// in ascending (skeleton distance, position in a, position in b) order, each
/// word used at most once.
///
/// Exact-skeleton pairs are matched bucket-by-bucket first; that is the same
/// greedy order restricted to distance 0, because zero-distance pairs never
/// cross buckets.
pub fn align_rs_words(
    chunk_a: &Chunk,
    chunk_b: &Chunk,
    lexicon: &RsLexicon,
) -> Vec<(String, String)> {
    let cand_a = alignment_candidates(chunk_a, lexicon);
    let cand_b = alignment_candidates(chunk_b, lexicon);

    let mut used_a = vec![false; cand_a.len()];
    let mut used_b = vec![false; cand_b.len()];
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    // Distance-0 phase: identical skeletons, earliest positions first.
    let mut buckets: BTreeMap<&str, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, (_, _, skel)) in cand_a.iter().enumerate() {
        buckets.entry(skel).or_default().0.push(i);
    }
    for (j, (_, _, skel)) in cand_b.iter().enumerate() {
        buckets.entry(skel).or_default().1.push(j);
    }
    for (_, (ia, jb)) in buckets {
        for (&i, &j) in ia.iter().zip(jb.iter()) {
            used_a[i] = true;
            used_b[j] = true;
            pairs.push((i, j));
        }
    }

    // Distance-1 phase over the leftovers.
    let mut near: Vec<(usize, usize)> = Vec::new();
    for (i, (_, _, skel_a)) in cand_a.iter().enumerate().filter(|(i, _)| !used_a[*i]) {
        for (j, (_, _, skel_b)) in cand_b.iter().enumerate().filter(|(j, _)| !used_b[*j]) {
            // Cheap length screen before the DP.
            if skel_a.chars().count().abs_diff(skel_b.chars().count()) <= 1
                && levenshtein(skel_a, skel_b) == 1
            {
                near.push((i, j));
            }
        }
    }
    near.sort_unstable();
    for (i, j) in near {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            pairs.push((i, j));
        }
    }

    // Report pairs ordered by position in chunk a.
    pairs.sort_unstable();
    pairs
        .into_iter()
        .map(|(i, j)| (cand_a[i].1.clone(), cand_b[j].1.clone()))
        .collect()
}

/// The pairwise Romanized Sinhala feature set for two chunks.
#[derive(Debug, Clone, PartialEq)]
pub struct RsPairFeatures {
    pub ratio_a: f64,
    pub ratio_b: f64,
    pub ratio_abs_diff: f64,
    pub aligned_count: usize,
    /// Sum of full-word edit distances over aligned pairs.
    pub total_edit_distance: usize,
    /// Mean of d(a, b) / max(|a|, |b|) over aligned pairs; 0 when none.
    pub mean_normalized_distance: f64,
    /// Share of candidate words on both sides left unaligned; 0 when there
    /// are no candidates.
    pub unaligned_fraction: f64,
}

/// Extract all pairwise features for two chunks.
pub fn rs_pair_features(
    chunk_a: &Chunk,
    chunk_b: &Chunk,
    lexicon: &RsLexicon,
) -> Result<RsPairFeatures> {
    let ratio_a = en_si_ratio(chunk_a, lexicon)?;
    let ratio_b = en_si_ratio(chunk_b, lexicon)?;
    let pairs = align_rs_words(chunk_a, chunk_b, lexicon);

    let mut total = 0usize;
    let mut normalized_sum = 0.0f64;
    for (a, b) in &pairs {
        let d = levenshtein(a, b);
        total += d;
        let longest = a.chars().count().max(b.chars().count());
        normalized_sum += d as f64 / longest as f64;
    }
    let aligned = pairs.len();
    let candidates =
        alignment_candidates(chunk_a, lexicon).len() + alignment_candidates(chunk_b, lexicon).len();

    Ok(RsPairFeatures {
        ratio_a,
        ratio_b,
        ratio_abs_diff: (ratio_a - ratio_b).abs(),
        aligned_count: aligned,
        total_edit_distance: total,
        mean_normalized_distance: if aligned > 0 {
            normalized_sum / aligned as f64
        } else {
            0.0
        },
        unaligned_fraction: if candidates > 0 {
            (candidates - 2 * aligned) as f64 / candidates as f64
        } else {
            0.0
        },
    })
}
