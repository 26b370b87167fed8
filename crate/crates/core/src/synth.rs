//! Deterministic synthetic author-corpus generator, so the pipeline has
//! end-to-end test data with controllable author separation.

use crate::dataset::Corpus;
use crate::error::{Error, Result};
use crate::rng::{mix, SplitMix64};
use crate::text::LanguageMode;

/// Generative style knobs for one author.
///
/// Documents are built sentence by sentence: lengths follow a clipped normal,
/// words are drawn by weight from the function-word and content pools, and
/// punctuation marks attach after words at the configured per-1000-word
/// rates. In `rs_mode` the content pool holds canonical Romanized Sinhala
/// forms: each vowel drops independently with `rs_vowel_drop_prob`, and an
/// English filler word replaces the slot with probability `en_mix_prob`.
#[derive(Debug, Clone)]
pub struct AuthorStyleParams {
    pub mean_sentence_len: f64,
    pub std_sentence_len: f64,
    /// Mark -> expected occurrences per 1000 generated words.
    pub punct_rates: Vec<(char, f64)>,
    pub func_word_weights: Vec<(String, f64)>,
    /// Content words with sampling weights.
    pub vocab: Vec<(String, f64)>,
    pub rs_mode: bool,
    pub rs_vowel_drop_prob: f64,
    pub en_mix_prob: f64,
}

const ENGLISH_FUNC: [(&str, f64); 30] = [
    ("the", 60.0),
    ("of", 30.0),
    ("and", 28.0),
    ("a", 25.0),
    ("to", 24.0),
    ("in", 20.0),
    ("it", 14.0),
    ("is", 12.0),
    ("was", 11.0),
    ("for", 10.0),
    ("on", 9.0),
    ("with", 8.5),
    ("as", 8.0),
    ("at", 6.0),
    ("by", 6.0),
    ("that", 9.0),
    ("this", 6.5),
    ("but", 6.0),
    ("not", 6.5),
    ("she", 5.5),
    ("he", 5.5),
    ("they", 5.0),
    ("we", 4.5),
    ("her", 4.0),
    ("his", 4.0),
    ("from", 4.5),
    ("or", 4.0),
    ("an", 3.5),
    ("were", 3.0),
    ("had", 3.5),
];

const ENGLISH_VOCAB: [&str; 96] = [
    "time",
    "people",
    "house",
    "water",
    "garden",
    "letter",
    "market",
    "window",
    "evening",
    "street",
    "winter",
    "summer",
    "music",
    "table",
    "coffee",
    "morning",
    "paper",
    "story",
    "mountain",
    "river",
    "child",
    "teacher",
    "doctor",
    "friend",
    "village",
    "city",
    "road",
    "train",
    "bridge",
    "forest",
    "field",
    "flower",
    "bird",
    "horse",
    "light",
    "shadow",
    "voice",
    "silence",
    "dream",
    "memory",
    "journey",
    "corner",
    "kitchen",
    "door",
    "wall",
    "floor",
    "ceiling",
    "chair",
    "clock",
    "photograph",
    "novel",
    "poem",
    "song",
    "dance",
    "game",
    "holiday",
    "weather",
    "rain",
    "storm",
    "cloud",
    "moon",
    "star",
    "ocean",
    "island",
    "harbor",
    "castle",
    "tower",
    "stone",
    "glass",
    "silver",
    "shade",
    "meadow",
    "valley",
    "breeze",
    "lantern",
    "candle",
    "mirror",
    "ribbon",
    "basket",
    "bottle",
    "orchard",
    "stable",
    "barn",
    "harvest",
    "thread",
    "needle",
    "fabric",
    "carpet",
    "curtain",
    "drawer",
    "shelf",
    "ladder",
    "hammer",
    "engine",
    "wheel",
    "anchor",
];

const RS_VOCAB: [&str; 100] = [
    "mama",
    "api",
    "oya",
    "eya",
    "mata",
    "mage",
    "gedara",
    "giya",
    "enawa",
    "yanawa",
    "karanawa",
    "kiyanawa",
    "balanawa",
    "dannawa",
    "hithanawa",
    "innawa",
    "thiyenawa",
    "wenawa",
    "kanawa",
    "bonawa",
    "ada",
    "heta",
    "iye",
    "dan",
    "passe",
    "kalin",
    "hawasa",
    "ude",
    "dawasa",
    "welawa",
    "gama",
    "rata",
    "paara",
    "kade",
    "iskole",
    "wada",
    "salli",
    "kama",
    "wathura",
    "bath",
    "kiri",
    "lamaya",
    "yaluwa",
    "amma",
    "thaththa",
    "aiya",
    "akka",
    "malli",
    "nangi",
    "putha",
    "duwa",
    "machan",
    "hoda",
    "hodai",
    "naraka",
    "loku",
    "podi",
    "lassana",
    "alut",
    "parana",
    "hari",
    "godak",
    "tikak",
    "wadi",
    "adu",
    "eka",
    "deka",
    "thuna",
    "hathara",
    "paha",
    "ekka",
    "gana",
    "wage",
    "nisa",
    "namuth",
    "ithin",
    "ane",
    "aiyo",
    "bohoma",
    "sthuthi",
    "epa",
    "ona",
    "puluwan",
    "baha",
    "naha",
    "nathi",
    "mona",
    "mokada",
    "kawda",
    "koheda",
    "kohomada",
    "meka",
    "oka",
    "mehe",
    "ehe",
    "langa",
    "uda",
    "yata",
    "dina",
    "bala",
];

const RS_ENGLISH_FILLER: [(&str, f64); 24] = [
    ("i", 10.0),
    ("you", 9.0),
    ("ok", 8.0),
    ("okay", 5.0),
    ("so", 6.0),
    ("and", 6.0),
    ("but", 5.0),
    ("the", 5.0),
    ("to", 5.0),
    ("for", 4.0),
    ("with", 3.0),
    ("not", 3.0),
    ("yeah", 5.0),
    ("please", 3.0),
    ("thanks", 4.0),
    ("good", 4.0),
    ("nice", 3.0),
    ("sure", 3.0),
    ("really", 3.0),
    ("very", 2.5),
    ("now", 3.5),
    ("then", 2.5),
    ("today", 3.0),
    ("tomorrow", 2.5),
];

impl AuthorStyleParams {
    /// Base parameters for English prose generation.
    pub fn default_english() -> Self {
        Self {
            mean_sentence_len: 14.0,
            std_sentence_len: 4.0,
            punct_rates: vec![
                (',', 50.0),
                (';', 5.0),
                (':', 6.0),
                ('-', 8.0),
                ('"', 12.0),
                ('\'', 4.0),
                ('(', 3.0),
                (')', 3.0),
            ],
            func_word_weights: ENGLISH_FUNC
                .iter()
                .map(|&(w, x)| (w.to_string(), x))
                .collect(),
            vocab: ENGLISH_VOCAB
                .iter()
                .enumerate()
                .map(|(i, &w)| (w.to_string(), 10.0 / (1.0 + i as f64 * 0.1)))
                .collect(),
            rs_mode: false,
            rs_vowel_drop_prob: 0.0,
            en_mix_prob: 0.0,
        }
    }

    /// Base parameters for Romanized Sinhala chat generation.
    pub fn default_romanized() -> Self {
        Self {
            mean_sentence_len: 9.0,
            std_sentence_len: 3.0,
            punct_rates: vec![(',', 20.0)],
            func_word_weights: RS_ENGLISH_FILLER
                .iter()
                .map(|&(w, x)| (w.to_string(), x))
                .collect(),
            vocab: RS_VOCAB
                .iter()
                .enumerate()
                .map(|(i, &w)| (w.to_string(), 10.0 / (1.0 + i as f64 * 0.05)))
                .collect(),
            rs_mode: true,
            rs_vowel_drop_prob: 0.3,
            en_mix_prob: 0.45,
        }
    }

    pub fn for_mode(mode: LanguageMode) -> Self {
        match mode {
            LanguageMode::English => Self::default_english(),
            LanguageMode::RomanizedSinhala => Self::default_romanized(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.mean_sentence_len < 1.0 || self.std_sentence_len < 0.0 {
            return Err(Error::InvalidParams(
                "sentence length parameters out of range".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.rs_vowel_drop_prob)
            || !(0.0..=1.0).contains(&self.en_mix_prob)
        {
            return Err(Error::InvalidParams(
                "probabilities must lie in [0, 1]".into(),
            ));
        }
        if self.vocab.is_empty() && self.func_word_weights.is_empty() {
            return Err(Error::InvalidParams("no words to sample from".into()));
        }
        if self
            .punct_rates
            .iter()
            .any(|(_, r)| *r < 0.0 || !r.is_finite())
        {
            return Err(Error::InvalidParams(
                "punctuation rates must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

fn pick_weighted<'a>(pool: &'a [(String, f64)], rng: &mut SplitMix64) -> &'a str {
    let total: f64 = pool.iter().map(|(_, w)| w.max(0.0)).sum();
    let mut u = rng.next_f64() * total;
    for (word, w) in pool {
        u -= w.max(0.0);
        if u <= 0.0 {
            return word;
        }
    }
    &pool[pool.len() - 1].0
}

fn drop_vowels(word: &str, prob: f64, rng: &mut SplitMix64) -> String {
    let out: String = word
        .chars()
        .filter(|c| !(matches!(c, 'a' | 'e' | 'i' | 'o' | 'u') && rng.chance(prob)))
        .collect();
    if out.is_empty() {
        word.to_string()
    } else {
        out
    }
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}

fn gen_one_doc(params: &AuthorStyleParams, words_per_doc: usize, rng: &mut SplitMix64) -> String {
    // English mode samples function and content words from one merged pool.
    let merged: Vec<(String, f64)> = if params.rs_mode {
        Vec::new()
    } else {
        params
            .func_word_weights
            .iter()
            .chain(params.vocab.iter())
            .cloned()
            .collect()
    };

    let mut text = String::new();
    let mut words = 0usize;
    let max_len = (params.mean_sentence_len * 3.0).max(1.0);
    while words < words_per_doc {
        let raw = rng.normal(params.mean_sentence_len, params.std_sentence_len);
        let sent_len = raw.round().clamp(1.0, max_len) as usize;
        for k in 0..sent_len {
            let word: String = if params.rs_mode {
                if rng.chance(params.en_mix_prob) {
                    pick_weighted(&params.func_word_weights, rng).to_string()
                } else {
                    let base = pick_weighted(&params.vocab, rng);
                    drop_vowels(base, params.rs_vowel_drop_prob, rng)
                }
            } else {
                let w = pick_weighted(&merged, rng);
                if k == 0 {
                    capitalize(w)
                } else {
                    w.to_string()
                }
            };
            text.push_str(&word);
            words += 1;
            // At most one mark per word slot, chosen by cumulative rate, so
            // realized counts converge to rate-per-1000-words exactly.
            let mut u = rng.next_f64() * 1000.0;
            for (mark, rate) in &params.punct_rates {
                u -= rate;
                if u < 0.0 {
                    text.push(*mark);
                    break;
                }
            }
            if k + 1 < sent_len {
                text.push(' ');
            }
        }
        let u = rng.next_f64();
        text.push(if u < 0.85 {
            '.'
        } else if u < 0.93 {
            '!'
        } else {
            '?'
        });
        text.push(' ');
    }
    text.trim_end().to_string()
}

/// Generate `n_docs` documents for one author. Deterministic in the seed;
/// document `d` draws from a generator seeded by `mix(seed, d)`.
pub fn gen_author_docs(
    params: &AuthorStyleParams,
    n_docs: usize,
    words_per_doc: usize,
    seed: u64,
) -> Result<Vec<String>> {
    params.validate()?;
    if n_docs == 0 || words_per_doc == 0 {
        return Err(Error::InvalidParams(
            "n_docs and words_per_doc must be positive".into(),
        ));
    }
    Ok((0..n_docs)
        .map(|d| {
            let mut rng = SplitMix64::new(mix(seed, d as u64));
            gen_one_doc(params, words_per_doc, &mut rng)
        })
        .collect())
}

fn jitter(value: f64, spread: f64, rng: &mut SplitMix64) -> f64 {
    value * (1.0 + spread * (2.0 * rng.next_f64() - 1.0))
}

/// Derive one author's parameters from the base by jittering every numeric
/// knob within `param_spread`.
fn author_params(base: &AuthorStyleParams, spread: f64, rng: &mut SplitMix64) -> AuthorStyleParams {
    let mut p = base.clone();
    p.mean_sentence_len = jitter(base.mean_sentence_len, spread, rng).max(2.0);
    p.std_sentence_len = jitter(base.std_sentence_len, spread, rng).max(0.5);
    for (_, rate) in &mut p.punct_rates {
        *rate = jitter(*rate, spread, rng).max(0.0);
    }
    for (_, w) in &mut p.func_word_weights {
        *w = jitter(*w, spread, rng).max(0.01);
    }
    for (_, w) in &mut p.vocab {
        *w = jitter(*w, spread, rng).max(0.01);
    }
    if base.rs_mode {
        p.rs_vowel_drop_prob = jitter(base.rs_vowel_drop_prob, spread, rng).clamp(0.0, 1.0);
        p.en_mix_prob = jitter(base.en_mix_prob, spread, rng).clamp(0.0, 1.0);
    }
    p
}

/// Generate a whole author-labeled corpus. Each author gets parameters
/// sampled within `param_spread` of the base, then their own seeded document
/// stream. Zero spread makes the authors statistically identical.
pub fn gen_corpus(
    base: &AuthorStyleParams,
    n_authors: usize,
    docs_per_author: usize,
    words_per_doc: usize,
    param_spread: f64,
    seed: u64,
) -> Result<Corpus> {
    base.validate()?;
    if n_authors < 2 {
        return Err(Error::InvalidParams("need at least two authors".into()));
    }
    if !(0.0..=1.0).contains(&param_spread) {
        return Err(Error::InvalidParams(
            "param_spread must lie in [0, 1]".into(),
        ));
    }
    let mode = if base.rs_mode {
        LanguageMode::RomanizedSinhala
    } else {
        LanguageMode::English
    };
    let mut corpus = Corpus::new(mode);
    for a in 0..n_authors {
        let author_seed = mix(seed, a as u64);
        let mut param_rng = SplitMix64::new(mix(author_seed, 0));
        let params = author_params(base, param_spread, &mut param_rng);
        let docs = gen_author_docs(&params, docs_per_author, words_per_doc, mix(author_seed, 1))?;
        let author_id = format!("author{a:03}");
        for (d, text) in docs.into_iter().enumerate() {
            corpus.push(
                format!("{author_id}/doc{d:03}.txt"),
                author_id.clone(),
                text,
            );
        }
    }
    Ok(corpus)
}
