//! English stylometric profile: POS distribution, voice counts, punctuation
//! and function-word frequencies, sentence-length statistics, lexical
//! richness, and the word-bigram transition graph.

mod lexicon;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::text::{self, Token, PUNCT_MARKS};

use lexicon::{BE_FORMS, FUNCTION_WORDS, IRREGULAR_PARTICIPLES, POS_LEXICON};

/// Closed part-of-speech tagset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PosTag {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Pronoun,
    Determiner,
    Preposition,
    Conjunction,
    Modal,
    Participle,
    Interjection,
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 12] = [
        PosTag::Noun,
        PosTag::Verb,
        PosTag::Adjective,
        PosTag::Adverb,
        PosTag::Pronoun,
        PosTag::Determiner,
        PosTag::Preposition,
        PosTag::Conjunction,
        PosTag::Modal,
        PosTag::Participle,
        PosTag::Interjection,
        PosTag::Other,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PosTag::Noun => "noun",
            PosTag::Verb => "verb",
            PosTag::Adjective => "adjective",
            PosTag::Adverb => "adverb",
            PosTag::Pronoun => "pronoun",
            PosTag::Determiner => "determiner",
            PosTag::Preposition => "preposition",
            PosTag::Conjunction => "conjunction",
            PosTag::Modal => "modal",
            PosTag::Participle => "participle",
            PosTag::Interjection => "interjection",
            PosTag::Other => "other",
        }
    }
}

/// Word-bigram transition probabilities over sentence-internal adjacent words.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransitionGraph {
    /// (from, to) -> conditional probability P(to | from). Rows sum to 1.
    pub edges: BTreeMap<(String, String), f64>,
    /// Total outgoing bigram observations per word (the row denominator).
    pub out_degree: BTreeMap<String, usize>,
}

impl TransitionGraph {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoiceStats {
    pub active: usize,
    pub passive: usize,
    /// passive / (active + passive), or 0 when no voiced sentence exists.
    pub passive_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SentenceStats {
    pub mean: f64,
    /// Population standard deviation of sentence word counts.
    pub std: f64,
    /// Share of sentences with word counts in 1-5, 6-10, 11-20, 21-40, 41+.
    pub histogram: [f64; 5],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Richness {
    pub type_token_ratio: f64,
    pub hapax_ratio: f64,
    pub mean_word_length: f64,
}

/// The full English stylometric profile of one text.
#[derive(Debug, Clone, PartialEq)]
pub struct EnglishProfile {
    /// POS tag -> rate per 1000 word tokens.
    pub pos_freq: BTreeMap<PosTag, f64>,
    pub voice: VoiceStats,
    /// Punctuation mark -> rate per 1000 tokens, over all of [`PUNCT_MARKS`].
    pub punct_freq: BTreeMap<char, f64>,
    pub sent_stats: SentenceStats,
    /// Function word -> rate per 1000 word tokens (only words that occur).
    pub func_freq: BTreeMap<String, f64>,
    pub richness: Richness,
    pub graph: TransitionGraph,
}

/// Tag one word by lexicon lookup, then suffix rules, then the Noun default.
fn tag_word(folded: &str) -> PosTag {
    if let Some(&tag) = POS_LEXICON.get(folded) {
        return tag;
    }
    let longer_than = |suf: &str| folded.len() > suf.len();
    if folded.ends_with("ly") && longer_than("ly") {
        return PosTag::Adverb;
    }
    if (folded.ends_with("ing") && longer_than("ing"))
        || (folded.ends_with("ed") && longer_than("ed"))
    {
        return PosTag::Verb;
    }
    if (folded.ends_with("tion") && longer_than("tion"))
        || (folded.ends_with("ness") && longer_than("ness"))
        || (folded.ends_with("ment") && longer_than("ment"))
    {
        return PosTag::Noun;
    }
    if (folded.ends_with("ous") && longer_than("ous"))
        || (folded.ends_with("ful") && longer_than("ful"))
        || (folded.ends_with("ive") && longer_than("ive"))
    {
        return PosTag::Adjective;
    }
    PosTag::Noun
}

/// Deterministically tag every token. Non-word tokens get [`PosTag::Other`].
pub fn pos_tag(tokens: &[Token]) -> Vec<(Token, PosTag)> {
    tokens
        .iter()
        .map(|t| {
            let tag = if t.is_word() {
                tag_word(&t.folded())
            } else {
                PosTag::Other
            };
            (t.clone(), tag)
        })
        .collect()
}

fn is_participle(folded: &str, tag: PosTag) -> bool {
    (tag == PosTag::Verb && (folded.ends_with("ed") || folded.ends_with("en")))
        || tag == PosTag::Participle
        || IRREGULAR_PARTICIPLES.contains(folded)
}

/// Count active and passive sentences.
///
/// A sentence is passive iff a form of "be" is followed within three word
/// tokens by a past participle; otherwise it is active if it contains any
/// Verb-tagged token. Sentences with no verb count in neither bucket.
pub fn voice_counts(tagged_sentences: &[Vec<(Token, PosTag)>]) -> (usize, usize) {
    let mut active = 0;
    let mut passive = 0;
    for sentence in tagged_sentences {
        let words: Vec<(String, PosTag)> = sentence
            .iter()
            .filter(|(t, _)| t.is_word())
            .map(|(t, tag)| (t.folded(), *tag))
            .collect();
        let mut is_passive = false;
        for (i, (word, _)) in words.iter().enumerate() {
            if !BE_FORMS.contains(&word.as_str()) {
                continue;
            }
            let window = &words[i + 1..(i + 4).min(words.len())];
            if window.iter().any(|(w, tag)| is_participle(w, *tag)) {
                is_passive = true;
                break;
            }
        }
        if is_passive {
            passive += 1;
        } else if words.iter().any(|(_, tag)| *tag == PosTag::Verb) {
            active += 1;
        }
    }
    (active, passive)
}

/// Rate per 1000 tokens for each mark in [`PUNCT_MARKS`].
pub fn punct_freq(tokens: &[Token]) -> Result<BTreeMap<char, f64>> {
    if tokens.is_empty() {
        return Err(Error::EmptyInput("punct_freq needs at least one token"));
    }
    let total = tokens.len() as f64;
    let mut counts: BTreeMap<char, usize> = PUNCT_MARKS.iter().map(|&m| (m, 0)).collect();
    for t in tokens.iter().filter(|t| t.kind == text::TokenKind::Punct) {
        if let Some(n) = t.text.chars().next().and_then(|c| counts.get_mut(&c)) {
            *n += 1;
        }
    }
    Ok(counts
        .into_iter()
        .map(|(m, n)| (m, 1000.0 * n as f64 / total))
        .collect())
}

/// Mean, population std, and normalized histogram of sentence word counts.
pub fn sentence_length_stats(lengths: &[usize]) -> Result<SentenceStats> {
    if lengths.is_empty() {
        return Err(Error::EmptyInput(
            "sentence_length_stats needs at least one sentence",
        ));
    }
    let n = lengths.len() as f64;
    let mean = lengths.iter().sum::<usize>() as f64 / n;
    let var = lengths
        .iter()
        .map(|&l| (l as f64 - mean).powi(2))
        .sum::<f64>()
        / n;
    let mut histogram = [0.0f64; 5];
    for &l in lengths {
        let bin = match l {
            0..=5 => 0,
            6..=10 => 1,
            11..=20 => 2,
            21..=40 => 3,
            _ => 4,
        };
        histogram[bin] += 1.0;
    }
    for h in &mut histogram {
        *h /= n;
    }
    Ok(SentenceStats {
        mean,
        std: var.sqrt(),
        histogram,
    })
}

/// Case-folded function-word counts scaled to rates per 1000 word tokens.
pub fn function_word_freq(tokens: &[Token]) -> Result<BTreeMap<String, f64>> {
    let words: Vec<String> = tokens
        .iter()
        .filter(|t| t.is_word())
        .map(|t| t.folded())
        .collect();
    if words.is_empty() {
        return Err(Error::EmptyInput(
            "function_word_freq needs at least one word token",
        ));
    }
    let total = words.len() as f64;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for w in &words {
        if FUNCTION_WORDS.contains(w.as_str()) {
            *counts.entry(w.clone()).or_insert(0) += 1;
        }
    }
    Ok(counts
        .into_iter()
        .map(|(w, n)| (w, 1000.0 * n as f64 / total))
        .collect())
}

/// Type-token ratio, hapax-legomena ratio, and mean word length in chars.
pub fn lexical_richness(tokens: &[Token]) -> Result<Richness> {
    let words: Vec<String> = tokens
        .iter()
        .filter(|t| t.is_word())
        .map(|t| t.folded())
        .collect();
    if words.is_empty() {
        return Err(Error::EmptyInput(
            "lexical_richness needs at least one word token",
        ));
    }
    let mut type_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for w in &words {
        *type_counts.entry(w).or_insert(0) += 1;
    }
    let types = type_counts.len() as f64;
    let hapaxes = type_counts.values().filter(|&&n| n == 1).count() as f64;
    let total_chars: usize = words.iter().map(|w| w.chars().count()).sum();
    Ok(Richness {
        type_token_ratio: types / words.len() as f64,
        hapax_ratio: hapaxes / types,
        mean_word_length: total_chars as f64 / words.len() as f64,
    })
}

/// Build the word-bigram transition graph over case-folded words.
///
/// Adjacency runs along the word-token subsequence of each sentence, so
/// intervening punctuation does not break a bigram but sentence boundaries do.
pub fn transition_graph(tokens: &[Token]) -> Result<TransitionGraph> {
    let words: Vec<(usize, String)> = tokens
        .iter()
        .filter(|t| t.is_word())
        .map(|t| (t.sentence_index, t.folded()))
        .collect();
    if words.len() < 2 {
        return Err(Error::EmptyInput(
            "transition_graph needs at least two word tokens",
        ));
    }
    let mut pair_counts: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut out_degree: BTreeMap<String, usize> = BTreeMap::new();
    for w in words.windows(2) {
        let ((s_a, a), (s_b, b)) = (&w[0], &w[1]);
        if s_a != s_b {
            continue;
        }
        *pair_counts.entry((a.clone(), b.clone())).or_insert(0) += 1;
        *out_degree.entry(a.clone()).or_insert(0) += 1;
    }
    let edges = pair_counts
        .into_iter()
        .map(|((a, b), n)| {
            let p = n as f64 / out_degree[&a] as f64;
            ((a, b), p)
        })
        .collect();
    Ok(TransitionGraph { edges, out_degree })
}

/// Extract the complete English profile of a cleaned text.
pub fn english_profile(text: &str) -> Result<EnglishProfile> {
    let tokens = text::tokenize(text);
    let word_count = tokens.iter().filter(|t| t.is_word()).count();
    if word_count == 0 {
        return Err(Error::EmptyInput("english_profile needs word tokens"));
    }

    let tagged = pos_tag(&tokens);

    // Group tagged tokens by sentence.
    let mut sentences: Vec<Vec<(Token, PosTag)>> = Vec::new();
    for (tok, tag) in tagged {
        match sentences.last_mut() {
            Some(s) if s[0].0.sentence_index == tok.sentence_index => s.push((tok, tag)),
            _ => sentences.push(vec![(tok, tag)]),
        }
    }

    let mut pos_counts: BTreeMap<PosTag, usize> = BTreeMap::new();
    for s in &sentences {
        for (tok, tag) in s {
            if tok.is_word() {
                *pos_counts.entry(*tag).or_insert(0) += 1;
            }
        }
    }
    let pos_freq = pos_counts
        .into_iter()
        .map(|(tag, n)| (tag, 1000.0 * n as f64 / word_count as f64))
        .collect();

    let (active, passive) = voice_counts(&sentences);
    let voiced = active + passive;
    let voice = VoiceStats {
        active,
        passive,
        passive_ratio: if voiced > 0 {
            passive as f64 / voiced as f64
        } else {
            0.0
        },
    };

    // Sentences with no word token carry no length signal.
    let lengths: Vec<usize> = sentences
        .iter()
        .map(|s| s.iter().filter(|(t, _)| t.is_word()).count())
        .filter(|&n| n > 0)
        .collect();

    Ok(EnglishProfile {
        pos_freq,
        voice,
        punct_freq: punct_freq(&tokens)?,
        sent_stats: sentence_length_stats(&lengths)?,
        func_freq: function_word_freq(&tokens)?,
        richness: lexical_richness(&tokens)?,
        graph: transition_graph(&tokens)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::tokenize;

    fn tag_of(word: &str) -> PosTag {
        let toks = tokenize(word);
        pos_tag(&toks)[0].1
    }

    #[test]
    fn lexicon_beats_suffix_beats_default() {
        assert_eq!(tag_of("the"), PosTag::Determiner);
        assert_eq!(tag_of("quickly"), PosTag::Adverb);
        assert_eq!(tag_of("florp"), PosTag::Noun);
    }

    #[test]
    fn suffix_rules_assign_expected_tags() {
        assert_eq!(tag_of("jumping"), PosTag::Verb);
        assert_eq!(tag_of("sprinted"), PosTag::Verb);
        assert_eq!(tag_of("relaxation"), PosTag::Noun);
        assert_eq!(tag_of("vastness"), PosTag::Noun);
        assert_eq!(tag_of("amazement"), PosTag::Noun);
        assert_eq!(tag_of("porous"), PosTag::Adjective);
        assert_eq!(tag_of("zestful"), PosTag::Adjective);
        assert_eq!(tag_of("reactive"), PosTag::Adjective);
    }

    #[test]
    fn non_word_tokens_get_other() {
        let toks = tokenize("x , 42 @");
        let tags: Vec<PosTag> = pos_tag(&toks).into_iter().map(|(_, t)| t).collect();
        assert_eq!(tags[1], PosTag::Other);
        assert_eq!(tags[2], PosTag::Other);
        assert_eq!(tags[3], PosTag::Other);
    }

    fn tagged_sentences(text: &str) -> Vec<Vec<(Token, PosTag)>> {
        let tagged = pos_tag(&tokenize(text));
        let mut out: Vec<Vec<(Token, PosTag)>> = Vec::new();
        for (tok, tag) in tagged {
            match out.last_mut() {
                Some(s) if s[0].0.sentence_index == tok.sentence_index => s.push((tok, tag)),
                _ => out.push(vec![(tok, tag)]),
            }
        }
        out
    }

    #[test]
    fn passive_sentence_detected() {
        // "was" + "thrown" inside the three-word window.
        assert_eq!(
            voice_counts(&tagged_sentences("The ball was thrown.")),
            (0, 1)
        );
        assert_eq!(
            voice_counts(&tagged_sentences("The ball was quickly thrown.")),
            (0, 1)
        );
    }

    #[test]
    fn active_sentence_detected() {
        assert_eq!(
            voice_counts(&tagged_sentences("She threw the ball.")),
            (1, 0)
        );
    }

    #[test]
    fn verbless_sentence_counts_in_neither() {
        assert_eq!(voice_counts(&tagged_sentences("What a mess.")), (0, 0));
    }

    #[test]
    fn empty_input_has_no_voice() {
        assert_eq!(voice_counts(&[]), (0, 0));
    }

    #[test]
    fn participle_outside_window_is_not_passive() {
        // Four words between "was" and the participle.
        let s = tagged_sentences("It was a very long story told well.");
        assert_eq!(voice_counts(&s), (1, 0));
    }

    #[test]
    fn punct_rates_are_per_thousand() {
        let mut toks = tokenize(&"w ".repeat(95));
        toks.extend(tokenize(", , , , ,"));
        assert_eq!(toks.len(), 100);
        let rates = punct_freq(&toks).unwrap();
        assert_eq!(rates[&','], 50.0);
        assert_eq!(rates[&'.'], 0.0);
    }

    #[test]
    fn punct_all_zero_without_punctuation() {
        let rates = punct_freq(&tokenize("plain words only")).unwrap();
        assert!(rates.values().all(|&r| r == 0.0));
    }

    #[test]
    fn punct_question_and_bang() {
        let mut toks = tokenize(&"w ".repeat(8));
        toks.extend(tokenize("? !"));
        assert_eq!(toks.len(), 10);
        let rates = punct_freq(&toks).unwrap();
        assert_eq!(rates[&'?'], 100.0);
        assert_eq!(rates[&'!'], 100.0);
    }

    #[test]
    fn punct_empty_errors() {
        assert!(matches!(punct_freq(&[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn sentence_stats_two_point() {
        let s = sentence_length_stats(&[4, 6]).unwrap();
        assert_eq!(s.mean, 5.0);
        assert_eq!(s.std, 1.0);
    }

    #[test]
    fn sentence_stats_single() {
        let s = sentence_length_stats(&[7]).unwrap();
        assert_eq!(s.mean, 7.0);
        assert_eq!(s.std, 0.0);
    }

    #[test]
    fn sentence_stats_histogram_first_bin() {
        let s = sentence_length_stats(&[3, 3, 3]).unwrap();
        assert_eq!(s.histogram, [1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn sentence_stats_histogram_sums_to_one() {
        let s = sentence_length_stats(&[2, 8, 15, 30, 50, 50]).unwrap();
        assert!((s.histogram.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn function_word_rates() {
        let freq = function_word_freq(&tokenize("the cat sat on the mat")).unwrap();
        assert!((freq["the"] - 2000.0 / 6.0).abs() < 1e-9);
        assert!((freq["on"] - 1000.0 / 6.0).abs() < 1e-9);
        assert!(!freq.contains_key("cat"));
    }

    #[test]
    fn no_function_words_is_empty_map() {
        let freq = function_word_freq(&tokenize("zebra quagga okapi")).unwrap();
        assert!(freq.is_empty());
    }

    #[test]
    fn all_function_words() {
        let freq = function_word_freq(&tokenize("and and and")).unwrap();
        assert_eq!(freq["and"], 1000.0);
    }

    #[test]
    fn richness_repeated_word() {
        let r = lexical_richness(&tokenize("a a a")).unwrap();
        assert!((r.type_token_ratio - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.hapax_ratio, 0.0);
        assert_eq!(r.mean_word_length, 1.0);
    }

    #[test]
    fn richness_all_distinct() {
        let r = lexical_richness(&tokenize("one zebra three quagga five")).unwrap();
        assert_eq!(r.type_token_ratio, 1.0);
        assert_eq!(r.hapax_ratio, 1.0);
    }

    #[test]
    fn richness_mean_word_length() {
        let r = lexical_richness(&tokenize("ab abc")).unwrap();
        assert_eq!(r.mean_word_length, 2.5);
    }

    #[test]
    fn graph_deterministic_probabilities() {
        let g = transition_graph(&tokenize("a b a b")).unwrap();
        assert_eq!(g.edges[&("a".into(), "b".into())], 1.0);
        assert_eq!(g.edges[&("b".into(), "a".into())], 1.0);
    }

    #[test]
    fn graph_splits_probability() {
        let g = transition_graph(&tokenize("a b a c")).unwrap();
        assert_eq!(g.edges[&("a".into(), "b".into())], 0.5);
        assert_eq!(g.edges[&("a".into(), "c".into())], 0.5);
    }

    #[test]
    fn graph_stops_at_sentence_boundary() {
        let g = transition_graph(&tokenize("He won. She lost.")).unwrap();
        assert!(!g.edges.contains_key(&("won".into(), "she".into())));
        assert!(g.edges.contains_key(&("he".into(), "won".into())));
    }

    #[test]
    fn graph_requires_two_words() {
        assert!(matches!(
            transition_graph(&tokenize("one")),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn profile_passive_ratio_mixes_sentences() {
        let p = english_profile("The ball was thrown. She left.").unwrap();
        assert_eq!(p.voice.passive_ratio, 0.5);
        assert_eq!(p.voice.active, 1);
        assert_eq!(p.voice.passive, 1);
    }

    #[test]
    fn profile_is_deterministic() {
        let text = "A small cat sat here. It was seen by everyone. The end came soon.";
        assert_eq!(
            english_profile(text).unwrap(),
            english_profile(text).unwrap()
        );
    }

    #[test]
    fn profile_tiny_text() {
        let p = english_profile("a b.").unwrap();
        assert_eq!(p.richness.type_token_ratio, 1.0);
        assert_eq!(p.graph.edges.len(), 1);
        assert_eq!(p.graph.edges[&("a".into(), "b".into())], 1.0);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_text() -> impl Strategy<Value = String> {
            prop::collection::vec("[a-z]{1,7}", 2..60).prop_map(|mut words| {
                // Sprinkle sentence breaks, and always terminate the last
                // sentence so shuffling sentences cannot merge two of them.
                let mut text = String::new();
                for (i, w) in words.drain(..).enumerate() {
                    text.push_str(&w);
                    text.push_str(if i % 7 == 6 { ". " } else { " " });
                }
                let mut text = text.trim_end().to_string();
                if !text.ends_with('.') {
                    text.push('.');
                }
                text
            })
        }

        proptest! {
            #[test]
            fn graph_rows_sum_to_one(text in arb_text()) {
                let g = transition_graph(&tokenize(&text)).unwrap();
                let mut row_sums: BTreeMap<&str, f64> = BTreeMap::new();
                for ((a, _), p) in &g.edges {
                    *row_sums.entry(a).or_insert(0.0) += p;
                }
                for (word, sum) in row_sums {
                    prop_assert!((sum - 1.0).abs() < 1e-9, "row {} sums to {}", word, sum);
                }
            }

            #[test]
            fn pos_rates_sum_to_thousand(text in arb_text()) {
                let p = english_profile(&text).unwrap();
                let sum: f64 = p.pos_freq.values().sum();
                prop_assert!((sum - 1000.0).abs() < 1e-6);
            }

            #[test]
            fn sentence_shuffle_preserves_scalar_features(
                text in arb_text(),
                seed in any::<u64>(),
            ) {
                let spans = crate::text::split_sentences(&text);
                let mut sentences: Vec<&str> = spans.iter()
                    .map(|r| text[r.clone()].trim())
                    .filter(|s| !s.is_empty())
                    .collect();
                let mut rng = crate::rng::SplitMix64::new(seed);
                rng.shuffle(&mut sentences);
                let shuffled = sentences.join(" ");

                let a = english_profile(&text).unwrap();
                let b = english_profile(&shuffled).unwrap();
                prop_assert_eq!(&a.punct_freq, &b.punct_freq);
                prop_assert_eq!(&a.func_freq, &b.func_freq);
                prop_assert_eq!(a.richness, b.richness);
                prop_assert_eq!(&a.pos_freq, &b.pos_freq);
                prop_assert_eq!(a.voice, b.voice);
            }

            #[test]
            fn doubling_text_preserves_rates(text in arb_text()) {
                let doubled = format!("{text} {text}");
                let a = english_profile(&text).unwrap();
                let b = english_profile(&doubled).unwrap();
                for (mark, rate) in &a.punct_freq {
                    prop_assert!((rate - b.punct_freq[mark]).abs() < 1e-9);
                }
                for (word, rate) in &a.func_freq {
                    prop_assert!((rate - b.func_freq[word]).abs() < 1e-9);
                }
            }
        }
    }
}
