//! Embedded English word lists: POS lexicon, function words, and irregular
//! past participles. Shipped under `data/` and baked into the binary.

use std::collections::{BTreeSet, HashMap};
use std::sync::LazyLock;

use super::PosTag;

const POS_LEXICON_TSV: &str = include_str!("../../data/pos_lexicon.tsv");
const FUNCTION_WORDS_TXT: &str = include_str!("../../data/function_words.txt");
const IRREGULAR_PARTICIPLES_TXT: &str = include_str!("../../data/irregular_participles.txt");

fn parse_tag(s: &str) -> Option<PosTag> {
    Some(match s {
        "NOUN" => PosTag::Noun,
        "VERB" => PosTag::Verb,
        "ADJECTIVE" => PosTag::Adjective,
        "ADVERB" => PosTag::Adverb,
        "PRONOUN" => PosTag::Pronoun,
        "DETERMINER" => PosTag::Determiner,
        "PREPOSITION" => PosTag::Preposition,
        "CONJUNCTION" => PosTag::Conjunction,
        "MODAL" => PosTag::Modal,
        "PARTICIPLE" => PosTag::Participle,
        "INTERJECTION" => PosTag::Interjection,
        "OTHER" => PosTag::Other,
        _ => return None,
    })
}

pub(crate) static POS_LEXICON: LazyLock<HashMap<&'static str, PosTag>> = LazyLock::new(|| {
    let mut map = HashMap::new();
    for (i, line) in POS_LEXICON_TSV.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let (word, tag) = line
            .split_once('\t')
            .unwrap_or_else(|| panic!("pos_lexicon.tsv line {}: missing tab", i + 1));
        let tag = parse_tag(tag)
            .unwrap_or_else(|| panic!("pos_lexicon.tsv line {}: unknown tag {tag:?}", i + 1));
        map.insert(word, tag);
    }
    map
});

pub(crate) static FUNCTION_WORDS: LazyLock<BTreeSet<&'static str>> = LazyLock::new(|| {
    FUNCTION_WORDS_TXT
        .lines()
        .filter(|l| !l.is_empty())
        .collect()
});

pub(crate) static IRREGULAR_PARTICIPLES: LazyLock<BTreeSet<&'static str>> = LazyLock::new(|| {
    IRREGULAR_PARTICIPLES_TXT
        .lines()
        .filter(|l| !l.is_empty())
        .collect()
});

/// Forms of "be" that can open a passive construction.
pub(crate) const BE_FORMS: [&str; 8] = ["am", "is", "are", "was", "were", "been", "being", "be"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicon_parses_and_is_populated() {
        assert!(POS_LEXICON.len() > 400);
        assert_eq!(POS_LEXICON.get("the"), Some(&PosTag::Determiner));
        assert_eq!(POS_LEXICON.get("was"), Some(&PosTag::Verb));
        assert_eq!(POS_LEXICON.get("thrown"), Some(&PosTag::Participle));
    }

    #[test]
    fn function_words_cover_core_classes() {
        for w in ["the", "of", "and", "she", "was", "not"] {
            assert!(FUNCTION_WORDS.contains(w), "missing function word {w}");
        }
        assert!(FUNCTION_WORDS.len() > 100);
    }

    #[test]
    fn participle_list_includes_spec_forms() {
        for w in ["thrown", "known", "left", "made", "gone"] {
            assert!(IRREGULAR_PARTICIPLES.contains(w), "missing participle {w}");
        }
    }

    #[test]
    fn function_words_are_tagged_in_lexicon() {
        for w in FUNCTION_WORDS.iter() {
            assert!(
                POS_LEXICON.contains_key(w),
                "function word {w} missing from pos lexicon"
            );
        }
    }
}
