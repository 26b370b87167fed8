//! Text normalization, tokenization, sentence segmentation, and chunking
//! shared by both language pipelines.

use std::ops::Range;

use crate::error::{Error, Result};

/// Which feature pipeline a document belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LanguageMode {
    English,
    RomanizedSinhala,
}

impl LanguageMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            LanguageMode::English => "english",
            LanguageMode::RomanizedSinhala => "rs",
        }
    }
}

impl std::str::FromStr for LanguageMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "english" | "en" => Ok(LanguageMode::English),
            "rs" | "romanized-sinhala" | "romanized_sinhala" => Ok(LanguageMode::RomanizedSinhala),
            other => Err(Error::InvalidParams(format!(
                "unknown language mode {other:?} (expected \"english\" or \"rs\")"
            ))),
        }
    }
}

/// One input text with optional author attribution.
#[derive(Debug, Clone)]
pub struct RawDocument {
    pub text: String,
    pub author_id: Option<String>,
    pub language_mode: LanguageMode,
}

impl RawDocument {
    pub fn new(text: impl Into<String>, author_id: Option<String>, mode: LanguageMode) -> Self {
        Self {
            text: text.into(),
            author_id,
            language_mode: mode,
        }
    }
}

/// Cleaning switches. Applying the same policy twice equals applying it once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CleanPolicy {
    pub strip_emoji: bool,
    pub strip_urls: bool,
    pub strip_media_placeholders: bool,
    pub collapse_whitespace: bool,
}

impl Default for CleanPolicy {
    /// Everything on: the preprocessing used for chat and blog exports.
    fn default() -> Self {
        Self {
            strip_emoji: true,
            strip_urls: true,
            strip_media_placeholders: true,
            collapse_whitespace: true,
        }
    }
}

impl CleanPolicy {
    pub fn none() -> Self {
        Self {
            strip_emoji: false,
            strip_urls: false,
            strip_media_placeholders: false,
            collapse_whitespace: false,
        }
    }
}

/// Literal placeholders that chat exports insert for non-text content.
/// Matched case-insensitively.
const MEDIA_PLACEHOLDERS: &[&str] = &[
    "<media omitted>",
    "[photo]",
    "[video]",
    "[image]",
    "[gif]",
    "[sticker]",
    "[voice message]",
    "(file attached)",
];

/// Pictograph blocks removed by `strip_emoji`: emoticons, miscellaneous
/// symbols and pictographs, transport and map symbols, and regional-indicator
/// (flag) codepoints, plus variation selector-16 which only decorates them.
fn is_emoji(c: char) -> bool {
    matches!(u32::from(c),
        0x1F600..=0x1F64F       // emoticons
        | 0x1F300..=0x1F5FF     // symbols and pictographs
        | 0x1F680..=0x1F6FF     // transport and map
        | 0x1F1E6..=0x1F1FF     // regional indicators (flags)
        | 0xFE0F                // variation selector-16
    )
}

fn remove_media_placeholders(text: &str) -> String {
    let mut out = text.to_string();
    // Fixpoint loop: removal can in principle splice a new placeholder
    // together, so repeat until the text stops changing.
    loop {
        let lower = out.to_lowercase();
        let mut hit = None;
        for pat in MEDIA_PLACEHOLDERS {
            if let Some(pos) = lower.find(pat) {
                hit = Some((pos, pat.len()));
                break;
            }
        }
        match hit {
            Some((pos, len)) => out.replace_range(pos..pos + len, ""),
            None => return out,
        }
    }
}

/// A token is a URL if it has an alphabetic-scheme `://` prefix or starts
/// with `www.`.
fn is_url_token(token: &str) -> bool {
    if token.len() > 4
        && token
            .get(..4)
            .is_some_and(|p| p.eq_ignore_ascii_case("www."))
    {
        return true;
    }
    if let Some(pos) = token.find("://") {
        let scheme = &token[..pos];
        return !scheme.is_empty()
            && scheme
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic())
            && scheme
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c));
    }
    false
}

fn remove_urls(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while !rest.is_empty() {
        let ws_end = rest
            .char_indices()
            .find(|(_, c)| !c.is_whitespace())
            .map_or(rest.len(), |(i, _)| i);
        let (ws, tail) = rest.split_at(ws_end);
        let tok_end = tail
            .char_indices()
            .find(|(_, c)| c.is_whitespace())
            .map_or(tail.len(), |(i, _)| i);
        let (token, after) = tail.split_at(tok_end);
        if is_url_token(token) {
            // Drop the token plus one adjoining whitespace run so plain text
            // stays singly spaced: keep the leading run only when the URL is
            // the last token.
            if after.trim_start().is_empty() {
                rest = "";
            } else {
                out.push_str(ws);
                let next = after
                    .char_indices()
                    .find(|(_, c)| !c.is_whitespace())
                    .map_or(after.len(), |(i, _)| i);
                rest = &after[next..];
                continue;
            }
        } else {
            out.push_str(ws);
            out.push_str(token);
            rest = after;
        }
    }
    out
}

fn collapse_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_run = false;
    for c in text.chars() {
        if c.is_whitespace() {
            in_run = true;
        } else {
            if in_run && !out.is_empty() {
                out.push(' ');
            }
            in_run = false;
            out.push(c);
        }
    }
    out
}

/// Apply a cleaning policy. Idempotent for every policy; empty input yields
/// empty output.
pub fn clean(text: &str, policy: &CleanPolicy) -> String {
    let mut out = if policy.strip_media_placeholders {
        remove_media_placeholders(text)
    } else {
        text.to_string()
    };
    if policy.strip_urls {
        out = remove_urls(&out);
    }
    if policy.strip_emoji {
        out.retain(|c| !is_emoji(c));
    }
    if policy.collapse_whitespace {
        out = collapse_whitespace(&out);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Punct,
    Number,
    Symbol,
}

/// Punctuation marks tracked as `Punct` tokens and by the punctuation
/// frequency feature, in feature-vector order.
pub const PUNCT_MARKS: [char; 11] = [',', '.', ';', ':', '!', '?', '\'', '"', '-', '(', ')'];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
    /// Index of the sentence this token lies in; monotone non-decreasing
    /// across a token stream.
    pub sentence_index: usize,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }

    pub fn folded(&self) -> String {
        self.text.to_lowercase()
    }
}

/// Sentence terminators that never end a sentence: common abbreviations,
/// matched case-insensitively against the whole token ending at the period.
const ABBREVIATIONS: &[&str] = &[
    "mr.", "mrs.", "ms.", "dr.", "prof.", "sr.", "jr.", "st.", "mt.", "capt.", "col.", "gen.",
    "lt.", "sgt.", "rev.", "hon.", "vs.", "etc.", "e.g.", "i.e.", "cf.", "inc.", "ltd.", "co.",
    "corp.", "dept.", "ave.", "blvd.", "rd.", "no.", "vol.", "fig.",
];

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Split cleaned text into sentence spans (byte ranges that partition the
/// text). A sentence ends at `.`, `!`, or `?` followed by whitespace or end of
/// text, except when the period closes a listed abbreviation. Text with no
/// terminator is one sentence; empty or all-whitespace text has none.
pub fn split_sentences(text: &str) -> Vec<Range<usize>> {
    if text.trim().is_empty() {
        return Vec::new();
    }
    let mut spans = Vec::new();
    let mut start = 0usize;
    let bytes = text.as_bytes();
    let mut iter = text.char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        if !is_terminator(c) {
            continue;
        }
        let next = iter.peek().map(|&(_, n)| n);
        let at_break = next.is_none_or(|n| n.is_whitespace());
        if !at_break {
            continue;
        }
        if c == '.' {
            // Walk back over the non-whitespace run ending at this period.
            let mut tok_start = i;
            while tok_start > 0 && !bytes[tok_start - 1].is_ascii_whitespace() {
                tok_start -= 1;
            }
            let token = &text[tok_start..i + c.len_utf8()];
            let folded = token.to_lowercase();
            // Opening punctuation does not make "(e.g." a sentence end.
            let word = folded.trim_start_matches(|c: char| !c.is_alphabetic());
            if ABBREVIATIONS
                .iter()
                .any(|a| word == *a || word.ends_with(&format!(".{a}")))
            {
                continue;
            }
        }
        let end = i + c.len_utf8();
        // Swallow a trailing all-whitespace tail into the last sentence.
        if text[end..].trim().is_empty() {
            break;
        }
        spans.push(start..end);
        start = end;
    }
    spans.push(start..text.len());
    spans
}

/// Tokenize cleaned text into words, punctuation marks, numbers, and symbols,
/// stamping each token with the index of the sentence that contains it.
///
/// Words are maximal letter runs, keeping internal apostrophes ("don't");
/// numbers are digit runs; the marks in [`PUNCT_MARKS`] become `Punct`; any
/// other non-whitespace character becomes a one-char `Symbol`.
pub fn tokenize(text: &str) -> Vec<Token> {
    let sentences = split_sentences(text);
    let mut tokens = Vec::new();
    let mut sentence = 0usize;
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut pos = 0usize;

    let sentence_for = |byte: usize, sentence: &mut usize| {
        while *sentence + 1 < sentences.len() && byte >= sentences[*sentence].end {
            *sentence += 1;
        }
        *sentence
    };

    while pos < chars.len() {
        let (byte, c) = chars[pos];
        if c.is_whitespace() {
            pos += 1;
            continue;
        }
        let sent = sentence_for(byte, &mut sentence);
        if c.is_alphabetic() {
            let start = pos;
            pos += 1;
            loop {
                match chars.get(pos) {
                    Some(&(_, ch)) if ch.is_alphabetic() => pos += 1,
                    // Internal apostrophe: must sit between letters.
                    Some(&(_, '\''))
                        if chars.get(pos + 1).is_some_and(|&(_, n)| n.is_alphabetic()) =>
                    {
                        pos += 2;
                    }
                    _ => break,
                }
            }
            let end_byte = chars.get(pos).map_or(text.len(), |&(b, _)| b);
            tokens.push(Token {
                text: text[chars[start].0..end_byte].to_string(),
                kind: TokenKind::Word,
                sentence_index: sent,
            });
        } else if c.is_ascii_digit() {
            let start = pos;
            while chars.get(pos).is_some_and(|&(_, ch)| ch.is_ascii_digit()) {
                pos += 1;
            }
            let end_byte = chars.get(pos).map_or(text.len(), |&(b, _)| b);
            tokens.push(Token {
                text: text[chars[start].0..end_byte].to_string(),
                kind: TokenKind::Number,
                sentence_index: sent,
            });
        } else {
            let kind = if PUNCT_MARKS.contains(&c) {
                TokenKind::Punct
            } else {
                TokenKind::Symbol
            };
            tokens.push(Token {
                text: c.to_string(),
                kind,
                sentence_index: sent,
            });
            pos += 1;
        }
    }
    tokens
}

/// A contiguous run of tokens treated as one comparison unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Chunk {
    pub tokens: Vec<Token>,
    /// Identifier of the document the tokens came from, when known.
    pub source_doc: Option<String>,
}

impl Chunk {
    pub fn new(tokens: Vec<Token>, source_doc: Option<String>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::EmptyInput("chunk needs at least one token"));
        }
        Ok(Self { tokens, source_doc })
    }

    pub fn word_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_word()).count()
    }

    /// Case-folded word tokens in order.
    pub fn folded_words(&self) -> Vec<String> {
        self.tokens
            .iter()
            .filter(|t| t.is_word())
            .map(|t| t.folded())
            .collect()
    }
}

/// Split a token stream into chunks of roughly `target_words` word tokens.
///
/// Whole sentences are accumulated until the running word count reaches the
/// target, so boundaries always fall on sentence boundaries and a chunk
/// overshoots rather than splitting a sentence. The final chunk keeps the
/// remainder and may be short.
pub fn chunk(tokens: &[Token], target_words: usize) -> Result<Vec<Chunk>> {
    if tokens.is_empty() {
        return Err(Error::EmptyInput("cannot chunk an empty token stream"));
    }
    if target_words == 0 {
        return Err(Error::InvalidParams(
            "target_words must be at least 1".into(),
        ));
    }
    let mut chunks = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    let mut words = 0usize;
    let mut i = 0usize;
    while i < tokens.len() {
        // Take one whole sentence.
        let sent = tokens[i].sentence_index;
        let mut j = i;
        while j < tokens.len() && tokens[j].sentence_index == sent {
            if tokens[j].is_word() {
                words += 1;
            }
            j += 1;
        }
        current.extend_from_slice(&tokens[i..j]);
        i = j;
        if words >= target_words {
            chunks.push(Chunk {
                tokens: std::mem::take(&mut current),
                source_doc: None,
            });
            words = 0;
        }
    }
    if !current.is_empty() {
        chunks.push(Chunk {
            tokens: current,
            source_doc: None,
        });
    }
    Ok(chunks)
}
