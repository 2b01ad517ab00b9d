//! Sentence splitting and simple/complex classification.

use std::collections::HashSet;
use std::sync::OnceLock;

use super::tokenize::{tokenize, Token};
use super::parse_word_list;

/// A sentence with its tokens. `kind` stays unset until
/// [`classify_sentence`] assigns it.
#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    pub text: String,
    pub tokens: Vec<Token>,
    pub kind: Option<SentenceKind>,
}

/// Sentence type: a simple sentence is a lone independent clause, a complex
/// sentence additionally carries at least one dependent clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SentenceKind {
    Simple,
    Complex,
}

fn abbreviations() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| parse_word_list(include_str!("data/abbreviations.txt")))
}

fn subordinators() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| parse_word_list(include_str!("data/subordinators.txt")))
}

pub(crate) fn participle_exceptions() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| parse_word_list(include_str!("data/participle_exceptions.txt")))
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | '\u{2019}' | '\u{201d}' | ')' | ']' | '\u{00bb}')
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Word immediately before byte offset `dot`, allowing internal periods
/// ("e.g."), with the periods stripped and lowercased.
fn word_before(text: &str, dot: usize) -> String {
    let mut start = dot;
    for (idx, c) in text[..dot].char_indices().rev() {
        if c.is_alphabetic() || c == '.' {
            start = idx;
        } else {
            break;
        }
    }
    text[start..dot].replace('.', "").to_lowercase()
}

/// Splits text into sentences. Boundaries are `.`, `!`, or `?` followed by
/// optional closing quotes and then whitespace or end of input; known
/// abbreviations and single capital initials do not split; line breaks
/// always split. Closing quotes attach to the preceding sentence.
pub fn split_sentences(text: &str) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    let mut flush = |slice: &str| {
        let trimmed = slice.trim();
        if trimmed.is_empty() {
            return;
        }
        let tokens = tokenize(trimmed);
        if tokens.is_empty() {
            return;
        }
        sentences.push(Sentence { text: trimmed.to_string(), tokens, kind: None });
    };

    let bytes_len = text.len();
    let mut start = 0;
    let mut iter = text.char_indices().peekable();
    while let Some((idx, c)) = iter.next() {
        if c == '\n' || c == '\r' {
            flush(&text[start..idx]);
            start = idx + c.len_utf8();
            continue;
        }
        if !is_terminator(c) {
            continue;
        }
        if c == '.' {
            let word = word_before(text, idx);
            let is_initial = word.chars().count() == 1
                && word != "i"
                && text[..idx].chars().next_back().is_some_and(char::is_uppercase);
            if abbreviations().contains(word.as_str()) || is_initial {
                continue;
            }
        }
        // absorb terminator runs ("...", "?!") and trailing closers
        let mut end = idx + c.len_utf8();
        while let Some(&(j, d)) = iter.peek() {
            if is_terminator(d) {
                end = j + d.len_utf8();
                iter.next();
            } else {
                break;
            }
        }
        while let Some(&(j, d)) = iter.peek() {
            if is_closer(d) {
                end = j + d.len_utf8();
                iter.next();
            } else {
                break;
            }
        }
        let at_boundary = match iter.peek() {
            None => true,
            Some(&(_, d)) => d.is_whitespace(),
        };
        if at_boundary {
            flush(&text[start..end]);
            start = end;
        }
    }
    if start < bytes_len {
        flush(&text[start..]);
    }
    sentences
}

fn participle_shape(lower: &str) -> bool {
    if participle_exceptions().contains(lower) {
        return false;
    }
    let n = lower.chars().count();
    (lower.ends_with("ing") && n >= 5) || (lower.ends_with("ed") && n >= 4)
}

/// Classifies a sentence as Simple or Complex. Complex when either marker
/// fires: a subordinating conjunction (sentence-initial, or later in the
/// sentence and not capitalized like a title word), or a comma-delimited
/// participle clause (the sentence opens with an -ing/-ed word and a comma
/// follows, or a comma is directly followed by an -ing/-ed word).
pub fn classify_sentence(sentence: &Sentence) -> SentenceKind {
    let subs = subordinators();
    let mut word_idx = 0usize;
    for tok in sentence.tokens.iter().filter(|t| t.is_word) {
        if subs.contains(tok.lower.as_str()) {
            let capitalized = tok.surface.chars().next().is_some_and(char::is_uppercase);
            if word_idx == 0 || !capitalized {
                return SentenceKind::Complex;
            }
        }
        word_idx += 1;
    }

    let has_comma = sentence.tokens.iter().any(|t| t.surface == ",");
    if has_comma {
        if let Some(first_word) = sentence.tokens.iter().find(|t| t.is_word) {
            if participle_shape(&first_word.lower) {
                return SentenceKind::Complex;
            }
        }
        for pair in sentence.tokens.windows(2) {
            if pair[0].surface == "," && pair[1].is_word && participle_shape(&pair[1].lower) {
                return SentenceKind::Complex;
            }
        }
    }
    SentenceKind::Simple
}

/// Splits and classifies in one pass, returning sentences with `kind` set.
pub fn classify_sentences(text: &str) -> Vec<Sentence> {
    let mut sentences = split_sentences(text);
    for s in &mut sentences {
        s.kind = Some(classify_sentence(s));
    }
    sentences
}
