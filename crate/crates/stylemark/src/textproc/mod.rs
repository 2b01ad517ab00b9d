//! Language-level primitives for English translation text: tokenization,
//! sentence splitting, sentence-type classification, POS tagging, and
//! lexicon loading.
//!
//! Everything here is pure and deterministic: the same input always
//! produces the same output, and the built-in word lists are embedded
//! as data files so they can be inspected and tuned.

mod lexicon;
mod sentence;
mod tagger;
mod tokenize;

pub use lexicon::{Lexicon, LexiconError, LexiconKind};
pub use sentence::{classify_sentence, classify_sentences, split_sentences, Sentence, SentenceKind};
pub use tagger::{pos_tag, PosTag, PosTagger};
pub use tokenize::{tokenize, Token};

use std::collections::HashSet;

/// Parses an embedded word-list file: one entry per line, `#` comments and
/// blank lines ignored, anything after a tab dropped.
fn parse_word_list(data: &'static str) -> HashSet<&'static str> {
    data.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').next().unwrap())
        .collect()
}
