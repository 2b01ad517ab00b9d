//! Lexical, syntactic, and content feature extraction per translation
//! document.

mod export;

pub use export::{
    read_content_csv, read_features_csv, write_content_csv, write_features_csv, ExportError,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{TranslationDoc, VariantId};
use crate::textproc::{
    classify_sentences, tokenize, Lexicon, LexiconError, LexiconKind, PosTag, PosTagger,
    SentenceKind, Token,
};

/// Identifies one (book, variant) document.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DocId {
    pub book_id: String,
    pub variant: VariantId,
}

impl DocId {
    pub fn new(book_id: impl Into<String>, variant: VariantId) -> DocId {
        DocId { book_id: book_id.into(), variant }
    }
}

impl fmt::Display for DocId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.book_id, self.variant)
    }
}

/// Word-length histogram range: lengths 1 through 15 characters.
pub const WORD_LENGTH_BINS: usize = 15;

fn common_bigrams() -> &'static Vec<&'static str> {
    static LIST: OnceLock<Vec<&'static str>> = OnceLock::new();
    LIST.get_or_init(|| parse_ngram_list(include_str!("data/common_bigrams.txt")))
}

fn common_trigrams() -> &'static Vec<&'static str> {
    static LIST: OnceLock<Vec<&'static str>> = OnceLock::new();
    LIST.get_or_init(|| parse_ngram_list(include_str!("data/common_trigrams.txt")))
}

fn parse_ngram_list(data: &'static str) -> Vec<&'static str> {
    data.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// The embedded common character bigram inventory, in frequency order.
pub fn bigram_inventory() -> &'static [&'static str] {
    common_bigrams()
}

/// The embedded common character trigram inventory, in frequency order.
pub fn trigram_inventory() -> &'static [&'static str] {
    common_trigrams()
}

/// Lexical measurements for one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexicalVector {
    /// Unicode scalar count, line breaks excluded.
    pub char_count: u64,
    /// Word token count.
    pub total_words: u64,
    /// Characters in word tokens divided by word count.
    pub chars_per_word: f64,
    /// Unique words over total words (type-token ratio).
    pub vocab_richness: f64,
    /// Fraction of words with length 1..=15; longer words count toward
    /// totals but fall in no bin.
    pub word_length_dist: Vec<f64>,
    /// Per-bigram share of all listed-bigram occurrences; empty when no
    /// listed bigram occurs.
    pub bigram_ratios: BTreeMap<String, f64>,
    /// Per-trigram share of all listed-trigram occurrences; empty when no
    /// listed trigram occurs.
    pub trigram_ratios: BTreeMap<String, f64>,
}

/// Syntactic measurements for one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntacticVector {
    /// Words per sentence.
    pub sentence_length: f64,
    /// Punctuation tokens over character count.
    pub punct_per_char: f64,
    /// Function-word tokens over total words.
    pub function_word_freq: f64,
    /// Transition-word tokens over total words.
    pub transition_word_freq: f64,
    /// Share of simple sentences.
    pub simple_pct: f64,
    /// Share of complex sentences.
    pub complex_pct: f64,
}

/// Content feature categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ContentCategory {
    Words,
    WordBigrams,
    WordTrigrams,
    Pronouns,
    Nouns,
    Verbs,
    Adjectives,
    EmotionWords,
}

impl ContentCategory {
    pub const ALL: [ContentCategory; 8] = [
        ContentCategory::Words,
        ContentCategory::WordBigrams,
        ContentCategory::WordTrigrams,
        ContentCategory::Pronouns,
        ContentCategory::Nouns,
        ContentCategory::Verbs,
        ContentCategory::Adjectives,
        ContentCategory::EmotionWords,
    ];

    /// Stable snake_case name used in file names and CLI flags.
    pub fn name(&self) -> &'static str {
        match self {
            ContentCategory::Words => "words",
            ContentCategory::WordBigrams => "word_bigrams",
            ContentCategory::WordTrigrams => "word_trigrams",
            ContentCategory::Pronouns => "pronouns",
            ContentCategory::Nouns => "nouns",
            ContentCategory::Verbs => "verbs",
            ContentCategory::Adjectives => "adjectives",
            ContentCategory::EmotionWords => "emotion_words",
        }
    }
}

impl fmt::Display for ContentCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ContentCategory {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let folded = s.to_lowercase().replace(['-', ' '], "_");
        ContentCategory::ALL
            .into_iter()
            .find(|c| c.name() == folded || c.name().trim_end_matches('s') == folded)
            .ok_or_else(|| FeatureError::UnknownCategory(s.to_string()))
    }
}

/// Frequency table for one content category of one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContentCounts {
    pub category: ContentCategory,
    pub counts: BTreeMap<String, u64>,
    pub total: u64,
}

impl ContentCounts {
    fn from_items<I: IntoIterator<Item = String>>(category: ContentCategory, items: I) -> Self {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        let mut total = 0;
        for item in items {
            *counts.entry(item).or_insert(0) += 1;
            total += 1;
        }
        ContentCounts { category, counts, total }
    }

    /// Relative frequency of `item` within this document's category total.
    pub fn rel_freq(&self, item: &str) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        *self.counts.get(item).unwrap_or(&0) as f64 / self.total as f64
    }
}

/// All features of one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub doc_id: DocId,
    pub lexical: LexicalVector,
    pub syntactic: SyntacticVector,
    pub content: BTreeMap<ContentCategory, ContentCounts>,
}

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("{0}: empty document")]
    EmptyDocument(DocId),
    #[error("{0}: no sentences found")]
    NoSentences(DocId),
    #[error("wrong lexicon kind: expected {expected}, got {found}")]
    WrongLexiconKind { expected: LexiconKind, found: LexiconKind },
    #[error("category {0} requires an emotion lexicon; none was supplied")]
    MissingLexicon(ContentCategory),
    #[error("unknown content category {0:?}")]
    UnknownCategory(String),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

/// Lexicons and category list driving feature extraction.
#[derive(Debug, Clone)]
pub struct FeatureConfig {
    pub function_words: Lexicon,
    pub transition_words: Lexicon,
    pub pronouns: Lexicon,
    pub emotion_words: Option<Lexicon>,
    pub categories: Vec<ContentCategory>,
}

impl FeatureConfig {
    /// Built-in lexicons, all categories except emotion words.
    pub fn builtin() -> Result<FeatureConfig, LexiconError> {
        Ok(FeatureConfig {
            function_words: Lexicon::builtin(LexiconKind::FunctionWords)?,
            transition_words: Lexicon::builtin(LexiconKind::TransitionWords)?,
            pronouns: Lexicon::builtin(LexiconKind::Pronouns)?,
            emotion_words: None,
            categories: ContentCategory::ALL
                .into_iter()
                .filter(|c| *c != ContentCategory::EmotionWords)
                .collect(),
        })
    }

    /// Adds an emotion lexicon and enables the emotion category.
    pub fn with_emotion_lexicon(mut self, lexicon: Lexicon) -> FeatureConfig {
        self.emotion_words = Some(lexicon);
        if !self.categories.contains(&ContentCategory::EmotionWords) {
            self.categories.push(ContentCategory::EmotionWords);
        }
        self
    }
}

fn char_count(text: &str) -> u64 {
    text.chars().filter(|c| *c != '\n' && *c != '\r').count() as u64
}

fn ngram_ratios(words: &[&Token], inventory: &[&'static str], n: usize) -> BTreeMap<String, f64> {
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    let mut total = 0u64;
    for word in words {
        let chars: Vec<char> = word.lower.chars().collect();
        if chars.len() < n {
            continue;
        }
        for window in chars.windows(n) {
            let gram: String = window.iter().collect();
            if let Some(&g) = inventory.iter().find(|&&g| g == gram) {
                *counts.entry(g).or_insert(0) += 1;
                total += 1;
            }
        }
    }
    if total == 0 {
        return BTreeMap::new();
    }
    inventory
        .iter()
        .map(|&g| (g.to_string(), *counts.get(g).unwrap_or(&0) as f64 / total as f64))
        .collect()
}

/// Computes the lexical feature vector of a document.
pub fn lexical_features(doc: &TranslationDoc) -> Result<LexicalVector, FeatureError> {
    let doc_id = DocId::new(doc.book_id.clone(), doc.variant);
    let tokens = tokenize(&doc.text);
    let words: Vec<&Token> = tokens.iter().filter(|t| t.is_word).collect();
    if doc.text.trim().is_empty() || words.is_empty() {
        return Err(FeatureError::EmptyDocument(doc_id));
    }
    let total_words = words.len() as u64;
    let word_chars: u64 = words.iter().map(|w| w.surface.chars().count() as u64).sum();
    let unique: std::collections::HashSet<&str> =
        words.iter().map(|w| w.lower.as_str()).collect();

    let mut word_length_dist = vec![0.0; WORD_LENGTH_BINS];
    for w in &words {
        let len = w.surface.chars().count();
        if (1..=WORD_LENGTH_BINS).contains(&len) {
            word_length_dist[len - 1] += 1.0;
        }
    }
    for v in &mut word_length_dist {
        *v /= total_words as f64;
    }

    Ok(LexicalVector {
        char_count: char_count(&doc.text),
        total_words,
        chars_per_word: word_chars as f64 / total_words as f64,
        vocab_richness: unique.len() as f64 / total_words as f64,
        word_length_dist,
        bigram_ratios: ngram_ratios(&words, common_bigrams(), 2),
        trigram_ratios: ngram_ratios(&words, common_trigrams(), 3),
    })
}

/// Computes the syntactic feature vector of a document.
pub fn syntactic_features(
    doc: &TranslationDoc,
    function_words: &Lexicon,
    transition_words: &Lexicon,
) -> Result<SyntacticVector, FeatureError> {
    if function_words.kind() != LexiconKind::FunctionWords {
        return Err(FeatureError::WrongLexiconKind {
            expected: LexiconKind::FunctionWords,
            found: function_words.kind(),
        });
    }
    if transition_words.kind() != LexiconKind::TransitionWords {
        return Err(FeatureError::WrongLexiconKind {
            expected: LexiconKind::TransitionWords,
            found: transition_words.kind(),
        });
    }
    let doc_id = DocId::new(doc.book_id.clone(), doc.variant);
    let tokens = tokenize(&doc.text);
    let words: Vec<&Token> = tokens.iter().filter(|t| t.is_word).collect();
    if doc.text.trim().is_empty() || words.is_empty() {
        return Err(FeatureError::EmptyDocument(doc_id));
    }
    let sentences = classify_sentences(&doc.text);
    if sentences.is_empty() {
        return Err(FeatureError::NoSentences(doc_id));
    }
    let n_sentences = sentences.len() as f64;
    let simple = sentences
        .iter()
        .filter(|s| s.kind == Some(SentenceKind::Simple))
        .count() as f64;
    let complex = n_sentences - simple;
    let punct = tokens
        .iter()
        .filter(|t| !t.is_word && !t.surface.chars().any(char::is_numeric))
        .count() as f64;
    let total_words = words.len() as f64;
    let fw = words.iter().filter(|w| function_words.contains(&w.lower)).count() as f64;
    let tw = words.iter().filter(|w| transition_words.contains(&w.lower)).count() as f64;

    Ok(SyntacticVector {
        sentence_length: total_words / n_sentences,
        punct_per_char: punct / char_count(&doc.text) as f64,
        function_word_freq: fw / total_words,
        transition_word_freq: tw / total_words,
        simple_pct: simple / n_sentences,
        complex_pct: complex / n_sentences,
    })
}

/// Counts one content category for a document. Word n-grams never cross
/// sentence boundaries; POS categories use `tagger`; emotion words require
/// an emotion lexicon in `config`.
pub fn content_counts(
    doc: &TranslationDoc,
    category: ContentCategory,
    config: &FeatureConfig,
    tagger: &PosTagger,
) -> Result<ContentCounts, FeatureError> {
    let items: Vec<String> = match category {
        ContentCategory::Words => tokenize(&doc.text)
            .into_iter()
            .filter(|t| t.is_word)
            .map(|t| t.lower)
            .collect(),
        ContentCategory::WordBigrams => sentence_ngrams(&doc.text, 2),
        ContentCategory::WordTrigrams => sentence_ngrams(&doc.text, 3),
        ContentCategory::Pronouns => tokenize(&doc.text)
            .into_iter()
            .filter(|t| t.is_word && config.pronouns.contains(&t.lower))
            .map(|t| t.lower)
            .collect(),
        ContentCategory::Nouns => pos_filtered(&doc.text, tagger, PosTag::Noun),
        ContentCategory::Verbs => pos_filtered(&doc.text, tagger, PosTag::Verb),
        ContentCategory::Adjectives => pos_filtered(&doc.text, tagger, PosTag::Adjective),
        ContentCategory::EmotionWords => {
            let lexicon = config
                .emotion_words
                .as_ref()
                .ok_or(FeatureError::MissingLexicon(category))?;
            tokenize(&doc.text)
                .into_iter()
                .filter(|t| t.is_word && lexicon.contains(&t.lower))
                .map(|t| t.lower)
                .collect()
        }
    };
    Ok(ContentCounts::from_items(category, items))
}

fn sentence_ngrams(text: &str, n: usize) -> Vec<String> {
    let mut grams = Vec::new();
    for sentence in crate::textproc::split_sentences(text) {
        let words: Vec<&str> = sentence
            .tokens
            .iter()
            .filter(|t| t.is_word)
            .map(|t| t.lower.as_str())
            .collect();
        if words.len() < n {
            continue;
        }
        for window in words.windows(n) {
            grams.push(window.join("_"));
        }
    }
    grams
}

fn pos_filtered(text: &str, tagger: &PosTagger, want: PosTag) -> Vec<String> {
    let tokens = tokenize(text);
    tagger
        .tag(&tokens)
        .into_iter()
        .filter(|(t, tag)| t.is_word && *tag == want)
        .map(|(t, _)| t.lower.clone())
        .collect()
}

/// Computes the full feature vector of one document.
pub fn extract_doc(
    doc: &TranslationDoc,
    config: &FeatureConfig,
    tagger: &PosTagger,
) -> Result<FeatureVector, FeatureError> {
    let lexical = lexical_features(doc)?;
    let syntactic = syntactic_features(doc, &config.function_words, &config.transition_words)?;
    let mut content = BTreeMap::new();
    for &category in &config.categories {
        content.insert(category, content_counts(doc, category, config, tagger)?);
    }
    Ok(FeatureVector {
        doc_id: DocId::new(doc.book_id.clone(), doc.variant),
        lexical,
        syntactic,
        content,
    })
}

/// One document that failed extraction.
#[derive(Debug)]
pub struct ExtractFailure {
    pub doc_id: DocId,
    pub error: FeatureError,
}

/// Batch extraction result: vectors in input order plus collected failures.
#[derive(Debug, Default)]
pub struct Extraction {
    pub vectors: Vec<FeatureVector>,
    pub failures: Vec<ExtractFailure>,
}

/// Extracts features for every document in parallel. Output order matches
/// input order; failed documents are collected, not fatal.
pub fn extract_all(docs: &[TranslationDoc], config: &FeatureConfig) -> Extraction {
    let tagger = PosTagger::builtin();
    let results: Vec<Result<FeatureVector, FeatureError>> = docs
        .par_iter()
        .map(|doc| extract_doc(doc, config, tagger))
        .collect();
    let mut out = Extraction::default();
    for (doc, result) in docs.iter().zip(results) {
        match result {
            Ok(v) => out.vectors.push(v),
            Err(error) => out.failures.push(ExtractFailure {
                doc_id: DocId::new(doc.book_id.clone(), doc.variant),
                error,
            }),
        }
    }
    out
}

/// A named scalar metric of a feature vector; the unit of the ANOVA report.
pub type ScalarMetric = (&'static str, fn(&FeatureVector) -> f64);

fn mean_or_zero(values: &BTreeMap<String, f64>, inventory_len: usize) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.values().sum::<f64>() / inventory_len as f64
    }
}

/// The scalar lexical and syntactic metrics, in report order. Vector
/// features (word lengths, n-gram ratios) additionally contribute a
/// mean-over-components scalar for table parity.
pub fn scalar_metrics() -> &'static [ScalarMetric] {
    &[
        ("total_characters", |v| v.lexical.char_count as f64),
        ("total_words", |v| v.lexical.total_words as f64),
        ("chars_per_word", |v| v.lexical.chars_per_word),
        ("vocabulary_richness", |v| v.lexical.vocab_richness),
        ("word_length_mean", |v| {
            v.lexical.word_length_dist.iter().sum::<f64>() / WORD_LENGTH_BINS as f64
        }),
        ("common_bigram_mean", |v| {
            mean_or_zero(&v.lexical.bigram_ratios, bigram_inventory().len())
        }),
        ("common_trigram_mean", |v| {
            mean_or_zero(&v.lexical.trigram_ratios, trigram_inventory().len())
        }),
        ("sentence_length", |v| v.syntactic.sentence_length),
        ("punctuation_per_char", |v| v.syntactic.punct_per_char),
        ("function_word_freq", |v| v.syntactic.function_word_freq),
        ("transition_word_freq", |v| v.syntactic.transition_word_freq),
        ("simple_sentence_pct", |v| v.syntactic.simple_pct),
        ("complex_sentence_pct", |v| v.syntactic.complex_pct),
    ]
}
