//! Corpus ingestion, chunking, variant alignment, and persistence.
//!
//! A corpus holds source novels plus byte-budgeted chunks of each one;
//! chunks carry aligned translation variants (HT, S2S, CTX). Corpora are
//! immutable: every operation returns a new value, so a corpus can be
//! shared freely across threads.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Header line of the corpus file format.
pub const CORPUS_FORMAT_HEADER: &str = "stylemark-corpus v1";

/// Default chunk byte budget.
pub const DEFAULT_CHUNK_BYTES: usize = 3072;
/// Default cap on chunks per book.
pub const DEFAULT_MAX_CHUNKS: usize = 100;

/// Identifier for a translation variant of a chunk or document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VariantId {
    /// Human translation.
    HT,
    /// Machine translation, sentence-to-sentence prompt.
    S2S,
    /// Machine translation, context-based prompt.
    CTX,
}

impl VariantId {
    pub const ALL: [VariantId; 3] = [VariantId::HT, VariantId::S2S, VariantId::CTX];
}

impl fmt::Display for VariantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariantId::HT => f.write_str("HT"),
            VariantId::S2S => f.write_str("S2S"),
            VariantId::CTX => f.write_str("CTX"),
        }
    }
}

impl FromStr for VariantId {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "HT" => Ok(VariantId::HT),
            "S2S" => Ok(VariantId::S2S),
            "CTX" => Ok(VariantId::CTX),
            _ => Err(CorpusError::UnknownVariant(s.to_string())),
        }
    }
}

/// Genre taxonomy of the source novels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Genre {
    MysteriousFantasy,
    Fantasy,
    Hero,
    Romance,
    SciFi,
}

impl Genre {
    /// Human-readable name, also the `{genre}` substitution in prompts.
    pub fn display_name(&self) -> &'static str {
        match self {
            Genre::MysteriousFantasy => "Mysterious Fantasy",
            Genre::Fantasy => "Fantasy",
            Genre::Hero => "Hero",
            Genre::Romance => "Romance",
            Genre::SciFi => "Science Fiction",
        }
    }
}

impl fmt::Display for Genre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for Genre {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let folded: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .collect::<String>()
            .to_lowercase();
        match folded.as_str() {
            "mysteriousfantasy" | "mystery" => Ok(Genre::MysteriousFantasy),
            "fantasy" => Ok(Genre::Fantasy),
            "hero" => Ok(Genre::Hero),
            "romance" => Ok(Genre::Romance),
            "scifi" | "sciencefiction" => Ok(Genre::SciFi),
            _ => Err(CorpusError::UnknownGenre(s.to_string())),
        }
    }
}

/// One source novel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Book {
    pub book_id: String,
    pub title: String,
    pub genre: Genre,
    pub source_text: String,
}

/// One byte-budgeted source segment with its aligned translation variants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelChunk {
    pub book_id: String,
    pub index: u32,
    pub source: String,
    #[serde(default)]
    pub variants: BTreeMap<VariantId, String>,
}

/// The concatenated text of one variant of one book; the unit of feature
/// extraction and classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationDoc {
    pub book_id: String,
    pub variant: VariantId,
    pub text: String,
}

/// A set of books plus their chunks and file metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub books: Vec<Book>,
    pub chunks: Vec<ParallelChunk>,
    pub created_at: String,
    pub tool_version: String,
}

/// A manifest row naming one book to ingest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub book_id: String,
    pub title: String,
    pub genre: Genre,
}

/// Why one book could not be ingested.
#[derive(Debug, Error)]
pub enum IngestFailure {
    #[error("{book_id}: missing or unreadable file {path}: {source}")]
    Io {
        book_id: String,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{book_id}: {path} is not valid UTF-8 (first invalid byte at offset {offset})")]
    InvalidUtf8 {
        book_id: String,
        path: PathBuf,
        offset: usize,
    },
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown variant {0:?} (expected HT, S2S, or CTX)")]
    UnknownVariant(String),
    #[error("unknown genre {0:?}")]
    UnknownGenre(String),
    #[error("invalid book id {0:?} (use letters, digits, '-', '_')")]
    InvalidBookId(String),
    #[error("duplicate book id {0:?}")]
    DuplicateBookId(String),
    #[error("unknown book id {0:?}")]
    UnknownBookId(String),
    #[error("{failed} of {total} books failed to ingest:\n{}", format_failures(.failures))]
    Ingest {
        failed: usize,
        total: usize,
        failures: Vec<IngestFailure>,
    },
    #[error("chunk byte budget {0} is too small (minimum 64)")]
    ChunkBytesTooSmall(usize),
    #[error("book {book_id}: expected {expected} variant texts, got {actual}")]
    VariantLengthMismatch {
        book_id: String,
        expected: usize,
        actual: usize,
    },
    #[error("corpus io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unsupported corpus format header {found:?} (expected {CORPUS_FORMAT_HEADER:?})")]
    VersionMismatch { found: String },
    #[error("corpus parse error at record {line}: {message}")]
    Parse { line: usize, message: String },
}

fn format_failures(failures: &[IngestFailure]) -> String {
    failures
        .iter()
        .map(|f| format!("  - {f}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn valid_book_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl Corpus {
    /// An empty corpus stamped with the current time and tool version.
    /// Honors `SOURCE_DATE_EPOCH` for reproducible output.
    pub fn new() -> Corpus {
        let created_at = match std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|v| v.parse::<i64>().ok())
            .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0))
        {
            Some(t) => t.to_rfc3339(),
            None => chrono::Utc::now().to_rfc3339(),
        };
        Corpus {
            books: Vec::new(),
            chunks: Vec::new(),
            created_at,
            tool_version: crate::TOOL_VERSION.to_string(),
        }
    }

    pub fn book(&self, book_id: &str) -> Option<&Book> {
        self.books.iter().find(|b| b.book_id == book_id)
    }

    /// Chunks of one book, in index order.
    pub fn chunks_of(&self, book_id: &str) -> Vec<&ParallelChunk> {
        let mut chunks: Vec<&ParallelChunk> =
            self.chunks.iter().filter(|c| c.book_id == book_id).collect();
        chunks.sort_by_key(|c| c.index);
        chunks
    }
}

impl Default for Corpus {
    fn default() -> Self {
        Corpus::new()
    }
}

/// Reads `<book_id>.chs_re.txt` under `dir` for every manifest row and
/// builds a corpus with no chunks yet. All failures are collected and
/// reported together; any failure fails the whole ingest.
pub fn ingest_books(dir: impl AsRef<Path>, manifest: &[ManifestEntry]) -> Result<Corpus, CorpusError> {
    let dir = dir.as_ref();
    let mut corpus = Corpus::new();
    let mut failures = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for entry in manifest {
        if !valid_book_id(&entry.book_id) {
            return Err(CorpusError::InvalidBookId(entry.book_id.clone()));
        }
        if !seen.insert(entry.book_id.clone()) {
            return Err(CorpusError::DuplicateBookId(entry.book_id.clone()));
        }
        let path = dir.join(format!("{}.chs_re.txt", entry.book_id));
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(source) => {
                failures.push(IngestFailure::Io {
                    book_id: entry.book_id.clone(),
                    path,
                    source,
                });
                continue;
            }
        };
        let source_text = match String::from_utf8(bytes) {
            Ok(t) => t,
            Err(e) => {
                failures.push(IngestFailure::InvalidUtf8 {
                    book_id: entry.book_id.clone(),
                    path,
                    offset: e.utf8_error().valid_up_to(),
                });
                continue;
            }
        };
        corpus.books.push(Book {
            book_id: entry.book_id.clone(),
            title: entry.title.clone(),
            genre: entry.genre,
            source_text,
        });
    }
    if failures.is_empty() {
        Ok(corpus)
    } else {
        Err(CorpusError::Ingest {
            failed: failures.len(),
            total: manifest.len(),
            failures,
        })
    }
}

const SENTENCE_FINAL: [char; 7] = ['\u{3002}', '\u{ff01}', '\u{ff1f}', '.', '!', '?', '\u{2026}'];
const CLOSING_QUOTES: [char; 10] = [
    '"', '\'', '\u{201d}', '\u{2019}', '\u{300d}', '\u{300f}', '\u{ff09}', ')', ']', '\u{00bb}',
];

/// Splits a book's source text into up to `max_chunks` chunks of at most
/// `chunk_bytes` encoded bytes. The cut point prefers the last
/// sentence-final punctuation boundary (with trailing closing quotes)
/// fitting in the budget, then the last whitespace, then the last
/// character boundary. Concatenating the chunks reproduces the consumed
/// prefix of the text byte-exactly.
pub fn chunk_book(
    book: &Book,
    chunk_bytes: usize,
    max_chunks: usize,
) -> Result<Vec<ParallelChunk>, CorpusError> {
    if chunk_bytes < 64 {
        return Err(CorpusError::ChunkBytesTooSmall(chunk_bytes));
    }
    let mut chunks = Vec::new();
    let mut rest = book.source_text.as_str();
    while !rest.is_empty() && chunks.len() < max_chunks {
        let cut = if rest.len() <= chunk_bytes {
            rest.len()
        } else {
            pick_cut(rest, chunk_bytes)
        };
        let (piece, tail) = rest.split_at(cut);
        chunks.push(ParallelChunk {
            book_id: book.book_id.clone(),
            index: chunks.len() as u32,
            source: piece.to_string(),
            variants: BTreeMap::new(),
        });
        rest = tail;
    }
    Ok(chunks)
}

/// Byte offset to cut at, guaranteed in (0, budget].
fn pick_cut(text: &str, budget: usize) -> usize {
    let mut last_sentence = 0usize;
    let mut last_space = 0usize;
    let mut last_any = 0usize;
    for (idx, c) in text.char_indices() {
        let after = idx + c.len_utf8();
        if after > budget {
            break;
        }
        if SENTENCE_FINAL.contains(&c) {
            last_sentence = after;
        } else if CLOSING_QUOTES.contains(&c) && last_sentence == idx {
            // closing quotes directly after a sentence end extend the cut
            last_sentence = after;
        }
        if c.is_whitespace() {
            last_space = after;
        }
        last_any = after;
    }
    if last_sentence > 0 {
        last_sentence
    } else if last_space > 0 {
        last_space
    } else {
        last_any
    }
}

/// Attaches one variant's per-chunk texts to a book, returning the new
/// corpus. `texts` must have exactly one entry per chunk of the book.
/// Re-attaching an existing variant overwrites it with a logged warning.
pub fn attach_variant(
    corpus: &Corpus,
    book_id: &str,
    variant: VariantId,
    texts: &[String],
) -> Result<Corpus, CorpusError> {
    if corpus.book(book_id).is_none() {
        return Err(CorpusError::UnknownBookId(book_id.to_string()));
    }
    let expected = corpus.chunks.iter().filter(|c| c.book_id == book_id).count();
    if texts.len() != expected {
        return Err(CorpusError::VariantLengthMismatch {
            book_id: book_id.to_string(),
            expected,
            actual: texts.len(),
        });
    }
    let mut out = corpus.clone();
    let mut overwrote = false;
    let mut chunk_refs: Vec<&mut ParallelChunk> =
        out.chunks.iter_mut().filter(|c| c.book_id == book_id).collect();
    chunk_refs.sort_by_key(|c| c.index);
    for (chunk, text) in chunk_refs.into_iter().zip(texts) {
        if chunk.variants.insert(variant, text.clone()).is_some() {
            overwrote = true;
        }
    }
    if overwrote {
        log::warn!("book {book_id}: overwrote existing {variant} variant texts");
    }
    Ok(out)
}

/// A variant skipped by [`assemble_docs`] because only part of a book's
/// chunks carry it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialVariant {
    pub book_id: String,
    pub variant: VariantId,
    pub have: usize,
    pub total: usize,
}

/// Documents assembled from a corpus plus the partial variants that were
/// excluded.
#[derive(Debug, Clone, Default)]
pub struct DocAssembly {
    pub docs: Vec<TranslationDoc>,
    pub partial: Vec<PartialVariant>,
}

/// Builds one document per (book, variant) pair where every chunk of the
/// book carries the variant; the text is the chunk texts joined with a
/// single newline. Partially covered variants are excluded and reported.
pub fn assemble_docs(corpus: &Corpus) -> DocAssembly {
    let mut out = DocAssembly::default();
    for book in &corpus.books {
        let chunks = corpus.chunks_of(&book.book_id);
        if chunks.is_empty() {
            continue;
        }
        for variant in VariantId::ALL {
            let texts: Vec<&str> = chunks
                .iter()
                .filter_map(|c| c.variants.get(&variant).map(String::as_str))
                .collect();
            if texts.len() == chunks.len() {
                out.docs.push(TranslationDoc {
                    book_id: book.book_id.clone(),
                    variant,
                    text: texts.join("\n"),
                });
            } else if !texts.is_empty() {
                log::warn!(
                    "book {}: variant {} covers {}/{} chunks; excluded from documents",
                    book.book_id,
                    variant,
                    texts.len(),
                    chunks.len()
                );
                out.partial.push(PartialVariant {
                    book_id: book.book_id.clone(),
                    variant,
                    have: texts.len(),
                    total: chunks.len(),
                });
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct MetaRecord {
    created_at: String,
    tool_version: String,
}

/// Writes a corpus as versioned line records: a header line, a `meta`
/// record, then one `book` or `chunk` record per line.
pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let io_err = |source| CorpusError::Io { path: path.to_path_buf(), source };
    let file = fs::File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    write_corpus(corpus, &mut w).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Serializes a corpus to any writer; see [`save_corpus`].
pub fn write_corpus(corpus: &Corpus, w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "{CORPUS_FORMAT_HEADER}")?;
    let meta = MetaRecord {
        created_at: corpus.created_at.clone(),
        tool_version: corpus.tool_version.clone(),
    };
    writeln!(w, "meta {}", serde_json::to_string(&meta)?)?;
    for book in &corpus.books {
        writeln!(w, "book {}", serde_json::to_string(book)?)?;
    }
    for chunk in &corpus.chunks {
        writeln!(w, "chunk {}", serde_json::to_string(chunk)?)?;
    }
    w.flush()
}

/// Loads a corpus written by [`save_corpus`].
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_corpus(BufReader::new(file))
}

/// Parses a corpus from any buffered reader; see [`load_corpus`].
pub fn read_corpus(r: impl BufRead) -> Result<Corpus, CorpusError> {
    let mut corpus = Corpus {
        books: Vec::new(),
        chunks: Vec::new(),
        created_at: String::new(),
        tool_version: String::new(),
    };
    let mut saw_header = false;
    let mut saw_meta = false;
    for (idx, line) in r.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| CorpusError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let trimmed = line.trim_end();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !saw_header {
            if trimmed != CORPUS_FORMAT_HEADER {
                return Err(CorpusError::VersionMismatch { found: trimmed.to_string() });
            }
            saw_header = true;
            continue;
        }
        let (kind, payload) = trimmed.split_once(' ').ok_or_else(|| CorpusError::Parse {
            line: line_no,
            message: "expected `<kind> <json>`".to_string(),
        })?;
        let parse = |message: serde_json::Error| CorpusError::Parse {
            line: line_no,
            message: message.to_string(),
        };
        match kind {
            "meta" => {
                let meta: MetaRecord = serde_json::from_str(payload).map_err(parse)?;
                corpus.created_at = meta.created_at;
                corpus.tool_version = meta.tool_version;
                saw_meta = true;
            }
            "book" => corpus.books.push(serde_json::from_str(payload).map_err(parse)?),
            "chunk" => corpus.chunks.push(serde_json::from_str(payload).map_err(parse)?),
            other => {
                return Err(CorpusError::Parse {
                    line: line_no,
                    message: format!("unknown record kind {other:?}"),
                })
            }
        }
    }
    if !saw_header {
        return Err(CorpusError::VersionMismatch { found: "<empty file>".to_string() });
    }
    if !saw_meta {
        return Err(CorpusError::Parse {
            line: 0,
            message: "missing meta record".to_string(),
        });
    }
    validate(&corpus)?;
    Ok(corpus)
}

/// Structural invariants: every chunk's book exists and chunk indices per
/// book are contiguous from zero.
fn validate(corpus: &Corpus) -> Result<(), CorpusError> {
    for book in &corpus.books {
        let chunks = corpus.chunks_of(&book.book_id);
        for (i, chunk) in chunks.iter().enumerate() {
            if chunk.index as usize != i {
                return Err(CorpusError::Parse {
                    line: 0,
                    message: format!(
                        "book {}: chunk indices not contiguous (found {} at position {})",
                        book.book_id, chunk.index, i
                    ),
                });
            }
        }
    }
    for chunk in &corpus.chunks {
        if corpus.book(&chunk.book_id).is_none() {
            return Err(CorpusError::Parse {
                line: 0,
                message: format!("chunk references unknown book {}", chunk.book_id),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn book(id: &str, text: &str) -> Book {
        Book {
            book_id: id.to_string(),
            title: format!("Book {id}"),
            genre: Genre::Fantasy,
            source_text: text.to_string(),
        }
    }

    fn corpus_with(text: &str, chunk_bytes: usize) -> Corpus {
        let mut corpus = Corpus::new();
        let b = book("1", text);
        corpus.chunks = chunk_book(&b, chunk_bytes, DEFAULT_MAX_CHUNKS).unwrap();
        corpus.books.push(b);
        corpus
    }

    #[test]
    fn ingest_reads_manifest_books() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("3.chs_re.txt"), "line one\nline two\n").unwrap();
        let manifest = vec![ManifestEntry {
            book_id: "3".to_string(),
            title: "The Divine Nine-Dragon Cauldron".to_string(),
            genre: Genre::MysteriousFantasy,
        }];
        let corpus = ingest_books(dir.path(), &manifest).unwrap();
        assert_eq!(corpus.books.len(), 1);
        assert_eq!(corpus.books[0].source_text, "line one\nline two\n");
        assert!(corpus.chunks.is_empty());
    }

    #[test]
    fn ingest_empty_manifest_is_empty_corpus() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = ingest_books(dir.path(), &[]).unwrap();
        assert!(corpus.books.is_empty());
    }

    #[test]
    fn ingest_missing_file_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = vec![ManifestEntry {
            book_id: "99".to_string(),
            title: "Missing".to_string(),
            genre: Genre::Hero,
        }];
        let err = ingest_books(dir.path(), &manifest).unwrap_err();
        assert!(err.to_string().contains("99.chs_re.txt"), "error was: {err}");
    }

    #[test]
    fn ingest_invalid_utf8_names_byte_offset() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("7.chs_re.txt"), [b'o', b'k', 0xff, b'x']).unwrap();
        let manifest = vec![ManifestEntry {
            book_id: "7".to_string(),
            title: "Bad".to_string(),
            genre: Genre::Romance,
        }];
        let err = ingest_books(dir.path(), &manifest).unwrap_err();
        assert!(err.to_string().contains("offset 2"), "error was: {err}");
    }

    #[test]
    fn ingest_rejects_duplicate_ids() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("1.chs_re.txt"), "x").unwrap();
        let entry = ManifestEntry {
            book_id: "1".to_string(),
            title: "Dup".to_string(),
            genre: Genre::SciFi,
        };
        let err = ingest_books(dir.path(), &[entry.clone(), entry]).unwrap_err();
        assert!(matches!(err, CorpusError::DuplicateBookId(_)));
    }

    #[test]
    fn chunking_respects_budget_and_reassembles() {
        let sentence = "He walked on through the mist and the pines. ";
        let text = sentence.repeat(400); // ~18 KB
        let b = book("1", &text);
        let chunks = chunk_book(&b, 1024, 100).unwrap();
        let rebuilt: String = chunks.iter().map(|c| c.source.as_str()).collect();
        assert!(text.starts_with(&rebuilt));
        assert_eq!(rebuilt.len(), chunks.iter().map(|c| c.source.len()).sum::<usize>());
        for c in &chunks {
            assert!(c.source.len() <= 1024);
            assert!(c.source.ends_with(". ") || c.source.ends_with('.'));
        }
    }

    #[test]
    fn chunking_caps_chunk_count() {
        let text = "word ".repeat(200_000); // ~1 MB
        let b = book("1", &text);
        let chunks = chunk_book(&b, DEFAULT_CHUNK_BYTES, DEFAULT_MAX_CHUNKS).unwrap();
        assert_eq!(chunks.len(), 100);
        for c in &chunks {
            assert!(c.source.len() <= DEFAULT_CHUNK_BYTES);
        }
    }

    #[test]
    fn short_book_is_one_chunk() {
        let b = book("1", "short text");
        let chunks = chunk_book(&b, DEFAULT_CHUNK_BYTES, DEFAULT_MAX_CHUNKS).unwrap();
        assert_eq!(chunks.len(), 1);
        assert_eq!(chunks[0].source, "short text");
    }

    #[test]
    fn empty_book_yields_no_chunks() {
        let b = book("1", "");
        assert!(chunk_book(&b, DEFAULT_CHUNK_BYTES, DEFAULT_MAX_CHUNKS).unwrap().is_empty());
    }

    #[test]
    fn tiny_budget_is_rejected() {
        let b = book("1", "text");
        assert!(matches!(
            chunk_book(&b, 32, 10),
            Err(CorpusError::ChunkBytesTooSmall(32))
        ));
    }

    #[test]
    fn cjk_text_never_splits_characters() {
        let text = "\u{5c71}\u{5d16}\u{9661}\u{5ced}\u{3002}".repeat(200);
        let b = book("1", &text);
        let chunks = chunk_book(&b, 64, 100).unwrap();
        let rebuilt: String = chunks.iter().map(|c| c.source.as_str()).collect();
        assert_eq!(rebuilt, text[..rebuilt.len()]);
        for c in &chunks {
            assert!(c.source.len() <= 64);
            assert!(c.source.ends_with('\u{3002}'));
        }
    }

    #[test]
    fn closing_quote_extends_sentence_cut() {
        let unit = "\u{4ed6}\u{8bf4}\u{ff1a}\u{201c}\u{597d}\u{3002}\u{201d}"; // ...。”
        let text = unit.repeat(50);
        let b = book("1", &text);
        let chunks = chunk_book(&b, 64, 100).unwrap();
        for c in &chunks[..chunks.len() - 1] {
            assert!(c.source.ends_with('\u{201d}'), "chunk ended {:?}", c.source);
        }
    }

    #[test]
    fn attach_variant_requires_matching_length() {
        let corpus = corpus_with(&"A sentence here. ".repeat(40), 128);
        let n = corpus.chunks.len();
        let texts = vec!["t".to_string(); n - 1];
        let err = attach_variant(&corpus, "1", VariantId::HT, &texts).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains(&format!("expected {n}")) && msg.contains(&format!("got {}", n - 1)));
    }

    #[test]
    fn attach_variant_unknown_book_errors() {
        let corpus = Corpus::new();
        let err = attach_variant(&corpus, "nope", VariantId::HT, &[]).unwrap_err();
        assert!(matches!(err, CorpusError::UnknownBookId(_)));
    }

    #[test]
    fn attach_three_variants_yields_three_docs() {
        let mut corpus = corpus_with(&"A sentence here. ".repeat(40), 128);
        let n = corpus.chunks.len();
        for variant in VariantId::ALL {
            let texts: Vec<String> =
                (0..n).map(|i| format!("{variant} text {i}")).collect();
            corpus = attach_variant(&corpus, "1", variant, &texts).unwrap();
        }
        assert!(corpus.chunks.iter().all(|c| c.variants.len() == 3));
        let assembly = assemble_docs(&corpus);
        assert_eq!(assembly.docs.len(), 3);
        assert!(assembly.partial.is_empty());
        let ht = assembly.docs.iter().find(|d| d.variant == VariantId::HT).unwrap();
        assert!(ht.text.starts_with("HT text 0\nHT text 1"));
    }

    #[test]
    fn partial_variants_are_excluded_and_reported() {
        let mut corpus = corpus_with(&"A sentence here. ".repeat(40), 128);
        let n = corpus.chunks.len();
        let texts: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
        corpus = attach_variant(&corpus, "1", VariantId::HT, &texts).unwrap();
        // drop HT from the last chunk
        corpus.chunks.last_mut().unwrap().variants.clear();
        let assembly = assemble_docs(&corpus);
        assert!(assembly.docs.is_empty());
        assert_eq!(
            assembly.partial,
            vec![PartialVariant {
                book_id: "1".to_string(),
                variant: VariantId::HT,
                have: n - 1,
                total: n,
            }]
        );
    }

    #[test]
    fn save_load_round_trips() {
        let mut corpus = corpus_with("One sentence. Another one. A third. ", 64);
        let n = corpus.chunks.len();
        let texts: Vec<String> = (0..n).map(|i| format!("line\none {i}")).collect();
        corpus = attach_variant(&corpus, "1", VariantId::CTX, &texts).unwrap();
        let mut buf = Vec::new();
        write_corpus(&corpus, &mut buf).unwrap();
        let loaded = read_corpus(Cursor::new(&buf)).unwrap();
        assert_eq!(loaded, corpus);
    }

    #[test]
    fn empty_corpus_round_trips() {
        let corpus = Corpus::new();
        let mut buf = Vec::new();
        write_corpus(&corpus, &mut buf).unwrap();
        assert_eq!(read_corpus(Cursor::new(&buf)).unwrap(), corpus);
    }

    #[test]
    fn version_mismatch_is_explicit() {
        let err = read_corpus(Cursor::new(b"stylemark-corpus v9\n" as &[u8])).unwrap_err();
        assert!(matches!(err, CorpusError::VersionMismatch { .. }));
    }

    #[test]
    fn truncated_record_reports_line() {
        let data = format!("{CORPUS_FORMAT_HEADER}\nmeta {{\"created_at\":\"t\",\"tool_version\":\"v\"}}\nbook {{\"book_id\":\"1\",\"ti");
        let err = read_corpus(Cursor::new(data.as_bytes())).unwrap_err();
        match err {
            CorpusError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn genre_parses_flexible_names() {
        assert_eq!("Mysterious Fantasy".parse::<Genre>().unwrap(), Genre::MysteriousFantasy);
        assert_eq!("sci-fi".parse::<Genre>().unwrap(), Genre::SciFi);
        assert_eq!("Science Fiction".parse::<Genre>().unwrap(), Genre::SciFi);
        assert!("opera".parse::<Genre>().is_err());
    }
}
