//! Word-list lexicons: built-in function/transition/pronoun inventories
//! and user-supplied emotion lexicons.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;

/// Which word list a [`Lexicon`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LexiconKind {
    FunctionWords,
    TransitionWords,
    Pronouns,
    EmotionWords,
}

impl fmt::Display for LexiconKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LexiconKind::FunctionWords => "function words",
            LexiconKind::TransitionWords => "transition words",
            LexiconKind::Pronouns => "pronouns",
            LexiconKind::EmotionWords => "emotion words",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("failed to read lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed lexicon line (expected `word` or `word<TAB>label`)")]
    MalformedLine { path: String, line: usize },
    #[error("lexicon {path} contains no entries")]
    Empty { path: String },
    #[error("no built-in lexicon for {0}; supply one with a lexicon file")]
    NoBuiltin(LexiconKind),
}

/// An immutable, lowercased word list. Labels are empty except for
/// emotion lexicons, where they carry the emotion category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    kind: LexiconKind,
    entries: BTreeMap<String, String>,
}

impl Lexicon {
    /// The built-in inventory for `kind`. Emotion words have no default
    /// and must be loaded from a file.
    pub fn builtin(kind: LexiconKind) -> Result<Lexicon, LexiconError> {
        let data = match kind {
            LexiconKind::FunctionWords => include_str!("data/function_words.txt"),
            LexiconKind::TransitionWords => include_str!("data/transition_words.txt"),
            LexiconKind::Pronouns => include_str!("data/pronouns.txt"),
            LexiconKind::EmotionWords => return Err(LexiconError::NoBuiltin(kind)),
        };
        Lexicon::parse(data, kind, "<builtin>")
    }

    /// Loads a lexicon from a UTF-8 file: one `word` or `word<TAB>label`
    /// per line, `#` comments ignored.
    pub fn load(path: impl AsRef<Path>, kind: LexiconKind) -> Result<Lexicon, LexiconError> {
        let path = path.as_ref();
        let display = path.display().to_string();
        let data = fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: display.clone(),
            source,
        })?;
        Lexicon::parse(&data, kind, &display)
    }

    fn parse(data: &str, kind: LexiconKind, path: &str) -> Result<Lexicon, LexiconError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in data.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let word = fields.next().unwrap_or("").trim();
            let label = fields.next().unwrap_or("").trim();
            if word.is_empty() || fields.next().is_some() {
                return Err(LexiconError::MalformedLine { path: path.to_string(), line: idx + 1 });
            }
            entries.insert(word.to_lowercase(), label.to_lowercase());
        }
        if entries.is_empty() {
            return Err(LexiconError::Empty { path: path.to_string() });
        }
        Ok(Lexicon { kind, entries })
    }

    pub fn kind(&self) -> LexiconKind {
        self.kind
    }

    /// Membership test; `word` must already be lowercased.
    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    /// The label attached to `word`, if present (empty for non-emotion kinds).
    pub fn label(&self, word: &str) -> Option<&str> {
        self.entries.get(word).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}
