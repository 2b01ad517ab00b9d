//! Deterministic hybrid POS tagger: closed-class lexicon, suffix rules,
//! a common-word table, auxiliary-position evidence, and shape fallbacks.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use super::sentence::participle_exceptions;
use super::tokenize::Token;

/// Coarse POS tags exposed to the feature layer; finer classes collapse
/// into `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PosTag {
    Noun,
    Verb,
    Adjective,
    Pronoun,
    Other,
}

/// Lexicon-and-rules tagger. Lookup order per word: closed-class table,
/// suffix rules, common-word table, post-auxiliary position, shape
/// fallbacks. Non-word tokens always tag `Other`.
pub struct PosTagger {
    closed: HashMap<&'static str, PosTag>,
    open: HashMap<&'static str, PosTag>,
    auxiliaries: HashSet<&'static str>,
}

impl PosTagger {
    /// Shared tagger backed by the embedded common-word table.
    pub fn builtin() -> &'static PosTagger {
        static TAGGER: OnceLock<PosTagger> = OnceLock::new();
        TAGGER.get_or_init(|| PosTagger::from_table(include_str!("data/wordpos.tsv")))
    }

    fn from_table(data: &'static str) -> PosTagger {
        let mut closed = HashMap::new();
        let mut open = HashMap::new();
        let mut auxiliaries = HashSet::new();
        for line in data.lines() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let (Some(word), Some(tag)) = (parts.next(), parts.next()) else {
                continue;
            };
            match tag {
                "pron" => {
                    closed.entry(word).or_insert(PosTag::Pronoun);
                }
                "det" | "prep" | "conj" | "adv" | "num" | "intj" => {
                    closed.entry(word).or_insert(PosTag::Other);
                }
                "aux" => {
                    closed.entry(word).or_insert(PosTag::Other);
                    auxiliaries.insert(word);
                }
                "noun" => {
                    open.entry(word).or_insert(PosTag::Noun);
                }
                "verb" => {
                    open.entry(word).or_insert(PosTag::Verb);
                }
                "adj" => {
                    open.entry(word).or_insert(PosTag::Adjective);
                }
                other => panic!("wordpos.tsv: unknown tag {other:?}"),
            }
        }
        PosTagger { closed, open, auxiliaries }
    }

    /// Tags every token; output length equals input length.
    pub fn tag<'a>(&self, tokens: &'a [Token]) -> Vec<(&'a Token, PosTag)> {
        let mut out = Vec::with_capacity(tokens.len());
        let mut prev_word: Option<&str> = None;
        for tok in tokens {
            if !tok.is_word {
                out.push((tok, PosTag::Other));
                continue;
            }
            let tag = self.tag_word(&tok.lower, prev_word);
            out.push((tok, tag));
            prev_word = Some(tok.lower.as_str());
        }
        out
    }

    fn tag_word(&self, lower: &str, prev_word: Option<&str>) -> PosTag {
        if let Some(&tag) = self.closed.get(lower) {
            return tag;
        }
        if let Some(tag) = suffix_rule(lower) {
            return tag;
        }
        if let Some(&tag) = self.open.get(lower) {
            return tag;
        }
        if prev_word.is_some_and(|w| self.auxiliaries.contains(w)) {
            return PosTag::Verb;
        }
        shape_rule(lower)
    }
}

/// Morphological suffix rules with length guards that keep short common
/// words ("gate", "give", "table", "real") out of the wrong class.
fn suffix_rule(lower: &str) -> Option<PosTag> {
    let n = lower.chars().count();
    if lower.ends_with("tion") || lower.ends_with("ness") || lower.ends_with("ment")
        || lower.ends_with("ity")
    {
        return Some(PosTag::Noun);
    }
    if (lower.ends_with("ize") && n >= 6)
        || (lower.ends_with("ify") && n >= 5)
        || (lower.ends_with("ate") && n >= 6)
    {
        return Some(PosTag::Verb);
    }
    let ive_exception = ["rive", "give", "vive", "eive", "live"]
        .iter()
        .any(|s| lower.ends_with(s));
    if lower.ends_with("ous")
        || (lower.ends_with("ful") && n >= 5)
        || (lower.ends_with("ive") && n >= 6 && !ive_exception)
        || (lower.ends_with("able") && n >= 6)
        || (lower.ends_with("al") && n >= 5 && !lower.ends_with("eal"))
    {
        return Some(PosTag::Adjective);
    }
    None
}

fn shape_rule(lower: &str) -> PosTag {
    let n = lower.chars().count();
    if !participle_exceptions().contains(lower)
        && ((lower.ends_with("ing") && n >= 5) || (lower.ends_with("ed") && n >= 4))
    {
        return PosTag::Verb;
    }
    if lower.ends_with("less") && n >= 6 {
        return PosTag::Adjective;
    }
    if lower.ends_with("ly") && n >= 4 {
        return PosTag::Other;
    }
    // remaining unknowns are mostly proper names and bare nominals
    PosTag::Noun
}

/// Tags tokens with the built-in tagger.
pub fn pos_tag(tokens: &[Token]) -> Vec<(&Token, PosTag)> {
    PosTagger::builtin().tag(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::tokenize;

    fn tag_one(word: &str) -> PosTag {
        let toks = tokenize(word);
        assert_eq!(toks.len(), 1);
        pos_tag(&toks)[0].1
    }

    #[test]
    fn pronoun_examples() {
        assert_eq!(tag_one("she"), PosTag::Pronoun);
        assert_eq!(tag_one("her"), PosTag::Pronoun);
        assert_eq!(tag_one("you"), PosTag::Pronoun);
    }

    #[test]
    fn noun_examples() {
        assert_eq!(tag_one("city"), PosTag::Noun);
        assert_eq!(tag_one("people"), PosTag::Noun);
        assert_eq!(tag_one("spirit"), PosTag::Noun);
    }

    #[test]
    fn verb_examples() {
        assert_eq!(tag_one("shattered"), PosTag::Verb);
        assert_eq!(tag_one("become"), PosTag::Verb);
        assert_eq!(tag_one("holding"), PosTag::Verb);
    }

    #[test]
    fn adjective_examples() {
        assert_eq!(tag_one("ordinary"), PosTag::Adjective);
        assert_eq!(tag_one("large"), PosTag::Adjective);
        assert_eq!(tag_one("few"), PosTag::Adjective);
    }

    #[test]
    fn suffix_rules_fire_for_open_class() {
        assert_eq!(tag_one("desolation"), PosTag::Noun);
        assert_eq!(tag_one("weariness"), PosTag::Noun);
        assert_eq!(tag_one("astonishment"), PosTag::Noun);
        assert_eq!(tag_one("solemnity"), PosTag::Noun);
        assert_eq!(tag_one("crystallize"), PosTag::Verb);
        assert_eq!(tag_one("purify"), PosTag::Verb);
        assert_eq!(tag_one("meditate"), PosTag::Verb);
        assert_eq!(tag_one("perilous"), PosTag::Adjective);
        assert_eq!(tag_one("mournful"), PosTag::Adjective);
        assert_eq!(tag_one("oppressive"), PosTag::Adjective);
        assert_eq!(tag_one("unbreakable"), PosTag::Adjective);
        assert_eq!(tag_one("celestial"), PosTag::Adjective);
    }

    #[test]
    fn suffix_guards_spare_short_words() {
        assert_eq!(tag_one("gate"), PosTag::Noun);
        assert_eq!(tag_one("give"), PosTag::Verb);
        assert_eq!(tag_one("table"), PosTag::Noun);
        assert_eq!(tag_one("meal"), PosTag::Noun);
        assert_eq!(tag_one("arrive"), PosTag::Verb);
    }

    #[test]
    fn post_auxiliary_position_suggests_verb() {
        let toks = tokenize("he was zhenfaing");
        let tags = pos_tag(&toks);
        assert_eq!(tags[2].1, PosTag::Verb);
    }

    #[test]
    fn table_beats_position_evidence() {
        let toks = tokenize("the cliff was steep");
        let tags = pos_tag(&toks);
        assert_eq!(tags[3].1, PosTag::Adjective);
    }

    #[test]
    fn shape_fallbacks_cover_unknowns() {
        assert_eq!(tag_one("qi-tempering"), PosTag::Verb);
        assert_eq!(tag_one("spiritless"), PosTag::Adjective);
        assert_eq!(tag_one("hurriedly"), PosTag::Other);
        assert_eq!(tag_one("Nalan"), PosTag::Noun);
    }

    #[test]
    fn every_token_gets_exactly_one_tag() {
        let toks = tokenize("She said, 'the 9 heavens fell!' -- twice.");
        assert_eq!(pos_tag(&toks).len(), toks.len());
    }

    #[test]
    fn punctuation_and_numbers_tag_other() {
        let toks = tokenize("42 ,");
        let tags = pos_tag(&toks);
        assert!(tags.iter().all(|(_, t)| *t == PosTag::Other));
    }
}
