//! Word and punctuation tokenization.

/// A single token: either a word or a non-word (punctuation, number).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// The token text as it appears in the input.
    pub surface: String,
    /// Case-folded form of `surface`.
    pub lower: String,
    /// True for words (letter runs with internal apostrophes/hyphens),
    /// false for punctuation and numbers.
    pub is_word: bool,
}

impl Token {
    fn new(surface: String, is_word: bool) -> Self {
        let lower = surface.to_lowercase();
        Token { surface, lower, is_word }
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_joiner(c: char) -> bool {
    is_apostrophe(c) || c == '-'
}

/// Splits text into tokens. Words are maximal runs of letters with internal
/// apostrophes and hyphens ("don't", "Feng-er"); digit runs become single
/// non-word tokens; every other non-whitespace character becomes its own
/// non-word token; whitespace is discarded.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_alphabetic() {
            let start = i;
            i += 1;
            loop {
                if i < chars.len() && chars[i].is_alphabetic() {
                    i += 1;
                } else if i + 1 < chars.len()
                    && is_joiner(chars[i])
                    && chars[i + 1].is_alphabetic()
                {
                    // joiner counts as word-internal only between letters
                    i += 2;
                } else {
                    break;
                }
            }
            tokens.push(Token::new(chars[start..i].iter().collect(), true));
        } else if c.is_numeric() {
            let start = i;
            while i < chars.len() && chars[i].is_numeric() {
                i += 1;
            }
            tokens.push(Token::new(chars[start..i].iter().collect(), false));
        } else {
            tokens.push(Token::new(c.to_string(), false));
            i += 1;
        }
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(text: &str) -> Vec<String> {
        tokenize(text)
            .into_iter()
            .filter(|t| t.is_word)
            .map(|t| t.lower)
            .collect()
    }

    fn puncts(text: &str) -> Vec<String> {
        tokenize(text)
            .into_iter()
            .filter(|t| !t.is_word)
            .map(|t| t.surface)
            .collect()
    }

    #[test]
    fn dialogue_line_splits_into_words_and_punctuation() {
        let text = "He sighed, 'Feng is young.'";
        assert_eq!(words(text), ["he", "sighed", "feng", "is", "young"]);
        assert_eq!(puncts(text), [",", "'", ".", "'"]);
    }

    #[test]
    fn empty_input_yields_no_tokens() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn internal_apostrophe_stays_in_word() {
        let toks = tokenize("don't");
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].surface, "don't");
        assert!(toks[0].is_word);
    }

    #[test]
    fn curly_apostrophe_and_hyphen_are_internal() {
        assert_eq!(words("Feng\u{2019}er"), ["feng\u{2019}er"]);
        assert_eq!(words("ice-cold blade"), ["ice-cold", "blade"]);
    }

    #[test]
    fn leading_and_trailing_apostrophes_are_punctuation() {
        assert_eq!(words("'tis the boys'"), ["tis", "the", "boys"]);
        assert_eq!(puncts("'tis the boys'"), ["'", "'"]);
    }

    #[test]
    fn digit_runs_are_single_nonword_tokens() {
        let toks = tokenize("chapter 42, line 7");
        let nums: Vec<_> = toks.iter().filter(|t| !t.is_word).collect();
        assert_eq!(nums[0].surface, "42");
        assert!(!nums[0].is_word);
    }

    #[test]
    fn lower_is_case_folded_surface() {
        for t in tokenize("The QUICK Brown-Fox") {
            assert_eq!(t.lower, t.surface.to_lowercase());
        }
    }
}
