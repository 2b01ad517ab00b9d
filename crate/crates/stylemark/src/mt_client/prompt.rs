//! The two prompt templates and deterministic prompt rendering.
//!
//! The template wording (including the "Chinse" spelling) is preserved
//! verbatim from the production prompts and pinned by golden-file tests;
//! editing it changes what the endpoint receives.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Prompting mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Sentence-to-sentence translation.
    S2S,
    /// Context-based translation carrying the previous source/target pair.
    Ctx,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::S2S => f.write_str("S2S"),
            Mode::Ctx => f.write_str("CTX"),
        }
    }
}

impl Mode {
    /// The corpus variant this mode produces.
    pub fn variant(&self) -> crate::corpus::VariantId {
        match self {
            Mode::S2S => crate::corpus::VariantId::S2S,
            Mode::Ctx => crate::corpus::VariantId::CTX,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "s2s" => Ok(Mode::S2S),
            "ctx" => Ok(Mode::Ctx),
            other => Err(format!("unknown mode {other:?} (expected s2s or ctx)")),
        }
    }
}

/// Template parameters for one translation run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptSpec {
    pub mode: Mode,
    pub genre: String,
    pub purpose: String,
    pub audience: String,
}

pub const DEFAULT_PURPOSE: &str = "translate the text in literary style";
pub const DEFAULT_AUDIENCE: &str = "adolescents and young readers in their early 20s";

impl PromptSpec {
    /// A spec with the standard purpose and audience lines.
    pub fn new(mode: Mode, genre: impl Into<String>) -> PromptSpec {
        PromptSpec {
            mode,
            genre: genre.into(),
            purpose: DEFAULT_PURPOSE.to_string(),
            audience: DEFAULT_AUDIENCE.to_string(),
        }
    }
}

const S2S_INSTRUCTION: &str =
    "Translate the text from Chinse to English by translating sentence-by-sentence.";
const CTX_INSTRUCTION: &str = "Translate the text from Chinse to English by considering the most \
                               previously translated text as context when translating the current \
                               text.";

/// A chunk's previous source/target pair, the context for CTX prompts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextPair {
    pub prev_source: String,
    pub prev_target: String,
}

/// Renders the full prompt for one chunk: the mode's template with genre,
/// purpose, and audience substituted, the labeled context sections (CTX
/// with context only), then the labeled source text. Pure and
/// deterministic; pinned byte-exactly by golden files.
pub fn render_prompt(spec: &PromptSpec, chunk_source: &str, context: Option<&ContextPair>) -> String {
    let instruction = match spec.mode {
        Mode::S2S => S2S_INSTRUCTION,
        Mode::Ctx => CTX_INSTRUCTION,
    };
    let mut prompt = format!(
        "{instruction} Purpose of translation: {purpose}. Target audience: {audience}. Genre of \
         the text: recently released online popular Chinese novel about '{genre}'.\n\n",
        purpose = spec.purpose,
        audience = spec.audience,
        genre = spec.genre,
    );
    if spec.mode == Mode::Ctx {
        if let Some(ctx) = context {
            prompt.push_str("Previous text:\n");
            prompt.push_str(&ctx.prev_source);
            prompt.push_str("\n\nPrevious translation:\n");
            prompt.push_str(&ctx.prev_target);
            prompt.push_str("\n\n");
        }
    }
    prompt.push_str("Text:\n");
    prompt.push_str(chunk_source);
    prompt
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s2s_prompt_substitutes_genre() {
        let spec = PromptSpec::new(Mode::S2S, "Fantasy");
        let prompt = render_prompt(&spec, "\u{6e90}\u{6587}", None);
        assert!(prompt.contains("recently released online popular Chinese novel about 'Fantasy'"));
        assert!(prompt.contains("sentence-by-sentence"));
        assert!(prompt.ends_with("Text:\n\u{6e90}\u{6587}"));
    }

    #[test]
    fn ctx_first_chunk_renders_without_context_block() {
        let spec = PromptSpec::new(Mode::Ctx, "Hero");
        let prompt = render_prompt(&spec, "src", None);
        assert!(!prompt.contains("Previous text:"));
        assert!(prompt.contains("considering the most previously translated text"));
    }

    #[test]
    fn ctx_prompt_embeds_context_verbatim() {
        let spec = PromptSpec::new(Mode::Ctx, "Romance");
        let ctx = ContextPair {
            prev_source: "\u{524d}\u{6587}\u{3002}".to_string(),
            prev_target: "The previous translation.".to_string(),
        };
        let prompt = render_prompt(&spec, "\u{5f53}\u{524d}\u{6587}", Some(&ctx));
        assert!(prompt.contains(&ctx.prev_source));
        assert!(prompt.contains(&ctx.prev_target));
        let src_pos = prompt.find("Previous text:").unwrap();
        let tgt_pos = prompt.find("Previous translation:").unwrap();
        let cur_pos = prompt.find("Text:\n\u{5f53}\u{524d}\u{6587}").unwrap();
        assert!(src_pos < tgt_pos && tgt_pos < cur_pos);
    }

    #[test]
    fn rendering_is_pure() {
        let spec = PromptSpec::new(Mode::S2S, "Science Fiction");
        let a = render_prompt(&spec, "text", None);
        let b = render_prompt(&spec, "text", None);
        assert_eq!(a, b);
    }

    #[test]
    fn golden_s2s_prompt() {
        let spec = PromptSpec::new(Mode::S2S, "Fantasy");
        let prompt = render_prompt(&spec, "\u{5c71}\u{9ad8}\u{6c34}\u{957f}\u{3002}", None);
        let golden = include_str!("../../tests/golden/prompt_s2s.txt");
        assert_eq!(prompt, golden, "rendered S2S prompt drifted from the golden file");
    }

    #[test]
    fn golden_ctx_prompt_with_context() {
        let spec = PromptSpec::new(Mode::Ctx, "Fantasy");
        let ctx = ContextPair {
            prev_source: "\u{5c71}\u{9ad8}\u{6c34}\u{957f}\u{3002}".to_string(),
            prev_target: "The mountains are high and the rivers long.".to_string(),
        };
        let prompt = render_prompt(&spec, "\u{98ce}\u{8d77}\u{4e91}\u{6d8c}\u{3002}", Some(&ctx));
        let golden = include_str!("../../tests/golden/prompt_ctx.txt");
        assert_eq!(prompt, golden, "rendered CTX prompt drifted from the golden file");
    }

    #[test]
    fn golden_ctx_prompt_first_chunk() {
        let spec = PromptSpec::new(Mode::Ctx, "Fantasy");
        let prompt = render_prompt(&spec, "\u{5c71}\u{9ad8}\u{6c34}\u{957f}\u{3002}", None);
        let golden = include_str!("../../tests/golden/prompt_ctx_first.txt");
        assert_eq!(prompt, golden, "rendered first-chunk CTX prompt drifted from the golden file");
    }
}
