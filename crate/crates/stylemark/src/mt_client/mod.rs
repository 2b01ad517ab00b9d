//! Prompt rendering and a resumable chat-completion driver for
//! sentence-to-sentence and context-based machine translation.

mod endpoint;
mod prompt;
mod store;

pub use endpoint::{
    parse_chat_response, ChatCompletion, CompletionError, HttpEndpoint, MockEndpoint, RateLimiter,
};
pub use prompt::{render_prompt, ContextPair, Mode, PromptSpec};
pub use store::RecordStore;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::ParallelChunk;

/// Endpoint connection and policy settings. The API key is read from the
/// environment variable named here, never stored in configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointConfig {
    pub base_url: String,
    pub model_name: String,
    pub api_key_env: String,
    pub max_retries: u32,
    pub requests_per_minute: u32,
    pub timeout_secs: u64,
    pub temperature: f64,
    /// Rendered prompts above this estimated token count (4 bytes/token)
    /// are rejected instead of silently truncated.
    pub max_prompt_tokens: Option<usize>,
    /// Base delay for exponential retry backoff.
    pub retry_backoff_ms: u64,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            base_url: "https://api.openai.com/v1".to_string(),
            model_name: "gpt-4".to_string(),
            api_key_env: "OPENAI_API_KEY".to_string(),
            max_retries: 3,
            requests_per_minute: 60,
            timeout_secs: 120,
            temperature: 0.0,
            max_prompt_tokens: Some(8192),
            retry_backoff_ms: 500,
        }
    }
}

/// Retry and prompt-budget policy used by the translation driver.
#[derive(Debug, Clone, PartialEq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub backoff_ms: u64,
    pub max_prompt_tokens: Option<usize>,
}

impl From<&EndpointConfig> for RetryPolicy {
    fn from(cfg: &EndpointConfig) -> Self {
        RetryPolicy {
            max_retries: cfg.max_retries,
            backoff_ms: cfg.retry_backoff_ms,
            max_prompt_tokens: cfg.max_prompt_tokens,
        }
    }
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy::from(&EndpointConfig::default())
    }
}

/// One completed translation request, with the full prompt retained for
/// audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationRecord {
    pub book_id: String,
    pub chunk_index: u32,
    pub mode: Mode,
    pub prompt_rendered: String,
    pub output: String,
    pub latency_ms: u64,
    pub attempt_count: u32,
}

#[derive(Debug, Error)]
pub enum MtError {
    #[error("book {book_id} chunk {chunk_index}: context-based translation needs the previous source/target pair")]
    MissingContext { book_id: String, chunk_index: u32 },
    #[error("rendered prompt estimates {estimated} tokens, over the {budget}-token budget")]
    PromptTooLong { estimated: usize, budget: usize },
    #[error("api key environment variable {0} is not set")]
    MissingApiKey(String),
    #[error("endpoint failed after {attempts} attempt(s): {source}")]
    Endpoint {
        attempts: u32,
        #[source]
        source: CompletionError,
    },
    #[error("record store io error on {path}: {source}")]
    StoreIo {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("record store {path}:{line}: {message}")]
    StoreParse { path: String, line: usize, message: String },
    #[error("record store {path} does not match this run: {message}")]
    StoreMismatch { path: String, message: String },
    #[error("book {book_id} halted at chunk {index}; completed chunks are persisted, rerun to resume: {source}")]
    Halted {
        book_id: String,
        index: u32,
        #[source]
        source: Box<MtError>,
    },
}

/// Renders the prompt for one chunk and drives a single completion with
/// retry. Transient failures (timeouts, rate limits, server errors) back
/// off exponentially up to `policy.max_retries`; authentication failures
/// are immediate.
pub fn translate_chunk(
    endpoint: &dyn ChatCompletion,
    policy: &RetryPolicy,
    spec: &PromptSpec,
    chunk: &ParallelChunk,
    context: Option<&ContextPair>,
) -> Result<TranslationRecord, MtError> {
    if spec.mode == Mode::Ctx && chunk.index > 0 && context.is_none() {
        return Err(MtError::MissingContext {
            book_id: chunk.book_id.clone(),
            chunk_index: chunk.index,
        });
    }
    let prompt = render_prompt(spec, &chunk.source, context);
    if let Some(budget) = policy.max_prompt_tokens {
        let estimated = prompt.len().div_ceil(4);
        if estimated > budget {
            return Err(MtError::PromptTooLong { estimated, budget });
        }
    }
    let start = Instant::now();
    let mut attempts = 0u32;
    loop {
        attempts += 1;
        match endpoint.complete(&prompt) {
            Ok(output) => {
                return Ok(TranslationRecord {
                    book_id: chunk.book_id.clone(),
                    chunk_index: chunk.index,
                    mode: spec.mode,
                    prompt_rendered: prompt,
                    output,
                    latency_ms: start.elapsed().as_millis() as u64,
                    attempt_count: attempts,
                });
            }
            Err(err) => {
                let retryable = matches!(err, CompletionError::Transient(_));
                if !retryable || attempts > policy.max_retries {
                    return Err(MtError::Endpoint { attempts, source: err });
                }
                let delay = policy.backoff_ms.saturating_mul(1 << (attempts - 1).min(16));
                if delay > 0 {
                    std::thread::sleep(std::time::Duration::from_millis(delay));
                }
            }
        }
    }
}

fn check_store(
    store: &RecordStore,
    book_id: &str,
    mode: Mode,
    n_chunks: usize,
) -> Result<(), MtError> {
    let records = store.records();
    if records.len() > n_chunks {
        return Err(MtError::StoreMismatch {
            path: store.path_display(),
            message: format!("has {} records but the book has {n_chunks} chunks", records.len()),
        });
    }
    for (i, rec) in records.iter().enumerate() {
        if rec.book_id != book_id || rec.mode != mode || rec.chunk_index as usize != i {
            return Err(MtError::StoreMismatch {
                path: store.path_display(),
                message: format!(
                    "record {i} is {}/{}/{}, expected {book_id}/{mode}/{i}",
                    rec.book_id, rec.mode, rec.chunk_index
                ),
            });
        }
    }
    Ok(())
}

/// Translates a book chunk by chunk, persisting each completed record to
/// `store`. Chunks already in the store are never re-requested, so an
/// interrupted run resumes where it stopped.
///
/// S2S chunks are independent; CTX runs strictly sequentially, feeding
/// chunk i−1's source and output into chunk i's prompt. On failure the
/// run halts at the failed chunk with completed records persisted.
pub fn translate_book(
    endpoint: &dyn ChatCompletion,
    policy: &RetryPolicy,
    spec: &PromptSpec,
    book_id: &str,
    chunks: &[ParallelChunk],
    store: &mut RecordStore,
) -> Result<Vec<TranslationRecord>, MtError> {
    check_store(store, book_id, spec.mode, chunks.len())?;
    let mut records: Vec<TranslationRecord> = store.records().to_vec();
    let done = records.len();
    if done == chunks.len() {
        return Ok(records);
    }

    match spec.mode {
        Mode::S2S => {
            use rayon::prelude::*;
            let results: Vec<Result<TranslationRecord, MtError>> = chunks[done..]
                .par_iter()
                .map(|chunk| translate_chunk(endpoint, policy, spec, chunk, None))
                .collect();
            for result in results {
                match result {
                    Ok(rec) => {
                        store.append(&rec)?;
                        records.push(rec);
                    }
                    Err(err) => {
                        return Err(MtError::Halted {
                            book_id: book_id.to_string(),
                            index: records.len() as u32,
                            source: Box::new(err),
                        })
                    }
                }
            }
        }
        Mode::Ctx => {
            for (offset, chunk) in chunks[done..].iter().enumerate() {
                let i = done + offset;
                let context = if i == 0 {
                    None
                } else {
                    Some(ContextPair {
                        prev_source: chunks[i - 1].source.clone(),
                        prev_target: records[i - 1].output.clone(),
                    })
                };
                match translate_chunk(endpoint, policy, spec, chunk, context.as_ref()) {
                    Ok(rec) => {
                        store.append(&rec)?;
                        records.push(rec);
                    }
                    Err(err) => {
                        return Err(MtError::Halted {
                            book_id: book_id.to_string(),
                            index: i as u32,
                            source: Box::new(err),
                        })
                    }
                }
            }
        }
    }
    Ok(records)
}
