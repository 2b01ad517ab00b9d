//! Deterministic synthetic corpora: content-count tables with a
//! controllable style signal, and small text corpora for end-to-end runs.
//!
//! The classifier sanity checks rest on these: with no injected
//! difference, attribution accuracy must sit at chance; with marker words
//! oversampled in machine documents, it must become easy.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{attach_variant, chunk_book, Book, Corpus, Genre, VariantId};
use crate::features::{ContentCategory, ContentCounts, DocId};

/// Shape of a synthetic content-count corpus.
#[derive(Debug, Clone)]
pub struct SyntheticSpec {
    pub n_books: usize,
    pub tokens_per_doc: usize,
    pub vocab_size: usize,
    /// Number of marker words whose sampling weight is boosted in
    /// machine documents.
    pub n_markers: usize,
    /// Weight multiplier for marker words in machine documents; 1.0
    /// means no injected style difference.
    pub marker_boost: f64,
    pub category: ContentCategory,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_books: 25,
            tokens_per_doc: 3000,
            vocab_size: 1500,
            n_markers: 20,
            marker_boost: 1.0,
            category: ContentCategory::Words,
        }
    }
}

impl SyntheticSpec {
    /// The spec with marker words oversampled at the given rate in
    /// machine documents.
    pub fn with_boost(boost: f64) -> SyntheticSpec {
        SyntheticSpec { marker_boost: boost, ..SyntheticSpec::default() }
    }
}

/// Zipf-like sampling weights for ranks 0..n.
fn zipf_weights(n: usize) -> Vec<f64> {
    (0..n).map(|i| 1.0 / (i as f64 + 1.0).powf(0.9)).collect()
}

fn cumulative(weights: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    weights
        .iter()
        .map(|w| {
            acc += w;
            acc
        })
        .collect()
}

fn sample_index(cum: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total = *cum.last().unwrap();
    let r = rng.random::<f64>() * total;
    cum.partition_point(|&c| c <= r).min(cum.len() - 1)
}

/// Generates one (HT, S2S, CTX) triple of word-count tables per book by
/// weighted sampling from a shared Zipf vocabulary. Machine documents
/// multiply the weights of `n_markers` mid-rank marker words by
/// `marker_boost`. Deterministic given the seed.
pub fn synthetic_content_docs(
    spec: &SyntheticSpec,
    seed: u64,
) -> Vec<(DocId, ContentCounts)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab: Vec<String> = (0..spec.vocab_size).map(|i| format!("w{i:05}")).collect();
    let base = zipf_weights(spec.vocab_size);
    let mut boosted = base.clone();
    let marker_lo = 50.min(spec.vocab_size.saturating_sub(spec.n_markers));
    for i in marker_lo..(marker_lo + spec.n_markers).min(spec.vocab_size) {
        boosted[i] *= spec.marker_boost;
    }
    let cum_base = cumulative(&base);
    let cum_boosted = cumulative(&boosted);

    let mut docs = Vec::with_capacity(spec.n_books * 3);
    for book in 0..spec.n_books {
        let book_id = format!("b{book:03}");
        for variant in VariantId::ALL {
            let cum = match variant {
                VariantId::HT => &cum_base,
                VariantId::S2S | VariantId::CTX => &cum_boosted,
            };
            let mut counts: std::collections::BTreeMap<String, u64> =
                std::collections::BTreeMap::new();
            for _ in 0..spec.tokens_per_doc {
                let idx = sample_index(cum, &mut rng);
                *counts.entry(vocab[idx].clone()).or_insert(0) += 1;
            }
            docs.push((
                DocId::new(book_id.clone(), variant),
                ContentCounts {
                    category: spec.category,
                    counts,
                    total: spec.tokens_per_doc as u64,
                },
            ));
        }
    }
    docs
}

/// The marker words [`synthetic_content_docs`] boosts, for assertions.
pub fn synthetic_marker_words(spec: &SyntheticSpec) -> Vec<String> {
    let marker_lo = 50.min(spec.vocab_size.saturating_sub(spec.n_markers));
    (marker_lo..(marker_lo + spec.n_markers).min(spec.vocab_size))
        .map(|i| format!("w{i:05}"))
        .collect()
}

const HANZI_POOL: [char; 24] = [
    '\u{5c71}', '\u{6c34}', '\u{98ce}', '\u{4e91}', '\u{5251}', '\u{7075}', '\u{5929}', '\u{5730}',
    '\u{9f99}', '\u{8679}', '\u{6708}', '\u{661f}', '\u{706b}', '\u{96f7}', '\u{96ea}', '\u{677e}',
    '\u{77f3}', '\u{6cc9}', '\u{8c37}', '\u{5cf0}', '\u{6797}', '\u{6cb3}', '\u{6d77}', '\u{5854}',
];

const NOUNS: [&str; 16] = [
    "sword", "spirit", "cliff", "valley", "city", "master", "disciple", "dragon", "pavilion",
    "mountain", "river", "cloud", "moon", "sect", "elder", "scroll",
];
const VERBS: [&str; 12] = [
    "held", "saw", "crossed", "followed", "raised", "watched", "summoned", "shattered",
    "entered", "sighed", "turned", "climbed",
];
const ADJS: [&str; 10] = [
    "steep", "pale", "ancient", "silent", "vast", "cold", "bright", "narrow", "ordinary", "large",
];

fn english_sentence(rng: &mut ChaCha8Rng, machine_flavor: bool) -> String {
    let noun1 = NOUNS[rng.random_range(0..NOUNS.len())];
    let verb = VERBS[rng.random_range(0..VERBS.len())];
    let adj = ADJS[rng.random_range(0..ADJS.len())];
    let noun2 = NOUNS[rng.random_range(0..NOUNS.len())];
    if machine_flavor && rng.random::<f64>() < 0.45 {
        // machine-flavored participle opener
        format!("Looking ahead, the {adj} {noun1} {verb} the {noun2}.")
    } else if rng.random::<f64>() < 0.3 {
        format!("The {noun1} {verb} the {noun2} that was {adj}.")
    } else {
        format!("The {adj} {noun1} {verb} the {noun2}.")
    }
}

/// Builds a small fully populated corpus: synthetic hanzi sources chunked
/// at 512 bytes with English variant texts attached for HT, S2S, and CTX.
/// Deterministic given the seed.
pub fn synthetic_text_corpus(n_books: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut corpus = Corpus::new();
    let genres = [Genre::Fantasy, Genre::Hero, Genre::Romance, Genre::SciFi, Genre::MysteriousFantasy];
    for b in 0..n_books {
        let book_id = format!("{}", b + 1);
        let mut source = String::new();
        for _ in 0..40 {
            for _ in 0..rng.random_range(6..14) {
                source.push(HANZI_POOL[rng.random_range(0..HANZI_POOL.len())]);
            }
            source.push('\u{3002}');
            if rng.random::<f64>() < 0.2 {
                source.push('\n');
            }
        }
        let book = Book {
            book_id: book_id.clone(),
            title: format!("Synthetic Book {book_id}"),
            genre: genres[b % genres.len()],
            source_text: source,
        };
        let chunks = chunk_book(&book, 512, 20).expect("chunking synthetic book");
        corpus.books.push(book);
        corpus.chunks.extend(chunks);
    }
    for b in 0..n_books {
        let book_id = format!("{}", b + 1);
        let n_chunks = corpus.chunks.iter().filter(|c| c.book_id == book_id).count();
        for variant in VariantId::ALL {
            let machine = variant != VariantId::HT;
            let texts: Vec<String> = (0..n_chunks)
                .map(|_| {
                    let n_sent = rng.random_range(3..7);
                    (0..n_sent)
                        .map(|_| english_sentence(&mut rng, machine))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            corpus = attach_variant(&corpus, &book_id, variant, &texts)
                .expect("attaching synthetic variant");
        }
    }
    corpus
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn content_docs_are_deterministic() {
        let spec = SyntheticSpec { n_books: 3, tokens_per_doc: 200, ..SyntheticSpec::default() };
        let a = synthetic_content_docs(&spec, 11);
        let b = synthetic_content_docs(&spec, 11);
        assert_eq!(a, b);
        let c = synthetic_content_docs(&spec, 12);
        assert_ne!(a, c);
    }

    #[test]
    fn boost_raises_marker_counts_in_machine_docs() {
        let spec = SyntheticSpec {
            n_books: 10,
            tokens_per_doc: 2000,
            marker_boost: 3.0,
            ..SyntheticSpec::default()
        };
        let docs = synthetic_content_docs(&spec, 5);
        let markers = synthetic_marker_words(&spec);
        let total_for = |human: bool| -> u64 {
            docs.iter()
                .filter(|(id, _)| (id.variant == VariantId::HT) == human)
                .map(|(_, c)| markers.iter().map(|m| c.counts.get(m).copied().unwrap_or(0)).sum::<u64>())
                .sum()
        };
        let human_per_doc = total_for(true) as f64 / 10.0;
        let machine_per_doc = total_for(false) as f64 / 20.0;
        assert!(
            machine_per_doc > 2.0 * human_per_doc,
            "boost too weak: human {human_per_doc}, machine {machine_per_doc}"
        );
    }

    #[test]
    fn text_corpus_is_fully_populated() {
        let corpus = synthetic_text_corpus(3, 7);
        assert_eq!(corpus.books.len(), 3);
        assert!(!corpus.chunks.is_empty());
        let docs = crate::corpus::assemble_docs(&corpus);
        assert_eq!(docs.docs.len(), 9);
        assert!(docs.partial.is_empty());
    }
}
