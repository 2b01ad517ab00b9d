//! Authorship attribution: most-frequent-feature bases, Burrows' Delta
//! z-score profiles, a class-balanced logistic-regression classifier with
//! leave-one-book-out cross-validation, and the MFW accuracy sweep.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::VariantId;
use crate::features::{ContentCategory, ContentCounts, DocId};

/// Binary authorship label. HT documents are human; S2S and CTX are
/// machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Human,
    Machine,
}

impl Label {
    pub fn of(variant: VariantId) -> Label {
        match variant {
            VariantId::HT => Label::Human,
            VariantId::S2S | VariantId::CTX => Label::Machine,
        }
    }
}

/// The top-n most frequent items of one category, with per-item corpus
/// statistics of relative frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureBasis {
    pub category: ContentCategory,
    pub items: Vec<String>,
    pub corpus_mean: Vec<f64>,
    pub corpus_std: Vec<f64>,
}

impl FeatureBasis {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// A document's z-scored relative frequencies over a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaProfile {
    pub doc_id: DocId,
    pub z: Vec<f64>,
}

/// Profiles with labels and grouping keys for grouped cross-validation.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub profiles: Vec<DeltaProfile>,
    pub labels: Vec<Label>,
    /// Book id per profile; folds hold out whole books.
    pub groups: Vec<String>,
}

impl LabeledDataset {
    /// Builds a dataset from profiles, deriving labels and groups from
    /// each profile's document id.
    pub fn from_profiles(profiles: Vec<DeltaProfile>) -> LabeledDataset {
        let labels = profiles.iter().map(|p| Label::of(p.doc_id.variant)).collect();
        let groups = profiles.iter().map(|p| p.doc_id.book_id.clone()).collect();
        LabeledDataset { profiles, labels, groups }
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }
}

/// Trained logistic-regression parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub hyper: Hyperparams,
}

/// Training hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparams {
    pub l2_lambda: f64,
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub tolerance: f64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams { l2_lambda: 1.0, learning_rate: 0.1, max_epochs: 5000, tolerance: 1e-8 }
    }
}

/// Classifier accuracy as a function of MFW count for one category.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyCurve {
    pub category: ContentCategory,
    pub points: Vec<(usize, f64)>,
    pub best: (usize, f64),
}

#[derive(Debug, Error)]
pub enum AttributionError {
    #[error("no content counts supplied")]
    EmptyCounts,
    #[error("basis size must be at least 1")]
    ZeroBasisSize,
    #[error("category mismatch: basis is {expected}, counts are {found}")]
    CategoryMismatch { expected: ContentCategory, found: ContentCategory },
    #[error("{category}: every candidate item has zero variance; basis is empty")]
    EmptyBasis { category: ContentCategory },
    #[error("training data contains a single class")]
    SingleClass,
    #[error("dataset is empty")]
    EmptyDataset,
}

/// Builds the top-`n` basis for `category` from per-document counts:
/// items rank by pooled corpus frequency (ties lexicographic), and each
/// keeps the mean and sample standard deviation of its per-document
/// relative frequency. Zero-variance items are dropped with a warning;
/// if fewer than `n` items exist the basis is shorter, with a warning.
pub fn build_basis(
    counts: &[ContentCounts],
    category: ContentCategory,
    n: usize,
) -> Result<FeatureBasis, AttributionError> {
    if counts.is_empty() {
        return Err(AttributionError::EmptyCounts);
    }
    if n == 0 {
        return Err(AttributionError::ZeroBasisSize);
    }
    for c in counts {
        if c.category != category {
            return Err(AttributionError::CategoryMismatch {
                expected: category,
                found: c.category,
            });
        }
    }
    let mut pooled: std::collections::BTreeMap<&str, u64> = std::collections::BTreeMap::new();
    for c in counts {
        for (item, count) in &c.counts {
            *pooled.entry(item.as_str()).or_insert(0) += count;
        }
    }
    let mut ranked: Vec<(&str, u64)> = pooled.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    if ranked.len() < n {
        log::warn!(
            "{category}: vocabulary has {} items, fewer than requested basis size {n}",
            ranked.len()
        );
    }

    let n_docs = counts.len() as f64;
    let mut items = Vec::new();
    let mut corpus_mean = Vec::new();
    let mut corpus_std = Vec::new();
    let mut dropped = 0usize;
    for (item, _) in ranked.into_iter().take(n) {
        let rel: Vec<f64> = counts.iter().map(|c| c.rel_freq(item)).collect();
        let mean = rel.iter().sum::<f64>() / n_docs;
        let var = rel.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n_docs - 1.0).max(1.0);
        let std = var.sqrt();
        if std == 0.0 {
            dropped += 1;
            continue;
        }
        items.push(item.to_string());
        corpus_mean.push(mean);
        corpus_std.push(std);
    }
    if dropped > 0 {
        log::warn!("{category}: dropped {dropped} zero-variance basis item(s)");
    }
    if items.is_empty() {
        return Err(AttributionError::EmptyBasis { category });
    }
    Ok(FeatureBasis { category, items, corpus_mean, corpus_std })
}

/// Standardizes one document's relative frequencies against the basis.
/// Items absent from the document contribute relative frequency zero.
pub fn profile(doc_id: DocId, doc_counts: &ContentCounts, basis: &FeatureBasis) -> DeltaProfile {
    let z = basis
        .items
        .iter()
        .enumerate()
        .map(|(i, item)| (doc_counts.rel_freq(item) - basis.corpus_mean[i]) / basis.corpus_std[i])
        .collect();
    DeltaProfile { doc_id, z }
}

/// Burrows' Delta: mean absolute difference of two z-profiles.
pub fn burrows_delta(a: &DeltaProfile, b: &DeltaProfile) -> f64 {
    assert_eq!(a.z.len(), b.z.len(), "profiles come from different bases");
    if a.z.is_empty() {
        return 0.0;
    }
    a.z.iter().zip(&b.z).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.z.len() as f64
}

/// Nearest-profile Delta attribution: the label of the labeled profile
/// with minimum Delta; ties resolve to the lexicographically smaller
/// document id.
pub fn delta_attribute(unknown: &DeltaProfile, labeled: &[(DeltaProfile, Label)]) -> Option<Label> {
    labeled
        .iter()
        .map(|(p, label)| (burrows_delta(unknown, p), &p.doc_id, *label))
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)))
        .map(|(_, _, label)| label)
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Numerically stable ln(1 + e^z).
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn class_weights(labels: &[Label]) -> Result<Vec<f64>, AttributionError> {
    let n_machine = labels.iter().filter(|l| **l == Label::Machine).count();
    let n_human = labels.len() - n_machine;
    if n_machine == 0 || n_human == 0 {
        return Err(AttributionError::SingleClass);
    }
    Ok(labels
        .iter()
        .map(|l| match l {
            Label::Human => 0.5 / n_human as f64,
            Label::Machine => 0.5 / n_machine as f64,
        })
        .collect())
}

/// Class-balanced L2-regularized logistic loss and its gradient at
/// (`weights`, `bias`). Each class contributes half the data term; the
/// bias is not regularized.
pub fn loss_and_gradient(
    data: &LabeledDataset,
    weights: &[f64],
    bias: f64,
    l2_lambda: f64,
) -> Result<(f64, Vec<f64>, f64), AttributionError> {
    let sample_w = class_weights(&data.labels)?;
    let dim = weights.len();
    let mut loss = 0.0;
    let mut grad_w = vec![0.0; dim];
    let mut grad_b = 0.0;
    for ((x, label), sw) in data.profiles.iter().zip(&data.labels).zip(&sample_w) {
        let y = match label {
            Label::Human => 0.0,
            Label::Machine => 1.0,
        };
        let logit: f64 = x.z.iter().zip(weights).map(|(a, w)| a * w).sum::<f64>() + bias;
        loss += sw * (softplus(logit) - y * logit);
        let residual = sw * (sigmoid(logit) - y);
        for (g, a) in grad_w.iter_mut().zip(&x.z) {
            *g += residual * a;
        }
        grad_b += residual;
    }
    loss += 0.5 * l2_lambda * weights.iter().map(|w| w * w).sum::<f64>();
    for (g, w) in grad_w.iter_mut().zip(weights) {
        *g += l2_lambda * w;
    }
    Ok((loss, grad_w, grad_b))
}

/// Trains by full-batch gradient descent from a small seeded random
/// initialization, stopping when the loss improves by less than the
/// tolerance or the epoch cap is reached. Deterministic given the seed.
pub fn train_logreg(
    data: &LabeledDataset,
    hyper: &Hyperparams,
    seed: u64,
) -> Result<LogRegModel, AttributionError> {
    if data.is_empty() {
        return Err(AttributionError::EmptyDataset);
    }
    let dim = data.profiles[0].z.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights: Vec<f64> = (0..dim).map(|_| rng.random_range(-1e-3..1e-3)).collect();
    let mut bias = 0.0;
    let mut prev_loss = f64::INFINITY;
    for _ in 0..hyper.max_epochs {
        let (loss, grad_w, grad_b) = loss_and_gradient(data, &weights, bias, hyper.l2_lambda)?;
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= hyper.learning_rate * g;
        }
        bias -= hyper.learning_rate * grad_b;
        if (prev_loss - loss).abs() < hyper.tolerance {
            break;
        }
        prev_loss = loss;
    }
    Ok(LogRegModel { weights, bias, hyper: *hyper })
}

/// Applies the model: probability of the Machine class and the label at
/// the 0.5 threshold.
pub fn classify(model: &LogRegModel, profile: &DeltaProfile) -> (Label, f64) {
    let logit: f64 =
        profile.z.iter().zip(&model.weights).map(|(a, w)| a * w).sum::<f64>() + model.bias;
    let prob = sigmoid(logit);
    let label = if prob >= 0.5 { Label::Machine } else { Label::Human };
    (label, prob)
}

/// Leave-one-book-out cross-validated balanced accuracy: all profiles of
/// one book are held out together, and accuracy is the mean of per-class
/// accuracies over the pooled held-out predictions (chance = 0.5 under
/// any class imbalance).
pub fn cv_accuracy(
    data: &LabeledDataset,
    hyper: &Hyperparams,
    seed: u64,
) -> Result<f64, AttributionError> {
    if data.is_empty() {
        return Err(AttributionError::EmptyDataset);
    }
    let mut books: Vec<&String> = data.groups.iter().collect();
    books.sort();
    books.dedup();

    let fold_results: Vec<Result<Vec<(Label, Label)>, AttributionError>> = books
        .par_iter()
        .map(|book| {
            let train_idx: Vec<usize> = (0..data.len())
                .filter(|&i| &data.groups[i] != *book)
                .collect();
            let test_idx: Vec<usize> =
                (0..data.len()).filter(|&i| &data.groups[i] == *book).collect();
            let train = LabeledDataset {
                profiles: train_idx.iter().map(|&i| data.profiles[i].clone()).collect(),
                labels: train_idx.iter().map(|&i| data.labels[i]).collect(),
                groups: train_idx.iter().map(|&i| data.groups[i].clone()).collect(),
            };
            let model = train_logreg(&train, hyper, seed)?;
            Ok(test_idx
                .iter()
                .map(|&i| (data.labels[i], classify(&model, &data.profiles[i]).0))
                .collect())
        })
        .collect();

    let mut per_class_total = [0usize; 2];
    let mut per_class_correct = [0usize; 2];
    for fold in fold_results {
        for (truth, predicted) in fold? {
            let idx = match truth {
                Label::Human => 0,
                Label::Machine => 1,
            };
            per_class_total[idx] += 1;
            if truth == predicted {
                per_class_correct[idx] += 1;
            }
        }
    }
    let mut acc = 0.0;
    let mut classes = 0.0;
    for (correct, total) in per_class_correct.iter().zip(per_class_total) {
        if total > 0 {
            acc += *correct as f64 / total as f64;
            classes += 1.0;
        }
    }
    Ok(acc / classes)
}

/// For each basis size, rebuilds the basis and profiles and measures
/// cross-validated accuracy; `best` is the argmax with ties resolved to
/// the smallest size. Sweep cells run in parallel and reduce in order.
pub fn mfw_sweep(
    docs: &[(DocId, ContentCounts)],
    category: ContentCategory,
    sizes: &[usize],
    hyper: &Hyperparams,
    seed: u64,
) -> Result<AccuracyCurve, AttributionError> {
    if docs.is_empty() {
        return Err(AttributionError::EmptyCounts);
    }
    let counts: Vec<ContentCounts> = docs.iter().map(|(_, c)| c.clone()).collect();
    let points: Vec<(usize, f64)> = sizes
        .par_iter()
        .map(|&n| -> Result<(usize, f64), AttributionError> {
            let basis = build_basis(&counts, category, n)?;
            let profiles: Vec<DeltaProfile> = docs
                .iter()
                .map(|(id, c)| profile(id.clone(), c, &basis))
                .collect();
            let dataset = LabeledDataset::from_profiles(profiles);
            Ok((n, cv_accuracy(&dataset, hyper, seed)?))
        })
        .collect::<Result<_, _>>()?;
    let best = points
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
        .expect("sizes is non-empty");
    Ok(AccuracyCurve { category, points, best })
}

/// The standard MFW sweep sizes: 100, 200, ..., 1000.
pub fn default_sweep_sizes() -> Vec<usize> {
    (1..=10).map(|i| i * 100).collect()
}
