//! Headline sentiment: tokenizer, hashed bag-of-words features, a logistic
//! scorer trained by mini-batch gradient descent, and daily aggregation.
//!
//! Scores are the model's probability that a headline is positive:
//! 0 is confidently negative, 0.5 undecided, 1 confidently positive.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use chrono::NaiveDate;
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::synth::GaussianSampler;
use crate::timeseries::{train_len, DatedSeries, Observation, SeriesKind};

/// Number of hashed features, 2^16.
pub const FEATURE_DIM: usize = 1 << 16;
/// Seed mixed into the token hash. Changing it invalidates every saved model.
pub const HASH_SEED: u64 = 0x5EED_2015_0504_F1A1;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Lowercases, splits on Unicode whitespace and trims non-alphanumeric
/// characters from both ends of each token. Interior punctuation survives.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split_whitespace()
        .map(|t| t.trim_matches(|c: char| !c.is_alphanumeric()))
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

/// Seeded FNV-1a over the UTF-8 bytes followed by the SplitMix64 finalizer.
pub fn hash_token(token: &str) -> u64 {
    let mut h = FNV_OFFSET ^ HASH_SEED;
    for &b in token.as_bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h ^= h >> 30;
    h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h ^= h >> 27;
    h = h.wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

pub fn feature_index(token: &str) -> u32 {
    (hash_token(token) & (FEATURE_DIM as u64 - 1)) as u32
}

/// Sparse vector with strictly increasing indices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| v * dense[i as usize]).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|(_, v)| v * v).sum())
    }
}

/// Hashed token counts, L2-normalised when non-zero.
pub fn vectorize<S: AsRef<str>>(tokens: &[S]) -> SparseVector {
    let mut counts: BTreeMap<u32, f64> = BTreeMap::new();
    for t in tokens {
        *counts.entry(feature_index(t.as_ref())).or_insert(0.0) += 1.0;
    }
    let norm = libm::sqrt(counts.values().map(|c| c * c).sum());
    let entries = counts.into_iter().map(|(i, c)| (i, c / norm)).collect();
    SparseVector { entries }
}

pub fn featurize(text: &str) -> SparseVector {
    vectorize(&tokenize(text))
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    fn target(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => 0.0,
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Headline {
    pub date: NaiveDate,
    pub text: String,
    pub label: Option<Label>,
}

impl Headline {
    pub fn new(date: NaiveDate, text: impl Into<String>, label: Option<Label>) -> Result<Self> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(Error::EmptyHeadline);
        }
        Ok(Self { date, text, label })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    /// Share of the shuffled corpus used for fitting; the rest is held out.
    pub train_ratio: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            train_ratio: 0.8,
            epochs: 30,
            learning_rate: 1.0,
            batch_size: 8,
            seed: 2015,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingMeta {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    pub train_accuracy: f64,
    /// `None` when nothing was held out.
    pub test_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentimentModel {
    weights: Vec<f64>,
    bias: f64,
    meta: Option<TrainingMeta>,
}

impl SentimentModel {
    /// All-zero model; scores every text 0.5.
    pub fn zero() -> Self {
        Self {
            weights: vec![0.0; FEATURE_DIM],
            bias: 0.0,
            meta: None,
        }
    }

    pub fn from_parts(weights: Vec<f64>, bias: f64, meta: Option<TrainingMeta>) -> Result<Self> {
        if weights.len() != FEATURE_DIM {
            return Err(Error::FeatureDimMismatch {
                got: weights.len(),
                expected: FEATURE_DIM,
            });
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFiniteWeight(i));
        }
        if !bias.is_finite() {
            return Err(Error::DomainError("bias must be finite"));
        }
        Ok(Self { weights, bias, meta })
    }

    pub fn feature_dim(&self) -> usize {
        FEATURE_DIM
    }

    pub fn hash_seed(&self) -> u64 {
        HASH_SEED
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn meta(&self) -> Option<&TrainingMeta> {
        self.meta.as_ref()
    }

    pub fn score_features(&self, features: &SparseVector) -> f64 {
        sigmoid(features.dot(&self.weights) + self.bias)
    }

    /// Probability of positive sentiment, always within `[0, 1]`.
    pub fn score(&self, text: &str) -> f64 {
        self.score_features(&featurize(text))
    }
}

/// Alias for [`SentimentModel::score`].
pub fn score(model: &SentimentModel, text: &str) -> f64 {
    model.score(text)
}

/// Logistic regression on hashed features.
///
/// The corpus is shuffled once with the seeded sampler and split
/// `train_ratio`/rest; each epoch reshuffles the training indices and takes
/// mean-gradient steps over consecutive mini-batches. Weights start at zero.
pub fn train(corpus: &[Headline], config: &TrainConfig) -> Result<SentimentModel> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut targets = Vec::with_capacity(corpus.len());
    for (i, h) in corpus.iter().enumerate() {
        targets.push(h.label.ok_or(Error::UnlabeledHeadline(i))?.target());
    }
    if targets.iter().all(|t| *t == targets[0]) {
        return Err(Error::SingleClassCorpus);
    }
    if !(config.train_ratio > 0.0 && config.train_ratio < 1.0) {
        return Err(Error::InvalidRatio(config.train_ratio));
    }
    if config.batch_size == 0 {
        return Err(Error::DomainError("batch_size must be at least 1"));
    }
    if !(config.learning_rate.is_finite() && config.learning_rate > 0.0) {
        return Err(Error::DomainError("learning_rate must be positive"));
    }

    let features: Vec<SparseVector> = corpus.iter().map(|h| featurize(&h.text)).collect();
    let mut sampler = GaussianSampler::new(config.seed);
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    sampler.shuffle(&mut order);
    let n_train = train_len(corpus.len(), config.train_ratio)?;
    if n_train == 0 {
        return Err(Error::EmptyTrain);
    }
    let (train_idx, test_idx) = order.split_at(n_train);
    let mut train_idx = train_idx.to_vec();

    let mut weights = vec![0.0; FEATURE_DIM];
    let mut bias = 0.0;
    let mut updates: Vec<(u32, f64)> = Vec::new();
    for _ in 0..config.epochs {
        sampler.shuffle(&mut train_idx);
        for batch in train_idx.chunks(config.batch_size) {
            let step = config.learning_rate / batch.len() as f64;
            updates.clear();
            let mut bias_grad = 0.0;
            for &i in batch {
                let f = &features[i];
                let err = sigmoid(f.dot(&weights) + bias) - targets[i];
                bias_grad += err;
                updates.extend(f.entries().iter().map(|&(j, v)| (j, err * v)));
            }
            for &(j, g) in &updates {
                weights[j as usize] -= step * g;
            }
            bias -= step * bias_grad;
        }
    }

    let accuracy = |idx: &[usize]| -> f64 {
        let hits = idx
            .iter()
            .filter(|&&i| {
                let p = sigmoid(features[i].dot(&weights) + bias);
                (p >= 0.5) == (targets[i] == 1.0)
            })
            .count();
        hits as f64 / idx.len() as f64
    };
    let meta = TrainingMeta {
        epochs: config.epochs,
        learning_rate: config.learning_rate,
        batch_size: config.batch_size,
        seed: config.seed,
        n_train,
        n_test: test_idx.len(),
        train_accuracy: accuracy(&train_idx),
        test_accuracy: if test_idx.is_empty() {
            None
        } else {
            Some(accuracy(test_idx))
        },
    };
    SentimentModel::from_parts(weights, bias, Some(meta))
}

/// Mean score per calendar day, sorted by date.
///
/// Scores within a day are summed in ascending order so the result does not
/// depend on input order, bit for bit.
pub fn daily_aggregate(scored: &[(NaiveDate, f64)]) -> Result<DatedSeries> {
    if scored.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut by_day: BTreeMap<NaiveDate, Vec<f64>> = BTreeMap::new();
    for &(date, s) in scored {
        by_day.entry(date).or_default().push(s);
    }
    let observations = by_day
        .into_iter()
        .map(|(date, mut scores)| {
            scores.sort_by(f64::total_cmp);
            let mean = scores.iter().sum::<f64>() / scores.len() as f64;
            Observation::new(date, mean)
        })
        .collect();
    DatedSeries::new(SeriesKind::SentimentScore, observations)
}
