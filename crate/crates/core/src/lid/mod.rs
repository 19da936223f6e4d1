//! Dialect identification with a linear classifier over averaged embeddings
//! of hashed character n-grams and words, trained fastText-style.

mod eval;
mod features;
mod model;
mod train;

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::orthography::{normalize, NormalizedText};
use crate::tag::DialectTag;

pub use eval::{evaluate, ConfusionPattern, Evaluation};
pub use features::{char_ngrams, featurize, fnv1a};
pub use model::LidModel;
pub use train::{train, TrainSummary};

#[derive(Debug, Error)]
pub enum LidError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("degenerate training data: {0}")]
    Degenerate(String),
    #[error("empty input text")]
    EmptyInput,
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("label {label:?} does not match level {level:?}")]
    Level { label: String, level: Level },
    #[error("model file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LidConfig {
    pub ngram_min: usize,
    pub ngram_max: usize,
    pub embedding_dim: usize,
    pub epochs: usize,
    pub learning_rate: f32,
    /// Size of the hashed feature space.
    pub feature_buckets: u32,
    pub word_unigrams: bool,
    pub seed: u64,
}

impl Default for LidConfig {
    fn default() -> Self {
        Self {
            ngram_min: 2,
            ngram_max: 6,
            embedding_dim: 64,
            epochs: 25,
            learning_rate: 1.0,
            feature_buckets: 1 << 21,
            word_unigrams: true,
            seed: 0,
        }
    }
}

impl LidConfig {
    pub fn validate(&self) -> Result<(), LidError> {
        let bad = |m: &str| Err(LidError::Config(m.to_owned()));
        if self.ngram_min == 0 || self.ngram_min > self.ngram_max {
            return bad("need 1 <= ngram_min <= ngram_max");
        }
        if self.embedding_dim == 0 || self.epochs == 0 || self.feature_buckets == 0 {
            return bad("embedding_dim, epochs and feature_buckets must be positive");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be positive");
        }
        Ok(())
    }
}

/// Label granularity of a classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Language,
    Dialect,
    Subdialect,
}

impl Level {
    /// Subdialect labels carry a subdialect code; coarser labels must not.
    pub fn check(self, label: &str) -> Result<(), LidError> {
        let err = || LidError::Level {
            label: label.to_owned(),
            level: self,
        };
        let tag: DialectTag = label.parse().map_err(|_| err())?;
        match (self, tag.subdialect) {
            (Level::Subdialect, Some(_)) | (Level::Language | Level::Dialect, None) => Ok(()),
            _ => Err(err()),
        }
    }
}

impl FromStr for Level {
    type Err = LidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "language" => Ok(Level::Language),
            "dialect" => Ok(Level::Dialect),
            "subdialect" => Ok(Level::Subdialect),
            other => Err(LidError::Config(format!("unknown level {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledExample {
    pub text: NormalizedText,
    pub label: String,
}

impl LabeledExample {
    pub fn new(label: &str, raw: &str) -> Self {
        Self {
            text: normalize(raw),
            label: label.to_owned(),
        }
    }
}

/// Reads `label<TAB>text` lines; blank lines are skipped.
pub fn read_examples(src: &str) -> Result<Vec<LabeledExample>, LidError> {
    src.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let (label, text) = l
                .split_once('\t')
                .ok_or_else(|| LidError::Format(format!("line {}: expected label<TAB>text", i + 1)))?;
            Ok(LabeledExample::new(label.trim(), text))
        })
        .collect()
}
