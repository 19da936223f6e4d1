//! Evaluation metrics: WER, BLEU, chrF and classification F1.
//!
//! BLEU and chrF follow the sacrebleu 2.x defaults so scores are comparable
//! with published numbers.

mod bleu;
mod chrf;
mod f1;
mod wer;

use thiserror::Error;

pub use bleu::{bleu, corpus_bleu, tokenize_13a, BleuOptions, BleuStats, TranslationScore};
pub use chrf::{chrf, corpus_chrf, ChrfOptions};
pub use f1::{f1, ClassScores, F1Report};
pub use wer::{corpus_wer, wer, WerBreakdown};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("metric undefined: {0}")]
    Undefined(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}
