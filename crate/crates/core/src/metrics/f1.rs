use serde::{Deserialize, Serialize};

use super::MetricError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F1Report {
    pub per_class: Vec<ClassScores>,
    /// Unweighted mean over classes with nonzero support.
    pub macro_f1: f64,
    /// Support-weighted mean.
    pub weighted_f1: f64,
    pub accuracy: f64,
}

/// Scores from a confusion matrix with rows = true class, columns = predicted.
pub fn f1(confusion: &[Vec<u64>]) -> Result<F1Report, MetricError> {
    let k = confusion.len();
    if let Some(row) = confusion.iter().find(|r| r.len() != k) {
        return Err(MetricError::Shape(format!(
            "{k} rows but a row of length {}",
            row.len()
        )));
    }
    let total: u64 = confusion.iter().flatten().sum();
    if total == 0 {
        return Err(MetricError::Undefined("all-zero confusion matrix".into()));
    }
    let per_class: Vec<ClassScores> = (0..k)
        .map(|c| {
            let tp = confusion[c][c] as f64;
            let support: u64 = confusion[c].iter().sum();
            let predicted: u64 = confusion.iter().map(|r| r[c]).sum();
            let precision = if predicted > 0 { tp / predicted as f64 } else { 0.0 };
            let recall = if support > 0 { tp / support as f64 } else { 0.0 };
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            ClassScores {
                precision,
                recall,
                f1,
                support,
            }
        })
        .collect();
    let supported: Vec<&ClassScores> = per_class.iter().filter(|c| c.support > 0).collect();
    let macro_f1 = supported.iter().map(|c| c.f1).sum::<f64>() / supported.len() as f64;
    let weighted_f1 = per_class.iter().map(|c| c.f1 * c.support as f64).sum::<f64>() / total as f64;
    let correct: u64 = (0..k).map(|c| confusion[c][c]).sum();
    Ok(F1Report {
        per_class,
        macro_f1,
        weighted_f1,
        accuracy: correct as f64 / total as f64,
    })
}
