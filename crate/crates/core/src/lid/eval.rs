use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{LabeledExample, LidError, LidModel};
use crate::metrics::{f1, F1Report};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub labels: Vec<String>,
    /// rows = true label, columns = predicted
    pub confusion: Vec<Vec<u64>>,
    pub report: F1Report,
}

impl Evaluation {
    pub fn macro_f1(&self) -> f64 {
        self.report.macro_f1
    }

    pub fn confusion_csv(&self) -> String {
        let mut s = format!("true\\predicted,{}\n", self.labels.join(","));
        for (l, row) in self.labels.iter().zip(&self.confusion) {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            s.push_str(&format!("{l},{}\n", cells.join(",")));
        }
        s
    }

    pub fn pattern(&self) -> ConfusionPattern {
        ConfusionPattern::from_matrix(&self.labels, &self.confusion)
    }
}

/// Scores top-1 predictions against gold labels.
pub fn evaluate(model: &LidModel, test: &[LabeledExample]) -> Result<Evaluation, LidError> {
    let index: HashMap<&str, usize> = model
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let k = index.len();
    let mut confusion = vec![vec![0u64; k]; k];
    for e in test {
        let y = *index
            .get(e.label.as_str())
            .ok_or_else(|| LidError::UnknownLabel(e.label.clone()))?;
        let p = model.predict_index(&e.text)?;
        confusion[y][p] += 1;
    }
    let report = f1(&confusion).map_err(|e| LidError::Degenerate(e.to_string()))?;
    Ok(Evaluation {
        labels: model.labels().to_vec(),
        confusion,
        report,
    })
}

/// Where the confusion mass sits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionPattern {
    /// (true, predicted, count) of the largest off-diagonal cell.
    pub largest_cell: (String, String, u64),
    /// Unordered label pairs with both directions summed, largest first.
    pub pairs: Vec<(String, String, u64)>,
}

impl ConfusionPattern {
    pub fn from_matrix(labels: &[String], m: &[Vec<u64>]) -> Self {
        let mut largest_cell = (String::new(), String::new(), 0);
        let mut pairs = Vec::new();
        for i in 0..labels.len() {
            for j in 0..labels.len() {
                if i != j && m[i][j] > largest_cell.2 {
                    largest_cell = (labels[i].clone(), labels[j].clone(), m[i][j]);
                }
                if i < j {
                    pairs.push((labels[i].clone(), labels[j].clone(), m[i][j] + m[j][i]));
                }
            }
        }
        pairs.sort_by_key(|p| std::cmp::Reverse(p.2));
        Self { largest_cell, pairs }
    }

    /// The largest off-diagonal cell involves `hub`.
    pub fn hub_dominates(&self, hub: &str) -> bool {
        self.largest_cell.0 == hub || self.largest_cell.1 == hub
    }

    /// `a`–`b` is the most confused pair once pairs with `hub` are set aside.
    pub fn top_pair_without(&self, hub: &str, a: &str, b: &str) -> bool {
        self.pairs
            .iter()
            .find(|(x, y, _)| x != hub && y != hub)
            .is_some_and(|(x, y, _)| (x == a && y == b) || (x == b && y == a))
    }
}
