use serde::{Deserialize, Serialize};

use super::RuleError;
use crate::orthography::{normalize, Script, TransliterationTable};
use crate::tag::DialectTag;

const BUILTIN_WORDLISTS: &str = include_str!("../../data/wordlists.tsv");
const ABSENT: &str = "-";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordlistRow {
    pub item: String,
    /// One cell per dialect column; `None` where the form does not exist.
    pub cells: Vec<Option<String>>,
}

/// Aligned wordlists: one column per dialect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wordlists {
    pub dialects: Vec<DialectTag>,
    pub rows: Vec<WordlistRow>,
}

impl Wordlists {
    pub fn builtin() -> Self {
        Self::from_tsv(BUILTIN_WORDLISTS).expect("builtin wordlists are valid")
    }

    /// First non-comment line is the header `list\t<tag>\t<tag>...`.
    pub fn from_tsv(src: &str) -> Result<Self, RuleError> {
        let mut lines = src
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        let (_, header) = lines.next().ok_or_else(|| RuleError::Schema("missing header".into()))?;
        let dialects = header
            .split('\t')
            .skip(1)
            .map(|c| {
                c.trim()
                    .parse::<DialectTag>()
                    .map_err(|e| RuleError::Schema(format!("header: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if dialects.len() < 2 {
            return Err(RuleError::Schema("need at least two dialect columns".into()));
        }
        let mut rows = Vec::new();
        for (lineno, line) in lines {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != dialects.len() + 1 {
                return Err(RuleError::Schema(format!(
                    "line {}: {} cells, expected {}",
                    lineno + 1,
                    cols.len() - 1,
                    dialects.len()
                )));
            }
            let cells = cols[1..]
                .iter()
                .map(|c| match c.trim() {
                    "" => Err(RuleError::Schema(format!(
                        "line {}: empty cell (use {ABSENT})",
                        lineno + 1
                    ))),
                    ABSENT => Ok(None),
                    form => Ok(Some(form.to_owned())),
                })
                .collect::<Result<_, _>>()?;
            rows.push(WordlistRow {
                item: cols[0].to_owned(),
                cells,
            });
        }
        Ok(Self { dialects, rows })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    pub labels: Vec<DialectTag>,
    /// Percentages, row-major.
    pub values: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    pub fn get(&self, a: &DialectTag, b: &DialectTag) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.values[i][j])
    }

    /// Other labels ordered from most to least similar to `label`.
    pub fn neighbors(&self, label: &DialectTag) -> Vec<(DialectTag, f64)> {
        let Some(i) = self.labels.iter().position(|l| l == label) else {
            return Vec::new();
        };
        let mut out: Vec<_> = self
            .labels
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(j, l)| (l.clone(), self.values[i][j]))
            .collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("dialect");
        for l in &self.labels {
            s.push(',');
            s.push_str(&l.to_string());
        }
        s.push('\n');
        for (l, row) in self.labels.iter().zip(&self.values) {
            s.push_str(&l.to_string());
            for v in row {
                s.push_str(&format!(",{v:.2}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Percentage of rows on which each pair of columns agrees. Rows where both
/// forms are absent are left out of that pair's count; a form present in
/// only one column counts as a mismatch.
pub fn similarity_matrix(lists: &Wordlists) -> SimilarityMatrix {
    let table = TransliterationTable::builtin();
    let keys: Vec<Vec<Option<String>>> = lists
        .rows
        .iter()
        .map(|r| {
            r.cells
                .iter()
                .map(|c| {
                    c.as_ref().map(|form| {
                        let n = normalize(form);
                        let latin = match n.script() {
                            Script::Arabic => table.to_latin(n.as_str()).0,
                            _ => n.into_string(),
                        };
                        latin.to_lowercase()
                    })
                })
                .collect()
        })
        .collect();
    let n = lists.dialects.len();
    let mut values = vec![vec![100.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let (mut same, mut total) = (0usize, 0usize);
            for row in &keys {
                match (&row[i], &row[j]) {
                    (None, None) => {}
                    (a, b) => {
                        total += 1;
                        if a == b {
                            same += 1;
                        }
                    }
                }
            }
            let pct = if total == 0 {
                0.0
            } else {
                100.0 * same as f64 / total as f64
            };
            values[i][j] = pct;
            values[j][i] = pct;
        }
    }
    SimilarityMatrix {
        labels: lists.dialects.clone(),
        values,
    }
}
