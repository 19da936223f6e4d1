use serde::{Deserialize, Serialize};

use super::MetricError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WerBreakdown {
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub ref_tokens: usize,
    pub wer_percent: f64,
}

impl WerBreakdown {
    pub fn errors(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }

    fn from_counts(s: usize, d: usize, i: usize, n: usize) -> Self {
        Self {
            substitutions: s,
            deletions: d,
            insertions: i,
            ref_tokens: n,
            wer_percent: 100.0 * (s + d + i) as f64 / n as f64,
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Match,
    Sub,
    Del,
    Ins,
}

/// Unit-cost edit distance between token sequences. When several optimal
/// alignments exist the backtrace prefers a substitution over a
/// deletion/insertion pair.
pub fn wer<T: AsRef<str>>(reference: &[T], hypothesis: &[T]) -> Result<WerBreakdown, MetricError> {
    if reference.is_empty() {
        return Err(MetricError::Undefined("empty reference".into()));
    }
    let (s, d, i) = align(reference, hypothesis);
    Ok(WerBreakdown::from_counts(s, d, i, reference.len()))
}

/// Pools errors and reference lengths over line pairs.
pub fn corpus_wer<T: AsRef<str>>(pairs: &[(Vec<T>, Vec<T>)]) -> Result<WerBreakdown, MetricError> {
    let (mut s, mut d, mut i, mut n) = (0, 0, 0, 0);
    for (r, h) in pairs {
        let (ps, pd, pi) = align(r, h);
        s += ps;
        d += pd;
        i += pi;
        n += r.len();
    }
    if n == 0 {
        return Err(MetricError::Undefined("empty reference".into()));
    }
    Ok(WerBreakdown::from_counts(s, d, i, n))
}

fn align<T: AsRef<str>>(r: &[T], h: &[T]) -> (usize, usize, usize) {
    let (n, m) = (r.len(), h.len());
    let mut cost = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in cost.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, c) in cost[0].iter_mut().enumerate() {
        *c = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let diag = cost[i - 1][j - 1] + usize::from(r[i - 1].as_ref() != h[j - 1].as_ref());
            cost[i][j] = diag.min(cost[i - 1][j] + 1).min(cost[i][j - 1] + 1);
        }
    }
    let (mut i, mut j) = (n, m);
    let (mut s, mut d, mut ins) = (0, 0, 0);
    while i > 0 || j > 0 {
        let op = if i > 0 && j > 0 {
            let same = r[i - 1].as_ref() == h[j - 1].as_ref();
            let diag = cost[i - 1][j - 1] + usize::from(!same);
            if diag == cost[i][j] {
                if same {
                    Op::Match
                } else {
                    Op::Sub
                }
            } else if cost[i - 1][j] + 1 == cost[i][j] {
                Op::Del
            } else {
                Op::Ins
            }
        } else if i > 0 {
            Op::Del
        } else {
            Op::Ins
        };
        match op {
            Op::Match => {
                i -= 1;
                j -= 1;
            }
            Op::Sub => {
                s += 1;
                i -= 1;
                j -= 1;
            }
            Op::Del => {
                d += 1;
                i -= 1;
            }
            Op::Ins => {
                ins += 1;
                j -= 1;
            }
        }
    }
    (s, d, ins)
}
