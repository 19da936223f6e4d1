use std::collections::HashMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChrfOptions {
    pub char_order: usize,
    pub beta: f64,
    /// Keep whitespace as a character; off by default.
    pub whitespace: bool,
}

impl Default for ChrfOptions {
    fn default() -> Self {
        Self {
            char_order: 6,
            beta: 2.0,
            whitespace: false,
        }
    }
}

/// Per order: (hyp n-grams, ref n-grams, matches).
type Stats = Vec<[usize; 3]>;

fn char_ngrams(s: &str, n: usize) -> HashMap<&str, usize> {
    let idx: Vec<usize> = s
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(s.len()))
        .collect();
    let mut counts = HashMap::new();
    if idx.len() > n {
        for w in idx.windows(n + 1) {
            *counts.entry(&s[w[0]..w[n]]).or_insert(0) += 1;
        }
    }
    counts
}

fn prepare(s: &str, opts: &ChrfOptions) -> String {
    if opts.whitespace {
        s.to_owned()
    } else {
        s.split_whitespace().collect()
    }
}

fn match_stats(hyp: &str, reference: &str, order: usize) -> Stats {
    (1..=order)
        .map(|n| {
            let h = char_ngrams(hyp, n);
            let r = char_ngrams(reference, n);
            let matches = h.iter().map(|(g, c)| (*c).min(r.get(g).copied().unwrap_or(0))).sum();
            [h.values().sum(), r.values().sum(), matches]
        })
        .collect()
}

fn f_score(stats: &Stats, beta: f64) -> f64 {
    const EPS: f64 = 1e-16;
    let factor = beta * beta;
    let (mut prec, mut rec, mut eff) = (0.0, 0.0, 0usize);
    for &[h, r, m] in stats {
        prec += if h > 0 { m as f64 / h as f64 } else { EPS };
        rec += if r > 0 { m as f64 / r as f64 } else { EPS };
        if h > 0 && r > 0 {
            eff += 1;
        }
    }
    if eff == 0 {
        return 0.0;
    }
    let (prec, rec) = (prec / eff as f64, rec / eff as f64);
    if prec + rec == 0.0 {
        return 0.0;
    }
    100.0 * (1.0 + factor) * prec * rec / (factor * prec + rec)
}

/// Corpus chrF: per sentence the best-scoring reference is kept, then
/// statistics are summed before computing the F-score.
pub fn corpus_chrf<H: AsRef<str>, R: AsRef<str>>(hyps: &[H], refs: &[Vec<R>], opts: &ChrfOptions) -> f64 {
    let mut total: Stats = vec![[0; 3]; opts.char_order];
    for (h, rs) in hyps.iter().zip(refs) {
        let h = prepare(h.as_ref(), opts);
        let mut best: Option<(f64, Stats)> = None;
        for r in rs {
            let s = match_stats(&h, &prepare(r.as_ref(), opts), opts.char_order);
            let f = f_score(&s, opts.beta);
            if best.as_ref().is_none_or(|(bf, _)| f > *bf) {
                best = Some((f, s));
            }
        }
        if let Some((_, s)) = best {
            for (t, x) in total.iter_mut().zip(s) {
                for k in 0..3 {
                    t[k] += x[k];
                }
            }
        }
    }
    f_score(&total, opts.beta)
}

/// Sentence-level chrF2 of `hypothesis` against `references`.
pub fn chrf<R: AsRef<str>>(references: &[R], hypothesis: &str, beta: f64, max_n: usize) -> f64 {
    let opts = ChrfOptions {
        char_order: max_n,
        beta,
        whitespace: false,
    };
    let refs: Vec<&str> = references.iter().map(AsRef::as_ref).collect();
    corpus_chrf(&[hypothesis], &[refs], &opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_100() {
        assert!((chrf(&["deçim bo malê"], "deçim bo malê", 2.0, 6) - 100.0).abs() < 1e-9);
    }

    #[test]
    fn empty_hypothesis_is_zero() {
        assert_eq!(chrf(&["naw"], "", 2.0, 6), 0.0);
    }

    #[test]
    fn sacrebleu_reference_values() {
        // sacrebleu 2.6 CHRF() corpus scores
        let o = ChrfOptions::default();
        let s = corpus_chrf(&["the cat sat on mat"], &[vec!["the cat sat on the mat"]], &o);
        assert!((s - 66.92857239808531).abs() < 1e-6, "{s}");
        let s = corpus_chrf(&["deçim bo malê", "jinan"], &[vec!["eçim bo malê"], vec!["jingel"]], &o);
        assert!((s - 77.19246031746032).abs() < 1e-6, "{s}");
        let s = corpus_chrf(&["ab"], &[vec!["ab", "x"]], &o);
        assert!((s - 100.0).abs() < 1e-9);
    }

    #[test]
    fn whitespace_ignored() {
        assert!((chrf(&["a b c"], "abc", 2.0, 6) - 100.0).abs() < 1e-9);
    }
}
