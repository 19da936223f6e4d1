use std::collections::HashMap;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

const MAX_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BleuOptions {
    /// Apply the mteval-13a tokenizer before counting. Off by default since
    /// Kurdish input is already tokenized.
    pub tokenize_13a: bool,
    pub lowercase: bool,
    /// Exponential smoothing of zero n-gram counts (sacrebleu's default).
    pub smooth_exp: bool,
}

impl Default for BleuOptions {
    fn default() -> Self {
        Self {
            tokenize_13a: false,
            lowercase: false,
            smooth_exp: true,
        }
    }
}

/// Sufficient statistics for corpus BLEU.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BleuStats {
    pub hyp_len: usize,
    pub ref_len: usize,
    pub correct: [usize; MAX_ORDER],
    pub total: [usize; MAX_ORDER],
}

impl std::ops::AddAssign for BleuStats {
    fn add_assign(&mut self, o: Self) {
        self.hyp_len += o.hyp_len;
        self.ref_len += o.ref_len;
        for n in 0..MAX_ORDER {
            self.correct[n] += o.correct[n];
            self.total[n] += o.total[n];
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationScore {
    pub bleu: f64,
    pub chrf2: f64,
    pub brevity_penalty: f64,
    /// Percentages, after smoothing.
    pub ngram_precisions: [f64; MAX_ORDER],
}

impl BleuStats {
    pub fn collect<R: AsRef<str>>(hyp: &str, refs: &[R], opts: &BleuOptions) -> Self {
        let prep = |s: &str| {
            let s = if opts.lowercase { s.to_lowercase() } else { s.to_owned() };
            if opts.tokenize_13a {
                tokenize_13a(&s)
            } else {
                s
            }
        };
        let hyp = prep(hyp);
        let hyp_toks: Vec<&str> = hyp.split_whitespace().collect();
        let refs: Vec<String> = refs.iter().map(|r| prep(r.as_ref())).collect();

        let mut max_ref_counts: HashMap<Vec<&str>, usize> = HashMap::new();
        let mut ref_len = None::<usize>;
        for r in &refs {
            let toks: Vec<&str> = r.split_whitespace().collect();
            // closest reference length; ties go to the shorter one
            ref_len = Some(match ref_len {
                None => toks.len(),
                Some(best) => {
                    let (dn, db) = (toks.len().abs_diff(hyp_toks.len()), best.abs_diff(hyp_toks.len()));
                    if dn < db || (dn == db && toks.len() < best) {
                        toks.len()
                    } else {
                        best
                    }
                }
            });
            for (gram, c) in ngram_counts(&toks) {
                let e = max_ref_counts.entry(gram).or_insert(0);
                *e = (*e).max(c);
            }
        }

        let mut stats = BleuStats {
            hyp_len: hyp_toks.len(),
            ref_len: ref_len.unwrap_or(0),
            ..Default::default()
        };
        for (gram, c) in ngram_counts(&hyp_toks) {
            let n = gram.len() - 1;
            stats.total[n] += c;
            stats.correct[n] += c.min(max_ref_counts.get(&gram).copied().unwrap_or(0));
        }
        stats
    }

    #[allow(clippy::needless_range_loop)]
    pub fn score(&self, opts: &BleuOptions) -> TranslationScore {
        let bp = if self.hyp_len >= self.ref_len {
            1.0
        } else if self.hyp_len == 0 {
            0.0
        } else {
            (1.0 - self.ref_len as f64 / self.hyp_len as f64).exp()
        };
        let mut precisions = [0.0; MAX_ORDER];
        if self.correct.iter().all(|&c| c == 0) {
            return TranslationScore {
                bleu: 0.0,
                chrf2: 0.0,
                brevity_penalty: bp,
                ngram_precisions: precisions,
            };
        }
        let mut smooth = 1.0;
        for n in 0..MAX_ORDER {
            if self.total[n] == 0 {
                break;
            }
            precisions[n] = if self.correct[n] == 0 {
                if opts.smooth_exp {
                    smooth *= 2.0;
                    100.0 / (smooth * self.total[n] as f64)
                } else {
                    0.0
                }
            } else {
                100.0 * self.correct[n] as f64 / self.total[n] as f64
            };
        }
        let log_sum: f64 = precisions
            .iter()
            .map(|&p| if p == 0.0 { -9_999_999_999.0 } else { p.ln() })
            .sum();
        TranslationScore {
            bleu: bp * (log_sum / MAX_ORDER as f64).exp(),
            chrf2: 0.0,
            brevity_penalty: bp,
            ngram_precisions: precisions,
        }
    }
}

fn ngram_counts<'a>(toks: &[&'a str]) -> HashMap<Vec<&'a str>, usize> {
    let mut counts = HashMap::new();
    for n in 1..=MAX_ORDER {
        for w in toks.windows(n) {
            *counts.entry(w.to_vec()).or_insert(0) += 1;
        }
    }
    counts
}

/// Corpus BLEU. `refs[i]` holds every reference for `hyps[i]`.
pub fn corpus_bleu<H: AsRef<str>, R: AsRef<str>>(hyps: &[H], refs: &[Vec<R>], opts: &BleuOptions) -> TranslationScore {
    let mut stats = BleuStats::default();
    for (h, r) in hyps.iter().zip(refs) {
        stats += BleuStats::collect(h.as_ref(), r, opts);
    }
    stats.score(opts)
}

/// Sentence BLEU over pre-tokenized input with default options.
pub fn bleu<T: AsRef<str>>(references: &[Vec<T>], hypothesis: &[T]) -> f64 {
    let join = |t: &[T]| t.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(" ");
    let refs: Vec<String> = references.iter().map(|r| join(r)).collect();
    corpus_bleu(&[join(hypothesis)], &[refs], &BleuOptions::default()).bleu
}

/// The mteval-v13a tokenizer as used by sacrebleu.
pub fn tokenize_13a(line: &str) -> String {
    static RULES: OnceLock<Vec<(Regex, &'static str)>> = OnceLock::new();
    let rules = RULES.get_or_init(|| {
        vec![
            (Regex::new(r"([\{-~\[-` -&\(-\+:-@/])").unwrap(), " $1 "),
            (Regex::new(r"([^0-9])([\.,])").unwrap(), "$1 $2 "),
            (Regex::new(r"([\.,])([^0-9])").unwrap(), " $1 $2"),
            (Regex::new(r"([0-9])(-)").unwrap(), "$1 $2 "),
        ]
    });
    let mut s = line.replace("<skipped>", "").replace("-\n", "").replace('\n', " ");
    if s.contains('&') {
        s = s
            .replace("&quot;", "\"")
            .replace("&amp;", "&")
            .replace("&lt;", "<")
            .replace("&gt;", ">");
    }
    let mut s = format!(" {s} ");
    for (re, rep) in rules {
        s = re.replace_all(&s, *rep).into_owned();
    }
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_100() {
        let s = corpus_bleu(&["a b c d e"], &[vec!["a b c d e"]], &BleuOptions::default());
        assert!((s.bleu - 100.0).abs() < 1e-9);
    }

    #[test]
    fn no_overlap_is_zero() {
        assert_eq!(bleu(&[vec!["a", "b", "c", "d"]], &["w", "x", "y", "z"]), 0.0);
    }

    #[test]
    fn empty_hypothesis_is_zero() {
        let s = corpus_bleu(&[""], &[vec!["a b"]], &BleuOptions::default());
        assert_eq!(s.bleu, 0.0);
    }

    #[test]
    fn score_is_bp_times_geometric_mean() {
        let s = corpus_bleu(
            &["the cat sat on mat"],
            &[vec!["the cat sat on the mat"]],
            &BleuOptions::default(),
        );
        let gm = s.ngram_precisions.iter().map(|p| p.ln()).sum::<f64>() / 4.0;
        assert!((s.bleu - s.brevity_penalty * gm.exp()).abs() < 1e-9);
    }

    #[test]
    fn sacrebleu_reference_values() {
        // values produced by sacrebleu 2.6 corpus_bleu with tokenize="none"
        let s = corpus_bleu(
            &["the cat sat on mat"],
            &[vec!["the cat sat on the mat"]],
            &BleuOptions::default(),
        );
        assert!((s.bleu - 57.89300674674101).abs() < 1e-6, "{}", s.bleu);
        let s = corpus_bleu(&["a b c x"], &[vec!["a b c d"]], &BleuOptions::default());
        assert!((s.bleu - 59.460355750136046).abs() < 1e-6, "{}", s.bleu);
    }

    #[test]
    fn thirteen_a_splits_punctuation() {
        assert_eq!(tokenize_13a("Hello, world."), "Hello , world .");
        assert_eq!(tokenize_13a("3.14 and 1,000"), "3.14 and 1,000");
        assert_eq!(tokenize_13a("a&amp;b"), "a & b");
        assert_eq!(tokenize_13a("1-2"), "1 - 2");
        assert_eq!(tokenize_13a("ناو، xoş? (test) \"q\""), "ناو، xoş ? ( test ) \" q \"");
    }
}
