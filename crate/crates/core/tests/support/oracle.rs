//! Deliberately naive second implementations of the metrics: list scans
//! instead of hash maps, recursion instead of a DP table.

pub const MT_PAIRS: &str = include_str!("../fixtures/mt_pairs.tsv");

/// (hypothesis, reference) pairs of the 20-pair fixture.
pub fn mt_pairs() -> Vec<(String, String)> {
    MT_PAIRS
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| {
            let (h, r) = l.split_once('\t').unwrap();
            (h.to_owned(), r.to_owned())
        })
        .collect()
}

fn ngrams<T: Clone>(xs: &[T], n: usize) -> Vec<Vec<T>> {
    if xs.len() < n {
        return Vec::new();
    }
    (0..=xs.len() - n).map(|i| xs[i..i + n].to_vec()).collect()
}

/// Clipped matches by removing each matched reference n-gram from a list.
fn clipped<T: PartialEq + Clone>(hyp: &[Vec<T>], reference: &[Vec<T>]) -> usize {
    let mut pool = reference.to_vec();
    let mut m = 0;
    for g in hyp {
        if let Some(p) = pool.iter().position(|r| r == g) {
            pool.remove(p);
            m += 1;
        }
    }
    m
}

/// Corpus BLEU-4, one reference, exponential smoothing for zero counts.
pub fn bleu(pairs: &[(String, String)]) -> f64 {
    let mut correct = [0usize; 4];
    let mut total = [0usize; 4];
    let (mut hl, mut rl) = (0usize, 0usize);
    for (h, r) in pairs {
        let h: Vec<&str> = h.split_whitespace().collect();
        let r: Vec<&str> = r.split_whitespace().collect();
        hl += h.len();
        rl += r.len();
        for n in 1..=4 {
            let hg = ngrams(&h, n);
            correct[n - 1] += clipped(&hg, &ngrams(&r, n));
            total[n - 1] += hg.len();
        }
    }
    if correct[0] == 0 {
        return 0.0;
    }
    let mut k = 1.0;
    let mut log_sum = 0.0;
    for n in 0..4 {
        let p = if total[n] == 0 {
            return 0.0;
        } else if correct[n] == 0 {
            k *= 2.0;
            1.0 / (k * total[n] as f64)
        } else {
            correct[n] as f64 / total[n] as f64
        };
        log_sum += p.ln() / 4.0;
    }
    let bp = if hl >= rl {
        1.0
    } else {
        (1.0 - rl as f64 / hl as f64).exp()
    };
    100.0 * bp * log_sum.exp()
}

/// Corpus chrF (n = 1..6, beta = 2) with whitespace removed.
pub fn chrf(pairs: &[(String, String)]) -> f64 {
    let mut stats = vec![[0usize; 3]; 6];
    for (h, r) in pairs {
        let h: Vec<char> = h.chars().filter(|c| !c.is_whitespace()).collect();
        let r: Vec<char> = r.chars().filter(|c| !c.is_whitespace()).collect();
        for n in 1..=6 {
            let hg = ngrams(&h, n);
            let rg = ngrams(&r, n);
            stats[n - 1][0] += hg.len();
            stats[n - 1][1] += rg.len();
            stats[n - 1][2] += clipped(&hg, &rg);
        }
    }
    let (mut p, mut rc, mut eff) = (0.0, 0.0, 0.0);
    for [h, r, m] in stats {
        if h > 0 && r > 0 {
            p += m as f64 / h as f64;
            rc += m as f64 / r as f64;
            eff += 1.0;
        }
    }
    if eff == 0.0 {
        return 0.0;
    }
    let (p, rc) = (p / eff, rc / eff);
    if p + rc == 0.0 {
        return 0.0;
    }
    100.0 * 5.0 * p * rc / (4.0 * p + rc)
}

fn edit_distance(a: &[&str], b: &[&str]) -> usize {
    fn go(a: &[&str], b: &[&str], memo: &mut std::collections::HashMap<(usize, usize), usize>) -> usize {
        if a.is_empty() || b.is_empty() {
            return a.len() + b.len();
        }
        if let Some(&d) = memo.get(&(a.len(), b.len())) {
            return d;
        }
        let sub = usize::from(a[0] != b[0]);
        let d = (go(&a[1..], &b[1..], memo) + sub)
            .min(go(&a[1..], b, memo) + 1)
            .min(go(a, &b[1..], memo) + 1);
        memo.insert((a.len(), b.len()), d);
        d
    }
    go(a, b, &mut Default::default())
}

/// Corpus WER in percent.
pub fn wer(pairs: &[(String, String)]) -> f64 {
    let (mut e, mut n) = (0, 0);
    for (h, r) in pairs {
        let h: Vec<&str> = h.split_whitespace().collect();
        let r: Vec<&str> = r.split_whitespace().collect();
        e += edit_distance(&r, &h);
        n += r.len();
    }
    100.0 * e as f64 / n as f64
}
