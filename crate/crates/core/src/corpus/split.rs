use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Corpus, CorpusError, DEFAULT_MIN_DURATION_S};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    /// Test utterances per dialect tag; unlisted dialects get none.
    pub test_sizes: BTreeMap<String, usize>,
    /// Share of the non-test remainder held out for validation.
    pub validation_fraction: f64,
    pub min_duration_s: f64,
}

impl SplitSpec {
    /// 500 test utterances for Mahabad and Sanandaj, 2000 for Erbil and
    /// Sulaymaniyah, 10% validation.
    pub fn asr_default() -> Self {
        let test_sizes = [("ckb-mhb", 500), ("ckb-snn", 500), ("ckb-hwl", 2000), ("ckb-slm", 2000)]
            .into_iter()
            .map(|(k, v)| (k.to_owned(), v))
            .collect();
        Self {
            test_sizes,
            validation_fraction: 0.1,
            min_duration_s: DEFAULT_MIN_DURATION_S,
        }
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(CorpusError::Metadata(format!(
                "validation fraction {} is not in (0, 1)",
                self.validation_fraction
            )));
        }
        Ok(())
    }
}

/// Utterance ids per partition, each sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<String>,
    pub validation: Vec<String>,
    pub test: Vec<String>,
}

impl Split {
    /// Writes `train.txt`, `validation.txt` and `test.txt`, one id per line.
    pub fn write(&self, dir: &Path) -> Result<(), CorpusError> {
        fs::create_dir_all(dir)?;
        for (name, ids) in [
            ("train", &self.train),
            ("validation", &self.validation),
            ("test", &self.test),
        ] {
            let mut s = ids.join("\n");
            if !s.is_empty() {
                s.push('\n');
            }
            fs::write(dir.join(format!("{name}.txt")), s)?;
        }
        Ok(())
    }
}

/// Draws the test set per dialect, then validation from what remains.
/// Dialects are visited in sorted order with one RNG, so the result depends
/// only on the corpus contents and `seed`.
pub fn split(corpus: &Corpus, spec: &SplitSpec, seed: u64) -> Result<Split, CorpusError> {
    spec.validate()?;
    let min_ms = (spec.min_duration_s * 1000.0).round() as i64;
    let mut by: BTreeMap<String, Vec<&str>> = BTreeMap::new();
    for u in corpus.utterances() {
        let ms = ((u.end_s - u.start_s) * 1000.0).round() as i64;
        if ms >= min_ms && !u.text.is_empty() {
            by.entry(u.dialect.to_string()).or_default().push(&u.id);
        }
    }
    for (d, &n) in &spec.test_sizes {
        let available = by.get(d).map_or(0, Vec::len);
        if n > available {
            return Err(CorpusError::Split {
                dialect: d.clone(),
                requested: n,
                available,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Split::default();
    for (d, mut ids) in by {
        ids.sort_unstable();
        ids.shuffle(&mut rng);
        let n_test = spec.test_sizes.get(&d).copied().unwrap_or(0);
        let n_val = ((ids.len() - n_test) as f64 * spec.validation_fraction).round() as usize;
        let (test, rest) = ids.split_at(n_test);
        let (val, train) = rest.split_at(n_val);
        out.test.extend(test.iter().map(|s| s.to_string()));
        out.validation.extend(val.iter().map(|s| s.to_string()));
        out.train.extend(train.iter().map(|s| s.to_string()));
    }
    out.train.sort();
    out.validation.sort();
    out.test.sort();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpsampleStrategy {
    /// Repeat a class's items in their original order.
    Cycle,
    /// Draw repeats uniformly with replacement.
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Upsampled<T> {
    pub label: String,
    pub item: T,
    /// 0 for the original, n for its n-th copy.
    pub repetition: usize,
}

/// Duplicates minority-class items until every class matches the largest.
/// Output is grouped by label in sorted order, originals first.
pub fn upsample<T: Clone>(items: &[(String, T)], strategy: UpsampleStrategy) -> Vec<Upsampled<T>> {
    let mut by: BTreeMap<&str, Vec<&T>> = BTreeMap::new();
    for (l, t) in items {
        by.entry(l.as_str()).or_default().push(t);
    }
    let max = by.values().map(Vec::len).max().unwrap_or(0);
    let mut rng = match strategy {
        UpsampleStrategy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        UpsampleStrategy::Cycle => None,
    };
    let mut out = Vec::with_capacity(max * by.len());
    for (label, group) in by {
        let mut copies = vec![0usize; group.len()];
        for t in &group {
            out.push(Upsampled {
                label: label.to_owned(),
                item: (*t).clone(),
                repetition: 0,
            });
        }
        for k in 0..max - group.len() {
            let i = match rng.as_mut() {
                Some(r) => rand::Rng::gen_range(r, 0..group.len()),
                None => k % group.len(),
            };
            copies[i] += 1;
            out.push(Upsampled {
                label: label.to_owned(),
                item: group[i].clone(),
                repetition: copies[i],
            });
        }
    }
    out
}
