use std::borrow::Cow;
use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{featurize, Level, LidConfig, LidError};
use crate::orthography::NormalizedText;

const MAGIC: &[u8; 8] = b"CKBLID\0\0";
const VERSION: u32 = 1;

/// Trained classifier. Only embedding rows touched in training are stored;
/// every other bucket keeps its deterministic initial value, which is
/// recomputed on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct LidModel {
    pub(crate) config: LidConfig,
    pub(crate) labels: Vec<String>,
    pub(crate) level: Level,
    pub(crate) rows: HashMap<u32, usize>,
    /// rows.len() × dim, row-major
    pub(crate) input: Vec<f32>,
    /// labels × dim, row-major
    pub(crate) output: Vec<f32>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    config: LidConfig,
    labels: Vec<String>,
    level: Level,
}

/// Initial embedding of a bucket: uniform in ±1/dim from a stream seeded by
/// (seed, bucket).
pub(crate) fn init_row(seed: u64, bucket: u32, dim: usize) -> Vec<f32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(bucket).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let bound = 1.0 / dim as f32;
    (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect()
}

pub(crate) fn softmax(logits: &[f32]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f32::NEG_INFINITY, f32::max) as f64;
    let exps: Vec<f64> = logits.iter().map(|&l| (l as f64 - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

impl LidModel {
    pub fn config(&self) -> &LidConfig {
        &self.config
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn level(&self) -> Level {
        self.level
    }

    fn dim(&self) -> usize {
        self.config.embedding_dim
    }

    pub(crate) fn input_row(&self, bucket: u32) -> Cow<'_, [f32]> {
        let d = self.dim();
        match self.rows.get(&bucket) {
            Some(&r) => Cow::Borrowed(&self.input[r * d..(r + 1) * d]),
            None => Cow::Owned(init_row(self.config.seed, bucket, d)),
        }
    }

    pub(crate) fn hidden(&self, features: &[u32]) -> Vec<f32> {
        let mut h = vec![0f32; self.dim()];
        for &f in features {
            for (a, b) in h.iter_mut().zip(self.input_row(f).iter()) {
                *a += b;
            }
        }
        let n = features.len() as f32;
        h.iter_mut().for_each(|x| *x /= n);
        h
    }

    pub(crate) fn logits(&self, hidden: &[f32]) -> Vec<f32> {
        self.output
            .chunks_exact(self.dim())
            .map(|w| w.iter().zip(hidden).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Probability for every label, in label order.
    pub fn probabilities(&self, text: &NormalizedText) -> Result<Vec<f64>, LidError> {
        let features = featurize(text, &self.config);
        if features.is_empty() {
            return Err(LidError::EmptyInput);
        }
        Ok(softmax(&self.logits(&self.hidden(&features))))
    }

    /// Top-k labels by descending probability; `k` is clamped to the label count.
    pub fn predict(&self, text: &NormalizedText, k: usize) -> Result<Vec<(String, f64)>, LidError> {
        if k == 0 {
            return Err(LidError::Config("k must be at least 1".into()));
        }
        let probs = self.probabilities(text)?;
        let mut ranked: Vec<(usize, f64)> = probs.into_iter().enumerate().collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        Ok(ranked
            .into_iter()
            .take(k.min(self.labels.len()))
            .map(|(i, p)| (self.labels[i].clone(), p))
            .collect())
    }

    pub(crate) fn predict_index(&self, text: &NormalizedText) -> Result<usize, LidError> {
        let probs = self.probabilities(text)?;
        Ok(probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .expect("at least two labels"))
    }

    pub fn save<W: Write>(&self, mut w: W) -> Result<(), LidError> {
        let header = serde_json::to_vec(&Header {
            config: self.config,
            labels: self.labels.clone(),
            level: self.level,
        })
        .map_err(|e| LidError::Format(e.to_string()))?;
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(header.len() as u32).to_le_bytes())?;
        w.write_all(&header)?;
        let mut buckets: Vec<(&u32, &usize)> = self.rows.iter().collect();
        buckets.sort();
        w.write_all(&(buckets.len() as u32).to_le_bytes())?;
        let d = self.dim();
        for (&b, &r) in buckets {
            w.write_all(&b.to_le_bytes())?;
            for x in &self.input[r * d..(r + 1) * d] {
                w.write_all(&x.to_le_bytes())?;
            }
        }
        for x in &self.output {
            w.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn load<R: Read>(mut r: R) -> Result<Self, LidError> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(LidError::Format("not a model file (bad magic)".into()));
        }
        let version = read_u32(&mut r)?;
        if version != VERSION {
            return Err(LidError::Format(format!("unsupported version {version}")));
        }
        let len = read_u32(&mut r)? as usize;
        let mut header = vec![0u8; len];
        r.read_exact(&mut header)?;
        let Header { config, labels, level } =
            serde_json::from_slice(&header).map_err(|e| LidError::Format(e.to_string()))?;
        config.validate()?;
        let d = config.embedding_dim;
        let n = read_u32(&mut r)? as usize;
        let mut rows = HashMap::with_capacity(n);
        let mut input = Vec::with_capacity(n * d);
        for i in 0..n {
            rows.insert(read_u32(&mut r)?, i);
            for _ in 0..d {
                input.push(read_f32(&mut r)?);
            }
        }
        let mut output = Vec::with_capacity(labels.len() * d);
        for _ in 0..labels.len() * d {
            output.push(read_f32(&mut r)?);
        }
        Ok(Self {
            config,
            labels,
            level,
            rows,
            input,
            output,
        })
    }

    pub fn save_path(&self, path: &Path) -> Result<(), LidError> {
        let f = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(f);
        self.save(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load_path(path: &Path) -> Result<Self, LidError> {
        Self::load(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32, LidError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f32<R: Read>(r: &mut R) -> Result<f32, LidError> {
    Ok(f32::from_bits(read_u32(r)?))
}
