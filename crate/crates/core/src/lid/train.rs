use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::model::{init_row, softmax};
use super::{featurize, LabeledExample, Level, LidConfig, LidError, LidModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainSummary {
    pub examples: usize,
    pub skipped_empty: usize,
    pub distinct_features: usize,
    pub train_accuracy: f64,
}

/// Softmax regression over the mean of feature embeddings, trained with
/// plain SGD and a linearly decaying learning rate. Single-threaded and
/// fully determined by `config.seed`.
pub fn train(
    examples: &[LabeledExample],
    config: &LidConfig,
    level: Level,
) -> Result<(LidModel, TrainSummary), LidError> {
    config.validate()?;
    if examples.is_empty() {
        return Err(LidError::Degenerate("no training examples".into()));
    }
    let labels: Vec<String> = examples
        .iter()
        .map(|e| e.label.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if labels.len() < 2 {
        return Err(LidError::Degenerate(format!("only one label ({})", labels[0])));
    }
    for l in &labels {
        level.check(l)?;
    }
    let label_index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();

    let dim = config.embedding_dim;
    let mut model = LidModel {
        config: *config,
        labels: labels.clone(),
        level,
        rows: HashMap::new(),
        input: Vec::new(),
        output: vec![0.0; labels.len() * dim],
    };

    let mut data: Vec<(Vec<usize>, usize)> = Vec::with_capacity(examples.len());
    let mut skipped = 0;
    for e in examples {
        let feats = featurize(&e.text, config);
        if feats.is_empty() {
            skipped += 1;
            continue;
        }
        let rows = feats
            .into_iter()
            .map(|f| {
                let next = model.rows.len();
                *model.rows.entry(f).or_insert_with(|| {
                    model.input.extend(init_row(config.seed, f, dim));
                    next
                })
            })
            .collect();
        data.push((rows, label_index[e.label.as_str()]));
    }
    if skipped > 0 {
        log::warn!("skipped {skipped} examples with empty text");
    }
    if data.is_empty() {
        return Err(LidError::Degenerate("every example is empty".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let total_steps = (config.epochs * data.len()) as f32;
    let mut step = 0usize;
    let mut hidden = vec![0f32; dim];
    let mut grad = vec![0f32; dim];
    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut loss = 0f64;
        for &i in &order {
            let (rows, y) = &data[i];
            let lr = config.learning_rate * (1.0 - step as f32 / total_steps);
            step += 1;

            hidden.iter_mut().for_each(|h| *h = 0.0);
            for &r in rows {
                for (h, x) in hidden.iter_mut().zip(&model.input[r * dim..(r + 1) * dim]) {
                    *h += x;
                }
            }
            let n = rows.len() as f32;
            hidden.iter_mut().for_each(|h| *h /= n);

            let probs = softmax(&model.logits(&hidden));
            loss -= probs[*y].max(1e-12).ln();
            grad.iter_mut().for_each(|g| *g = 0.0);
            for (j, p) in probs.iter().enumerate() {
                let target = if j == *y { 1.0 } else { 0.0 };
                let alpha = lr * (target - *p as f32);
                let w = &mut model.output[j * dim..(j + 1) * dim];
                for k in 0..dim {
                    grad[k] += alpha * w[k];
                    w[k] += alpha * hidden[k];
                }
            }
            grad.iter_mut().for_each(|g| *g /= n);
            for &r in rows {
                for (x, g) in model.input[r * dim..(r + 1) * dim].iter_mut().zip(&grad) {
                    *x += g;
                }
            }
        }
        log::debug!("epoch {}: mean loss {:.4}", epoch + 1, loss / data.len() as f64);
    }

    let correct = examples
        .iter()
        .filter(|e| !e.text.is_empty())
        .filter(|e| model.predict_index(&e.text).ok() == Some(label_index[e.label.as_str()]))
        .count();
    let summary = TrainSummary {
        examples: data.len(),
        skipped_empty: skipped,
        distinct_features: model.rows.len(),
        train_accuracy: correct as f64 / data.len() as f64,
    };
    log::info!(
        "trained on {} examples, train accuracy {:.4}",
        summary.examples,
        summary.train_accuracy
    );
    Ok((model, summary))
}
