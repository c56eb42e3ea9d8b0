//! Node classification: one-vs-rest L2 logistic regression over node
//! embeddings with the known-label-count multi-label protocol, scored by
//! micro and macro F1.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embedding::EmbeddingMatrix;
use crate::error::{GpaError, Result};
use crate::graph::LabelSet;

/// Equal train/test split over the labeled nodes.
#[derive(Debug, Clone)]
pub struct ClassificationSplit {
    pub train_nodes: Vec<usize>,
    pub test_nodes: Vec<usize>,
}

pub fn make_classification_split(labels: &LabelSet, seed: u64) -> ClassificationSplit {
    let mut nodes = labels.labeled_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x434c5350);
    nodes.shuffle(&mut rng);
    let half = nodes.len().div_ceil(2);
    let (train, test) = nodes.split_at(half);
    ClassificationSplit { train_nodes: train.to_vec(), test_nodes: test.to_vec() }
}

/// One binary logistic regressor per label; weight vectors carry the bias
/// in the last slot.
#[derive(Debug, Clone)]
pub struct OvrLogReg {
    pub weights: Vec<Vec<f64>>,
    pub dim: usize,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Regularized binary logistic loss:
/// Σ_i [-y ln σ(z) - (1-y) ln σ(-z)] + (l2/2)·‖w‖² (bias unregularized).
pub fn logreg_loss(w: &[f64], xs: &[&[f64]], ys: &[f64], l2: f64) -> f64 {
    let d = xs[0].len();
    let mut loss = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let z = w[d] + x.iter().zip(&w[..d]).map(|(a, b)| a * b).sum::<f64>();
        loss -= y * sigmoid(z).max(1e-300).ln() + (1.0 - y) * sigmoid(-z).max(1e-300).ln();
    }
    loss + 0.5 * l2 * w[..d].iter().map(|v| v * v).sum::<f64>()
}

/// Analytic gradient of [`logreg_loss`].
pub fn logreg_grad(w: &[f64], xs: &[&[f64]], ys: &[f64], l2: f64) -> Vec<f64> {
    let d = xs[0].len();
    let mut grad = vec![0.0; d + 1];
    for (x, &y) in xs.iter().zip(ys) {
        let z = w[d] + x.iter().zip(&w[..d]).map(|(a, b)| a * b).sum::<f64>();
        let err = sigmoid(z) - y;
        for j in 0..d {
            grad[j] += err * x[j];
        }
        grad[d] += err;
    }
    for j in 0..d {
        grad[j] += l2 * w[j];
    }
    grad
}

/// Train one regressor per label by SGD on the training nodes.
pub fn train_ovr_logreg(
    emb: &EmbeddingMatrix,
    labels: &LabelSet,
    split: &ClassificationSplit,
    l2: f64,
    epochs: usize,
    lr: f64,
    seed: u64,
) -> Result<OvrLogReg> {
    if split.train_nodes.is_empty() {
        return Err(GpaError::domain("empty training split"));
    }
    if labels.labels.len() != emb.rows() {
        return Err(GpaError::shape("label set and embedding cover different node counts"));
    }
    let d = emb.dim();
    let n = split.train_nodes.len() as f64;
    let mut weights = Vec::with_capacity(labels.label_count);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4f56524c);
    let mut order = split.train_nodes.clone();
    for label in 0..labels.label_count {
        let has_positive = split.train_nodes.iter().any(|&v| labels.labels[v].contains(&label));
        if !has_positive {
            eprintln!("warning: label {label} has no positive training example");
        }
        let mut w = vec![0.0; d + 1];
        for epoch in 0..epochs {
            order.shuffle(&mut rng);
            let step = lr / (1.0 + 0.05 * epoch as f64);
            for &v in &order {
                let y = if labels.labels[v].contains(&label) { 1.0 } else { 0.0 };
                let x = emb.row(v);
                let z = w[d] + x.iter().zip(&w[..d]).map(|(a, b)| a * b).sum::<f64>();
                let err = sigmoid(z) - y;
                for j in 0..d {
                    w[j] -= step * (err * x[j] + l2 * w[j] / n);
                }
                w[d] -= step * err;
            }
        }
        weights.push(w);
    }
    Ok(OvrLogReg { weights, dim: d })
}

impl OvrLogReg {
    pub fn decision(&self, x: &[f64], label: usize) -> f64 {
        let w = &self.weights[label];
        w[self.dim] + x.iter().zip(&w[..self.dim]).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Known-label-count protocol: predict the top-m labels by decision
    /// value, where m is the node's true label count.
    pub fn predict_top_m(&self, emb: &EmbeddingMatrix, v: usize, m: usize) -> Vec<usize> {
        let x = emb.row(v);
        let mut scored: Vec<(f64, usize)> =
            (0..self.weights.len()).map(|l| (self.decision(x, l), l)).collect();
        scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        let mut out: Vec<usize> = scored.into_iter().take(m).map(|(_, l)| l).collect();
        out.sort_unstable();
        out
    }

    pub fn predict_split(
        &self,
        emb: &EmbeddingMatrix,
        labels: &LabelSet,
        nodes: &[usize],
    ) -> Vec<Vec<usize>> {
        nodes
            .iter()
            .map(|&v| self.predict_top_m(emb, v, labels.labels[v].len()))
            .collect()
    }
}

/// Micro-F1 (pooled label decisions) and macro-F1 (unweighted mean of
/// per-label F1; labels with no truth and no predictions count as 0).
pub fn f1_scores(pred: &[Vec<usize>], truth: &[Vec<usize>], label_count: usize) -> (f64, f64) {
    let mut tp = vec![0usize; label_count];
    let mut fp = vec![0usize; label_count];
    let mut fnc = vec![0usize; label_count];
    for (p, t) in pred.iter().zip(truth) {
        for &l in p {
            if t.contains(&l) {
                tp[l] += 1;
            } else {
                fp[l] += 1;
            }
        }
        for &l in t {
            if !p.contains(&l) {
                fnc[l] += 1;
            }
        }
    }
    let (tps, fps, fns): (usize, usize, usize) =
        (tp.iter().sum(), fp.iter().sum(), fnc.iter().sum());
    let micro = if 2 * tps + fps + fns == 0 {
        0.0
    } else {
        2.0 * tps as f64 / (2 * tps + fps + fns) as f64
    };
    let macro_f1 = if label_count == 0 {
        0.0
    } else {
        (0..label_count)
            .map(|l| {
                let denom = 2 * tp[l] + fp[l] + fnc[l];
                if denom == 0 {
                    0.0
                } else {
                    2.0 * tp[l] as f64 / denom as f64
                }
            })
            .sum::<f64>()
            / label_count as f64
    };
    (micro, macro_f1)
}
