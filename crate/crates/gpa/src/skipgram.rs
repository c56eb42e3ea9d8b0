//! Skip-gram with negative sampling over walk corpora, trained by SGD.
//! Serves both the abstract-graph embedding and the full-graph backend
//! that consumes an initialization.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::abstract_graph::AbstractGraph;
use crate::alias::AliasTable;
use crate::embedding::EmbeddingMatrix;
use crate::error::{GpaError, Result};
use crate::walk::{generate_walks, WalkCorpus, WalkParams};

#[derive(Debug, Clone, Copy)]
pub struct SkipGramParams {
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub initial_lr: f64,
    pub dim: usize,
}

impl Default for SkipGramParams {
    fn default() -> Self {
        SkipGramParams { window: 10, negatives: 5, epochs: 1, initial_lr: 0.025, dim: 128 }
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Negative-sampling distribution: unigram frequency of the corpus raised
/// to the 3/4 power, alias-sampled over the nodes that occur.
struct NegativeSampler {
    table: AliasTable,
    ids: Vec<usize>,
}

impl NegativeSampler {
    fn build(corpus: &WalkCorpus, node_count: usize) -> Result<Self> {
        let mut freq = vec![0usize; node_count];
        for w in &corpus.walks {
            for &v in w {
                freq[v] += 1;
            }
        }
        let ids: Vec<usize> = (0..node_count).filter(|&v| freq[v] > 0).collect();
        if ids.is_empty() {
            return Err(GpaError::domain("empty corpus"));
        }
        let weights: Vec<f64> = ids.iter().map(|&v| (freq[v] as f64).powf(0.75)).collect();
        let total: f64 = weights.iter().sum();
        let probs: Vec<f64> = weights.iter().map(|&w| w / total).collect();
        Ok(NegativeSampler { table: AliasTable::build(&probs)?, ids })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        self.ids[self.table.sample(rng)]
    }
}

/// One (center, context) pair with its sampled negatives; used by the
/// gradient-check interface.
#[derive(Debug, Clone)]
pub struct TrainingPair {
    pub center: usize,
    pub context: usize,
    pub negatives: Vec<usize>,
}

/// Negative-sampling loss of a batch:
/// Σ [-ln σ(v_c·u_o) - Σ_n ln σ(-v_c·u_n)].
pub fn batch_loss(input: &EmbeddingMatrix, output: &EmbeddingMatrix, batch: &[TrainingPair]) -> f64 {
    let mut loss = 0.0;
    for pair in batch {
        let v = input.row(pair.center);
        let dot = |u: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        loss -= sigmoid(dot(output.row(pair.context))).ln();
        for &n in &pair.negatives {
            loss -= sigmoid(-dot(output.row(n))).ln();
        }
    }
    loss
}

/// Analytic gradients of [`batch_loss`] with respect to both matrices.
pub fn batch_gradients(
    input: &EmbeddingMatrix,
    output: &EmbeddingMatrix,
    batch: &[TrainingPair],
) -> (EmbeddingMatrix, EmbeddingMatrix) {
    let d = input.dim();
    let mut gin = EmbeddingMatrix::zeros(input.rows(), d);
    let mut gout = EmbeddingMatrix::zeros(output.rows(), d);
    for pair in batch {
        let v: Vec<f64> = input.row(pair.center).to_vec();
        let mut acc = vec![0.0; d];
        {
            let u = output.row(pair.context);
            let s = sigmoid(u.iter().zip(&v).map(|(a, b)| a * b).sum());
            let coef = s - 1.0;
            for j in 0..d {
                acc[j] += coef * u[j];
            }
            let gu = gout.row_mut(pair.context);
            for j in 0..d {
                gu[j] += coef * v[j];
            }
        }
        for &n in &pair.negatives {
            let u = output.row(n);
            let s = sigmoid(u.iter().zip(&v).map(|(a, b)| a * b).sum());
            for j in 0..d {
                acc[j] += s * u[j];
            }
            let gu = gout.row_mut(n);
            for j in 0..d {
                gu[j] += s * v[j];
            }
        }
        let gv = gin.row_mut(pair.center);
        for j in 0..d {
            gv[j] += acc[j];
        }
    }
    (gin, gout)
}

/// Train skip-gram embeddings over the walk corpus.
///
/// Input vectors start from `init` when given (the initialization hook),
/// otherwise uniform random in [-0.5/d, 0.5/d]; context vectors start at
/// zero. The learning rate decays linearly from `initial_lr` down to
/// `initial_lr / 10^4` over all (center, context) pairs. Returns the
/// input-side matrix.
pub fn train_skipgram(
    corpus: &WalkCorpus,
    node_count: usize,
    sp: &SkipGramParams,
    init: Option<&EmbeddingMatrix>,
    seed: u64,
) -> Result<EmbeddingMatrix> {
    if corpus.walks.is_empty() {
        return Err(GpaError::domain("empty corpus"));
    }
    if let Some(m) = init {
        if m.rows() != node_count || m.dim() != sp.dim {
            return Err(GpaError::shape(format!(
                "init is {}x{}, expected {}x{}",
                m.rows(),
                m.dim(),
                node_count,
                sp.dim
            )));
        }
    }
    let mut input = match init {
        Some(m) => m.clone(),
        None => EmbeddingMatrix::random(node_count, sp.dim, seed ^ 0x494e4954),
    };
    if sp.epochs == 0 {
        return Ok(input);
    }
    let mut output = EmbeddingMatrix::zeros(node_count, sp.dim);
    let sampler = NegativeSampler::build(corpus, node_count)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x53474e53);

    let pairs_per_pass: usize = corpus
        .walks
        .iter()
        .map(|w| {
            let l = w.len();
            (0..l).map(|i| i.min(sp.window) + (l - 1 - i).min(sp.window)).sum::<usize>()
        })
        .sum();
    let total_pairs = (pairs_per_pass * sp.epochs).max(1);
    let min_lr = sp.initial_lr * 1e-4;
    let d = sp.dim;
    let mut processed = 0usize;

    for _epoch in 0..sp.epochs {
        for walk in &corpus.walks {
            for i in 0..walk.len() {
                let center = walk[i];
                let lo = i.saturating_sub(sp.window);
                let hi = (i + sp.window).min(walk.len() - 1);
                for j in lo..=hi {
                    if j == i {
                        continue;
                    }
                    let context = walk[j];
                    let lr = (sp.initial_lr
                        * (1.0 - processed as f64 / total_pairs as f64))
                        .max(min_lr);
                    processed += 1;

                    let mut acc = vec![0.0; d];
                    // Positive target, then `negatives` sampled negatives.
                    for s in 0..=sp.negatives {
                        let (target, label) = if s == 0 {
                            (context, 1.0)
                        } else {
                            let mut n = sampler.sample(&mut rng);
                            let mut tries = 0;
                            while n == context && tries < 3 {
                                n = sampler.sample(&mut rng);
                                tries += 1;
                            }
                            if n == context {
                                continue;
                            }
                            (n, 0.0)
                        };
                        let v = input.row(center);
                        let u = output.row(target);
                        let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
                        let g = (sigmoid(dot) - label) * lr;
                        for k in 0..d {
                            acc[k] += g * u[k];
                        }
                        let v_snapshot: Vec<f64> = v.to_vec();
                        let u = output.row_mut(target);
                        for k in 0..d {
                            u[k] -= g * v_snapshot[k];
                        }
                    }
                    let v = input.row_mut(center);
                    for k in 0..d {
                        v[k] -= acc[k];
                    }
                }
            }
        }
    }
    Ok(input)
}

/// Embed the abstract graph: weighted walks on its core, then skip-gram
/// from random initialization.
pub fn embed_abstract(
    ga: &AbstractGraph,
    wp: &WalkParams,
    sp: &SkipGramParams,
    seed: u64,
) -> Result<EmbeddingMatrix> {
    let corpus = generate_walks(&ga.core, wp, seed)?;
    train_skipgram(&corpus, ga.core.node_count(), sp, None, seed)
}
