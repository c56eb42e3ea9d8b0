//! Embedding propagation: inherit each node's embedding from its abstract
//! node, then repeat synchronous half-averaging with the neighborhood mean
//! until the mean per-node movement drops below δ.

use rayon::prelude::*;

use crate::abstract_graph::AbstractGraph;
use crate::embedding::EmbeddingMatrix;
use crate::error::{GpaError, Result};
use crate::graph::Graph;
use crate::partition;
use crate::skipgram::{embed_abstract, SkipGramParams};
use crate::walk::WalkParams;

#[derive(Debug, Clone, Copy)]
pub struct PropagationConfig {
    pub delta: f64,
    pub max_iters: usize,
}

impl PropagationConfig {
    /// δ = 1/|V|, max 100 iterations.
    pub fn for_graph(g: &Graph) -> Self {
        PropagationConfig { delta: 1.0 / g.node_count().max(1) as f64, max_iters: 100 }
    }
}

/// Per-iteration diagnostics.
#[derive(Debug, Clone, Default)]
pub struct PropagationTrace {
    /// Mean per-node movement Δ after each iteration.
    pub deltas: Vec<f64>,
    /// Neighbor list entries visited per iteration; equals Σ|N(v)|.
    pub neighbor_visits: Vec<u64>,
}

impl PropagationTrace {
    pub fn iterations(&self) -> usize {
        self.deltas.len()
    }

    pub fn converged(&self, delta: f64) -> bool {
        self.deltas.last().is_some_and(|&d| d <= delta)
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<()> {
        use std::io::Write;
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "iteration,delta,neighbor_visits")?;
        for (i, (&d, &nv)) in self.deltas.iter().zip(&self.neighbor_visits).enumerate() {
            writeln!(out, "{},{},{}", i + 1, d, nv)?;
        }
        Ok(())
    }
}

/// Lift abstract embeddings to per-node initial embeddings.
///
/// Starts from f_i(v) = f_a(p(v)). Each iteration computes, synchronously
/// for every node with neighbors, the neighborhood mean f_nbr(v) and the
/// update (f_i(v) + f_nbr(v)) / 2. Δ is the mean Euclidean movement over
/// all |V| nodes; isolated nodes never move but stay in the denominator.
pub fn propagate(
    g: &Graph,
    ga: &AbstractGraph,
    f_a: &EmbeddingMatrix,
    cfg: &PropagationConfig,
) -> Result<(EmbeddingMatrix, PropagationTrace)> {
    if f_a.rows() != ga.k() {
        return Err(GpaError::shape(format!(
            "abstract embedding has {} rows, abstract graph has {} nodes",
            f_a.rows(),
            ga.k()
        )));
    }
    if ga.p.len() != g.node_count() {
        return Err(GpaError::shape(format!(
            "abstract mapping covers {} nodes, graph has {}",
            ga.p.len(),
            g.node_count()
        )));
    }
    if cfg.delta <= 0.0 || cfg.max_iters == 0 {
        return Err(GpaError::domain("delta must be positive and max_iters >= 1"));
    }
    let n = g.node_count();
    let d = f_a.dim();
    let mut current = EmbeddingMatrix::zeros(n, d);
    for v in 0..n {
        current.row_mut(v).copy_from_slice(f_a.row(ga.p[v]));
    }
    let mut next = current.clone();
    let mut trace = PropagationTrace::default();

    for _iter in 0..cfg.max_iters {
        let visits: u64 = (0..n).map(|v| g.degree(v) as u64).sum();
        let cur = &current;
        let moved: f64 = next
            .data_mut()
            .par_chunks_mut(d)
            .enumerate()
            .map(|(v, out)| {
                let neighbors = g.neighbors(v).expect("id in range");
                if neighbors.is_empty() {
                    out.copy_from_slice(cur.row(v));
                    return 0.0;
                }
                let inv = 1.0 / neighbors.len() as f64;
                let own = cur.row(v);
                for j in 0..d {
                    out[j] = 0.0;
                }
                for &(u, _) in neighbors {
                    let r = cur.row(u);
                    for j in 0..d {
                        out[j] += r[j];
                    }
                }
                let mut dist2 = 0.0;
                for j in 0..d {
                    out[j] = 0.5 * (own[j] + out[j] * inv);
                    let diff = out[j] - own[j];
                    dist2 += diff * diff;
                }
                dist2.sqrt()
            })
            .sum();
        let delta = moved / n as f64;
        std::mem::swap(&mut current, &mut next);
        trace.deltas.push(delta);
        trace.neighbor_visits.push(visits);
        if delta <= cfg.delta {
            break;
        }
    }
    Ok((current, trace))
}

/// Full initialization pipeline: partition → abstract graph → abstract
/// embedding → propagation.
#[allow(clippy::too_many_arguments)]
pub fn init_for_graph(
    g: &Graph,
    k: Option<usize>,
    epsilon: f64,
    cfg: &PropagationConfig,
    wp: &WalkParams,
    sp: &SkipGramParams,
    seed: u64,
) -> Result<EmbeddingMatrix> {
    let k = k.unwrap_or_else(|| partition::default_k(g));
    let p = partition::partition(g, k, epsilon, seed)?;
    let ga = crate::abstract_graph::build_abstract(g, &p)?;
    let f_a = embed_abstract(&ga, wp, sp, seed)?;
    let (init, _) = propagate(g, &ga, &f_a, cfg)?;
    Ok(init)
}
