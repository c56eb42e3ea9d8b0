//! Weighted random walks. Transition probability from u to v is
//! w(u,v) / Σ_{v'∈N(u)} w(u,v'), sampled through per-node alias tables;
//! unit weights reduce to uniform neighbor choice.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::alias::AliasTable;
use crate::error::{GpaError, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkParams {
    pub walks_per_node: usize,
    pub walk_length: usize,
}

impl Default for WalkParams {
    fn default() -> Self {
        WalkParams { walks_per_node: 10, walk_length: 40 }
    }
}

#[derive(Debug, Clone)]
pub struct WalkCorpus {
    pub walks: Vec<Vec<usize>>,
}

impl WalkCorpus {
    pub fn token_count(&self) -> usize {
        self.walks.iter().map(|w| w.len()).sum()
    }
}

/// Per-node alias tables over the neighbor weight distribution.
pub struct TransitionTables {
    tables: Vec<Option<AliasTable>>,
}

impl TransitionTables {
    pub fn build(g: &Graph) -> Result<Self> {
        let tables = (0..g.node_count())
            .map(|v| {
                let nbrs = g.neighbors(v)?;
                if nbrs.is_empty() {
                    return Ok(None);
                }
                let total: f64 = nbrs.iter().map(|&(_, w)| w).sum();
                let probs: Vec<f64> = nbrs.iter().map(|&(_, w)| w / total).collect();
                AliasTable::build(&probs).map(Some)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TransitionTables { tables })
    }

    pub fn step(&self, g: &Graph, u: usize, rng: &mut ChaCha8Rng) -> Option<usize> {
        let table = self.tables[u].as_ref()?;
        let i = table.sample(rng);
        Some(g.neighbors(u).expect("id in range")[i].0)
    }
}

/// Generate `walks_per_node` walks of length at most `walk_length` from
/// every node. A walk that reaches a node without neighbors stops early.
///
/// Each walk draws from its own seeded stream, so the corpus is identical
/// regardless of worker count.
pub fn generate_walks(g: &Graph, wp: &WalkParams, seed: u64) -> Result<WalkCorpus> {
    if g.node_count() == 0 {
        return Err(GpaError::domain("cannot walk an empty graph"));
    }
    if wp.walks_per_node == 0 || wp.walk_length == 0 {
        return Err(GpaError::domain("walks_per_node and walk_length must be >= 1"));
    }
    let tables = TransitionTables::build(g)?;
    let walks: Vec<Vec<usize>> = (0..g.node_count())
        .into_par_iter()
        .flat_map_iter(|start| {
            let g = &g;
            let tables = &tables;
            (0..wp.walks_per_node).map(move |r| {
                let stream = seed
                    ^ (start as u64).wrapping_mul(0x9e3779b97f4a7c15)
                    ^ (r as u64).wrapping_mul(0xbf58476d1ce4e5b9);
                let mut rng = ChaCha8Rng::seed_from_u64(stream);
                let mut walk = Vec::with_capacity(wp.walk_length);
                walk.push(start);
                while walk.len() < wp.walk_length {
                    match tables.step(g, *walk.last().unwrap(), &mut rng) {
                        Some(next) => walk.push(next),
                        None => break,
                    }
                }
                walk
            })
        })
        .collect();
    Ok(WalkCorpus { walks })
}
