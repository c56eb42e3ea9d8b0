//! Collapse a partitioning into its weighted abstract graph: one abstract
//! node per block, cross-block edges merged into weighted abstract edges.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{GpaError, Result};
use crate::graph::Graph;
use crate::partition::Partitioning;

/// Weighted graph over partition blocks. Abstract node ids equal block ids,
/// so the block→abstract-node mapping is the identity and `p` maps original
/// nodes straight to abstract ids.
#[derive(Debug, Clone)]
pub struct AbstractGraph {
    pub core: Graph,
    /// Original node id → abstract node id.
    pub p: Vec<usize>,
    pub block_sizes: Vec<usize>,
}

impl AbstractGraph {
    pub fn k(&self) -> usize {
        self.core.node_count()
    }

    /// Dump the abstract edge list and the node→abstract-node mapping.
    pub fn write(&self, g: &Graph, edges_path: &Path, map_path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(edges_path)?);
        for &(u, v, w) in self.core.edges() {
            writeln!(out, "{u} {v} {w}")?;
        }
        let mut map_out = BufWriter::new(File::create(map_path)?);
        for (v, &a) in self.p.iter().enumerate() {
            writeln!(map_out, "{} {}", g.name(v), a)?;
        }
        Ok(())
    }
}

/// Build the abstract graph of `g` under partitioning `p`. The weight of an
/// abstract edge is the total weight of original edges crossing the two
/// blocks (the crossing-edge count on unit-weight graphs); intra-block edges
/// are discarded.
pub fn build_abstract(g: &Graph, p: &Partitioning) -> Result<AbstractGraph> {
    if p.assignment.len() != g.node_count() {
        return Err(GpaError::shape(format!(
            "partitioning covers {} nodes, graph has {}",
            p.assignment.len(),
            g.node_count()
        )));
    }
    let k = p.k;
    let mut weights: HashMap<(usize, usize), f64> = HashMap::new();
    for &(u, v, w) in g.edges() {
        let (bu, bv) = (p.assignment[u], p.assignment[v]);
        if bu == bv {
            continue;
        }
        let key = (bu.min(bv), bu.max(bv));
        *weights.entry(key).or_insert(0.0) += w;
    }
    let core = Graph::from_edges(k, weights.into_iter().map(|((u, v), w)| (u, v, w)))?;
    let mut block_sizes = vec![0usize; k];
    for &b in &p.assignment {
        block_sizes[b] += 1;
    }
    Ok(AbstractGraph { core, p: p.assignment.clone(), block_sizes })
}
