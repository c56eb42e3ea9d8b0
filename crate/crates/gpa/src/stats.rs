//! Graph statistics feeding the hyperparameter regression features.

use std::collections::VecDeque;

use crate::error::{GpaError, Result};
use crate::graph::Graph;

/// The eight graph-statistics features.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphStats {
    pub node_count: usize,
    pub edge_count: usize,
    /// 2|E| / (|V|(|V|-1)).
    pub density: f64,
    /// Exact unweighted diameter; of the largest component when the graph
    /// is disconnected (see `diameter_on_largest_component`).
    pub diameter: usize,
    pub avg_degree: f64,
    pub max_degree: usize,
    pub avg_edge_weight: f64,
    pub max_edge_weight: f64,
    pub diameter_on_largest_component: bool,
}

impl GraphStats {
    pub fn feature_vector(&self) -> [f64; 8] {
        [
            self.node_count as f64,
            self.edge_count as f64,
            self.density,
            self.diameter as f64,
            self.avg_degree,
            self.max_degree as f64,
            self.avg_edge_weight,
            self.max_edge_weight,
        ]
    }

    pub const FEATURE_NAMES: [&'static str; 8] = [
        "node_count",
        "edge_count",
        "density",
        "diameter",
        "avg_degree",
        "max_degree",
        "avg_edge_weight",
        "max_edge_weight",
    ];
}

/// Compute the Table-of-features statistics. Diameter is exact by
/// all-source BFS, intended for abstract-scale graphs (≈ √|V| nodes).
pub fn compute_stats(g: &Graph) -> Result<GraphStats> {
    let n = g.node_count();
    if n == 0 {
        return Err(GpaError::domain("cannot compute statistics of an empty graph"));
    }
    let m = g.edge_count();
    let density = if n > 1 { 2.0 * m as f64 / (n as f64 * (n as f64 - 1.0)) } else { 0.0 };
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let avg_degree = degrees.iter().sum::<usize>() as f64 / n as f64;
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let (avg_w, max_w) = if m > 0 {
        let sum: f64 = g.edges().iter().map(|&(_, _, w)| w).sum();
        let max = g.edges().iter().map(|&(_, _, w)| w).fold(f64::NEG_INFINITY, f64::max);
        (sum / m as f64, max)
    } else {
        (0.0, 0.0)
    };

    let lcc = g.largest_connected_component();
    let flagged = lcc.len() < n;
    if flagged {
        eprintln!(
            "warning: graph is disconnected; diameter computed on largest component ({} of {} nodes)",
            lcc.len(),
            n
        );
    }
    let mut diameter = 0usize;
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &src in &lcc {
        for &v in &lcc {
            dist[v] = usize::MAX;
        }
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in g.neighbors(u)? {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    diameter = diameter.max(dist[v]);
                    queue.push_back(v);
                }
            }
        }
    }

    Ok(GraphStats {
        node_count: n,
        edge_count: m,
        density,
        diameter,
        avg_degree,
        max_degree,
        avg_edge_weight: avg_w,
        max_edge_weight: max_w,
        diameter_on_largest_component: flagged,
    })
}
