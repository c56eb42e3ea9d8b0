//! Undirected weighted graph with dense node ids, edge-list I/O, and
//! connected components.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{GpaError, Result};

/// An undirected graph with dense node ids in `[0, node_count)`.
///
/// Each edge is stored once in `edges` and twice in the adjacency lists.
/// Duplicate input edges are merged by summing weights; self-loops are
/// dropped at construction.
#[derive(Debug, Clone)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
    /// Original node labels, indexed by dense id. For programmatically built
    /// graphs these are just the decimal ids.
    names: Vec<String>,
}

impl Graph {
    /// Build a graph from an edge list over dense ids. Self-loops are
    /// dropped, duplicates merged by weight summation.
    pub fn from_edges(node_count: usize, raw: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let names = (0..node_count).map(|v| v.to_string()).collect();
        Self::from_edges_named(node_count, raw, names)
    }

    fn from_edges_named(
        node_count: usize,
        raw: impl IntoIterator<Item = (usize, usize, f64)>,
        names: Vec<String>,
    ) -> Result<Self> {
        let mut merged: HashMap<(usize, usize), f64> = HashMap::new();
        let mut dropped_loops = 0usize;
        for (u, v, w) in raw {
            if u >= node_count || v >= node_count {
                return Err(GpaError::domain(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            if w <= 0.0 || !w.is_finite() {
                return Err(GpaError::domain(format!("edge ({u}, {v}) has non-positive weight {w}")));
            }
            if u == v {
                dropped_loops += 1;
                continue;
            }
            let key = (u.min(v), u.max(v));
            *merged.entry(key).or_insert(0.0) += w;
        }
        if dropped_loops > 0 {
            eprintln!("warning: dropped {dropped_loops} self-loop(s)");
        }
        let mut edges: Vec<(usize, usize, f64)> =
            merged.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        edges.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v, w) in &edges {
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        for list in &mut adjacency {
            list.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        }
        Ok(Graph { node_count, edges, adjacency, names })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Stored edges, each once, with `u < v`.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Neighbors of `v` with edge weights, sorted by neighbor id.
    pub fn neighbors(&self, v: usize) -> Result<&[(usize, f64)]> {
        self.adjacency
            .get(v)
            .map(|l| l.as_slice())
            .ok_or_else(|| GpaError::domain(format!("node id {v} out of range")))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Sum of incident edge weights of `v`.
    pub fn weighted_degree(&self, v: usize) -> f64 {
        self.adjacency[v].iter().map(|&(_, w)| w).sum()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    /// Connected components as a per-node component id, components numbered
    /// by their smallest contained node id order.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.node_count];
        let mut next = 0usize;
        let mut queue = Vec::new();
        for start in 0..self.node_count {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            queue.push(start);
            while let Some(u) = queue.pop() {
                for &(v, _) in &self.adjacency[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        queue.push(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Node set of the largest connected component. Ties are broken in favor
    /// of the component containing the smallest node id.
    pub fn largest_connected_component(&self) -> Vec<usize> {
        if self.node_count == 0 {
            return Vec::new();
        }
        let comp = self.components();
        let ncomp = comp.iter().copied().max().unwrap() + 1;
        let mut sizes = vec![0usize; ncomp];
        for &c in &comp {
            sizes[c] += 1;
        }
        // Components are numbered in order of smallest contained node id, so
        // the first maximal one wins ties.
        let best = (0..ncomp).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c))).unwrap();
        (0..self.node_count).filter(|&v| comp[v] == best).collect()
    }

    /// Serialize as a weighted edge list using the original node names.
    pub fn write_edge_list(&self, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        for &(u, v, w) in &self.edges {
            if (w - 1.0).abs() < 1e-12 {
                writeln!(out, "{} {}", self.names[u], self.names[v])?;
            } else {
                writeln!(out, "{} {} {}", self.names[u], self.names[v], w)?;
            }
        }
        Ok(())
    }
}

/// Load an undirected graph from a whitespace-separated edge list.
///
/// Lines are `u v` or, when `weighted`, optionally `u v w`. Lines starting
/// with `#` are ignored. Original ids are remapped to dense integers in
/// first-seen order; the original names are retained on the graph.
pub fn load_edge_list(path: &Path, weighted: bool) -> Result<Graph> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut raw: Vec<(usize, usize, f64)> = Vec::new();
    let intern = |tok: &str, names: &mut Vec<String>, index: &mut HashMap<String, usize>| {
        *index.entry(tok.to_string()).or_insert_with(|| {
            names.push(tok.to_string());
            names.len() - 1
        })
    };
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (u, v) = match (parts.next(), parts.next()) {
            (Some(u), Some(v)) => (u, v),
            _ => {
                return Err(GpaError::Parse {
                    line: lineno + 1,
                    msg: format!("expected at least two fields, got {line:?}"),
                })
            }
        };
        let w = match parts.next() {
            Some(tok) if weighted => tok.parse::<f64>().map_err(|e| GpaError::Parse {
                line: lineno + 1,
                msg: format!("bad weight {tok:?}: {e}"),
            })?,
            Some(_) | None => 1.0,
        };
        if w <= 0.0 {
            return Err(GpaError::domain(format!("line {}: weight {w} must be positive", lineno + 1)));
        }
        let ui = intern(u, &mut names, &mut index);
        let vi = intern(v, &mut names, &mut index);
        raw.push((ui, vi, w));
    }
    Graph::from_edges_named(names.len(), raw, names)
}

/// Multi-label ground truth for node classification.
#[derive(Debug, Clone)]
pub struct LabelSet {
    /// Per dense node id, the set of label ids (sorted). Unlabeled nodes
    /// have empty sets.
    pub labels: Vec<Vec<usize>>,
    pub label_count: usize,
}

impl LabelSet {
    pub fn labeled_nodes(&self) -> Vec<usize> {
        (0..self.labels.len()).filter(|&v| !self.labels[v].is_empty()).collect()
    }
}

/// Load labels from lines `node_id label_id[,label_id...]`. Node ids are
/// looked up against the graph's original names; label ids are remapped
/// densely.
pub fn load_labels(path: &Path, g: &Graph) -> Result<LabelSet> {
    let name_to_id: HashMap<&str, usize> =
        (0..g.node_count()).map(|v| (g.name(v), v)).collect();
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut labels = vec![Vec::new(); g.node_count()];
    let mut label_index: HashMap<String, usize> = HashMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let node_tok = parts.next().unwrap();
        let label_tok = parts.next().ok_or_else(|| GpaError::Parse {
            line: lineno + 1,
            msg: "missing label field".into(),
        })?;
        let &v = name_to_id.get(node_tok).ok_or_else(|| GpaError::Parse {
            line: lineno + 1,
            msg: format!("unknown node id {node_tok:?}"),
        })?;
        for tok in label_tok.split(',') {
            let next = label_index.len();
            let id = *label_index.entry(tok.to_string()).or_insert(next);
            if !labels[v].contains(&id) {
                labels[v].push(id);
            }
        }
    }
    for l in &mut labels {
        l.sort_unstable();
    }
    Ok(LabelSet { labels, label_count: label_index.len() })
}
