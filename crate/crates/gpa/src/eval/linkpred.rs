//! Link-prediction evaluation: edge holdout with per-node-balanced
//! negative sampling, similarity ranking, and precision.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embedding::{cosine, euclidean, EmbeddingMatrix};
use crate::error::{GpaError, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Cosine,
    Euclidean,
}

impl std::str::FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "cosine" => Ok(Metric::Cosine),
            "euclidean" => Ok(Metric::Euclidean),
            other => Err(format!("unknown metric {other:?}")),
        }
    }
}

/// Train/test split for link prediction. Positives are held-out edges whose
/// endpoints survive in the largest residual component; negatives are
/// non-edges balanced per node against the positives.
#[derive(Debug, Clone)]
pub struct LinkPredSplit {
    pub train_graph: Graph,
    pub in_component: Vec<bool>,
    pub positives: Vec<(usize, usize)>,
    pub negatives: Vec<(usize, usize)>,
    /// t(v): held-out positives incident to v.
    pub per_node_pos: Vec<usize>,
    /// Positives discarded because no balanced negative could be found.
    pub pruned_positives: usize,
}

/// Hold out ⌈α|E|⌉ edges, keep the largest component of the residual graph
/// as the training graph, and sample negatives so that every node has as
/// many negative test pairs as positive ones.
pub fn make_link_split(g: &Graph, alpha: f64, seed: u64) -> Result<LinkPredSplit> {
    if alpha <= 0.0 || alpha >= 1.0 {
        return Err(GpaError::domain(format!("alpha {alpha} must lie in (0, 1)")));
    }
    let m = g.edge_count();
    let holdout = (alpha * m as f64).ceil() as usize;
    if holdout >= m {
        return Err(GpaError::domain(format!(
            "holdout of {holdout} edges leaves no training edges (|E| = {m})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4c504c4b);
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);
    let held: HashSet<usize> = order[..holdout].iter().copied().collect();

    let residual: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !held.contains(i))
        .map(|(_, &e)| e)
        .collect();
    let residual_graph = Graph::from_edges(g.node_count(), residual.iter().copied())?;
    let lcc = residual_graph.largest_connected_component();
    let mut in_component = vec![false; g.node_count()];
    for &v in &lcc {
        in_component[v] = true;
    }
    let train_edges: Vec<(usize, usize, f64)> = residual
        .into_iter()
        .filter(|&(u, v, _)| in_component[u] && in_component[v])
        .collect();
    let train_graph = Graph::from_edges(g.node_count(), train_edges)?;

    let mut positives: Vec<(usize, usize)> = order[..holdout]
        .iter()
        .map(|&i| {
            let (u, v, _) = g.edges()[i];
            (u, v)
        })
        .filter(|&(u, v)| in_component[u] && in_component[v])
        .collect();
    positives.sort_unstable();

    let edge_set: HashSet<(usize, usize)> = g.edges().iter().map(|&(u, v, _)| (u, v)).collect();
    let mut pruned = 0usize;
    let negatives = loop {
        match sample_balanced_negatives(&positives, &edge_set, g.node_count(), &mut rng) {
            Ok(negs) => break negs,
            Err(stuck_node) => {
                // Drop one positive incident to the unbalanceable node.
                let idx = positives
                    .iter()
                    .position(|&(u, v)| u == stuck_node || v == stuck_node)
                    .expect("stuck node must touch a positive");
                positives.remove(idx);
                pruned += 1;
                eprintln!(
                    "warning: pruned a positive incident to node {stuck_node} (negatives infeasible)"
                );
                if positives.is_empty() {
                    return Err(GpaError::domain(
                        "all positives pruned: balanced negative sampling is infeasible",
                    ));
                }
            }
        }
    };

    let mut per_node_pos = vec![0usize; g.node_count()];
    for &(u, v) in &positives {
        per_node_pos[u] += 1;
        per_node_pos[v] += 1;
    }
    Ok(LinkPredSplit {
        train_graph,
        in_component,
        positives,
        negatives,
        per_node_pos,
        pruned_positives: pruned,
    })
}

/// Try to pair node stubs (each node appears once per incident positive)
/// into non-edges. Returns the node with the most leftover stubs when no
/// complete matching is found within the retry budget.
fn sample_balanced_negatives(
    positives: &[(usize, usize)],
    edge_set: &HashSet<(usize, usize)>,
    node_count: usize,
    rng: &mut ChaCha8Rng,
) -> std::result::Result<Vec<(usize, usize)>, usize> {
    let mut stubs = Vec::with_capacity(positives.len() * 2);
    for &(u, v) in positives {
        stubs.push(u);
        stubs.push(v);
    }
    let mut best: Option<(Vec<(usize, usize)>, Vec<usize>)> = None;
    for _try in 0..100 {
        stubs.shuffle(rng);
        let mut used = vec![false; stubs.len()];
        let mut negs: HashSet<(usize, usize)> = HashSet::new();
        let mut pairs = Vec::with_capacity(positives.len());
        for i in 0..stubs.len() {
            if used[i] {
                continue;
            }
            for j in (i + 1)..stubs.len() {
                if used[j] || stubs[i] == stubs[j] {
                    continue;
                }
                let key = (stubs[i].min(stubs[j]), stubs[i].max(stubs[j]));
                if edge_set.contains(&key) || negs.contains(&key) {
                    continue;
                }
                used[i] = true;
                used[j] = true;
                negs.insert(key);
                pairs.push(key);
                break;
            }
        }
        let leftover: Vec<usize> =
            (0..stubs.len()).filter(|&i| !used[i]).map(|i| stubs[i]).collect();
        if leftover.is_empty() {
            return Ok(pairs);
        }
        if best.as_ref().is_none_or(|(_, l)| leftover.len() < l.len()) {
            best = Some((pairs, leftover));
        }
    }
    let (_, leftover) = best.unwrap();
    let mut counts = vec![0usize; node_count];
    for &v in &leftover {
        counts[v] += 1;
    }
    Err((0..node_count).max_by_key(|&v| counts[v]).unwrap())
}

/// Similarity score where larger means "more likely an edge".
fn similarity(emb: &EmbeddingMatrix, pair: (usize, usize), metric: Metric) -> f64 {
    match metric {
        Metric::Cosine => cosine(emb.row(pair.0), emb.row(pair.1)),
        Metric::Euclidean => -euclidean(emb.row(pair.0), emb.row(pair.1)),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LinkPrecision {
    /// Fraction of positives among the globally most similar |E_s'| pairs.
    pub global: f64,
    /// Precision over the union of per-node top-t selections.
    pub per_node: f64,
}

/// Both precision readings for a trained embedding on a split.
pub fn link_precision_detailed(
    emb: &EmbeddingMatrix,
    split: &LinkPredSplit,
    metric: Metric,
) -> LinkPrecision {
    let positive_set: HashSet<(usize, usize)> = split.positives.iter().copied().collect();
    let mut scored: Vec<((usize, usize), f64)> = split
        .positives
        .iter()
        .chain(&split.negatives)
        .map(|&p| (p, similarity(emb, p, metric)))
        .collect();
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));

    let top = split.positives.len().min(scored.len());
    let hits = scored[..top].iter().filter(|(p, _)| positive_set.contains(p)).count();
    let global = if top == 0 { 0.0 } else { hits as f64 / top as f64 };

    // Per-node top-t: each node ranks only its own incident test pairs.
    let mut incident: Vec<Vec<((usize, usize), f64)>> = vec![Vec::new(); emb.rows()];
    for &(pair, s) in &scored {
        incident[pair.0].push((pair, s));
        incident[pair.1].push((pair, s));
    }
    let mut predicted: HashSet<(usize, usize)> = HashSet::new();
    for v in 0..emb.rows() {
        let t = split.per_node_pos[v];
        if t == 0 {
            continue;
        }
        let mut pairs = incident[v].clone();
        pairs.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        for &(pair, _) in pairs.iter().take(t) {
            predicted.insert(pair);
        }
    }
    let per_node = if predicted.is_empty() {
        0.0
    } else {
        predicted.iter().filter(|p| positive_set.contains(p)).count() as f64 / predicted.len() as f64
    };
    LinkPrecision { global, per_node }
}

/// The headline reading: global-top-|E_s'| precision.
pub fn link_precision(emb: &EmbeddingMatrix, split: &LinkPredSplit, metric: Metric) -> f64 {
    link_precision_detailed(emb, split, metric).global
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn check_split_invariants(g: &Graph, split: &LinkPredSplit) {
        assert_eq!(split.negatives.len(), split.positives.len());
        let edge_set: HashSet<(usize, usize)> =
            g.edges().iter().map(|&(u, v, _)| (u, v)).collect();
        let mut neg_count = vec![0usize; g.node_count()];
        for &(u, v) in &split.negatives {
            assert!(!edge_set.contains(&(u.min(v), u.max(v))), "negative ({u},{v}) is an edge");
            assert!(split.in_component[u] && split.in_component[v]);
            neg_count[u] += 1;
            neg_count[v] += 1;
        }
        for v in 0..g.node_count() {
            assert_eq!(neg_count[v], split.per_node_pos[v], "node {v} imbalance");
        }
        for &(u, v, _) in split.train_graph.edges() {
            assert!(split.in_component[u] && split.in_component[v]);
        }
    }

    #[test]
    fn holdout_size_is_ceil_alpha_edges() {
        let g = gen::connect(&gen::erdos_renyi(500, 6.0, 1), 1);
        let m = g.edge_count();
        let split = make_link_split(&g, 0.1, 7).unwrap();
        let expected = (0.1 * m as f64).ceil() as usize;
        // Component filtering can only shrink the positive set.
        assert!(split.positives.len() + split.pruned_positives <= expected);
        assert!(split.positives.len() as f64 >= 0.5 * expected as f64);
        check_split_invariants(&g, &split);
    }

    #[test]
    fn testing_set_is_twice_the_positives() {
        let g = gen::connect(&gen::erdos_renyi(300, 8.0, 2), 2);
        let split = make_link_split(&g, 0.1, 3).unwrap();
        assert_eq!(split.positives.len() + split.negatives.len(), 2 * split.positives.len());
    }

    #[test]
    fn complete_graph_has_no_negatives() {
        let mut edges = Vec::new();
        for a in 0..5usize {
            for b in (a + 1)..5 {
                edges.push((a, b, 1.0));
            }
        }
        let g = Graph::from_edges(5, edges).unwrap();
        assert!(matches!(make_link_split(&g, 0.2, 1), Err(GpaError::Domain(_))));
    }

    #[test]
    fn invalid_alpha_rejected() {
        let g = gen::erdos_renyi(20, 3.0, 1);
        assert!(make_link_split(&g, 0.0, 1).is_err());
        assert!(make_link_split(&g, 1.0, 1).is_err());
    }

    #[test]
    fn split_invariants_hold_across_seeds() {
        let g = gen::connect(&gen::erdos_renyi(200, 6.0, 5), 5);
        for seed in 0..10 {
            let split = make_link_split(&g, 0.1, seed).unwrap();
            check_split_invariants(&g, &split);
        }
    }

    #[test]
    fn perfect_separation_gives_precision_one() {
        let g = gen::connect(&gen::erdos_renyi(100, 6.0, 4), 4);
        let split = make_link_split(&g, 0.1, 9).unwrap();
        // Nodes connected through positives share one point; every other
        // node sits far away in its own direction. Positives then score
        // distance 0 while negatives score > 0.
        let n = g.node_count();
        let mut comp: Vec<usize> = (0..n).collect();
        fn find(comp: &mut Vec<usize>, v: usize) -> usize {
            if comp[v] != v {
                let r = find(comp, comp[v]);
                comp[v] = r;
            }
            comp[v]
        }
        for &(u, v) in &split.positives {
            let (ru, rv) = (find(&mut comp, u), find(&mut comp, v));
            comp[ru] = rv;
        }
        for &(u, v) in &split.negatives {
            assert_ne!(
                find(&mut comp, u),
                find(&mut comp, v),
                "fixture assumption: negatives cross positive components"
            );
        }
        let mut emb = EmbeddingMatrix::zeros(n, 2);
        for v in 0..n {
            let r = find(&mut comp, v);
            emb.row_mut(v)[0] = (r as f64 + 1.0) * 10.0;
            emb.row_mut(v)[1] = (r as f64).sin();
        }
        let p = link_precision_detailed(&emb, &split, Metric::Euclidean);
        assert_eq!(p.global, 1.0);
        assert_eq!(p.per_node, 1.0);
    }

    #[test]
    fn random_embeddings_score_near_half() {
        let g = gen::connect(&gen::erdos_renyi(300, 8.0, 6), 6);
        let mut sum = 0.0;
        let trials = 20;
        for seed in 0..trials {
            let split = make_link_split(&g, 0.1, seed).unwrap();
            let emb = EmbeddingMatrix::random(g.node_count(), 16, seed + 100);
            sum += link_precision(&emb, &split, Metric::Cosine);
        }
        let mean = sum / trials as f64;
        assert!((mean - 0.5).abs() < 0.05, "null-model mean precision {mean}");
    }

    #[test]
    fn precision_is_rotation_invariant() {
        let g = gen::connect(&gen::erdos_renyi(80, 5.0, 8), 8);
        let split = make_link_split(&g, 0.1, 2).unwrap();
        let emb = EmbeddingMatrix::random(g.node_count(), 6, 3);
        // Random rotation from a product of Givens rotations.
        let mut rot = emb.clone();
        let angles = [(0usize, 1usize, 0.7f64), (2, 3, 1.1), (4, 5, -0.4), (1, 4, 2.2)];
        for v in 0..rot.rows() {
            for &(i, j, a) in &angles {
                let (c, s) = (a.cos(), a.sin());
                let row = rot.row_mut(v);
                let (xi, xj) = (row[i], row[j]);
                row[i] = c * xi - s * xj;
                row[j] = s * xi + c * xj;
            }
        }
        for metric in [Metric::Euclidean, Metric::Cosine] {
            let a = link_precision(&emb, &split, metric);
            let b = link_precision(&rot, &split, metric);
            assert!((a - b).abs() < 1e-12, "{metric:?}: {a} vs {b}");
        }
        // Cosine additionally tolerates global scaling.
        let mut scaled = emb.clone();
        for x in scaled.data_mut() {
            *x *= 3.7;
        }
        let a = link_precision(&emb, &split, Metric::Cosine);
        let b = link_precision(&scaled, &split, Metric::Cosine);
        assert!((a - b).abs() < 1e-12);
    }
}
