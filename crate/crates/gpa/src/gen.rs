//! Random graph generators used by the hyperparameter pipeline and the
//! test/evaluation harnesses.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Erdős–Rényi G(n, p) with p chosen to hit the given average degree.
pub fn erdos_renyi(n: usize, avg_degree: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x45525f47);
    let p = (avg_degree / (n.max(2) as f64 - 1.0)).min(1.0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Chung–Lu graph with a power-law expected-degree sequence.
pub fn chung_lu(n: usize, avg_degree: f64, gamma: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x434c5f47);
    let raw: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-1.0 / (gamma - 1.0))).collect();
    let raw_sum: f64 = raw.iter().sum();
    let scale = avg_degree * n as f64 / raw_sum;
    let w: Vec<f64> = raw.iter().map(|&r| r * scale).collect();
    let total: f64 = w.iter().sum();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = (w[u] * w[v] / total).min(1.0);
            if rng.gen::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Planted-partition graph with `blocks` equal-size communities. Returns the
/// graph and the planted block of each node. `intra_degree` / `inter_degree`
/// are per-node expected degrees inside and across communities.
pub fn planted_partition(
    n: usize,
    blocks: usize,
    intra_degree: f64,
    inter_degree: f64,
    seed: u64,
) -> (Graph, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x50505f47);
    let truth: Vec<usize> = (0..n).map(|v| v * blocks / n).collect();
    let block_size = n as f64 / blocks as f64;
    let p_in = (intra_degree / (block_size - 1.0).max(1.0)).min(1.0);
    let p_out = (inter_degree / (n as f64 - block_size).max(1.0)).min(1.0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if truth[u] == truth[v] { p_in } else { p_out };
            if rng.gen::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    (Graph::from_edges(n, edges).unwrap(), truth)
}

/// Add unit-weight bridge edges between components until the graph is
/// connected.
pub fn connect(g: &Graph, seed: u64) -> Graph {
    let comp = g.components();
    let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);
    if ncomp <= 1 {
        return g.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x434f4e4e);
    let mut reps: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for (v, &c) in comp.iter().enumerate() {
        reps[c].push(v);
    }
    let mut edges: Vec<(usize, usize, f64)> = g.edges().to_vec();
    for c in 1..ncomp {
        let u = reps[c - 1][rng.gen_range(0..reps[c - 1].len())];
        let v = reps[c][rng.gen_range(0..reps[c].len())];
        edges.push((u, v, 1.0));
    }
    Graph::from_edges(g.node_count(), edges).unwrap()
}

/// Replace all edge weights with integer weights Zipf-distributed in
/// `[1, max_weight]` (P(w) ∝ 1/w).
pub fn zipf_weights(g: &Graph, max_weight: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a495046);
    let harmonic: Vec<f64> = (1..=max_weight)
        .scan(0.0, |acc, w| {
            *acc += 1.0 / w as f64;
            Some(*acc)
        })
        .collect();
    let total = *harmonic.last().unwrap();
    let draw = |rng: &mut ChaCha8Rng| {
        let x = rng.gen::<f64>() * total;
        (harmonic.partition_point(|&h| h < x) + 1).min(max_weight) as f64
    };
    let edges: Vec<(usize, usize, f64)> =
        g.edges().iter().map(|&(u, v, _)| (u, v, draw(&mut rng))).collect();
    Graph::from_edges(g.node_count(), edges).unwrap()
}

/// Fraction of nodes on which `assignment` agrees with `truth` under the
/// best matching of block labels. Exact for k ≤ 8, greedy beyond.
pub fn best_block_agreement(assignment: &[usize], truth: &[usize], k: usize) -> f64 {
    let n = assignment.len();
    let mut overlap = vec![vec![0usize; k]; k];
    for v in 0..n {
        overlap[assignment[v]][truth[v]] += 1;
    }
    let matched = if k <= 8 {
        let mut perm: Vec<usize> = (0..k).collect();
        let mut best = 0usize;
        permute(&mut perm, 0, &mut |p| {
            let score: usize = (0..k).map(|a| overlap[a][p[a]]).sum();
            if score > best {
                best = score;
            }
        });
        best
    } else {
        let mut used = vec![false; k];
        let mut total = 0usize;
        let mut rows: Vec<usize> = (0..k).collect();
        rows.sort_by_key(|&a| std::cmp::Reverse(*overlap[a].iter().max().unwrap_or(&0)));
        for a in rows {
            if let Some(t) = (0..k)
                .filter(|&t| !used[t])
                .max_by_key(|&t| overlap[a][t])
            {
                used[t] = true;
                total += overlap[a][t];
            }
        }
        total
    };
    matched as f64 / n as f64
}

fn permute(perm: &mut Vec<usize>, i: usize, visit: &mut impl FnMut(&[usize])) {
    if i == perm.len() {
        visit(perm);
        return;
    }
    for j in i..perm.len() {
        perm.swap(i, j);
        permute(perm, i + 1, visit);
        perm.swap(i, j);
    }
}

/// A seeded shuffle of `0..n`, for split generation.
pub fn shuffled_indices(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx
}
