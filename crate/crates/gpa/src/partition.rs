//! Balanced k-way graph partitioning by a multilevel scheme: heavy-edge
//! matching coarsening, recursive greedy graph-growing bisection on the
//! coarsest graph, and boundary FM refinement with balance-respecting moves
//! during uncoarsening.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GpaError, Result};
use crate::graph::Graph;

/// A (k, ε)-balanced assignment of nodes to blocks.
#[derive(Debug, Clone)]
pub struct Partitioning {
    pub assignment: Vec<usize>,
    pub k: usize,
    pub epsilon: f64,
}

impl Partitioning {
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &b in &self.assignment {
            sizes[b] += 1;
        }
        sizes
    }

    /// Largest block size allowed by the balance constraint:
    /// (1+ε)·⌈|V|/k⌉, floored to an integer count.
    pub fn size_cap(node_count: usize, k: usize, epsilon: f64) -> usize {
        let target = (node_count as f64 / k as f64).ceil();
        ((1.0 + epsilon) * target).floor() as usize
    }

    pub fn is_balanced(&self) -> bool {
        let cap = Self::size_cap(self.assignment.len(), self.k, self.epsilon);
        self.block_sizes().into_iter().max().unwrap_or(0) <= cap
    }

    /// One line per node: `node_id block_id`, using the graph's original
    /// node names.
    pub fn write(&self, g: &Graph, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        for (v, &b) in self.assignment.iter().enumerate() {
            writeln!(out, "{} {}", g.name(v), b)?;
        }
        Ok(())
    }
}

/// Default block count ⌈√|V|⌉, clamped to the node count.
pub fn default_k(g: &Graph) -> usize {
    let n = g.node_count();
    ((n as f64).sqrt().ceil() as usize).clamp(1, n.max(1))
}

/// Number of edges whose endpoints lie in different blocks.
pub fn edge_cut(g: &Graph, p: &Partitioning) -> usize {
    g.edges().iter().filter(|&&(u, v, _)| p.assignment[u] != p.assignment[v]).count()
}

/// Uniformly random balanced assignment; the quality baseline.
pub fn random_balanced(g: &Graph, k: usize, seed: u64) -> Partitioning {
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut assignment = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        assignment[v] = i % k;
    }
    Partitioning { assignment, k, epsilon: 0.05 }
}

/// Compute a (k, ε)-balanced partitioning of `g` minimizing edge cut.
/// Deterministic for a fixed seed.
pub fn partition(g: &Graph, k: usize, epsilon: f64, seed: u64) -> Result<Partitioning> {
    let n = g.node_count();
    if n == 0 {
        return Err(GpaError::domain("cannot partition an empty graph"));
    }
    if k == 0 || k > n {
        return Err(GpaError::domain(format!("block count k={k} must satisfy 1 <= k <= {n}")));
    }
    if epsilon <= 0.0 || epsilon >= 1.0 {
        return Err(GpaError::domain(format!("epsilon {epsilon} must lie in (0, 1)")));
    }
    if k == 1 {
        return Ok(Partitioning { assignment: vec![0; n], k, epsilon });
    }
    if k == n {
        return Ok(Partitioning { assignment: (0..n).collect(), k, epsilon });
    }
    let cap = Partitioning::size_cap(n, k, epsilon);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Isolated nodes carry no cut; keep them out of the multilevel scheme
    // and fill the lightest blocks with them afterwards.
    let active: Vec<usize> = (0..n).filter(|&v| g.degree(v) > 0).collect();
    let mut assignment = vec![usize::MAX; n];

    if !active.is_empty() {
        let mut dense = vec![usize::MAX; n];
        for (i, &v) in active.iter().enumerate() {
            dense[v] = i;
        }
        let mut adj = vec![Vec::new(); active.len()];
        for &(u, v, w) in g.edges() {
            let (du, dv) = (dense[u], dense[v]);
            adj[du].push((dv, w));
            adj[dv].push((du, w));
        }
        let level = Level { adj, vwgt: vec![1; active.len()] };
        let sub = multilevel(level, k, cap, &mut rng);
        for (i, &v) in active.iter().enumerate() {
            assignment[v] = sub[i];
        }
    }

    // Round-robin isolated nodes into the lightest blocks.
    let mut sizes = vec![0usize; k];
    for &b in assignment.iter().filter(|&&b| b != usize::MAX) {
        sizes[b] += 1;
    }
    for v in 0..n {
        if assignment[v] == usize::MAX {
            let b = (0..k).min_by_key(|&b| (sizes[b], b)).unwrap();
            assignment[v] = b;
            sizes[b] += 1;
        }
    }
    let p = Partitioning { assignment, k, epsilon };
    debug_assert!(p.is_balanced());
    Ok(p)
}

struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    vwgt: Vec<usize>,
}

impl Level {
    fn len(&self) -> usize {
        self.adj.len()
    }
}

fn multilevel(finest: Level, k: usize, cap: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let coarsen_target = (2 * k).max(200);
    let max_vwgt = ((finest.len() / (3 * k)).max(1)).max(2);

    let mut levels = vec![finest];
    let mut maps: Vec<Vec<usize>> = Vec::new();
    while levels.last().unwrap().len() > coarsen_target {
        let (coarse, map) = coarsen(levels.last().unwrap(), max_vwgt, rng);
        if coarse.len() as f64 > 0.95 * levels.last().unwrap().len() as f64 {
            break;
        }
        levels.push(coarse);
        maps.push(map);
    }

    let coarsest = levels.last().unwrap();
    let mut part = initial_partition(coarsest, k, rng);
    refine(coarsest, &mut part, k, cap, levels.len() == 1);

    for li in (0..maps.len()).rev() {
        let fine = &levels[li];
        let map = &maps[li];
        let mut fine_part = vec![0usize; fine.len()];
        for v in 0..fine.len() {
            fine_part[v] = part[map[v]];
        }
        part = fine_part;
        refine(fine, &mut part, k, cap, li == 0);
    }
    part
}

/// Heavy-edge matching: each unmatched node pairs with its unmatched
/// neighbor of maximum edge weight, subject to the merged-weight cap.
fn coarsen(level: &Level, max_vwgt: usize, rng: &mut ChaCha8Rng) -> (Level, Vec<usize>) {
    let n = level.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut mate = vec![usize::MAX; n];
    for &u in &order {
        if mate[u] != usize::MAX {
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for &(v, w) in &level.adj[u] {
            if mate[v] != usize::MAX || level.vwgt[u] + level.vwgt[v] > max_vwgt {
                continue;
            }
            let better = match best {
                None => true,
                Some((bw, bv)) => w > bw || (w == bw && v < bv),
            };
            if better {
                best = Some((w, v));
            }
        }
        match best {
            Some((_, v)) => {
                mate[u] = v;
                mate[v] = u;
            }
            None => mate[u] = u,
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut next = 0usize;
    for v in 0..n {
        if map[v] != usize::MAX {
            continue;
        }
        map[v] = next;
        let m = mate[v];
        if m != v && m != usize::MAX {
            map[m] = next;
        }
        next += 1;
    }

    let mut vwgt = vec![0usize; next];
    for v in 0..n {
        vwgt[map[v]] += level.vwgt[v];
    }
    let mut rows: Vec<HashMap<usize, f64>> = vec![HashMap::new(); next];
    for u in 0..n {
        let cu = map[u];
        for &(v, w) in &level.adj[u] {
            let cv = map[v];
            if cu < cv {
                *rows[cu].entry(cv).or_insert(0.0) += w;
            }
        }
    }
    let mut adj = vec![Vec::new(); next];
    for (cu, row) in rows.into_iter().enumerate() {
        let mut entries: Vec<(usize, f64)> = row.into_iter().collect();
        entries.sort_unstable_by_key(|&(cv, _)| cv);
        for (cv, w) in entries {
            adj[cu].push((cv, w));
            adj[cv].push((cu, w));
        }
    }
    (Level { adj, vwgt }, map)
}

/// Recursive bisection by greedy graph growing from a few random seeds.
fn initial_partition(level: &Level, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut part = vec![0usize; level.len()];
    let nodes: Vec<usize> = (0..level.len()).collect();
    bisect_recursive(level, &nodes, k, 0, &mut part, rng);
    part
}

fn bisect_recursive(
    level: &Level,
    nodes: &[usize],
    k: usize,
    first_block: usize,
    part: &mut [usize],
    rng: &mut ChaCha8Rng,
) {
    if k == 1 {
        for &v in nodes {
            part[v] = first_block;
        }
        return;
    }
    let kl = k.div_ceil(2);
    let kr = k - kl;
    let total: usize = nodes.iter().map(|&v| level.vwgt[v]).sum();
    let target_left = total as f64 * kl as f64 / k as f64;

    let mut in_set = vec![false; level.len()];
    for &v in nodes {
        in_set[v] = true;
    }

    let tries = 4.min(nodes.len());
    let mut best: Option<(f64, Vec<bool>)> = None;
    for _ in 0..tries {
        let seed_node = nodes[rng.gen_range(0..nodes.len())];
        let region = grow_region(level, nodes, &in_set, seed_node, target_left);
        let cut = region_cut(level, nodes, &region);
        if best.as_ref().is_none_or(|(bc, _)| cut < *bc) {
            best = Some((cut, region));
        }
    }
    let (_, region) = best.unwrap();

    let left: Vec<usize> = nodes.iter().copied().filter(|&v| region[v]).collect();
    let right: Vec<usize> = nodes.iter().copied().filter(|&v| !region[v]).collect();
    bisect_recursive(level, &left, kl, first_block, part, rng);
    bisect_recursive(level, &right, kr, first_block + kl, part, rng);
}

fn grow_region(
    level: &Level,
    nodes: &[usize],
    in_set: &[bool],
    seed: usize,
    target: f64,
) -> Vec<bool> {
    let mut region = vec![false; level.len()];
    let mut conn: HashMap<usize, f64> = HashMap::new();
    let mut weight = 0usize;
    let mut current = seed;
    loop {
        region[current] = true;
        weight += level.vwgt[current];
        conn.remove(&current);
        if (weight as f64) >= target {
            break;
        }
        for &(v, w) in &level.adj[current] {
            if in_set[v] && !region[v] {
                *conn.entry(v).or_insert(0.0) += w;
            }
        }
        // Frontier node with the strongest connection to the region,
        // smallest id on ties; fall back to any unassigned node when the
        // frontier is empty (disconnected remainder).
        match conn
            .iter()
            .map(|(&v, &w)| (v, w))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(b.0.cmp(&a.0)))
        {
            Some((v, _)) => current = v,
            None => match nodes.iter().copied().find(|&v| !region[v]) {
                Some(v) => current = v,
                None => break,
            },
        }
    }
    region
}

fn region_cut(level: &Level, nodes: &[usize], region: &[bool]) -> f64 {
    let mut cut = 0.0;
    for &u in nodes {
        if !region[u] {
            continue;
        }
        for &(v, w) in &level.adj[u] {
            if !region[v] {
                cut += w;
            }
        }
    }
    cut
}

/// Greedy local-move refinement: repair balance first, then boundary moves
/// with positive cut gain that keep every block under the cap.
fn refine(level: &Level, part: &mut [usize], k: usize, cap: usize, strict: bool) {
    let n = level.len();
    let mut weights = vec![0usize; k];
    for v in 0..n {
        weights[part[v]] += level.vwgt[v];
    }

    balance_repair(level, part, k, cap, &mut weights, strict);

    for _pass in 0..8 {
        let mut moved = false;
        for v in 0..n {
            let b = part[v];
            let mut conn = vec![0.0f64; k];
            let mut boundary = false;
            for &(u, w) in &level.adj[v] {
                conn[part[u]] += w;
                if part[u] != b {
                    boundary = true;
                }
            }
            if !boundary {
                continue;
            }
            let mut best: Option<(f64, usize)> = None;
            for c in 0..k {
                if c == b || weights[c] + level.vwgt[v] > cap {
                    continue;
                }
                let gain = conn[c] - conn[b];
                if gain > 1e-12 && best.as_ref().is_none_or(|&(bg, _)| gain > bg) {
                    best = Some((gain, c));
                }
            }
            if let Some((_, c)) = best {
                weights[b] -= level.vwgt[v];
                weights[c] += level.vwgt[v];
                part[v] = c;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
}

/// Move nodes out of overweight blocks. With unit node weights (`strict`,
/// the finest level) this always terminates with every block under the cap;
/// at coarse levels it gives up after a bounded number of moves.
fn balance_repair(
    level: &Level,
    part: &mut [usize],
    k: usize,
    cap: usize,
    weights: &mut [usize],
    strict: bool,
) {
    let mut budget = if strict { usize::MAX } else { 4 * level.len() };
    loop {
        let Some(b) = (0..k).filter(|&b| weights[b] > cap).max_by_key(|&b| weights[b]) else {
            break;
        };
        if budget == 0 {
            break;
        }
        budget = budget.saturating_sub(1);
        // Cheapest eviction: the member whose move loses the least cut.
        let mut best: Option<(f64, usize, usize)> = None;
        for v in 0..level.len() {
            if part[v] != b {
                continue;
            }
            let mut conn = vec![0.0f64; k];
            for &(u, w) in &level.adj[v] {
                conn[part[u]] += w;
            }
            for c in 0..k {
                if c == b || weights[c] + level.vwgt[v] > cap {
                    continue;
                }
                let gain = conn[c] - conn[b];
                let better = match best {
                    None => true,
                    Some((bg, bv, _)) => gain > bg || (gain == bg && v < bv),
                };
                if better {
                    best = Some((gain, v, c));
                }
            }
        }
        match best {
            Some((_, v, c)) => {
                weights[b] -= level.vwgt[v];
                weights[c] += level.vwgt[v];
                part[v] = c;
            }
            None => break,
        }
    }
}
