//! Hyperparameter learning: generate random abstract graphs, score
//! embeddings under a grid of walk hyperparameters, fit a least-squares
//! regression over the hybrid (hyperparameter + graph-statistics) features,
//! and select a configuration for a new abstract graph in a single pass
//! over the grid.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::abstract_graph::AbstractGraph;
use crate::embedding::{euclidean, EmbeddingMatrix};
use crate::error::{GpaError, Result};
use crate::gen;
use crate::graph::Graph;
use crate::skipgram::{embed_abstract, SkipGramParams};
use crate::stats::{compute_stats, GraphStats};
use crate::walk::WalkParams;

pub const FEATURE_COUNT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperCombo {
    pub walks_per_node: usize,
    pub walk_length: usize,
}

impl From<HyperCombo> for WalkParams {
    fn from(h: HyperCombo) -> WalkParams {
        WalkParams { walks_per_node: h.walks_per_node, walk_length: h.walk_length }
    }
}

/// The enumerated hyperparameter grid ℋ.
#[derive(Debug, Clone)]
pub struct HyperGrid {
    pub combos: Vec<HyperCombo>,
}

impl Default for HyperGrid {
    fn default() -> Self {
        HyperGrid::product(&[5, 10, 20, 40, 80], &[10, 20, 40, 80])
    }
}

impl HyperGrid {
    pub fn product(walks: &[usize], lengths: &[usize]) -> Self {
        let combos = walks
            .iter()
            .flat_map(|&w| lengths.iter().map(move |&l| HyperCombo { walks_per_node: w, walk_length: l }))
            .collect();
        HyperGrid { combos }
    }

    pub fn len(&self) -> usize {
        self.combos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.combos.is_empty()
    }
}

/// Generate connected weighted random graphs standing in for abstract
/// graphs: size log-uniform in [50, 2000], Erdős–Rényi or power-law
/// (Chung–Lu) topology per graph, integer Zipf edge weights in [1, 100].
pub fn generate_random_abstract_graphs(count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x47454e47);
    (0..count)
        .map(|i| {
            let t = rng.gen::<f64>();
            let n = (50.0 * (2000.0f64 / 50.0).powf(t)).round() as usize;
            let avg_degree = rng.gen_range(3.0..8.0);
            let gseed = seed.wrapping_add(i as u64).wrapping_mul(0x2545f491);
            let base = if rng.gen_bool(0.5) {
                gen::erdos_renyi(n, avg_degree, gseed)
            } else {
                gen::chung_lu(n, avg_degree, 2.5, gseed)
            };
            gen::zipf_weights(&gen::connect(&base, gseed), 100, gseed)
        })
        .collect()
}

/// Structure-preservation objective on an abstract graph core:
/// Σ over unordered pairs (A_{v,u} − ‖f(v) − f(u)‖)², where A is the edge
/// weight for edges and 0 otherwise. Lower is better.
pub fn score_embedding(core: &Graph, f_a: &EmbeddingMatrix) -> Result<f64> {
    let k = core.node_count();
    if f_a.rows() != k {
        return Err(GpaError::shape(format!("{} embedding rows for {k} nodes", f_a.rows())));
    }
    let mut adj = std::collections::HashMap::new();
    for &(u, v, w) in core.edges() {
        adj.insert((u, v), w);
    }
    let mut score = 0.0;
    for v in 0..k {
        for u in (v + 1)..k {
            let a = adj.get(&(v, u)).copied().unwrap_or(0.0);
            let diff = a - euclidean(f_a.row(v), f_a.row(u));
            score += diff * diff;
        }
    }
    Ok(score)
}

/// The hybrid design matrix X (raw, pre-standardization) with labels Y and
/// the per-column standardization parameters used by [`fit`].
#[derive(Debug, Clone)]
pub struct HybridDataset {
    pub rows: Vec<[f64; FEATURE_COUNT]>,
    pub labels: Vec<f64>,
    pub means: [f64; FEATURE_COUNT],
    pub stds: [f64; FEATURE_COUNT],
}

impl HybridDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn feature_names() -> [&'static str; FEATURE_COUNT] {
        let mut names = ["walks_per_node", "walk_length", "", "", "", "", "", "", "", ""];
        names[2..].copy_from_slice(&GraphStats::FEATURE_NAMES);
        names
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{},score", Self::feature_names().join(","))?;
        for (row, y) in self.rows.iter().zip(&self.labels) {
            let fields: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{},{y}", fields.join(","))?;
        }
        Ok(())
    }
}

pub fn hybrid_row(h: HyperCombo, stats: &GraphStats) -> [f64; FEATURE_COUNT] {
    let mut row = [0.0; FEATURE_COUNT];
    row[0] = h.walks_per_node as f64;
    row[1] = h.walk_length as f64;
    row[2..].copy_from_slice(&stats.feature_vector());
    row
}

fn standardization(rows: &[[f64; FEATURE_COUNT]]) -> ([f64; FEATURE_COUNT], [f64; FEATURE_COUNT]) {
    let n = rows.len().max(1) as f64;
    let mut means = [0.0; FEATURE_COUNT];
    let mut stds = [0.0; FEATURE_COUNT];
    for row in rows {
        for j in 0..FEATURE_COUNT {
            means[j] += row[j];
        }
    }
    for m in &mut means {
        *m /= n;
    }
    for row in rows {
        for j in 0..FEATURE_COUNT {
            let d = row[j] - means[j];
            stds[j] += d * d;
        }
    }
    for s in &mut stds {
        *s = (*s / n).sqrt();
    }
    (means, stds)
}

/// Run the scoring pipeline for every (hyperparameter combo, graph) pair:
/// embed with the combo, score against the graph, and emit one hybrid row.
/// Exactly |ℋ|·|𝒢| rows.
pub fn build_dataset(
    graphs: &[Graph],
    grid: &HyperGrid,
    sp: &SkipGramParams,
    seed: u64,
) -> Result<HybridDataset> {
    if graphs.is_empty() || grid.is_empty() {
        return Err(GpaError::domain("need at least one graph and one hyperparameter combo"));
    }
    let stats: Vec<GraphStats> = graphs.iter().map(compute_stats).collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|hi| (0..graphs.len()).map(move |gi| (hi, gi)))
        .collect();
    let results: Vec<([f64; FEATURE_COUNT], f64)> = jobs
        .par_iter()
        .map(|&(hi, gi)| {
            let h = grid.combos[hi];
            let core = &graphs[gi];
            let ga = AbstractGraph {
                core: core.clone(),
                p: (0..core.node_count()).collect(),
                block_sizes: vec![1; core.node_count()],
            };
            let pair_seed = seed ^ ((hi as u64) << 32) ^ gi as u64;
            let f_a = embed_abstract(&ga, &h.into(), sp, pair_seed)?;
            let y = score_embedding(core, &f_a)?;
            Ok((hybrid_row(h, &stats[gi]), y))
        })
        .collect::<Result<_>>()?;
    let rows: Vec<[f64; FEATURE_COUNT]> = results.iter().map(|&(r, _)| r).collect();
    let labels: Vec<f64> = results.iter().map(|&(_, y)| y).collect();
    let (means, stds) = standardization(&rows);
    Ok(HybridDataset { rows, labels, means, stds })
}

/// Linear model over the hybrid features. Weights apply to z-scored
/// features; inactive (constant) columns carry weight 0.
#[derive(Debug, Clone)]
pub struct RegressionModel {
    pub weights: [f64; FEATURE_COUNT],
    pub bias: f64,
    pub means: [f64; FEATURE_COUNT],
    pub stds: [f64; FEATURE_COUNT],
}

impl RegressionModel {
    pub fn predict_row(&self, raw: &[f64; FEATURE_COUNT]) -> f64 {
        let mut y = self.bias;
        for j in 0..FEATURE_COUNT {
            if self.stds[j] > 0.0 {
                y += self.weights[j] * (raw[j] - self.means[j]) / self.stds[j];
            }
        }
        y
    }

    pub fn mse(&self, ds: &HybridDataset) -> f64 {
        let se: f64 = ds
            .rows
            .iter()
            .zip(&ds.labels)
            .map(|(row, &y)| (self.predict_row(row) - y).powi(2))
            .sum();
        se / ds.len() as f64
    }

    /// Text model file: feature names, means, stds, then weights + bias.
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{}", HybridDataset::feature_names().join(" "))?;
        let join = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(out, "{}", join(&self.means))?;
        writeln!(out, "{}", join(&self.stds))?;
        writeln!(out, "{} {}", join(&self.weights), self.bias)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let reader = BufReader::new(File::open(path)?);
        let lines: Vec<String> = reader.lines().collect::<std::io::Result<_>>()?;
        if lines.len() < 4 {
            return Err(GpaError::Parse { line: lines.len(), msg: "model file needs 4 lines".into() });
        }
        let parse_line = |line: &str, n: usize, what: &str| -> Result<Vec<f64>> {
            let vals: Vec<f64> =
                line.split_whitespace().filter_map(|t| t.parse().ok()).collect();
            if vals.len() != n {
                return Err(GpaError::domain(format!(
                    "model file {what} line has {} values, expected {n}",
                    vals.len()
                )));
            }
            Ok(vals)
        };
        let means = parse_line(&lines[1], FEATURE_COUNT, "means")?;
        let stds = parse_line(&lines[2], FEATURE_COUNT, "stds")?;
        let wb = parse_line(&lines[3], FEATURE_COUNT + 1, "weights")?;
        let mut model = RegressionModel {
            weights: [0.0; FEATURE_COUNT],
            bias: wb[FEATURE_COUNT],
            means: [0.0; FEATURE_COUNT],
            stds: [0.0; FEATURE_COUNT],
        };
        model.weights.copy_from_slice(&wb[..FEATURE_COUNT]);
        model.means.copy_from_slice(&means);
        model.stds.copy_from_slice(&stds);
        Ok(model)
    }
}

/// Fit the least-squares objective by SGD over z-scored features (and an
/// internally z-scored target for step-size stability). Constant feature
/// columns are dropped with a warning.
pub fn fit(ds: &HybridDataset, epochs: usize, lr: f64, seed: u64) -> Result<RegressionModel> {
    let n = ds.len();
    if n < FEATURE_COUNT {
        return Err(GpaError::domain(format!(
            "need at least {FEATURE_COUNT} rows to fit, got {n}"
        )));
    }
    let active: Vec<bool> = (0..FEATURE_COUNT).map(|j| ds.stds[j] > 1e-12).collect();
    for j in 0..FEATURE_COUNT {
        if !active[j] {
            eprintln!(
                "warning: dropping constant feature column {:?}",
                HybridDataset::feature_names()[j]
            );
        }
    }
    let x: Vec<[f64; FEATURE_COUNT]> = ds
        .rows
        .iter()
        .map(|row| {
            let mut z = [0.0; FEATURE_COUNT];
            for j in 0..FEATURE_COUNT {
                if active[j] {
                    z[j] = (row[j] - ds.means[j]) / ds.stds[j];
                }
            }
            z
        })
        .collect();
    let y_mean = ds.labels.iter().sum::<f64>() / n as f64;
    let y_var = ds.labels.iter().map(|&y| (y - y_mean).powi(2)).sum::<f64>() / n as f64;
    let y_std = y_var.sqrt().max(1e-12);
    let y: Vec<f64> = ds.labels.iter().map(|&v| (v - y_mean) / y_std).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x46495421);
    let mut w = [0.0f64; FEATURE_COUNT];
    let mut b = 0.0f64;
    let mut order: Vec<usize> = (0..n).collect();
    let mut prev_mse = f64::INFINITY;
    for epoch in 0..epochs {
        order.shuffle(&mut rng);
        let step = lr / (1.0 + epoch as f64 * 0.01);
        for &i in &order {
            let mut pred = b;
            for j in 0..FEATURE_COUNT {
                pred += w[j] * x[i][j];
            }
            let err = pred - y[i];
            b -= step * err;
            for j in 0..FEATURE_COUNT {
                if active[j] {
                    w[j] -= step * err * x[i][j];
                }
            }
        }
        let mse: f64 = order
            .iter()
            .map(|&i| {
                let mut pred = b;
                for j in 0..FEATURE_COUNT {
                    pred += w[j] * x[i][j];
                }
                (pred - y[i]).powi(2)
            })
            .sum::<f64>()
            / n as f64;
        if mse > prev_mse * 1.5 {
            // Diverging; back off would be needed, but with z-scored data
            // and the default step this does not trigger.
            eprintln!("warning: epoch {epoch} MSE rose from {prev_mse} to {mse}");
        }
        prev_mse = mse;
    }

    let mut weights = [0.0; FEATURE_COUNT];
    for j in 0..FEATURE_COUNT {
        weights[j] = w[j] * y_std;
    }
    let model = RegressionModel {
        weights,
        bias: y_mean + b * y_std,
        means: ds.means,
        stds: {
            let mut s = ds.stds;
            for j in 0..FEATURE_COUNT {
                if !active[j] {
                    s[j] = 0.0;
                }
            }
            s
        },
    };
    Ok(model)
}

/// Mean squared error of always predicting the label mean.
pub fn mean_predictor_mse(ds: &HybridDataset) -> f64 {
    let n = ds.len() as f64;
    let mean = ds.labels.iter().sum::<f64>() / n;
    ds.labels.iter().map(|&y| (y - mean).powi(2)).sum::<f64>() / n
}

/// Pick a combo for a new abstract graph core: compute its statistics once,
/// score every combo with the model in one pass, and return the one with
/// the best predicted objective. The objective is a minimization score, so
/// "best" defaults to lowest; `pick_highest` flips the direction. Ties go
/// to fewer walks, then shorter walks.
pub fn select_hyperparameters(
    model: &RegressionModel,
    core: &Graph,
    grid: &HyperGrid,
    pick_highest: bool,
) -> Result<(HyperCombo, f64)> {
    if grid.is_empty() {
        return Err(GpaError::domain("empty hyperparameter grid"));
    }
    let stats = compute_stats(core)?;
    let mut best: Option<(f64, HyperCombo)> = None;
    for &h in &grid.combos {
        let pred = model.predict_row(&hybrid_row(h, &stats));
        let better = match best {
            None => true,
            Some((bp, bh)) => {
                let improved = if pick_highest { pred > bp } else { pred < bp };
                improved
                    || (pred == bp
                        && (h.walks_per_node, h.walk_length)
                            < (bh.walks_per_node, bh.walk_length))
            }
        };
        if better {
            best = Some((pred, h));
        }
    }
    let (pred, h) = best.unwrap();
    Ok((h, pred))
}
