//! Comparison harness: run a downstream task under different embedding
//! initializations across seeds and report aggregate metrics with timing.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use crate::embedding::EmbeddingMatrix;
use crate::error::{GpaError, Result};
use crate::eval::classify::{f1_scores, make_classification_split, train_ovr_logreg};
use crate::eval::linkpred::{link_precision_detailed, make_link_split, Metric};
use crate::graph::{Graph, LabelSet};
use crate::propagate::{init_for_graph, PropagationConfig};
use crate::skipgram::{train_skipgram, SkipGramParams};
use crate::walk::{generate_walks, WalkParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitMode {
    Gpa,
    Random,
}

impl std::str::FromStr for InitMode {
    type Err = GpaError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gpa" => Ok(InitMode::Gpa),
            "random" => Ok(InitMode::Random),
            other => Err(GpaError::domain(format!("unknown init mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Link,
    Classify,
}

/// One seed's outcome for one init mode.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub seed: u64,
    /// Link: (global precision, per-node precision). Classify: (micro, macro).
    pub metrics: (f64, f64),
    pub init_secs: f64,
    pub total_secs: f64,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub task: Task,
    pub runs: Vec<(InitMode, RunResult)>,
}

fn mean_std(vals: &[f64]) -> (f64, f64) {
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Build the initial embedding for a mode, returning it with the wall
/// clock spent on initialization.
pub fn build_init(
    g: &Graph,
    mode: InitMode,
    k: Option<usize>,
    epsilon: f64,
    wp: &WalkParams,
    sp: &SkipGramParams,
    seed: u64,
) -> Result<(EmbeddingMatrix, f64)> {
    let t = Instant::now();
    let emb = match mode {
        InitMode::Random => EmbeddingMatrix::random(g.node_count(), sp.dim, seed ^ 0x524e4431),
        InitMode::Gpa => {
            let cfg = PropagationConfig::for_graph(g);
            init_for_graph(g, k, epsilon, &cfg, wp, sp, seed)?
        }
    };
    Ok((emb, t.elapsed().as_secs_f64()))
}

/// Full pipeline for one seed: initialize, run weighted walks + skip-gram
/// on the target graph, return the trained embedding with timings.
pub fn embed_with_init(
    g: &Graph,
    mode: InitMode,
    k: Option<usize>,
    epsilon: f64,
    wp: &WalkParams,
    sp: &SkipGramParams,
    seed: u64,
) -> Result<(EmbeddingMatrix, f64, f64)> {
    let t = Instant::now();
    let (init, init_secs) = build_init(g, mode, k, epsilon, wp, sp, seed)?;
    let corpus = generate_walks(g, wp, seed ^ 0x57414c4b)?;
    let emb = train_skipgram(&corpus, g.node_count(), sp, Some(&init), seed ^ 0x53474d54)?;
    Ok((emb, init_secs, t.elapsed().as_secs_f64()))
}

#[allow(clippy::too_many_arguments)]
pub fn run_comparison(
    g: &Graph,
    labels: Option<&LabelSet>,
    task: Task,
    modes: &[InitMode],
    seeds: &[u64],
    k: Option<usize>,
    epsilon: f64,
    wp: &WalkParams,
    sp: &SkipGramParams,
    alpha: f64,
    metric: Metric,
) -> Result<ComparisonReport> {
    if seeds.is_empty() {
        return Err(GpaError::domain("need at least one seed"));
    }
    if task == Task::Classify && labels.is_none() {
        return Err(GpaError::domain("classification task requires a label file"));
    }
    let mut runs = Vec::new();
    for &seed in seeds {
        // Link prediction holds edges out first so both inits train on the
        // same residual graph.
        let split = if task == Task::Link { Some(make_link_split(g, alpha, seed)?) } else { None };
        let train_graph = split.as_ref().map(|s| &s.train_graph).unwrap_or(g);
        for &mode in modes {
            let (emb, init_secs, total_secs) =
                embed_with_init(train_graph, mode, k, epsilon, wp, sp, seed)?;
            let metrics = match task {
                Task::Link => {
                    let s = split.as_ref().unwrap();
                    let p = link_precision_detailed(&emb, s, metric);
                    (p.global, p.per_node)
                }
                Task::Classify => {
                    let labels = labels.unwrap();
                    let csplit = make_classification_split(labels, seed);
                    let model =
                        train_ovr_logreg(&emb, labels, &csplit, 1.0, 30, 0.05, seed)?;
                    let pred = model.predict_split(&emb, labels, &csplit.test_nodes);
                    let truth: Vec<Vec<usize>> = csplit
                        .test_nodes
                        .iter()
                        .map(|&v| labels.labels[v].clone())
                        .collect();
                    f1_scores(&pred, &truth, labels.label_count)
                }
            };
            runs.push((mode, RunResult { seed, metrics, init_secs, total_secs }));
        }
    }
    Ok(ComparisonReport { task, runs })
}

impl ComparisonReport {
    fn metric_names(&self) -> (&'static str, &'static str) {
        match self.task {
            Task::Link => ("precision_global", "precision_per_node"),
            Task::Classify => ("micro_f1", "macro_f1"),
        }
    }

    fn modes(&self) -> Vec<InitMode> {
        let mut out = Vec::new();
        for &(m, _) in &self.runs {
            if !out.contains(&m) {
                out.push(m);
            }
        }
        out
    }

    fn rows_for(&self, mode: InitMode) -> Vec<&RunResult> {
        self.runs.iter().filter(|(m, _)| *m == mode).map(|(_, r)| r).collect()
    }

    /// Per-mode (mean, std) of the first and second metric plus timing means.
    pub fn summary(&self, mode: InitMode) -> Option<((f64, f64), (f64, f64), f64, f64)> {
        let rows = self.rows_for(mode);
        if rows.is_empty() {
            return None;
        }
        let m1: Vec<f64> = rows.iter().map(|r| r.metrics.0).collect();
        let m2: Vec<f64> = rows.iter().map(|r| r.metrics.1).collect();
        let init = rows.iter().map(|r| r.init_secs).sum::<f64>() / rows.len() as f64;
        let total = rows.iter().map(|r| r.total_secs).sum::<f64>() / rows.len() as f64;
        Some((mean_std(&m1), mean_std(&m2), init, total))
    }

    pub fn text_table(&self) -> String {
        let (n1, n2) = self.metric_names();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<8} {:>7} {:>20} {:>20} {:>10} {:>10}",
            "init", "seeds", n1, n2, "init_s", "total_s"
        );
        for mode in self.modes() {
            let rows = self.rows_for(mode);
            let ((a, sa), (b, sb), ti, tt) = self.summary(mode).unwrap();
            let name = match mode {
                InitMode::Gpa => "gpa",
                InitMode::Random => "random",
            };
            let _ = writeln!(
                out,
                "{:<8} {:>7} {:>12.4}±{:<7.4} {:>12.4}±{:<7.4} {:>10.2} {:>10.2}",
                name,
                rows.len(),
                a,
                sa,
                b,
                sb,
                ti,
                tt
            );
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let (n1, n2) = self.metric_names();
        let mut out = format!("init,seed,{n1},{n2},init_secs,total_secs\n");
        for (mode, r) in &self.runs {
            let name = match mode {
                InitMode::Gpa => "gpa",
                InitMode::Random => "random",
            };
            let _ = writeln!(
                out,
                "{name},{},{},{},{},{}",
                r.seed, r.metrics.0, r.metrics.1, r.init_secs, r.total_secs
            );
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}
