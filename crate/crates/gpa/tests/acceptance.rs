//! End-to-end acceptance checks, one test per criterion. Each prints a
//! single pass line with the measured quantities.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gpa::abstract_graph::build_abstract;
use gpa::alias::AliasTable;
use gpa::embedding::EmbeddingMatrix;
use gpa::eval::classify::{f1_scores, make_classification_split, train_ovr_logreg};
use gpa::eval::linkpred::{link_precision, make_link_split, Metric};
use gpa::eval::report::{build_init, embed_with_init, InitMode};
use gpa::gen;
use gpa::graph::{Graph, LabelSet};
use gpa::hyperopt::{
    self, build_dataset, fit, hybrid_row, mean_predictor_mse, select_hyperparameters, HyperGrid,
};
use gpa::partition::{self, edge_cut, random_balanced, Partitioning};
use gpa::propagate::{propagate, PropagationConfig};
use gpa::skipgram::{batch_gradients, batch_loss, SkipGramParams, TrainingPair};
use gpa::stats::compute_stats;
use gpa::walk::WalkParams;

#[test]
fn criterion_1_alias_sampler_correctness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11A5);
    let mut max_exact_err = 0.0f64;
    for trial in 0..100 {
        let n = rng.gen_range(1..=64);
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let table = AliasTable::build(&probs).unwrap();
        for (i, &p) in probs.iter().enumerate() {
            let err = (table.implied_probability(i) - p).abs();
            max_exact_err = max_exact_err.max(err);
            assert!(err <= 1e-9, "trial {trial} element {i}: implied error {err}");
        }
    }
    let probs = [0.35, 0.25, 0.2, 0.12, 0.05, 0.03];
    let table = AliasTable::build(&probs).unwrap();
    let draws = 1_000_000usize;
    let mut counts = vec![0usize; probs.len()];
    for _ in 0..draws {
        counts[table.sample(&mut rng)] += 1;
    }
    let tv: f64 = probs
        .iter()
        .enumerate()
        .map(|(i, &p)| (counts[i] as f64 / draws as f64 - p).abs())
        .sum::<f64>()
        / 2.0;
    assert!(tv < 0.005, "total-variation distance {tv}");
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 10.0, "took {secs:.1} s");
    println!(
        "PASS criterion 1: 100 distributions exact to {max_exact_err:.2e} (<=1e-9), \
         TV over 1e6 draws {tv:.5} (<0.005), {secs:.1} s"
    );
}

#[test]
fn criterion_2_partition_validity() {
    let mut wins = 0usize;
    let total = 50usize;
    for trial in 0..total as u64 {
        let n = 60 + (trial as usize * 97) % 2941;
        let avg_deg = 3.0 + (trial % 5) as f64;
        let g = gen::connect(&gen::erdos_renyi(n, avg_deg, trial), trial);
        let k = partition::default_k(&g);
        let p = partition::partition(&g, k, 0.05, trial).unwrap();
        assert_eq!(p.k, k);
        assert!(p.is_balanced(), "trial {trial}: n={n} k={k} unbalanced");
        let cut = edge_cut(&g, &p);
        let rand_cut = edge_cut(&g, &random_balanced(&g, k, trial));
        if cut <= rand_cut {
            wins += 1;
        }
    }
    assert!(wins * 100 >= total * 95, "beat random on only {wins}/{total}");
    println!(
        "PASS criterion 2: 50/50 partitions balanced at k=ceil(sqrt(n)), \
         cut <= random on {wins}/{total} (>=48)"
    );
}

fn figure_example() -> (Graph, Partitioning) {
    // 12 nodes in 4 blocks of 3; 11 intra edges, 5 cross edges. Blocks 3
    // and 0 share two cross edges, every other adjacent block pair one.
    let edges = [
        (0, 1, 1.0),
        (1, 2, 1.0),
        (0, 2, 1.0),
        (3, 4, 1.0),
        (4, 5, 1.0),
        (3, 5, 1.0),
        (6, 7, 1.0),
        (7, 8, 1.0),
        (6, 8, 1.0),
        (9, 10, 1.0),
        (10, 11, 1.0),
        (0, 9, 1.0),
        (2, 11, 1.0),
        (1, 3, 1.0),
        (5, 6, 1.0),
        (8, 9, 1.0),
    ];
    let g = Graph::from_edges(12, edges).unwrap();
    let assignment = vec![0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3];
    (g, Partitioning { assignment, k: 4, epsilon: 0.05 })
}

#[test]
fn criterion_3_abstract_graph_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAB5);
    for trial in 0..200u64 {
        let n = rng.gen_range(4..=50);
        let g = gen::erdos_renyi(n, rng.gen_range(2.0..6.0), trial);
        let k = rng.gen_range(2..=n.min(8));
        let assignment: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let p = Partitioning { assignment: assignment.clone(), k, epsilon: 1e9 };
        let ga = build_abstract(&g, &p).unwrap();
        // Brute-force cross-block counts.
        let mut counts = std::collections::HashMap::new();
        for &(u, v, _) in g.edges() {
            let (a, b) = (assignment[u].min(assignment[v]), assignment[u].max(assignment[v]));
            if a != b {
                *counts.entry((a, b)).or_insert(0usize) += 1;
            }
        }
        assert_eq!(ga.core.edge_count(), counts.len(), "trial {trial}");
        for &(a, b, w) in ga.core.edges() {
            assert_eq!(w, counts[&(a, b)] as f64, "trial {trial} edge ({a},{b})");
        }
        let total: f64 = ga.core.edges().iter().map(|&(_, _, w)| w).sum();
        assert_eq!(total, edge_cut(&g, &p) as f64, "trial {trial}");
    }
    let (g, p) = figure_example();
    assert_eq!(g.edge_count(), 16);
    let ga = build_abstract(&g, &p).unwrap();
    let w03 = ga
        .core
        .edges()
        .iter()
        .find(|&&(a, b, _)| (a, b) == (0, 3))
        .map(|&(_, _, w)| w)
        .unwrap();
    assert_eq!(w03, 2.0, "two-cross-edge block pair must get weight 2");
    println!(
        "PASS criterion 3: 200 random abstract graphs match brute force and sum to the cut; \
         12-node example block pair has weight {w03}"
    );
}

#[test]
fn criterion_4_propagation() {
    // Hand-traced two-node path: f = (0), (2) -> both (1), delta = 1.
    let g = Graph::from_edges(2, [(0, 1, 1.0)]).unwrap();
    let p = Partitioning { assignment: vec![0, 1], k: 2, epsilon: 0.05 };
    let ga = build_abstract(&g, &p).unwrap();
    let f_a = EmbeddingMatrix::from_rows(vec![vec![0.0], vec![2.0]]).unwrap();
    let cfg = PropagationConfig { delta: 1e-9, max_iters: 5 };
    let (out, trace) = propagate(&g, &ga, &f_a, &cfg).unwrap();
    assert_eq!(trace.deltas[0], 1.0);
    assert_eq!(out.row(0), &[1.0]);
    assert_eq!(out.row(1), &[1.0]);

    // Constant input is a fixed point: delta exactly 0 in one iteration.
    let g = gen::connect(&gen::erdos_renyi(30, 4.0, 1), 1);
    let p = Partitioning { assignment: vec![0; 30], k: 1, epsilon: 0.05 };
    let ga = build_abstract(&g, &p).unwrap();
    let f_a = EmbeddingMatrix::from_rows(vec![vec![0.25, -0.5]]).unwrap();
    let (_, trace) = propagate(&g, &ga, &f_a, &cfg).unwrap();
    assert_eq!(trace.deltas, vec![0.0]);

    // Convergence at delta = 1/|V| within 100 iterations, 20 graphs.
    let mut max_iters_seen = 0usize;
    for trial in 0..20u64 {
        let n = 200 + (trial as usize * 491) % 9801;
        let g = gen::connect(&gen::erdos_renyi(n, 5.0, trial), trial);
        let k = partition::default_k(&g);
        let p = partition::partition(&g, k, 0.05, trial).unwrap();
        let ga = build_abstract(&g, &p).unwrap();
        let f_a = EmbeddingMatrix::random(k, 8, trial ^ 0xF0);
        let cfg = PropagationConfig::for_graph(&g);
        let (_, trace) = propagate(&g, &ga, &f_a, &cfg).unwrap();
        assert!(
            trace.converged(cfg.delta),
            "trial {trial}: n={n} did not reach delta {} in {} iters",
            cfg.delta,
            cfg.max_iters
        );
        max_iters_seen = max_iters_seen.max(trace.iterations());
        let degree_sum: usize = (0..n).map(|v| g.degree(v)).sum();
        assert!(trace.neighbor_visits.iter().all(|&c| c == degree_sum as u64));
    }
    println!(
        "PASS criterion 4: hand trace exact, constant fixed point delta 0, \
         20 graphs up to ~10000 nodes converged (max {max_iters_seen} iters), \
         visits = degree sum"
    );
}

#[test]
fn criterion_5_skipgram_gradient_check() {
    let d = 8;
    let mut input = EmbeddingMatrix::random(7, d, 51);
    let mut output = EmbeddingMatrix::random(7, d, 52);
    let batch: Vec<TrainingPair> = (0..12)
        .map(|i| TrainingPair {
            center: i % 7,
            context: (i + 2) % 7,
            negatives: vec![(i + 3) % 7, (i + 5) % 7, (i + 6) % 7],
        })
        .collect();
    let (gin, gout) = batch_gradients(&input, &output, &batch);
    let h = 1e-5;
    let mut max_rel = 0.0f64;
    for idx in 0..input.data().len() {
        let orig = input.data()[idx];
        input.data_mut()[idx] = orig + h;
        let lp = batch_loss(&input, &output, &batch);
        input.data_mut()[idx] = orig - h;
        let lm = batch_loss(&input, &output, &batch);
        input.data_mut()[idx] = orig;
        let num = (lp - lm) / (2.0 * h);
        let ana = gin.data()[idx];
        max_rel = max_rel.max((num - ana).abs() / num.abs().max(ana.abs()).max(1e-8));
    }
    for idx in 0..output.data().len() {
        let orig = output.data()[idx];
        output.data_mut()[idx] = orig + h;
        let lp = batch_loss(&input, &output, &batch);
        output.data_mut()[idx] = orig - h;
        let lm = batch_loss(&input, &output, &batch);
        output.data_mut()[idx] = orig;
        let num = (lp - lm) / (2.0 * h);
        let ana = gout.data()[idx];
        max_rel = max_rel.max((num - ana).abs() / num.abs().max(ana.abs()).max(1e-8));
    }
    assert!(max_rel < 1e-4, "max relative error {max_rel}");
    println!("PASS criterion 5: gradient check d=8, max relative error {max_rel:.2e} (<1e-4)");
}

/// Ordinary least squares on the z-scored active columns, solved by
/// Gaussian elimination with partial pivoting. Independent of the SGD fit.
fn normal_equations_mse(ds: &hyperopt::HybridDataset) -> f64 {
    let (means, stds) = (ds.means, ds.stds);
    let active: Vec<usize> = (0..hyperopt::FEATURE_COUNT).filter(|&j| stds[j] > 0.0).collect();
    let p = active.len() + 1;
    let n = ds.rows.len();
    let x_row = |i: usize| -> Vec<f64> {
        let mut r: Vec<f64> =
            active.iter().map(|&j| (ds.rows[i][j] - means[j]) / stds[j]).collect();
        r.push(1.0);
        r
    };
    let mut ata = vec![vec![0.0f64; p]; p];
    let mut atb = vec![0.0f64; p];
    for i in 0..n {
        let x = x_row(i);
        for a in 0..p {
            atb[a] += x[a] * ds.labels[i];
            for b in 0..p {
                ata[a][b] += x[a] * x[b];
            }
        }
    }
    for col in 0..p {
        let pivot = (col..p).max_by(|&a, &b| ata[a][col].abs().total_cmp(&ata[b][col].abs())).unwrap();
        ata.swap(col, pivot);
        atb.swap(col, pivot);
        let diag = ata[col][col];
        for r in (col + 1)..p {
            let f = ata[r][col] / diag;
            for c in col..p {
                ata[r][c] -= f * ata[col][c];
            }
            atb[r] -= f * atb[col];
        }
    }
    let mut beta = vec![0.0f64; p];
    for r in (0..p).rev() {
        let mut v = atb[r];
        for c in (r + 1)..p {
            v -= ata[r][c] * beta[c];
        }
        beta[r] = v / ata[r][r];
    }
    let mut mse = 0.0;
    for i in 0..n {
        let x = x_row(i);
        let pred: f64 = x.iter().zip(&beta).map(|(a, b)| a * b).sum();
        mse += (pred - ds.labels[i]).powi(2);
    }
    mse / n as f64
}

#[test]
fn criterion_6_hyperopt() {
    let graphs: Vec<Graph> = (0..5u64)
        .map(|s| {
            let n = 40 + s as usize * 35;
            gen::zipf_weights(&gen::connect(&gen::erdos_renyi(n, 4.0, s), s), 20, s)
        })
        .collect();
    let grid = HyperGrid::product(&[5, 10, 20], &[10, 20]);
    let sp = SkipGramParams { window: 5, negatives: 5, epochs: 1, initial_lr: 0.025, dim: 16 };
    let ds = build_dataset(&graphs, &grid, &sp, 99).unwrap();
    assert_eq!(ds.len(), grid.len() * graphs.len());

    let model = fit(&ds, 400, 0.02, 99).unwrap();
    let fit_mse = model.mse(&ds);
    let mean_mse = mean_predictor_mse(&ds);
    assert!(fit_mse <= 0.5 * mean_mse, "fit {fit_mse:.3e} vs mean predictor {mean_mse:.3e}");

    let oracle = normal_equations_mse(&ds);
    assert!(
        fit_mse <= 1.05 * oracle,
        "fit mse {fit_mse:.6e} not within 5% of normal-equations {oracle:.6e}"
    );

    // Selection matches an exhaustive scan of predictions.
    let target = gen::zipf_weights(&gen::connect(&gen::erdos_renyi(120, 4.0, 9), 9), 20, 9);
    let (combo, pred) = select_hyperparameters(&model, &target, &grid, false).unwrap();
    let stats = compute_stats(&target).unwrap();
    let best = grid
        .combos
        .iter()
        .map(|&h| (model.predict_row(&hybrid_row(h, &stats)), h.walks_per_node, h.walk_length))
        .min_by(|a, b| a.partial_cmp(b).unwrap())
        .unwrap();
    assert_eq!((combo.walks_per_node, combo.walk_length), (best.1, best.2));
    assert_eq!(pred, best.0);
    println!(
        "PASS criterion 6: {} rows = |H|x|G|, fit mse {fit_mse:.3e} <= 50% of mean {mean_mse:.3e}, \
         within 5% of OLS {oracle:.3e}, selection matches exhaustive scan",
        ds.len()
    );
}

#[test]
fn criterion_7_link_prediction_directional() {
    let start = Instant::now();
    let (g0, _) = gen::planted_partition(5000, 50, 10.0, 0.6, 777);
    let g = gen::connect(&g0, 777);
    let wp = WalkParams { walks_per_node: 3, walk_length: 10 };
    let sp = SkipGramParams { window: 5, negatives: 5, epochs: 1, initial_lr: 0.025, dim: 64 };

    let seeds: Vec<u64> = (0..10).collect();
    let mut gap_cos = 0.0;
    let mut gap_euc = 0.0;
    for &seed in &seeds {
        let split = make_link_split(&g, 0.1, seed).unwrap();
        let prec = |mode| {
            let (emb, _, _) =
                embed_with_init(&split.train_graph, mode, None, 0.05, &wp, &sp, seed).unwrap();
            (
                link_precision(&emb, &split, Metric::Cosine),
                link_precision(&emb, &split, Metric::Euclidean),
            )
        };
        let (gc, ge) = prec(InitMode::Gpa);
        let (rc, re) = prec(InitMode::Random);
        gap_cos += gc - rc;
        gap_euc += ge - re;
    }
    gap_cos /= seeds.len() as f64;
    gap_euc /= seeds.len() as f64;
    let secs = start.elapsed().as_secs_f64();
    assert!(gap_cos >= 0.01, "cosine gap {gap_cos:.4}");
    assert!(gap_euc >= 0.01, "euclidean gap {gap_euc:.4}");
    assert!(secs < 900.0, "took {secs:.0} s");
    println!(
        "PASS criterion 7: 5000-node surrogate, 10-seed mean precision gap \
         cosine {gap_cos:.4}, euclidean {gap_euc:.4} (both >=0.01), {secs:.0} s"
    );
}

#[test]
fn criterion_8_node_classification_directional() {
    let (g0, blocks) = gen::planted_partition(600, 5, 10.0, 1.5, 88);
    let g = gen::connect(&g0, 88);
    let labels = LabelSet { labels: blocks.iter().map(|&b| vec![b]).collect(), label_count: 5 };
    let wp = WalkParams { walks_per_node: 3, walk_length: 10 };
    let sp = SkipGramParams { window: 5, negatives: 5, epochs: 1, initial_lr: 0.025, dim: 32 };

    let micro = |mode, seed: u64| {
        let (emb, _, _) = embed_with_init(&g, mode, None, 0.05, &wp, &sp, seed).unwrap();
        let split = make_classification_split(&labels, seed);
        let model = train_ovr_logreg(&emb, &labels, &split, 1.0, 30, 0.05, seed).unwrap();
        let pred = model.predict_split(&emb, &labels, &split.test_nodes);
        let truth: Vec<Vec<usize>> =
            split.test_nodes.iter().map(|&v| labels.labels[v].clone()).collect();
        f1_scores(&pred, &truth, labels.label_count).0
    };

    let seeds: Vec<u64> = (0..10).collect();
    let gpa_mean: f64 = seeds.iter().map(|&s| micro(InitMode::Gpa, s)).sum::<f64>() / 10.0;
    let rand_mean: f64 = seeds.iter().map(|&s| micro(InitMode::Random, s)).sum::<f64>() / 10.0;
    let baseline = 1.0 / labels.label_count as f64;
    assert!(
        gpa_mean >= baseline + 0.2,
        "gpa micro-F1 {gpa_mean:.4} vs baseline {baseline:.2}"
    );
    assert!(gpa_mean >= rand_mean, "gpa {gpa_mean:.4} < random {rand_mean:.4}");
    println!(
        "PASS criterion 8: micro-F1 gpa {gpa_mean:.4} >= baseline {baseline:.2}+0.2 \
         and >= random {rand_mean:.4} (10-seed means)"
    );
}

#[test]
fn criterion_9_init_cost_fraction() {
    let g = gen::connect(&gen::erdos_renyi(10_000, 8.0, 9), 9);
    let wp = WalkParams { walks_per_node: 5, walk_length: 20 };
    let sp = SkipGramParams { window: 5, negatives: 5, epochs: 1, initial_lr: 0.025, dim: 64 };

    let median = |mut v: Vec<f64>| {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v[v.len() / 2]
    };
    let init_times: Vec<f64> = (0..3)
        .map(|r| build_init(&g, InitMode::Gpa, None, 0.05, &wp, &sp, r).unwrap().1)
        .collect();
    let full_times: Vec<f64> = (0..3)
        .map(|r| {
            let t = Instant::now();
            let corpus = gpa::generate_walks(&g, &wp, r).unwrap();
            gpa::train_skipgram(&corpus, g.node_count(), &sp, None, r).unwrap();
            t.elapsed().as_secs_f64()
        })
        .collect();
    let init = median(init_times);
    let full = median(full_times);
    let ratio = init / full;
    assert!(ratio < 0.25, "init {init:.2} s is {ratio:.2} of full run {full:.2} s");
    println!(
        "PASS criterion 9: 10000-node init median {init:.2} s vs full embedding {full:.2} s, \
         ratio {ratio:.3} (<0.25)"
    );
}
