//! Classify nodes of a planted-partition graph by their community using
//! one-vs-rest logistic regression on learned embeddings.

use gpa::eval::classify::{f1_scores, make_classification_split, train_ovr_logreg};
use gpa::graph::LabelSet;
use gpa::{gen, generate_walks, init_for_graph, train_skipgram, PropagationConfig,
    SkipGramParams, WalkParams};

fn main() -> gpa::Result<()> {
    let (g, blocks) = gen::planted_partition(300, 5, 10.0, 1.0, 19);
    let g = gen::connect(&g, 19);
    let labels = LabelSet { labels: blocks.iter().map(|&b| vec![b]).collect(), label_count: 5 };

    let wp = WalkParams { walks_per_node: 5, walk_length: 20 };
    let sp = SkipGramParams { dim: 32, ..Default::default() };
    let cfg = PropagationConfig::for_graph(&g);
    let init = init_for_graph(&g, None, 0.05, &cfg, &wp, &sp, 19)?;
    let corpus = generate_walks(&g, &wp, 19)?;
    let emb = train_skipgram(&corpus, g.node_count(), &sp, Some(&init), 19)?;

    let split = make_classification_split(&labels, 19);
    println!("split: {} train, {} test", split.train_nodes.len(), split.test_nodes.len());

    let model = train_ovr_logreg(&emb, &labels, &split, 1.0, 30, 0.05, 19)?;
    let pred = model.predict_split(&emb, &labels, &split.test_nodes);
    let truth: Vec<Vec<usize>> =
        split.test_nodes.iter().map(|&v| labels.labels[v].clone()).collect();
    let (micro, macro_f1) = f1_scores(&pred, &truth, labels.label_count);
    println!("micro-F1: {micro:.4}");
    println!("macro-F1: {macro_f1:.4}");
    println!("random-guess baseline: {:.4}", 1.0 / labels.label_count as f64);
    Ok(())
}
