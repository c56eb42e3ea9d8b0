use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gpa::embedding::EmbeddingMatrix;
use gpa::error::{GpaError, Result};
use gpa::eval::linkpred::Metric;
use gpa::eval::report::{run_comparison, InitMode, Task};
use gpa::graph::{load_edge_list, load_labels, Graph};
use gpa::hyperopt::{
    build_dataset, fit, generate_random_abstract_graphs, mean_predictor_mse,
    select_hyperparameters, HyperGrid, RegressionModel,
};
use gpa::partition::{default_k, partition};
use gpa::propagate::{init_for_graph, propagate, PropagationConfig};
use gpa::skipgram::{embed_abstract, train_skipgram, SkipGramParams};
use gpa::walk::{generate_walks, WalkParams};
use gpa::abstract_graph;

#[derive(Parser)]
#[command(name = "gpa", about = "Partition-based graph embedding toolkit", version)]
struct Cli {
    /// Seed for all randomness.
    #[arg(long, global = true, env = "GPA_SEED", default_value_t = 42)]
    seed: u64,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct InputOpts {
    /// Edge-list file (u v [w] per line, '#' comments).
    #[arg(long)]
    input: PathBuf,
    /// Read the third column as edge weights.
    #[arg(long)]
    weighted: bool,
}

#[derive(Args)]
struct PartitionOpts {
    /// Number of blocks; defaults to ceil(sqrt(|V|)).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: Option<u64>,
    /// Balance slack: max block size (1+epsilon)*ceil(n/k).
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
}

#[derive(Args)]
struct WalkOpts {
    /// Random walks started per node.
    #[arg(long, default_value_t = 10)]
    walks: usize,
    /// Nodes per walk.
    #[arg(long, default_value_t = 40)]
    walk_length: usize,
}

#[derive(Args)]
struct SkipGramOpts {
    /// Embedding dimension.
    #[arg(long, default_value_t = 128)]
    dim: usize,
    /// Skip-gram context window.
    #[arg(long, default_value_t = 10)]
    window: usize,
    /// Negative samples per pair.
    #[arg(long, default_value_t = 5)]
    negatives: usize,
    /// Passes over the walk corpus.
    #[arg(long, default_value_t = 1)]
    epochs: usize,
    /// Initial learning rate, decayed linearly.
    #[arg(long, default_value_t = 0.025)]
    lr: f64,
}

impl WalkOpts {
    fn params(&self) -> WalkParams {
        WalkParams { walks_per_node: self.walks, walk_length: self.walk_length }
    }
}

impl SkipGramOpts {
    fn params(&self) -> SkipGramParams {
        SkipGramParams {
            window: self.window,
            negatives: self.negatives,
            epochs: self.epochs,
            initial_lr: self.lr,
            dim: self.dim,
        }
    }
}

#[derive(Args)]
struct EvalOpts {
    /// Which initializations to compare: gpa, random, or both.
    #[arg(long, default_value = "both")]
    init: String,
    /// Number of seeds; runs use seed, seed+1, ...
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// CSV output path for per-seed rows.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a balanced k-way partitioning.
    Partition {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        part: PartitionOpts,
        /// Output file: `node block` per line.
        #[arg(long)]
        out: PathBuf,
    },
    /// Partition and emit the weighted abstract graph.
    Abstract {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        part: PartitionOpts,
        /// Abstract edge list output.
        #[arg(long)]
        out_edges: PathBuf,
        /// Node-to-block map output.
        #[arg(long)]
        out_map: PathBuf,
    },
    /// Embed a weighted abstract graph with walks + skip-gram.
    EmbedAbstract {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        walk: WalkOpts,
        #[command(flatten)]
        sg: SkipGramOpts,
        #[arg(long)]
        out: PathBuf,
    },
    /// Full initialization pipeline: partition, abstract embed, propagate.
    Init {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        part: PartitionOpts,
        #[command(flatten)]
        walk: WalkOpts,
        #[command(flatten)]
        sg: SkipGramOpts,
        /// Propagation threshold; defaults to 1/|V|.
        #[arg(long)]
        delta: Option<f64>,
        /// Propagation iteration cap.
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
        #[arg(long)]
        out: PathBuf,
        /// Optional per-iteration delta trace (CSV).
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Train full-graph embeddings, optionally from an initialization file.
    Embed {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        walk: WalkOpts,
        #[command(flatten)]
        sg: SkipGramOpts,
        /// Initial embedding file; random init when absent.
        #[arg(long)]
        init: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit the hyperparameter regression on random abstract graphs.
    Hyperlearn {
        /// Number of random training graphs.
        #[arg(long, default_value_t = 20)]
        graphs: usize,
        /// Walks-per-node grid values.
        #[arg(long, value_delimiter = ',', default_values_t = vec![5, 10, 20, 40, 80])]
        walks_grid: Vec<usize>,
        /// Walk-length grid values.
        #[arg(long, value_delimiter = ',', default_values_t = vec![10, 20, 40, 80])]
        lengths_grid: Vec<usize>,
        #[command(flatten)]
        sg: SkipGramOpts,
        /// SGD epochs for the regression fit.
        #[arg(long, default_value_t = 200)]
        fit_epochs: usize,
        /// SGD learning rate for the regression fit.
        #[arg(long, default_value_t = 0.01)]
        fit_lr: f64,
        /// Model output file.
        #[arg(long)]
        out_model: PathBuf,
        /// Optional hybrid dataset dump (CSV).
        #[arg(long)]
        out_dataset: Option<PathBuf>,
    },
    /// Pick walk hyperparameters for a graph using a fitted model.
    SelectHp {
        #[command(flatten)]
        input: InputOpts,
        /// Model file written by hyperlearn.
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = vec![5, 10, 20, 40, 80])]
        walks_grid: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![10, 20, 40, 80])]
        lengths_grid: Vec<usize>,
        /// Treat higher predicted scores as better.
        #[arg(long)]
        pick_highest: bool,
    },
    /// Compare initializations on link prediction.
    EvalLink {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        part: PartitionOpts,
        #[command(flatten)]
        walk: WalkOpts,
        #[command(flatten)]
        sg: SkipGramOpts,
        #[command(flatten)]
        eval: EvalOpts,
        /// Fraction of edges held out.
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        /// Similarity metric: cosine or euclidean.
        #[arg(long, default_value = "cosine")]
        metric: String,
    },
    /// Compare initializations on multi-label node classification.
    EvalClassify {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        part: PartitionOpts,
        #[command(flatten)]
        walk: WalkOpts,
        #[command(flatten)]
        sg: SkipGramOpts,
        #[command(flatten)]
        eval: EvalOpts,
        /// Label file: `node label[,label...]` per line.
        #[arg(long)]
        labels: PathBuf,
    },
}

fn parse_modes(s: &str) -> Result<Vec<InitMode>> {
    match s {
        "both" => Ok(vec![InitMode::Gpa, InitMode::Random]),
        other => Ok(vec![other.parse()?]),
    }
}

fn load(input: &InputOpts) -> Result<Graph> {
    load_edge_list(&input.input, input.weighted)
}

fn report_header(cli_seed: u64, wp: &WalkParams, sp: &SkipGramParams, extra: &str) {
    println!(
        "# seed={} walks={} walk_length={} dim={} window={} negatives={} epochs={} lr={} {extra}",
        cli_seed,
        wp.walks_per_node,
        wp.walk_length,
        sp.dim,
        sp.window,
        sp.negatives,
        sp.epochs,
        sp.initial_lr
    );
}

fn run(cli: Cli) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| GpaError::domain(format!("thread pool: {e}")))?;
    let seed = cli.seed;
    match cli.cmd {
        Cmd::Partition { input, part, out } => {
            let g = load(&input)?;
            let k = part.k.map(|k| k as usize).unwrap_or_else(|| default_k(&g));
            let p = partition(&g, k, part.epsilon, seed)?;
            p.write(&g, &out)?;
            println!("partitioned {} nodes into {} blocks, edge cut {}",
                g.node_count(), k, gpa::partition::edge_cut(&g, &p));
        }
        Cmd::Abstract { input, part, out_edges, out_map } => {
            let g = load(&input)?;
            let k = part.k.map(|k| k as usize).unwrap_or_else(|| default_k(&g));
            let p = partition(&g, k, part.epsilon, seed)?;
            let ga = abstract_graph::build_abstract(&g, &p)?;
            ga.write(&g, &out_edges, &out_map)?;
            println!("abstract graph: {} blocks, {} edges", ga.k(), ga.core.edge_count());
        }
        Cmd::EmbedAbstract { input, walk, sg, out } => {
            let g = load(&input)?;
            let p = gpa::partition::Partitioning {
                assignment: (0..g.node_count()).collect(),
                k: g.node_count(),
                epsilon: 0.0,
            };
            let ga = abstract_graph::build_abstract(&g, &p)?;
            let emb = embed_abstract(&ga, &walk.params(), &sg.params(), seed)?;
            emb.write(Some(&g), &out)?;
        }
        Cmd::Init { input, part, walk, sg, delta, max_iters, out, trace_out } => {
            let g = load(&input)?;
            let mut cfg = PropagationConfig::for_graph(&g);
            if let Some(d) = delta {
                cfg.delta = d;
            }
            cfg.max_iters = max_iters;
            let k = part.k.map(|k| k as usize);
            if let Some(trace_path) = &trace_out {
                // Run the stages explicitly so the trace is available.
                let kk = k.unwrap_or_else(|| default_k(&g));
                let p = partition(&g, kk, part.epsilon, seed)?;
                let ga = abstract_graph::build_abstract(&g, &p)?;
                let f_a = embed_abstract(&ga, &walk.params(), &sg.params(), seed)?;
                let (emb, trace) = propagate(&g, &ga, &f_a, &cfg)?;
                trace.write_csv(trace_path)?;
                emb.write(Some(&g), &out)?;
            } else {
                let emb = init_for_graph(&g, k, part.epsilon, &cfg, &walk.params(), &sg.params(), seed)?;
                emb.write(Some(&g), &out)?;
            }
        }
        Cmd::Embed { input, walk, sg, init, out } => {
            let g = load(&input)?;
            let sp = sg.params();
            let init_emb = match init {
                Some(path) => EmbeddingMatrix::read(Some(&g), &path)?,
                None => EmbeddingMatrix::random(g.node_count(), sp.dim, seed),
            };
            let corpus = generate_walks(&g, &walk.params(), seed)?;
            let emb = train_skipgram(&corpus, g.node_count(), &sp, Some(&init_emb), seed)?;
            emb.write(Some(&g), &out)?;
        }
        Cmd::Hyperlearn {
            graphs, walks_grid, lengths_grid, sg, fit_epochs, fit_lr, out_model, out_dataset,
        } => {
            let gs = generate_random_abstract_graphs(graphs, seed);
            let grid = HyperGrid::product(&walks_grid, &lengths_grid);
            let ds = build_dataset(&gs, &grid, &sg.params(), seed)?;
            if let Some(path) = &out_dataset {
                ds.write_csv(path)?;
            }
            let model = fit(&ds, fit_epochs, fit_lr, seed)?;
            model.write(&out_model)?;
            println!(
                "fit {} rows: mse {:.6}, mean-predictor mse {:.6}",
                ds.len(),
                model.mse(&ds),
                mean_predictor_mse(&ds)
            );
        }
        Cmd::SelectHp { input, model, walks_grid, lengths_grid, pick_highest } => {
            let g = load(&input)?;
            let model = RegressionModel::read(&model)?;
            let grid = HyperGrid::product(&walks_grid, &lengths_grid);
            let (combo, pred) = select_hyperparameters(&model, &g, &grid, pick_highest)?;
            println!(
                "walks_per_node {} walk_length {} predicted_score {pred:.6}",
                combo.walks_per_node, combo.walk_length
            );
        }
        Cmd::EvalLink { input, part, walk, sg, eval, alpha, metric } => {
            let g = load(&input)?;
            let modes = parse_modes(&eval.init)?;
            let metric: Metric = metric.parse().map_err(GpaError::domain)?;
            let seeds: Vec<u64> = (0..eval.seeds).map(|i| seed.wrapping_add(i)).collect();
            let wp = walk.params();
            let sp = sg.params();
            report_header(seed, &wp, &sp, &format!("alpha={alpha} metric={metric:?}"));
            let rep = run_comparison(
                &g,
                None,
                Task::Link,
                &modes,
                &seeds,
                part.k.map(|k| k as usize),
                part.epsilon,
                &wp,
                &sp,
                alpha,
                metric,
            )?;
            print!("{}", rep.text_table());
            if let Some(path) = &eval.out {
                rep.write_csv(path)?;
            }
        }
        Cmd::EvalClassify { input, part, walk, sg, eval, labels } => {
            let g = load(&input)?;
            let ls = load_labels(&labels, &g)?;
            let modes = parse_modes(&eval.init)?;
            let seeds: Vec<u64> = (0..eval.seeds).map(|i| seed.wrapping_add(i)).collect();
            let wp = walk.params();
            let sp = sg.params();
            report_header(seed, &wp, &sp, &format!("labels={}", ls.label_count));
            let rep = run_comparison(
                &g,
                Some(&ls),
                Task::Classify,
                &modes,
                &seeds,
                part.k.map(|k| k as usize),
                part.epsilon,
                &wp,
                &sp,
                0.1,
                Metric::Cosine,
            )?;
            print!("{}", rep.text_table());
            if let Some(path) = &eval.out {
                rep.write_csv(path)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
