//! Run the full initialization pipeline step by step: partition, abstract
//! graph, abstract embedding, propagation. Prints the propagation trace.

use gpa::propagate::propagate;
use gpa::{
    build_abstract, default_k, embed_abstract, gen, partition, PropagationConfig, SkipGramParams,
    WalkParams,
};

fn main() -> gpa::Result<()> {
    let (g, _) = gen::planted_partition(1000, 10, 10.0, 1.0, 17);
    let g = gen::connect(&g, 17);
    let k = default_k(&g);
    println!("graph: {} nodes, {} edges", g.node_count(), g.edge_count());

    let p = partition(&g, k, 0.05, 17)?;
    let ga = build_abstract(&g, &p)?;
    println!("abstract graph: {k} blocks, {} edges", ga.core.edge_count());

    let wp = WalkParams::default();
    let sp = SkipGramParams { dim: 32, ..Default::default() };
    let f_a = embed_abstract(&ga, &wp, &sp, 17)?;

    let cfg = PropagationConfig::for_graph(&g);
    println!("propagating with delta = {:.2e}, max {} iters", cfg.delta, cfg.max_iters);
    let (init, trace) = propagate(&g, &ga, &f_a, &cfg)?;

    for (i, d) in trace.deltas.iter().enumerate() {
        println!("  iter {:>3}: delta {d:.6e}", i + 1);
    }
    println!(
        "converged: {}, neighbor visits per iter: {}",
        trace.converged(cfg.delta),
        trace.neighbor_visits.first().copied().unwrap_or(0)
    );
    println!("init: {} x {} matrix, finite: {}", init.rows(), init.dim(), init.all_finite());
    Ok(())
}
