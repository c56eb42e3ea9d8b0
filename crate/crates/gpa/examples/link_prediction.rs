//! Compare partition-based initialization against random initialization on
//! link prediction with a 10% edge holdout.

use gpa::eval::linkpred::Metric;
use gpa::eval::report::{run_comparison, InitMode, Task};
use gpa::{gen, SkipGramParams, WalkParams};

fn main() -> gpa::Result<()> {
    let (g, _) = gen::planted_partition(500, 10, 10.0, 1.0, 31);
    let g = gen::connect(&g, 31);
    println!("graph: {} nodes, {} edges", g.node_count(), g.edge_count());

    let wp = WalkParams { walks_per_node: 5, walk_length: 20 };
    let sp = SkipGramParams { dim: 32, ..Default::default() };
    let rep = run_comparison(
        &g,
        None,
        Task::Link,
        &[InitMode::Gpa, InitMode::Random],
        &[1, 2, 3],
        None,
        0.05,
        &wp,
        &sp,
        0.1,
        Metric::Cosine,
    )?;
    print!("{}", rep.text_table());
    Ok(())
}
