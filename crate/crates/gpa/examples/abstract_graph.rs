//! Collapse a partitioned graph into its weighted abstract graph: one node
//! per block, edge weights counting the cross-block edges.

use gpa::partition::edge_cut;
use gpa::{build_abstract, partition, Graph};

fn main() -> gpa::Result<()> {
    // Three triangles joined in a ring.
    let g = Graph::from_edges(
        9,
        [
            (0, 1, 1.0),
            (1, 2, 1.0),
            (0, 2, 1.0),
            (3, 4, 1.0),
            (4, 5, 1.0),
            (3, 5, 1.0),
            (6, 7, 1.0),
            (7, 8, 1.0),
            (6, 8, 1.0),
            (2, 3, 1.0),
            (5, 6, 1.0),
            (8, 0, 1.0),
            (1, 4, 1.0),
        ],
    )?;

    let p = partition(&g, 3, 0.05, 5)?;
    println!("assignment: {:?}", p.assignment);

    let ga = build_abstract(&g, &p)?;
    println!("abstract graph: {} blocks, {} edges", ga.k(), ga.core.edge_count());
    for &(a, b, w) in ga.core.edges() {
        println!("  block {a} -- block {b}  weight {w}");
    }
    let total: f64 = ga.core.edges().iter().map(|&(_, _, w)| w).sum();
    println!("sum of abstract weights {total} = edge cut {}", edge_cut(&g, &p));
    Ok(())
}
