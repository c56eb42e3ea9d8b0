//! Partition a planted-partition graph into balanced blocks and compare
//! the edge cut against a random balanced assignment.

use gpa::gen;
use gpa::partition::{edge_cut, random_balanced};
use gpa::{default_k, partition, Partitioning};

fn main() -> gpa::Result<()> {
    let (g, truth) = gen::planted_partition(600, 6, 10.0, 1.0, 11);
    let g = gen::connect(&g, 11);
    let k = default_k(&g);
    println!("graph: {} nodes, {} edges, k = {k}", g.node_count(), g.edge_count());

    let p = partition(&g, k, 0.05, 11)?;
    let cap = Partitioning::size_cap(g.node_count(), k, 0.05);
    let sizes = p.block_sizes();
    println!(
        "blocks: {} of size {}..{} (cap {cap}), balanced: {}",
        k,
        sizes.iter().min().unwrap(),
        sizes.iter().max().unwrap(),
        p.is_balanced()
    );
    println!("edge cut: {}", edge_cut(&g, &p));
    println!("random baseline cut: {}", edge_cut(&g, &random_balanced(&g, k, 11)));

    // With k = 6 the planted communities should be nearly recovered.
    let p6 = partition(&g, 6, 0.05, 11)?;
    println!(
        "k = 6 agreement with planted blocks: {:.3}",
        gen::best_block_agreement(&p6.assignment, &truth, 6)
    );
    Ok(())
}
