//! Round-trip a graph through the edge-list format and print its
//! statistics.

use gpa::{compute_stats, gen, load_edge_list};

fn main() -> gpa::Result<()> {
    let g = gen::zipf_weights(&gen::connect(&gen::erdos_renyi(150, 4.0, 8), 8), 10, 8);

    let dir = std::env::temp_dir();
    let path = dir.join("graph_io_example.edges");
    g.write_edge_list(&path)?;
    println!("wrote {}", path.display());

    let loaded = load_edge_list(&path, true)?;
    assert_eq!(loaded.node_count(), g.node_count());
    assert_eq!(loaded.edge_count(), g.edge_count());

    let s = compute_stats(&loaded)?;
    println!("nodes: {}", s.node_count);
    println!("edges: {}", s.edge_count);
    println!("density: {:.5}", s.density);
    println!("diameter: {}", s.diameter);
    println!("avg degree: {:.2}, max degree: {}", s.avg_degree, s.max_degree);
    println!("avg weight: {:.2}, max weight: {}", s.avg_edge_weight, s.max_edge_weight);

    std::fs::remove_file(&path)?;
    Ok(())
}
