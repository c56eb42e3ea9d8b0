//! Learn a regression from hybrid features (walk hyperparameters + graph
//! statistics) to embedding quality, then select hyperparameters for a new
//! graph in one pass over the grid.

use gpa::hyperopt::{
    build_dataset, fit, generate_random_abstract_graphs, mean_predictor_mse,
    select_hyperparameters, HyperGrid,
};
use gpa::{gen, SkipGramParams};

fn main() -> gpa::Result<()> {
    let graphs = generate_random_abstract_graphs(6, 23);
    let grid = HyperGrid::product(&[5, 10, 20], &[10, 20]);
    let sp = SkipGramParams { dim: 16, ..Default::default() };

    let ds = build_dataset(&graphs, &grid, &sp, 23)?;
    println!("dataset: {} rows = {} combos x {} graphs", ds.len(), grid.len(), graphs.len());

    let model = fit(&ds, 300, 0.01, 23)?;
    println!("fit mse: {:.4e}", model.mse(&ds));
    println!("mean-predictor mse: {:.4e}", mean_predictor_mse(&ds));

    let target = gen::zipf_weights(&gen::connect(&gen::erdos_renyi(300, 5.0, 9), 9), 100, 9);
    let (combo, pred) = select_hyperparameters(&model, &target, &grid, false)?;
    println!(
        "selected for new graph: {} walks of length {} (predicted score {pred:.4e})",
        combo.walks_per_node, combo.walk_length
    );
    Ok(())
}
