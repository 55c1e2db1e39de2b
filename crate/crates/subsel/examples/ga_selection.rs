//! Classifier-free ensemble selection with the single-objective GA: the
//! search maximizes data diversity alone and, as expected, collapses to the
//! minimum allowed ensemble size.
//!
//! Run with: cargo run --example ga_selection

use subsel::dataset::generate_synthetic;
use subsel::diversity::{pairwise_matrix, DiversityKind};
use subsel::experiment::DiversityObjective;
use subsel::search::{ga_run, GaConfig};
use subsel::subspace::generate_pool;
use subsel::{cluster_pool, global_diversity};

fn main() {
    let data = generate_synthetic(240, 12, 2, 3).unwrap();
    let pool = generate_pool(data.n_features(), 4, 10, 11).unwrap();
    let partitions = cluster_pool(&data, &pool, 3, 21).unwrap();
    let matrix = pairwise_matrix(&partitions, DiversityKind::Mirkin).unwrap();

    let objective = DiversityObjective::new(&matrix);
    let config = GaConfig {
        generations: 200,
        seed: 4,
        ..Default::default()
    };
    // Desk demo: the same matrix serves as search and validation objective.
    let outcome = ga_run(&objective, &objective, pool.len(), &config).unwrap();

    println!(
        "selected genome: {} (size {})",
        outcome.best,
        outcome.best.popcount()
    );
    println!(
        "mean pairwise Mirkin diversity: {:.3}",
        global_diversity(&matrix, &outcome.best).unwrap()
    );
    println!("\nconvergence (every 25th generation):");
    for record in outcome.history.iter().step_by(25) {
        println!(
            "  gen {:>3}: best diversity {:.3}",
            record.generation, record.best_objective
        );
    }
    println!(
        "\nnote: popcount {} == configured minimum ensemble size {}",
        outcome.best.popcount(),
        config.min_size
    );
}
