//! Multi-objective selection with NSGA-II: diversity plus ensemble-size
//! maximization keeps the archive from collapsing to the minimum size, and
//! the validated Pareto front spans a spread of ensemble sizes.
//!
//! Run with: cargo run --example nsga2_selection

use subsel::cluster_pool;
use subsel::dataset::generate_synthetic;
use subsel::diversity::{pairwise_matrix, DiversityKind};
use subsel::experiment::DiversityObjective;
use subsel::search::{nsga2_run, GaConfig};
use subsel::subspace::generate_pool;

fn main() {
    let data = generate_synthetic(240, 12, 2, 8).unwrap();
    let pool = generate_pool(data.n_features(), 4, 20, 15).unwrap();
    let partitions = cluster_pool(&data, &pool, 3, 33).unwrap();
    let matrix = pairwise_matrix(&partitions, DiversityKind::Jaccard).unwrap();

    let objective = DiversityObjective::new(&matrix);
    let config = GaConfig {
        generations: 150,
        seed: 6,
        ..Default::default()
    };
    let outcome = nsga2_run(&objective, &objective, pool.len(), &config).unwrap();

    println!(
        "archive holds {} validated non-dominated solutions:",
        outcome.archive.len()
    );
    let mut entries: Vec<_> = outcome.archive.entries().iter().collect();
    entries.sort_by_key(|e| e.genome.popcount());
    println!("  size  jacard  genome");
    for entry in entries {
        println!(
            "  {:>4}  {:.4}  {}",
            entry.genome.popcount(),
            entry.validation[0],
            entry.genome
        );
    }
    println!("\narchive growth (every 25th generation):");
    for record in outcome.history.iter().step_by(25) {
        println!(
            "  gen {:>3}: best jacard {:.4}, archive size {}",
            record.generation, record.best_objective, record.archive_size
        );
    }
}
