//! The whole classifier-free MOGA pipeline at desk scale, stage by stage:
//! split, cluster the pool, search with archive validation, evaluate the
//! Pareto front on held-out rows, and test the winning ensemble.
//!
//! Run with: cargo run --example pareto_evaluation

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use subsel::classifiers::predict_votes;
use subsel::dataset::{split, train_test_split, Dataset};
use subsel::diversity::{pairwise_matrix, DiversityKind};
use subsel::experiment::{evaluate_pareto, DiversityObjective, ExperimentConfig};
use subsel::search::{nsga2_run, GaConfig};
use subsel::subspace::generate_pool;
use subsel::{cluster_pool, mve};

/// Two overlapping classes separated by one sigma on half the features.
fn overlapping_blobs(n: usize, f: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut samples = Vec::with_capacity(n * f);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % 2;
        labels.push(class);
        for j in 0..f {
            let mean = if j < f / 2 { class as f64 } else { 0.0 };
            samples.push(mean + normal.sample(&mut rng));
        }
    }
    let names = (0..f).map(|j| format!("f{j}")).collect();
    Dataset::new(samples, f, labels, names, 2).unwrap()
}

fn main() {
    let data = overlapping_blobs(400, 10, 20);
    let (train, test) = train_test_split(&data, 0.5, 2).unwrap();
    let splits = split(&train, [0.7, 0.15, 0.15], 3).unwrap().with_test(test);

    let pool = generate_pool(train.n_features(), 4, 12, 4).unwrap();
    let partitions_opt = cluster_pool(&splits.optimization, &pool, 3, 5).unwrap();
    let partitions_val = cluster_pool(&splits.archive_validation, &pool, 3, 5).unwrap();
    let matrix_opt = pairwise_matrix(&partitions_opt, DiversityKind::FowlkesMallows).unwrap();
    let matrix_val = pairwise_matrix(&partitions_val, DiversityKind::FowlkesMallows).unwrap();

    let objective = DiversityObjective::new(&matrix_opt);
    let validation = DiversityObjective::new(&matrix_val);
    let config = GaConfig {
        generations: 120,
        seed: 6,
        ..Default::default()
    };
    let outcome = nsga2_run(&objective, &validation, pool.len(), &config).unwrap();
    println!("archive after search: {} solutions", outcome.archive.len());

    // K=3 rather than K=1: the evaluation rows are nested inside the
    // training portion, and a 1-NN would score them all by self-match.
    let experiment = ExperimentConfig {
        cardinality: 4,
        pool_size: 12,
        knn_k: 3,
        ..Default::default()
    };
    let (winner, eval_accuracy) = evaluate_pareto(
        &outcome.archive,
        &pool,
        &splits.training,
        &splits.evaluation,
        &experiment,
    )
    .unwrap();
    println!(
        "picked {} (size {}) at evaluation accuracy {:.3}",
        winner,
        winner.popcount(),
        eval_accuracy
    );

    // Only now are classifiers trained for the final test.
    let params = subsel::classifiers::ClassifierParams {
        knn_k: 3,
        ..Default::default()
    };
    let ensemble: Vec<_> = winner
        .selected()
        .into_iter()
        .map(|i| {
            subsel::classifiers::train(
                subsel::classifiers::Algorithm::Knn,
                &splits.training,
                &pool.subspaces[i],
                &params,
            )
            .unwrap()
        })
        .collect();
    let test = splits.test.as_ref().unwrap();
    let votes = predict_votes(&ensemble, test).unwrap();
    println!(
        "test accuracy of the selected ensemble: {:.3}",
        1.0 - mve(&votes, test.labels()).unwrap()
    );
}
