//! Train the three per-subspace classifier families, fuse them by majority
//! vote, and report the ME / MVE / oracle statistics of the ensemble.
//!
//! Run with: cargo run --example classifier_baselines

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use subsel::classifiers::{predict_votes, train, Algorithm, ClassifierParams};
use subsel::dataset::{train_test_split, Dataset};
use subsel::subspace::generate_pool;
use subsel::{majority_vote, me, mve, oracle_rate};

/// Three overlapping Gaussian classes with means 1.5 apart per feature.
fn overlapping_blobs(n: usize, f: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut samples = Vec::with_capacity(n * f);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % 3;
        labels.push(class);
        for _ in 0..f {
            samples.push(1.5 * class as f64 + normal.sample(&mut rng));
        }
    }
    let names = (0..f).map(|j| format!("f{j}")).collect();
    Dataset::new(samples, f, labels, names, 3).unwrap()
}

fn main() {
    let data = overlapping_blobs(300, 8, 12);
    let (train_data, test_data) = train_test_split(&data, 0.5, 1).unwrap();
    let pool = generate_pool(train_data.n_features(), 3, 6, 2).unwrap();
    let params = ClassifierParams::default();

    for algorithm in [Algorithm::Knn, Algorithm::Qdc, Algorithm::Parzen] {
        let ensemble: Vec<_> = pool
            .subspaces
            .iter()
            .map(|s| train(algorithm, &train_data, s, &params).unwrap())
            .collect();
        let votes = predict_votes(&ensemble, &test_data).unwrap();
        let labels = test_data.labels();

        let fused = majority_vote(&votes);
        let correct = fused.iter().zip(labels).filter(|(a, b)| a == b).count();
        println!(
            "{:<7} majority accuracy {:.3}  MVE {:.3}  ME {:.3}  oracle {:.3}",
            algorithm.name(),
            correct as f64 / labels.len() as f64,
            mve(&votes, labels).unwrap(),
            me(&votes, labels).unwrap(),
            oracle_rate(&votes, labels).unwrap(),
        );
    }
}
