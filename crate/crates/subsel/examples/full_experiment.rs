//! Replicated end-to-end comparison: classifier-free MOGA selection versus
//! classifier-based MVE selection on the same synthetic problem, reported
//! against the all-subspaces baseline.
//!
//! Run with: cargo run --example full_experiment

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use subsel::dataset::{train_test_split, Dataset};
use subsel::experiment::{
    run_classifier_based_on, run_classifier_free_on, ErrorObjective, ExperimentConfig, Report,
    SearchKind, SelectionMode,
};

/// Two overlapping classes: half the features carry a one-sigma mean gap,
/// the other half are noise.
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

fn show(tag: &str, report: &Report) {
    println!(
        "{tag:<17} {:.2}% +/- {:.2}%  (size {:.2} +/- {:.2}, n={})",
        100.0 * report.aggregates.accuracy_mean,
        100.0 * report.aggregates.accuracy_std,
        report.aggregates.size_mean,
        report.aggregates.size_std,
        report.aggregates.effective_n,
    );
    let during_search: u64 = report
        .records
        .iter()
        .map(|r| r.trainings_during_search)
        .sum();
    println!("{:<17} classifier fits during search: {during_search}", "");
}

fn main() {
    let data = overlapping_blobs(400, 8, 30);
    let (train, test) = train_test_split(&data, 0.5, 31).unwrap();

    let base = ExperimentConfig {
        cardinality: 4,
        pool_size: 10,
        clusters: Some(3),
        knn_k: 3,
        population_size: 16,
        generations: 80,
        replications: 5,
        seed: 32,
        ..Default::default()
    };

    let free = ExperimentConfig {
        mode: SelectionMode::Free,
        search: SearchKind::Moga,
        ..base.clone()
    };
    let free_out = run_classifier_free_on(&free, &train, &test).unwrap();

    let based = ExperimentConfig {
        mode: SelectionMode::Based,
        search: SearchKind::Moga,
        objective: ErrorObjective::Mve,
        ..base
    };
    let based_out = run_classifier_based_on(&based, &train, &test).unwrap();

    println!("test accuracy over 5 replications:\n");
    show("classifier-free", &free_out.report);
    show("classifier-based", &based_out.report);
    println!(
        "{:<17} {:.2}%  (all {} subspaces)",
        "all baseline",
        100.0 * free_out.report.baseline.all_accuracy,
        free_out.report.baseline.all_size
    );
    println!(
        "{:<17} {:.2}%",
        "oracle bound",
        100.0 * free_out.report.baseline.oracle_rate
    );
    if let Some(p) = free_out.report.significance.p_value_vs_all {
        println!(
            "\n{} vs all, classifier-free: p = {p:.4}",
            free_out.report.significance.test
        );
    }
}
