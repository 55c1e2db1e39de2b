//! K-Means partitions and Xie-Beni cluster-count selection on synthetic
//! blobs, then one partition per pool subspace.
//!
//! Run with: cargo run --example kmeans_xie_beni

use subsel::cluster_pool;
use subsel::clustering::{kmeans, select_k, xie_beni, DEFAULT_MAX_ITER, DEFAULT_TOL};
use subsel::dataset::generate_synthetic;
use subsel::subspace::generate_pool;

fn main() {
    let data = generate_synthetic(300, 6, 3, 9).unwrap();

    println!("Xie-Beni scores over candidate cluster counts (lower is better):");
    for k in 2..=6 {
        let partition = kmeans(&data, k, 1234 + k as u64, DEFAULT_MAX_ITER, DEFAULT_TOL).unwrap();
        let xb = xie_beni(&data, &partition).unwrap();
        println!("  k={k}: XB = {xb:.6} (inertia {:.1})", partition.inertia);
    }

    let chosen = select_k(&data, 2, 6, 42).unwrap();
    println!("\nselect_k picked k = {chosen} (three planted blobs)");

    let pool = generate_pool(data.n_features(), 3, 8, 5).unwrap();
    let partitions = cluster_pool(&data, &pool, chosen, 77).unwrap();
    println!("\nper-subspace partitions on the pool:");
    for (i, partition) in partitions.iter().enumerate() {
        println!(
            "  subspace {i}: k_effective={} inertia={:.1}",
            partition.k, partition.inertia
        );
    }
}
