//! Draw a pool of random feature subspaces, project a dataset onto one of
//! them, and round-trip the pool through its JSON form.
//!
//! Run with: cargo run --example subspace_pool

use subsel::dataset::generate_synthetic;
use subsel::subspace::{generate_pool, project, SubspacePool};

fn main() {
    let data = generate_synthetic(200, 8, 2, 42).unwrap();

    // The Pima-scale configuration: 10 subspaces of 4 features from 8.
    let pool = generate_pool(data.n_features(), 4, 10, 7).unwrap();
    println!(
        "pool of {} subspaces, cardinality {}:",
        pool.len(),
        pool.cardinality
    );
    for (i, subspace) in pool.subspaces.iter().enumerate() {
        println!("  subspace {i}: {:?}", subspace.indices());
    }

    let projected = project(&data, &pool.subspaces[0]).unwrap();
    println!(
        "\nprojected dataset: {} rows x {} features (labels preserved: {})",
        projected.n_rows(),
        projected.n_features(),
        projected.labels() == data.labels()
    );

    let json = pool.to_json();
    let restored = SubspacePool::from_json(&json).unwrap();
    assert_eq!(pool, restored);
    println!("\npool JSON round-trips; first lines:");
    for line in json.lines().take(5) {
        println!("  {line}");
    }
}
