//! Pair counts and the six clustering-diversity indices on a four-point
//! worked example, cross-checked against direct pair enumeration.
//!
//! Run with: cargo run --example diversity_indices

use subsel::clustering::Partition;
use subsel::diversity::{
    brute_force_pair_counts, contingency, measure, pair_counts, DiversityKind,
};

fn partition(assignments: Vec<usize>) -> Partition {
    let k = assignments.iter().copied().max().unwrap() + 1;
    Partition {
        assignments,
        k,
        requested_k: k,
        inertia: 0.0,
        centroids: vec![vec![0.0]; k],
    }
}

fn main() {
    // Four points; one clustering groups the first three together, the other
    // splits them. Six point pairs in total.
    let pa = partition(vec![0, 0, 0, 1]);
    let pb = partition(vec![0, 0, 1, 2]);

    let table = contingency(&pa, &pb).unwrap();
    println!("contingency table ({}x{}):", table.rows(), table.cols());
    for row in &table.counts {
        println!("  {row:?}");
    }

    let counts = pair_counts(&table);
    println!(
        "pair counts: c11={} c10={} c01={} c00={} (of {})",
        counts.c11,
        counts.c10,
        counts.c01,
        counts.c00,
        counts.total_pairs()
    );

    let brute = brute_force_pair_counts(&pa, &pb).unwrap();
    assert_eq!(counts, brute);
    println!("closed forms agree with O(n^2) enumeration");

    println!("\nindex              value     search orientation");
    for kind in DiversityKind::ALL {
        let value = measure(&counts, kind).unwrap();
        println!("{:<18} {value:<9.6} {:?}", kind.name(), kind.orientation());
    }
}
