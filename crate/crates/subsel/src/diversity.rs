//! Clustering-partition diversity: pair-count statistics between two
//! partitions and the six indices built on them, plus the precomputed
//! pairwise matrix the search consumes.
//!
//! Pair counts are derived from the contingency table in O(C*(I+K)) rather
//! than enumerating all C(C-1)/2 point pairs; [`brute_force_pair_counts`]
//! keeps the direct enumeration around as an independent oracle.

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::Partition;
use crate::subspace::Genome;

#[derive(Debug, Error)]
pub enum DiversityError {
    #[error("partition lengths differ: {left} vs {right}")]
    Shape { left: usize, right: usize },
    #[error("{kind:?} is undefined for these pair counts: {reason}")]
    Undefined { kind: DiversityKind, reason: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("pair ({i}, {j}): {source}")]
    Pair {
        i: usize,
        j: usize,
        #[source]
        source: Box<DiversityError>,
    },
}

/// Search orientation of an index when used as an ensemble-diversity
/// objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Minimize,
    Maximize,
}

/// The six pairwise indices. The first five measure partition agreement, so
/// diversity search minimizes them; Mirkin's metric is a distance and is
/// maximized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiversityKind {
    Wallace1,
    Wallace2,
    FowlkesMallows,
    Rand,
    Jaccard,
    Mirkin,
}

impl DiversityKind {
    pub const ALL: [DiversityKind; 6] = [
        DiversityKind::Wallace1,
        DiversityKind::Wallace2,
        DiversityKind::FowlkesMallows,
        DiversityKind::Rand,
        DiversityKind::Jaccard,
        DiversityKind::Mirkin,
    ];

    pub fn orientation(self) -> Orientation {
        match self {
            DiversityKind::Mirkin => Orientation::Maximize,
            _ => Orientation::Minimize,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DiversityKind::Wallace1 => "wallace1",
            DiversityKind::Wallace2 => "wallace2",
            DiversityKind::FowlkesMallows => "fm",
            DiversityKind::Rand => "rand",
            DiversityKind::Jaccard => "jacard",
            DiversityKind::Mirkin => "mirkin",
        }
    }

    pub fn parse(text: &str) -> Result<Self, DiversityError> {
        match text.to_ascii_lowercase().as_str() {
            "wallace1" | "w1" => Ok(DiversityKind::Wallace1),
            "wallace2" | "w2" => Ok(DiversityKind::Wallace2),
            "fm" | "fowlkes-mallows" | "fowlkesmallows" => Ok(DiversityKind::FowlkesMallows),
            "rand" => Ok(DiversityKind::Rand),
            "jacard" | "jaccard" => Ok(DiversityKind::Jaccard),
            "mirkin" => Ok(DiversityKind::Mirkin),
            other => Err(DiversityError::Config(format!(
                "unknown diversity index '{other}'"
            ))),
        }
    }
}

/// I x K table of co-assignment counts between two partitions of the same
/// points: `counts[i][k]` is the number of points placed in cluster `i` by
/// the first partition and cluster `k` by the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<u64>>,
    pub n: u64,
}

impl ContingencyTable {
    pub fn rows(&self) -> usize {
        self.counts.len()
    }

    pub fn cols(&self) -> usize {
        self.counts.first().map_or(0, Vec::len)
    }

    fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }

    fn col_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.cols()];
        for row in &self.counts {
            for (s, &v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        sums
    }
}

/// The four pair-relationship counts between two partitions of `n` points.
///
/// `c11`: pairs together in both; `c00`: apart in both; `c10`: together in
/// the first only; `c01`: together in the second only. They always sum to
/// n*(n-1)/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub c11: u64,
    pub c00: u64,
    pub c10: u64,
    pub c01: u64,
    pub n: u64,
}

impl PairCounts {
    pub fn total_pairs(&self) -> u64 {
        self.n * (self.n - 1) / 2
    }
}

/// Build the contingency table of two equal-length partitions.
pub fn contingency(pa: &Partition, pb: &Partition) -> Result<ContingencyTable, DiversityError> {
    if pa.assignments.len() != pb.assignments.len() {
        return Err(DiversityError::Shape {
            left: pa.assignments.len(),
            right: pb.assignments.len(),
        });
    }
    let mut counts = vec![vec![0u64; pb.k]; pa.k];
    for (&a, &b) in pa.assignments.iter().zip(&pb.assignments) {
        counts[a][b] += 1;
    }
    Ok(ContingencyTable {
        counts,
        n: pa.assignments.len() as u64,
    })
}

/// Derive the pair counts from a contingency table using the closed forms:
/// c11 from the sum of squared cell counts, c10/c01 from row/column
/// marginals, c00 from the complement. Exact in 64-bit integers.
pub fn pair_counts(table: &ContingencyTable) -> PairCounts {
    let n = table.n;
    let row_sums = table.row_sums();
    let col_sums = table.col_sums();

    let mut sum_sq = 0u64;
    let mut c10_twice = 0u64;
    let mut c01_twice = 0u64;
    let mut c00_twice = 0u64;
    for (i, row) in table.counts.iter().enumerate() {
        for (k, &m) in row.iter().enumerate() {
            sum_sq += m * m;
            c10_twice += m * (row_sums[i] - m);
            c01_twice += m * (col_sums[k] - m);
            // n + m >= row + col: the complement count is nonnegative.
            c00_twice += m * (n + m - row_sums[i] - col_sums[k]);
        }
    }
    let c11 = (sum_sq - n) / 2;
    let counts = PairCounts {
        c11,
        c00: c00_twice / 2,
        c10: c10_twice / 2,
        c01: c01_twice / 2,
        n,
    };
    debug_assert_eq!(
        counts.c11 + counts.c00 + counts.c10 + counts.c01,
        if n < 2 { 0 } else { counts.total_pairs() },
    );
    counts
}

/// Direct O(n^2) enumeration of all point pairs. Slow path kept as an
/// independent oracle for [`pair_counts`].
pub fn brute_force_pair_counts(
    pa: &Partition,
    pb: &Partition,
) -> Result<PairCounts, DiversityError> {
    if pa.assignments.len() != pb.assignments.len() {
        return Err(DiversityError::Shape {
            left: pa.assignments.len(),
            right: pb.assignments.len(),
        });
    }
    let n = pa.assignments.len();
    let mut counts = PairCounts {
        c11: 0,
        c00: 0,
        c10: 0,
        c01: 0,
        n: n as u64,
    };
    for x in 0..n {
        for y in (x + 1)..n {
            let same_a = pa.assignments[x] == pa.assignments[y];
            let same_b = pb.assignments[x] == pb.assignments[y];
            match (same_a, same_b) {
                (true, true) => counts.c11 += 1,
                (false, false) => counts.c00 += 1,
                (true, false) => counts.c10 += 1,
                (false, true) => counts.c01 += 1,
            }
        }
    }
    Ok(counts)
}

/// Evaluate one index on a set of pair counts. Returns `Undefined` when the
/// index's denominator is zero; callers decide how to handle that.
pub fn measure(counts: &PairCounts, kind: DiversityKind) -> Result<f64, DiversityError> {
    let undefined = |reason: &str| DiversityError::Undefined {
        kind,
        reason: reason.to_string(),
    };
    let c11 = counts.c11 as f64;
    match kind {
        DiversityKind::Wallace1 => {
            if counts.c11 + counts.c10 == 0 {
                return Err(undefined("c11 + c10 = 0"));
            }
            Ok(c11 / (counts.c11 + counts.c10) as f64)
        }
        DiversityKind::Wallace2 => {
            if counts.c11 + counts.c01 == 0 {
                return Err(undefined("c11 + c01 = 0"));
            }
            Ok(c11 / (counts.c11 + counts.c01) as f64)
        }
        DiversityKind::FowlkesMallows => {
            let w1 = measure(counts, DiversityKind::Wallace1)?;
            let w2 = measure(counts, DiversityKind::Wallace2)?;
            Ok((w1 * w2).sqrt())
        }
        DiversityKind::Rand => {
            if counts.n < 2 {
                return Err(undefined("fewer than 2 points"));
            }
            Ok((counts.c11 + counts.c00) as f64 / counts.total_pairs() as f64)
        }
        DiversityKind::Jaccard => {
            let denom = counts.c11 + counts.c01 + counts.c10;
            if denom == 0 {
                return Err(undefined("c11 + c01 + c10 = 0"));
            }
            Ok(c11 / denom as f64)
        }
        DiversityKind::Mirkin => Ok(2.0 * (counts.c10 + counts.c01) as f64),
    }
}

/// Symmetric P x P matrix of one index over all partition pairs, computed
/// once before the search. Only the strict upper triangle is stored, so the
/// diagonal physically does not exist. Pairs where the index is undefined
/// are recorded as `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityMatrix {
    kind: DiversityKind,
    size: usize,
    n: u64,
    /// Upper triangle, row-major: (0,1), (0,2), .., (1,2), ..
    values: Vec<Option<f64>>,
}

impl DiversityMatrix {
    pub fn kind(&self) -> DiversityKind {
        self.kind
    }

    /// Number of partitions (P).
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn n_points(&self) -> u64 {
        self.n
    }

    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.size);
        // Offset of row i's block in the packed strict upper triangle.
        i * self.size - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Value for an off-diagonal pair; `None` when the index was undefined
    /// for that pair. Panics if `i == j` -- the diagonal is never readable.
    pub fn pair(&self, i: usize, j: usize) -> Option<f64> {
        assert!(i != j, "the diagonal of a diversity matrix is undefined");
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        self.values[self.index(lo, hi)]
    }

    /// CSV rendering: P rows by P columns, diagonal (and undefined pairs)
    /// left blank.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.size {
            let mut cells = Vec::with_capacity(self.size);
            for j in 0..self.size {
                if i == j {
                    cells.push(String::new());
                } else {
                    cells.push(match self.pair(i, j) {
                        Some(v) => format!("{v}"),
                        None => String::new(),
                    });
                }
            }
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Compute the full pairwise matrix for a pool of partitions.
pub fn pairwise_matrix(
    partitions: &[Partition],
    kind: DiversityKind,
) -> Result<DiversityMatrix, DiversityError> {
    if partitions.len() < 2 {
        return Err(DiversityError::Config(format!(
            "need at least 2 partitions, got {}",
            partitions.len()
        )));
    }
    let n = partitions[0].assignments.len();
    for (i, p) in partitions.iter().enumerate() {
        if p.assignments.len() != n {
            return Err(DiversityError::Pair {
                i: 0,
                j: i,
                source: Box::new(DiversityError::Shape {
                    left: n,
                    right: p.assignments.len(),
                }),
            });
        }
    }

    let size = partitions.len();
    let pairs: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| ((i + 1)..size).map(move |j| (i, j)))
        .collect();
    let values: Vec<Option<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let table =
                contingency(&partitions[i], &partitions[j]).expect("lengths verified above");
            match measure(&pair_counts(&table), kind) {
                Ok(v) => Some(v),
                Err(DiversityError::Undefined { .. }) => None,
                Err(e) => unreachable!("unexpected diversity error: {e}"),
            }
        })
        .collect();

    let undefined = values.iter().filter(|v| v.is_none()).count();
    if undefined > 0 {
        warn!("{undefined} partition pairs have undefined {kind:?} diversity");
    }

    Ok(DiversityMatrix {
        kind,
        size,
        n: n as u64,
        values,
    })
}

/// Mean pairwise diversity over the subspaces a genome selects. Pairs with
/// undefined values are excluded from the mean (with a warning); selecting
/// fewer than two subspaces is an error.
pub fn global_diversity(matrix: &DiversityMatrix, genome: &Genome) -> Result<f64, DiversityError> {
    if genome.len() != matrix.size() {
        return Err(DiversityError::Config(format!(
            "genome length {} does not match pool size {}",
            genome.len(),
            matrix.size()
        )));
    }
    let selected = genome.selected();
    if selected.len() < 2 {
        return Err(DiversityError::Config(format!(
            "need at least 2 selected subspaces, got {}",
            selected.len()
        )));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    let mut skipped = 0usize;
    for (a, &i) in selected.iter().enumerate() {
        for &j in &selected[(a + 1)..] {
            match matrix.pair(i, j) {
                Some(v) => {
                    sum += v;
                    count += 1;
                }
                None => skipped += 1,
            }
        }
    }
    if skipped > 0 {
        warn!("excluded {skipped} undefined pairs from the global diversity mean");
    }
    if count == 0 {
        return Err(DiversityError::Undefined {
            kind: matrix.kind(),
            reason: "every selected pair is undefined".into(),
        });
    }
    Ok(sum / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn partition_of(assignments: &[usize]) -> Partition {
        let k = assignments.iter().copied().max().map_or(1, |m| m + 1);
        Partition {
            assignments: assignments.to_vec(),
            k,
            requested_k: k,
            inertia: 0.0,
            centroids: vec![vec![0.0]; k],
        }
    }

    // The four-point worked example: one partition groups the first three
    // points and isolates the fourth; the other splits them as {0,1}, {2},
    // {3}.
    fn worked_example() -> (Partition, Partition) {
        (partition_of(&[0, 0, 0, 1]), partition_of(&[0, 0, 1, 2]))
    }

    #[test]
    fn worked_example_contingency() {
        let (pa, pb) = worked_example();
        let table = contingency(&pa, &pb).unwrap();
        assert_eq!(table.counts, vec![vec![2, 1, 0], vec![0, 0, 1]]);
        assert_eq!(table.n, 4);
    }

    #[test]
    fn identity_partitions_give_diagonal_table() {
        let p = partition_of(&[0, 1]);
        let table = contingency(&p, &p).unwrap();
        assert_eq!(table.counts, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn length_mismatch_is_shape_error() {
        let pa = partition_of(&[0, 1]);
        let pb = partition_of(&[0, 1, 1]);
        assert!(matches!(
            contingency(&pa, &pb),
            Err(DiversityError::Shape { left: 2, right: 3 })
        ));
        assert!(matches!(
            brute_force_pair_counts(&pa, &pb),
            Err(DiversityError::Shape { .. })
        ));
    }

    #[test]
    fn worked_example_pair_counts() {
        let (pa, pb) = worked_example();
        let counts = pair_counts(&contingency(&pa, &pb).unwrap());
        assert_eq!(
            (counts.c11, counts.c10, counts.c01, counts.c00),
            (1, 2, 0, 3)
        );
        let brute = brute_force_pair_counts(&pa, &pb).unwrap();
        assert_eq!(counts, brute);
    }

    #[test]
    fn single_cluster_pair_counts() {
        let p = partition_of(&[0; 7]);
        let counts = pair_counts(&contingency(&p, &p).unwrap());
        assert_eq!(counts.c11, 21); // 7 * 6 / 2
        assert_eq!((counts.c10, counts.c01, counts.c00), (0, 0, 0));
    }

    #[test]
    fn identical_partitions_have_no_disagreement() {
        let p = partition_of(&[0, 1, 2, 0, 1, 2, 1]);
        let brute = brute_force_pair_counts(&p, &p).unwrap();
        assert_eq!(brute.c10, 0);
        assert_eq!(brute.c01, 0);
    }

    #[test]
    fn worked_example_measures() {
        let (pa, pb) = worked_example();
        let counts = pair_counts(&contingency(&pa, &pb).unwrap());
        let close = |kind, expected: f64| {
            let got = measure(&counts, kind).unwrap();
            assert!(
                (got - expected).abs() < 1e-12,
                "{kind:?}: got {got}, expected {expected}"
            );
        };
        close(DiversityKind::Wallace1, 1.0 / 3.0);
        close(DiversityKind::Wallace2, 1.0);
        close(DiversityKind::FowlkesMallows, (1.0f64 / 3.0).sqrt());
        close(DiversityKind::Rand, 2.0 / 3.0);
        close(DiversityKind::Jaccard, 1.0 / 3.0);
        close(DiversityKind::Mirkin, 4.0);
    }

    #[test]
    fn identical_partitions_measure_as_agreement() {
        let p = partition_of(&[0, 1, 0, 2, 1]);
        let counts = pair_counts(&contingency(&p, &p).unwrap());
        for kind in [
            DiversityKind::Wallace1,
            DiversityKind::Wallace2,
            DiversityKind::FowlkesMallows,
            DiversityKind::Rand,
            DiversityKind::Jaccard,
        ] {
            assert_eq!(measure(&counts, kind).unwrap(), 1.0);
        }
        assert_eq!(measure(&counts, DiversityKind::Mirkin).unwrap(), 0.0);
    }

    #[test]
    fn all_singletons_make_wallace_undefined() {
        let p = partition_of(&[0, 1, 2, 3]);
        let counts = pair_counts(&contingency(&p, &p).unwrap());
        assert!(matches!(
            measure(&counts, DiversityKind::Wallace1),
            Err(DiversityError::Undefined { .. })
        ));
    }

    #[test]
    fn orientations_follow_kind() {
        for kind in DiversityKind::ALL {
            let expected = if kind == DiversityKind::Mirkin {
                Orientation::Maximize
            } else {
                Orientation::Minimize
            };
            assert_eq!(kind.orientation(), expected);
        }
    }

    #[test]
    fn matrix_of_identical_partitions() {
        let p = partition_of(&[0, 0, 1, 1]);
        let m = pairwise_matrix(&[p.clone(), p.clone(), p], DiversityKind::Rand).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(m.pair(i, j), Some(1.0));
                }
            }
        }
    }

    #[test]
    fn ten_partition_matrix_holds_forty_five_pairs() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let partitions: Vec<Partition> = (0..10)
            .map(|_| {
                let a: Vec<usize> = (0..30).map(|_| rng.random_range(0..3)).collect();
                partition_of(&a)
            })
            .collect();
        let m = pairwise_matrix(&partitions, DiversityKind::Rand).unwrap();
        let mut defined = 0;
        for i in 0..10 {
            for j in (i + 1)..10 {
                assert_eq!(m.pair(i, j), m.pair(j, i));
                if m.pair(i, j).is_some() {
                    defined += 1;
                }
            }
        }
        assert_eq!(defined, 45);
    }

    #[test]
    #[should_panic(expected = "diagonal")]
    fn matrix_diagonal_is_unreadable() {
        let p = partition_of(&[0, 0, 1, 1]);
        let m = pairwise_matrix(&[p.clone(), p], DiversityKind::Rand).unwrap();
        let _ = m.pair(1, 1);
    }

    #[test]
    fn matrix_csv_has_blank_diagonal() {
        let p = partition_of(&[0, 0, 1, 1]);
        let q = partition_of(&[0, 1, 0, 1]);
        let m = pairwise_matrix(&[p, q], DiversityKind::Rand).unwrap();
        let csv = m.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with(','));
        assert!(lines[1].ends_with(','));
    }

    #[test]
    fn global_diversity_is_the_pair_mean() {
        // Three partitions engineered so we can place the three pair values.
        let p0 = partition_of(&[0, 0, 1, 1, 2, 2]);
        let p1 = partition_of(&[0, 1, 0, 1, 2, 2]);
        let p2 = partition_of(&[0, 1, 2, 0, 1, 2]);
        let m = pairwise_matrix(&[p0, p1, p2], DiversityKind::Rand).unwrap();
        let genome = Genome::new(vec![true, true, true]);
        let expected =
            (m.pair(0, 1).unwrap() + m.pair(0, 2).unwrap() + m.pair(1, 2).unwrap()) / 3.0;
        let got = global_diversity(&m, &genome).unwrap();
        assert!((got - expected).abs() < 1e-15);

        // A two-subspace genome is just that single pair entry.
        let pair_only = Genome::new(vec![true, false, true]);
        assert_eq!(
            global_diversity(&m, &pair_only).unwrap(),
            m.pair(0, 2).unwrap()
        );

        // Fewer than two selections is a configuration error.
        let lone = Genome::new(vec![true, false, false]);
        assert!(matches!(
            global_diversity(&m, &lone),
            Err(DiversityError::Config(_))
        ));
    }

    fn random_partition_pair(n: usize, ka: usize, kb: usize, seed: u64) -> (Partition, Partition) {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..ka)).collect();
        let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..kb)).collect();
        (partition_of(&a), partition_of(&b))
    }

    #[test]
    fn fast_path_matches_brute_force_on_random_pairs() {
        for seed in 0..50 {
            let (pa, pb) = random_partition_pair(50, 4, 6, seed);
            let fast = pair_counts(&contingency(&pa, &pb).unwrap());
            let brute = brute_force_pair_counts(&pa, &pb).unwrap();
            assert_eq!(fast, brute, "seed {seed}");
        }
    }

    proptest! {
        #[test]
        fn pair_count_identities(
            n in 2usize..60,
            ka in 1usize..8,
            kb in 1usize..8,
            seed in 0u64..10_000,
        ) {
            let (pa, pb) = random_partition_pair(n, ka, kb, seed);
            let counts = pair_counts(&contingency(&pa, &pb).unwrap());
            let brute = brute_force_pair_counts(&pa, &pb).unwrap();
            prop_assert_eq!(counts, brute);
            prop_assert_eq!(
                counts.c11 + counts.c00 + counts.c10 + counts.c01,
                (n * (n - 1) / 2) as u64
            );

            // Mirkin's metric and the Rand index are linked exactly.
            let mirkin = measure(&counts, DiversityKind::Mirkin).unwrap();
            let rand = measure(&counts, DiversityKind::Rand).unwrap();
            let linked = (n * (n - 1)) as f64 * (1.0 - rand);
            prop_assert!((mirkin - linked).abs() < 1e-9);

            // Bounded ranges whenever defined.
            for kind in [
                DiversityKind::Wallace1,
                DiversityKind::Wallace2,
                DiversityKind::FowlkesMallows,
                DiversityKind::Rand,
                DiversityKind::Jaccard,
            ] {
                if let Ok(v) = measure(&counts, kind) {
                    prop_assert!((0.0..=1.0).contains(&v), "{:?} = {}", kind, v);
                }
            }
            prop_assert!((0.0..=(n * (n - 1)) as f64).contains(&mirkin));
        }

        #[test]
        fn measures_are_symmetric_and_relabel_invariant(
            n in 2usize..40,
            ka in 1usize..6,
            kb in 1usize..6,
            seed in 0u64..10_000,
        ) {
            let (pa, pb) = random_partition_pair(n, ka, kb, seed);
            let fwd = pair_counts(&contingency(&pa, &pb).unwrap());
            let rev = pair_counts(&contingency(&pb, &pa).unwrap());

            // Swapping the arguments swaps the roles of c10 and c01.
            prop_assert_eq!(fwd.c11, rev.c11);
            prop_assert_eq!(fwd.c00, rev.c00);
            prop_assert_eq!(fwd.c10, rev.c01);
            prop_assert_eq!(fwd.c01, rev.c10);

            // FM, Rand, Jaccard and Mirkin are symmetric outright; the two
            // Wallace indices swap into each other.
            for kind in [
                DiversityKind::FowlkesMallows,
                DiversityKind::Rand,
                DiversityKind::Jaccard,
                DiversityKind::Mirkin,
            ] {
                match (measure(&fwd, kind), measure(&rev, kind)) {
                    (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-12),
                    (Err(_), Err(_)) => {}
                    other => prop_assert!(false, "asymmetric definedness: {:?}", other),
                }
            }
            if let (Ok(a), Ok(b)) = (
                measure(&fwd, DiversityKind::Wallace1),
                measure(&rev, DiversityKind::Wallace2),
            ) {
                prop_assert!((a - b).abs() < 1e-12);
            }

            // Relabeling clusters (reversing ids) changes nothing.
            let relabeled: Vec<usize> =
                pa.assignments.iter().map(|&a| pa.k - 1 - a).collect();
            let pr = partition_of(&relabeled);
            let relab = pair_counts(&contingency(&pr, &pb).unwrap());
            prop_assert_eq!(fwd, relab);
        }
    }
}
