// Indexed loops mirror the assignment/update arithmetic.
#![allow(clippy::needless_range_loop)]

//! K-Means partitions per feature subspace, with the cluster count chosen
//! once per problem by the Xie-Beni validity index.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::Dataset;
use crate::rng::derive_seed;
use crate::subspace::{project, SubspacePool};

pub const DEFAULT_MAX_ITER: usize = 300;
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate clustering: {0}")]
    Degenerate(String),
    #[error("subspace {index}: {source}")]
    Subspace {
        index: usize,
        #[source]
        source: Box<ClusterError>,
    },
    #[error(transparent)]
    Projection(#[from] crate::subspace::SubspaceError),
}

/// A hard cluster assignment of N points into `k` clusters.
///
/// `k` is the effective cluster count: every id in `[0, k)` is referenced by
/// at least one point. When the data has fewer distinct points than the
/// requested count, `k` shrinks below `requested_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub assignments: Vec<usize>,
    pub k: usize,
    pub requested_k: usize,
    pub inertia: f64,
    pub centroids: Vec<Vec<f64>>,
}

impl Partition {
    pub fn n_points(&self) -> usize {
        self.assignments.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("partition serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ClusterError> {
        serde_json::from_str(text)
            .map_err(|e| ClusterError::Config(format!("invalid partition JSON: {e}")))
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, c) in centroids.iter().enumerate() {
        let d = sq_dist(point, c);
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    (best, best_d)
}

/// k-means++ seeding: first centroid uniform, the rest sampled with
/// probability proportional to squared distance from the chosen set.
fn init_centroids(data: &Dataset, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = data.n_rows();
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    let first = rng.random_range(0..n);
    centroids.push(data.row(first).to_vec());

    let mut dists: Vec<f64> = (0..n)
        .map(|i| sq_dist(data.row(i), &centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: f64 = dists.iter().sum();
        let chosen = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &d) in dists.iter().enumerate() {
                target -= d;
                if target <= 0.0 {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            // All remaining points coincide with a centroid.
            rng.random_range(0..n)
        };
        centroids.push(data.row(chosen).to_vec());
        for i in 0..n {
            let d = sq_dist(data.row(i), centroids.last().unwrap());
            if d < dists[i] {
                dists[i] = d;
            }
        }
    }
    centroids
}

/// Lloyd's algorithm with k-means++ seeding, deterministic under `seed`.
///
/// Terminates when the largest squared centroid shift drops below `tol` or
/// after `max_iter` iterations. An emptied cluster is re-seeded to the point
/// farthest from its nearest centroid; if the data has fewer distinct points
/// than `k`, the returned partition's `k` shrinks.
pub fn kmeans(
    data: &Dataset,
    k: usize,
    seed: u64,
    max_iter: usize,
    tol: f64,
) -> Result<Partition, ClusterError> {
    let n = data.n_rows();
    if k == 0 || k > n {
        return Err(ClusterError::Config(format!(
            "k must be in [1, {n}], got {k}"
        )));
    }
    if max_iter == 0 {
        return Err(ClusterError::Config("max_iter must be >= 1".into()));
    }
    if tol < 0.0 {
        return Err(ClusterError::Config("tol must be nonnegative".into()));
    }

    let f = data.n_features();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = init_centroids(data, k, &mut rng);
    let mut assignments = vec![0usize; n];
    let mut inertia = f64::INFINITY;

    for _ in 0..max_iter {
        // Assignment step; ties go to the lowest cluster index.
        let mut new_inertia = 0.0;
        for i in 0..n {
            let (j, d) = nearest(data.row(i), &centroids);
            assignments[i] = j;
            new_inertia += d;
        }
        debug_assert!(
            new_inertia <= inertia + 1e-9 * inertia.max(1.0),
            "inertia increased: {inertia} -> {new_inertia}"
        );
        inertia = new_inertia;

        // Update step.
        let mut sums = vec![vec![0.0; f]; k];
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[assignments[i]] += 1;
            for (s, v) in sums[assignments[i]].iter_mut().zip(data.row(i)) {
                *s += v;
            }
        }
        let mut shift: f64 = 0.0;
        let mut any_reseeded = false;
        for j in 0..k {
            if counts[j] == 0 {
                // Re-seed to the point farthest from its nearest centroid.
                let far = (0..n)
                    .map(|i| (i, nearest(data.row(i), &centroids).1))
                    .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(b.0.cmp(&a.0)))
                    .map(|(i, _)| i)
                    .unwrap();
                centroids[j] = data.row(far).to_vec();
                any_reseeded = true;
            } else {
                let mut new_c = sums[j].clone();
                for v in &mut new_c {
                    *v /= counts[j] as f64;
                }
                shift = shift.max(sq_dist(&new_c, &centroids[j]));
                centroids[j] = new_c;
            }
        }
        if !any_reseeded && shift < tol {
            break;
        }
    }

    // Final assignment against the settled centroids.
    inertia = 0.0;
    for i in 0..n {
        let (j, d) = nearest(data.row(i), &centroids);
        assignments[i] = j;
        inertia += d;
    }

    // Compact away clusters that ended up empty (fewer distinct points than k).
    let mut counts = vec![0usize; k];
    for &a in &assignments {
        counts[a] += 1;
    }
    let mut remap = vec![usize::MAX; k];
    let mut kept = Vec::new();
    let mut next = 0;
    for j in 0..k {
        if counts[j] > 0 {
            remap[j] = next;
            next += 1;
            kept.push(centroids[j].clone());
        }
    }
    for a in &mut assignments {
        *a = remap[*a];
    }
    if next < k {
        log::warn!(
            "degenerate data: {} duplicate-point clusters collapsed, k {} -> {}",
            k - next,
            k,
            next
        );
    }

    Ok(Partition {
        assignments,
        k: next,
        requested_k: k,
        inertia,
        centroids: kept,
    })
}

/// Xie-Beni index: inertia / (N * min squared centroid separation).
/// Lower is better.
pub fn xie_beni(data: &Dataset, partition: &Partition) -> Result<f64, ClusterError> {
    if partition.k < 2 {
        return Err(ClusterError::Config(format!(
            "Xie-Beni needs at least 2 clusters, got {}",
            partition.k
        )));
    }
    if partition.assignments.len() != data.n_rows() {
        return Err(ClusterError::Config(format!(
            "partition covers {} points, dataset has {}",
            partition.assignments.len(),
            data.n_rows()
        )));
    }
    let mut min_sep = f64::INFINITY;
    for i in 0..partition.centroids.len() {
        for j in (i + 1)..partition.centroids.len() {
            min_sep = min_sep.min(sq_dist(&partition.centroids[i], &partition.centroids[j]));
        }
    }
    if min_sep <= 0.0 {
        return Err(ClusterError::Degenerate(
            "all centroids coincide; Xie-Beni undefined".into(),
        ));
    }
    Ok(partition.inertia / (data.n_rows() as f64 * min_sep))
}

/// Pick the cluster count in `[k_min, k_max]` minimizing the Xie-Beni index
/// of a k-means run on the full feature set. Ties break toward smaller `k`.
pub fn select_k(
    data: &Dataset,
    k_min: usize,
    k_max: usize,
    seed: u64,
) -> Result<usize, ClusterError> {
    let n = data.n_rows();
    if k_min < 2 || k_min > k_max || k_max + 1 > n {
        return Err(ClusterError::Config(format!(
            "need 2 <= k_min <= k_max <= {} (N-1), got [{k_min}, {k_max}]",
            n.saturating_sub(1)
        )));
    }
    let mut best: Option<(f64, usize)> = None;
    for k in k_min..=k_max {
        let partition = kmeans(
            data,
            k,
            derive_seed(seed, k as u64),
            DEFAULT_MAX_ITER,
            DEFAULT_TOL,
        )?;
        let xb = xie_beni(data, &partition)?;
        match best {
            Some((best_xb, _)) if xb >= best_xb => {}
            _ => best = Some((xb, k)),
        }
    }
    Ok(best.expect("range is non-empty").1)
}

/// Seed for one subspace's k-means run, derived from the subspace content so
/// duplicate subspaces in a pool always produce identical partitions.
fn subspace_seed(seed: u64, subspace: &crate::subspace::Subspace) -> u64 {
    let mut h = derive_seed(seed, 0x5b5);
    for &ix in subspace.indices() {
        h = derive_seed(h, ix as u64 + 1);
    }
    h
}

/// One partition per pool subspace, clustered with per-subspace derived seeds
/// so the result is identical regardless of evaluation order.
pub fn cluster_pool(
    dataset: &Dataset,
    pool: &SubspacePool,
    k: usize,
    seed: u64,
) -> Result<Vec<Partition>, ClusterError> {
    if pool.is_empty() {
        return Err(ClusterError::Config("subspace pool is empty".into()));
    }
    let results: Vec<Result<Partition, ClusterError>> = pool
        .subspaces
        .par_iter()
        .enumerate()
        .map(|(i, subspace)| {
            let projected = project(dataset, subspace)?;
            kmeans(
                &projected,
                k,
                subspace_seed(seed, subspace),
                DEFAULT_MAX_ITER,
                DEFAULT_TOL,
            )
            .map_err(|source| ClusterError::Subspace {
                index: i,
                source: Box::new(source),
            })
        })
        .collect();
    results.into_iter().collect()
}
