//! Random feature subspaces: pool generation, dataset projection, and the
//! bit-vector genome that selects a subset of the pool.

use std::collections::HashSet;
use std::fmt;

use log::warn;
use rand::seq::index;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::Dataset;

#[derive(Debug, Error)]
pub enum SubspaceError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("feature index {index} out of range for {total} features")]
    Index { index: usize, total: usize },
}

/// A sorted set of distinct feature indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subspace {
    feature_indices: Vec<usize>,
}

impl Subspace {
    pub fn new(mut feature_indices: Vec<usize>) -> Result<Self, SubspaceError> {
        feature_indices.sort_unstable();
        let before = feature_indices.len();
        feature_indices.dedup();
        if feature_indices.len() != before {
            return Err(SubspaceError::Config(
                "subspace indices must be distinct".into(),
            ));
        }
        if feature_indices.is_empty() {
            return Err(SubspaceError::Config("subspace cannot be empty".into()));
        }
        Ok(Self { feature_indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.feature_indices
    }

    pub fn len(&self) -> usize {
        self.feature_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.feature_indices.is_empty()
    }
}

/// A pool of same-cardinality subspaces drawn from `total_features` features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspacePool {
    pub total_features: usize,
    pub cardinality: usize,
    pub seed: u64,
    pub subspaces: Vec<Subspace>,
}

impl SubspacePool {
    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pool serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SubspaceError> {
        let pool: SubspacePool = serde_json::from_str(text)
            .map_err(|e| SubspaceError::Config(format!("invalid pool JSON: {e}")))?;
        for s in &pool.subspaces {
            if s.len() != pool.cardinality {
                return Err(SubspaceError::Config(format!(
                    "subspace of size {} in a pool of cardinality {}",
                    s.len(),
                    pool.cardinality
                )));
            }
            if let Some(&max) = s.indices().last() {
                if max >= pool.total_features {
                    return Err(SubspaceError::Index {
                        index: max,
                        total: pool.total_features,
                    });
                }
            }
        }
        Ok(pool)
    }
}

/// Draw `pool_size` subspaces of `cardinality` distinct features each,
/// uniformly and without replacement within a subspace. Duplicate subspaces
/// across the pool are permitted but warned about.
pub fn generate_pool(
    total_features: usize,
    cardinality: usize,
    pool_size: usize,
    seed: u64,
) -> Result<SubspacePool, SubspaceError> {
    if cardinality == 0 || cardinality > total_features {
        return Err(SubspaceError::Config(format!(
            "cardinality must be in [1, {total_features}], got {cardinality}"
        )));
    }
    if pool_size < 3 {
        return Err(SubspaceError::Config(format!(
            "pool size must be at least 3, got {pool_size}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut subspaces = Vec::with_capacity(pool_size);
    for _ in 0..pool_size {
        let draw = index::sample(&mut rng, total_features, cardinality).into_vec();
        subspaces.push(Subspace::new(draw).expect("sampled indices are distinct"));
    }

    let distinct: HashSet<&Subspace> = subspaces.iter().collect();
    if distinct.len() != subspaces.len() {
        warn!(
            "pool contains {} duplicate subspaces",
            subspaces.len() - distinct.len()
        );
    }

    Ok(SubspacePool {
        total_features,
        cardinality,
        seed,
        subspaces,
    })
}

/// Column-slice a dataset onto a subspace, preserving rows and labels.
pub fn project(dataset: &Dataset, subspace: &Subspace) -> Result<Dataset, SubspaceError> {
    let total = dataset.n_features();
    if let Some(&max) = subspace.indices().last() {
        if max >= total {
            return Err(SubspaceError::Index { index: max, total });
        }
    }
    let n = dataset.n_rows();
    let f = subspace.len();
    let mut samples = Vec::with_capacity(n * f);
    for row in 0..n {
        let full = dataset.row(row);
        for &col in subspace.indices() {
            samples.push(full[col]);
        }
    }
    let feature_names = subspace
        .indices()
        .iter()
        .map(|&c| dataset.feature_names()[c].clone())
        .collect();
    let projected = Dataset::new(
        samples,
        f,
        dataset.labels().to_vec(),
        feature_names,
        dataset.class_count(),
    )
    .expect("projection preserves dataset invariants");
    Ok(match dataset.role() {
        Some(role) => projected.with_role(role),
        None => projected,
    })
}

/// A bit-vector over the pool: bit `i` set means subspace `i` is selected.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Genome {
    bits: Vec<bool>,
}

impl Genome {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Indices of the selected subspaces, ascending.
    pub fn selected(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}
