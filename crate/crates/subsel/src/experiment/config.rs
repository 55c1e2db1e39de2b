//! Experiment configuration: defaults, a flat `key = value` config file
//! format, and validation.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classifiers::Algorithm;
use crate::diversity::DiversityKind;
use crate::search::GaConfig;

use super::ExperimentError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMode {
    /// Diversity-driven selection; classifiers are trained only after the
    /// search picked the subspaces.
    Free,
    /// Classic selection over a pool of already-trained classifiers.
    Based,
}

impl SelectionMode {
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        match text.to_ascii_lowercase().as_str() {
            "free" => Ok(SelectionMode::Free),
            "based" => Ok(SelectionMode::Based),
            other => Err(ExperimentError::Config(format!(
                "unknown mode '{other}' (expected free|based)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchKind {
    Ga,
    Moga,
}

impl SearchKind {
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        match text.to_ascii_lowercase().as_str() {
            "ga" => Ok(SearchKind::Ga),
            "moga" | "nsga2" => Ok(SearchKind::Moga),
            other => Err(ExperimentError::Config(format!(
                "unknown search '{other}' (expected ga|moga)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorObjective {
    Me,
    Mve,
}

impl ErrorObjective {
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        match text.to_ascii_lowercase().as_str() {
            "me" => Ok(ErrorObjective::Me),
            "mve" => Ok(ErrorObjective::Mve),
            other => Err(ExperimentError::Config(format!(
                "unknown objective '{other}' (expected me|mve)"
            ))),
        }
    }
}

/// Full description of one experiment. Field defaults follow the UCI-scale
/// protocol (10-subspace pool, population 32, 500 generations, 30
/// replications).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Training CSV; when `test_data` is absent, a stratified test portion is
    /// carved out of this file first.
    pub data: Option<PathBuf>,
    pub test_data: Option<PathBuf>,
    pub label_column: String,
    pub split: [f64; 3],
    /// Fraction carved out as the test set when no separate test file is
    /// given.
    pub test_fraction: f64,
    pub pool_size: usize,
    pub cardinality: usize,
    /// Fixed cluster count; when absent, the Xie-Beni index picks one in
    /// `[k_min, k_max]`.
    pub clusters: Option<usize>,
    pub k_min: usize,
    pub k_max: usize,
    pub diversity: DiversityKind,
    pub mode: SelectionMode,
    pub search: SearchKind,
    pub objective: ErrorObjective,
    pub classifier: Algorithm,
    pub knn_k: usize,
    pub parzen_bandwidth: Option<f64>,
    pub population_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: Option<f64>,
    pub min_size: usize,
    pub elitism: usize,
    pub replications: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            data: None,
            test_data: None,
            label_column: "label".into(),
            split: [0.7, 0.15, 0.15],
            test_fraction: 0.5,
            pool_size: 10,
            cardinality: 0,
            clusters: None,
            k_min: 2,
            k_max: 10,
            diversity: DiversityKind::Mirkin,
            mode: SelectionMode::Free,
            search: SearchKind::Moga,
            objective: ErrorObjective::Mve,
            classifier: Algorithm::Knn,
            knn_k: 1,
            parzen_bandwidth: None,
            population_size: 32,
            generations: 500,
            crossover_prob: 0.5,
            mutation_prob: None,
            min_size: 3,
            elitism: 1,
            replications: 30,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    /// Parse a flat `key = value` config file. Blank lines and `#` comments
    /// are ignored; unknown keys are errors.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| {
            ExperimentError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_str(&text)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self, ExperimentError> {
        let mut config = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ExperimentError::Config(format!(
                    "config line {}: expected 'key = value', got '{raw}'",
                    idx + 1
                ))
            })?;
            config.set(key.trim(), value.trim())?;
        }
        Ok(config)
    }

    /// Apply a single key/value pair (also used for CLI overrides).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ExperimentError> {
        let bad_num = |key: &str, value: &str| {
            ExperimentError::Config(format!("invalid number for {key}: '{value}'"))
        };
        match key {
            "data" => self.data = Some(PathBuf::from(value)),
            "test_data" => self.test_data = Some(PathBuf::from(value)),
            "label_column" => self.label_column = value.to_string(),
            "split" => self.split = parse_split(value)?,
            "test_fraction" => {
                self.test_fraction = value.parse().map_err(|_| bad_num(key, value))?
            }
            "pool_size" => self.pool_size = value.parse().map_err(|_| bad_num(key, value))?,
            "cardinality" => self.cardinality = value.parse().map_err(|_| bad_num(key, value))?,
            "clusters" => self.clusters = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "k_min" => self.k_min = value.parse().map_err(|_| bad_num(key, value))?,
            "k_max" => self.k_max = value.parse().map_err(|_| bad_num(key, value))?,
            "diversity" => self.diversity = DiversityKind::parse(value)?,
            "mode" => self.mode = SelectionMode::parse(value)?,
            "search" => self.search = SearchKind::parse(value)?,
            "objective" => self.objective = ErrorObjective::parse(value)?,
            "classifier" => self.classifier = Algorithm::parse(value)?,
            "knn_k" => self.knn_k = value.parse().map_err(|_| bad_num(key, value))?,
            "parzen_bandwidth" => {
                self.parzen_bandwidth = if value.is_empty() {
                    None
                } else {
                    Some(value.parse().map_err(|_| bad_num(key, value))?)
                }
            }
            "population_size" => {
                self.population_size = value.parse().map_err(|_| bad_num(key, value))?
            }
            "generations" => self.generations = value.parse().map_err(|_| bad_num(key, value))?,
            "crossover_prob" => {
                self.crossover_prob = value.parse().map_err(|_| bad_num(key, value))?
            }
            "mutation_prob" => {
                self.mutation_prob = if value.is_empty() {
                    None
                } else {
                    Some(value.parse().map_err(|_| bad_num(key, value))?)
                }
            }
            "min_size" => self.min_size = value.parse().map_err(|_| bad_num(key, value))?,
            "elitism" => self.elitism = value.parse().map_err(|_| bad_num(key, value))?,
            "replications" => self.replications = value.parse().map_err(|_| bad_num(key, value))?,
            "seed" => self.seed = value.parse().map_err(|_| bad_num(key, value))?,
            other => {
                return Err(ExperimentError::Config(format!(
                    "unknown config key '{other}'"
                )))
            }
        }
        Ok(())
    }

    /// GA parameters for one replication.
    pub fn ga_config(&self, seed: u64) -> GaConfig {
        GaConfig {
            population_size: self.population_size,
            generations: self.generations,
            crossover_prob: self.crossover_prob,
            mutation_prob: self.mutation_prob,
            min_size: self.min_size,
            elitism_count: self.elitism,
            seed,
        }
    }

    /// Structural checks that do not need the data loaded yet.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.replications == 0 {
            return Err(ExperimentError::Config("replications must be >= 1".into()));
        }
        if self.cardinality == 0 {
            return Err(ExperimentError::Config(
                "cardinality must be set (features per subspace)".into(),
            ));
        }
        if self.pool_size < 3 {
            return Err(ExperimentError::Config("pool_size must be >= 3".into()));
        }
        if let Some(k) = self.clusters {
            if k < 1 {
                return Err(ExperimentError::Config("clusters must be >= 1".into()));
            }
        } else if self.k_min < 2 || self.k_min > self.k_max {
            return Err(ExperimentError::Config(format!(
                "need 2 <= k_min <= k_max, got [{}, {}]",
                self.k_min, self.k_max
            )));
        }
        Ok(())
    }
}

fn parse_split(value: &str) -> Result<[f64; 3], ExperimentError> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(ExperimentError::Config(format!(
            "split needs three comma-separated fractions, got '{value}'"
        )));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| ExperimentError::Config(format!("invalid split fraction '{part}'")))?;
    }
    Ok(out)
}
