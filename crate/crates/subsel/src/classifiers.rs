// Indexed loops mirror the matrix factorization arithmetic.
#![allow(clippy::needless_range_loop)]

//! Per-subspace classifiers (KNN, quadratic discriminant, Parzen window),
//! majority-voting fusion, and the ME / MVE / oracle ensemble statistics.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::Dataset;
use crate::subspace::{project, Subspace};

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("training failed: {0}")]
    Train(String),
    #[error(transparent)]
    Index(#[from] crate::subspace::SubspaceError),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Knn,
    Qdc,
    Parzen,
}

impl Algorithm {
    pub fn parse(text: &str) -> Result<Self, ClassifierError> {
        match text.to_ascii_lowercase().as_str() {
            "knn" => Ok(Algorithm::Knn),
            "qdc" => Ok(Algorithm::Qdc),
            "parzen" | "pwc" => Ok(Algorithm::Parzen),
            other => Err(ClassifierError::Train(format!(
                "unknown classifier algorithm '{other}'"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Knn => "knn",
            Algorithm::Qdc => "qdc",
            Algorithm::Parzen => "parzen",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierParams {
    /// Neighbor count for KNN.
    pub knn_k: usize,
    /// Kernel bandwidth for Parzen windows; `None` picks a Silverman-style
    /// value from the training data.
    pub parzen_bandwidth: Option<f64>,
}

impl Default for ClassifierParams {
    fn default() -> Self {
        Self {
            knn_k: 1,
            parzen_bandwidth: None,
        }
    }
}

static TRAININGS: AtomicU64 = AtomicU64::new(0);

/// Number of classifier fits performed by this process. The classifier-free
/// pipeline asserts this does not move during a search.
pub fn training_count() -> u64 {
    TRAININGS.load(Ordering::Relaxed)
}

#[derive(Debug, Clone)]
struct KnnModel {
    points: Vec<f64>, // row-major over the projected features
    labels: Vec<usize>,
    k: usize,
}

#[derive(Debug, Clone)]
struct QdcClass {
    mean: Vec<f64>,
    /// Lower Cholesky factor of the (regularized) class covariance.
    chol: Vec<f64>,
    log_det: f64,
    log_prior: f64,
}

#[derive(Debug, Clone)]
struct QdcModel {
    classes: Vec<QdcClass>,
}

#[derive(Debug, Clone)]
struct ParzenModel {
    points: Vec<f64>,
    labels: Vec<usize>,
    bandwidth: f64,
}

#[derive(Debug, Clone)]
enum Model {
    Knn(KnnModel),
    Qdc(QdcModel),
    Parzen(ParzenModel),
}

/// A classifier fitted on one subspace's projection of the training data.
/// Prediction projects incoming rows onto the same subspace.
#[derive(Debug, Clone)]
pub struct TrainedClassifier {
    algorithm: Algorithm,
    subspace: Subspace,
    class_count: usize,
    n_features: usize,
    model: Model,
}

impl TrainedClassifier {
    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    /// Crisp class predictions for every row of `data` (full feature space).
    pub fn predict(&self, data: &Dataset) -> Result<Vec<usize>, ClassifierError> {
        let projected = project(data, &self.subspace)?;
        if projected.n_features() != self.n_features {
            return Err(ClassifierError::Shape(format!(
                "model expects {} features, got {}",
                self.n_features,
                projected.n_features()
            )));
        }
        Ok((0..projected.n_rows())
            .map(|i| self.predict_row(projected.row(i)))
            .collect())
    }

    fn predict_row(&self, x: &[f64]) -> usize {
        match &self.model {
            Model::Knn(m) => predict_knn(m, x),
            Model::Qdc(m) => predict_qdc(m, x),
            Model::Parzen(m) => predict_parzen(m, x, self.class_count),
        }
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Fit one classifier on the projection of `train_data` onto `subspace`.
pub fn train(
    algorithm: Algorithm,
    train_data: &Dataset,
    subspace: &Subspace,
    params: &ClassifierParams,
) -> Result<TrainedClassifier, ClassifierError> {
    let data = project(train_data, subspace)?;
    if data.is_empty() {
        return Err(ClassifierError::Train("training data is empty".into()));
    }
    let model = match algorithm {
        Algorithm::Knn => {
            if params.knn_k == 0 {
                return Err(ClassifierError::Train("knn_k must be >= 1".into()));
            }
            Model::Knn(fit_knn(&data, params.knn_k))
        }
        Algorithm::Qdc => Model::Qdc(fit_qdc(&data)?),
        Algorithm::Parzen => Model::Parzen(fit_parzen(&data, params.parzen_bandwidth)?),
    };
    TRAININGS.fetch_add(1, Ordering::Relaxed);
    Ok(TrainedClassifier {
        algorithm,
        subspace: subspace.clone(),
        class_count: train_data.class_count(),
        n_features: data.n_features(),
        model,
    })
}

fn fit_knn(data: &Dataset, k: usize) -> KnnModel {
    let mut points = Vec::with_capacity(data.n_rows() * data.n_features());
    for i in 0..data.n_rows() {
        points.extend_from_slice(data.row(i));
    }
    KnnModel {
        points,
        labels: data.labels().to_vec(),
        k,
    }
}

fn predict_knn(model: &KnnModel, x: &[f64]) -> usize {
    let f = x.len();
    let n = model.labels.len();
    let mut dist: Vec<(f64, usize)> = (0..n)
        .map(|i| (sq_dist(&model.points[i * f..(i + 1) * f], x), i))
        .collect();
    // Ties on distance resolve by training index for determinism.
    dist.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let k = model.k.min(n);
    let mut votes = std::collections::HashMap::new();
    for &(_, i) in dist.iter().take(k) {
        *votes.entry(model.labels[i]).or_insert(0usize) += 1;
    }
    votes
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(label, _)| label)
        .expect("k >= 1")
}

/// In-place lower Cholesky factorization; `None` when the matrix is not
/// positive definite.
fn cholesky(matrix: &[f64], dim: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let mut sum = matrix[i * dim + j];
            for k in 0..j {
                sum -= l[i * dim + k] * l[j * dim + k];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return None;
                }
                l[i * dim + i] = sum.sqrt();
            } else {
                l[i * dim + j] = sum / l[j * dim + j];
            }
        }
    }
    Some(l)
}

fn fit_qdc(data: &Dataset) -> Result<QdcModel, ClassifierError> {
    let f = data.n_features();
    let n = data.n_rows();
    let mut classes = Vec::with_capacity(data.class_count());
    for class in 0..data.class_count() {
        let rows: Vec<usize> = (0..n).filter(|&i| data.labels()[i] == class).collect();
        if rows.is_empty() {
            return Err(ClassifierError::Train(format!(
                "class {class} has no training samples"
            )));
        }
        let nc = rows.len() as f64;
        let mut mean = vec![0.0; f];
        for &i in &rows {
            for (m, v) in mean.iter_mut().zip(data.row(i)) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= nc;
        }
        let mut cov = vec![0.0; f * f];
        for &i in &rows {
            let row = data.row(i);
            for a in 0..f {
                let da = row[a] - mean[a];
                for b in 0..=a {
                    cov[a * f + b] += da * (row[b] - mean[b]);
                }
            }
        }
        for a in 0..f {
            for b in 0..=a {
                cov[a * f + b] /= nc;
                cov[b * f + a] = cov[a * f + b];
            }
        }

        // Ridge the covariance until the Cholesky factorization succeeds.
        let trace: f64 = (0..f).map(|a| cov[a * f + a]).sum();
        let mut lambda = (1e-6 * trace / f as f64).max(1e-12);
        let mut attempt = cov.clone();
        let mut chol = cholesky(&attempt, f);
        let mut escalations = 0;
        while chol.is_none() {
            if escalations > 40 {
                return Err(ClassifierError::Train(format!(
                    "class {class} covariance stays singular after regularization"
                )));
            }
            attempt = cov.clone();
            for a in 0..f {
                attempt[a * f + a] += lambda;
            }
            chol = cholesky(&attempt, f);
            lambda *= 10.0;
            escalations += 1;
        }
        let chol = chol.unwrap();
        let log_det = 2.0 * (0..f).map(|a| chol[a * f + a].ln()).sum::<f64>();
        classes.push(QdcClass {
            mean,
            chol,
            log_det,
            log_prior: (nc / n as f64).ln(),
        });
    }
    Ok(QdcModel { classes })
}

fn predict_qdc(model: &QdcModel, x: &[f64]) -> usize {
    let f = x.len();
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (class, qc) in model.classes.iter().enumerate() {
        // Solve L z = (x - mean) by forward substitution; the quadratic form
        // is then |z|^2.
        let mut z = vec![0.0; f];
        for i in 0..f {
            let mut sum = x[i] - qc.mean[i];
            for k in 0..i {
                sum -= qc.chol[i * f + k] * z[k];
            }
            z[i] = sum / qc.chol[i * f + i];
        }
        let quad: f64 = z.iter().map(|v| v * v).sum();
        let score = qc.log_prior - 0.5 * qc.log_det - 0.5 * quad;
        if score > best_score {
            best_score = score;
            best = class;
        }
    }
    best
}

fn fit_parzen(data: &Dataset, bandwidth: Option<f64>) -> Result<ParzenModel, ClassifierError> {
    if let Some(h) = bandwidth {
        if h <= 0.0 || !h.is_finite() {
            return Err(ClassifierError::Train(format!(
                "parzen bandwidth must be positive, got {h}"
            )));
        }
    }
    let n = data.n_rows();
    let f = data.n_features();
    let h = bandwidth.unwrap_or_else(|| {
        // Silverman-style rule on the mean per-dimension spread.
        let mut mean_std = 0.0;
        for j in 0..f {
            let mean: f64 = (0..n).map(|i| data.value(i, j)).sum::<f64>() / n as f64;
            let var: f64 = (0..n)
                .map(|i| (data.value(i, j) - mean).powi(2))
                .sum::<f64>()
                / n as f64;
            mean_std += var.sqrt();
        }
        mean_std /= f as f64;
        let factor = (4.0 / ((f as f64 + 2.0) * n as f64)).powf(1.0 / (f as f64 + 4.0));
        let h = mean_std * factor;
        if h > 0.0 {
            h
        } else {
            1.0 // all points coincide; bandwidth is irrelevant
        }
    });
    let mut points = Vec::with_capacity(n * f);
    for i in 0..n {
        points.extend_from_slice(data.row(i));
    }
    Ok(ParzenModel {
        points,
        labels: data.labels().to_vec(),
        bandwidth: h,
    })
}

fn predict_parzen(model: &ParzenModel, x: &[f64], class_count: usize) -> usize {
    let f = x.len();
    let inv = 1.0 / (2.0 * model.bandwidth * model.bandwidth);
    let mut scores = vec![0.0; class_count];
    for (i, &label) in model.labels.iter().enumerate() {
        let d2 = sq_dist(&model.points[i * f..(i + 1) * f], x);
        scores[label] += (-d2 * inv).exp();
    }
    // argmax, ties to the smallest class id
    let mut best = 0;
    for (c, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = c;
        }
    }
    best
}

/// E x N matrix of crisp class votes: one row per classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoteMatrix {
    votes: Vec<Vec<usize>>,
    n_samples: usize,
    class_count: usize,
}

impl VoteMatrix {
    pub fn new(votes: Vec<Vec<usize>>, n_samples: usize, class_count: usize) -> Self {
        debug_assert!(votes.iter().all(|row| row.len() == n_samples));
        debug_assert!(votes.iter().flatten().all(|&v| v < class_count));
        Self {
            votes,
            n_samples,
            class_count,
        }
    }

    pub fn n_classifiers(&self) -> usize {
        self.votes.len()
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn row(&self, classifier: usize) -> &[usize] {
        &self.votes[classifier]
    }

    /// Keep only the given classifier rows (e.g. those a genome selects).
    pub fn select_rows(&self, rows: &[usize]) -> VoteMatrix {
        VoteMatrix {
            votes: rows.iter().map(|&r| self.votes[r].clone()).collect(),
            n_samples: self.n_samples,
            class_count: self.class_count,
        }
    }

    /// One CSV line per classifier.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.votes {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Collect every classifier's crisp predictions over `data`. Classifiers
/// predict in parallel; each writes its own row, so the result is
/// deterministic.
pub fn predict_votes(
    ensemble: &[TrainedClassifier],
    data: &Dataset,
) -> Result<VoteMatrix, ClassifierError> {
    let votes = ensemble
        .par_iter()
        .map(|classifier| classifier.predict(data))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VoteMatrix::new(votes, data.n_rows(), data.class_count()))
}

/// Majority-vote fusion: per sample, the modal class label; ties break to
/// the smallest class id.
pub fn majority_vote(votes: &VoteMatrix) -> Vec<usize> {
    assert!(
        votes.n_classifiers() >= 1,
        "majority vote needs an ensemble"
    );
    let mut fused = Vec::with_capacity(votes.n_samples);
    let mut counts = vec![0usize; votes.class_count.max(1)];
    for sample in 0..votes.n_samples {
        counts.iter_mut().for_each(|c| *c = 0);
        for row in &votes.votes {
            counts[row[sample]] += 1;
        }
        let mut best = 0;
        for (c, &count) in counts.iter().enumerate() {
            if count > counts[best] {
                best = c;
            }
        }
        fused.push(best);
    }
    fused
}

fn check_labels(votes: &VoteMatrix, labels: &[usize]) -> Result<(), ClassifierError> {
    if votes.n_samples != labels.len() {
        return Err(ClassifierError::Shape(format!(
            "{} votes per classifier vs {} labels",
            votes.n_samples,
            labels.len()
        )));
    }
    if votes.n_samples == 0 {
        return Err(ClassifierError::Shape(
            "cannot score an empty sample set".into(),
        ));
    }
    Ok(())
}

/// Majority-voting error: 1 - accuracy of the fused prediction.
pub fn mve(votes: &VoteMatrix, labels: &[usize]) -> Result<f64, ClassifierError> {
    check_labels(votes, labels)?;
    let fused = majority_vote(votes);
    let correct = fused.iter().zip(labels).filter(|(a, b)| a == b).count();
    Ok(1.0 - correct as f64 / labels.len() as f64)
}

/// Mean classifier error: average of the members' individual error rates.
pub fn me(votes: &VoteMatrix, labels: &[usize]) -> Result<f64, ClassifierError> {
    check_labels(votes, labels)?;
    if votes.n_classifiers() == 0 {
        return Err(ClassifierError::Shape("empty ensemble".into()));
    }
    let n = labels.len() as f64;
    let sum: f64 = votes
        .votes
        .iter()
        .map(|row| {
            let wrong = row.iter().zip(labels).filter(|(a, b)| a != b).count();
            wrong as f64 / n
        })
        .sum();
    Ok(sum / votes.n_classifiers() as f64)
}

/// Fraction of samples at least one member classifies correctly -- an upper
/// bound on what any fusion rule could reach.
pub fn oracle_rate(votes: &VoteMatrix, labels: &[usize]) -> Result<f64, ClassifierError> {
    check_labels(votes, labels)?;
    let covered = (0..labels.len())
        .filter(|&s| votes.votes.iter().any(|row| row[s] == labels[s]))
        .count();
    Ok(covered as f64 / labels.len() as f64)
}

/// Replayable description of a trained ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleManifest {
    pub algorithm: Algorithm,
    pub params: ClassifierParams,
    pub subspaces: Vec<Vec<usize>>,
}

impl EnsembleManifest {
    pub fn describe(ensemble: &[TrainedClassifier], params: &ClassifierParams) -> Self {
        let algorithm = ensemble.first().map_or(Algorithm::Knn, |c| c.algorithm());
        Self {
            algorithm,
            params: *params,
            subspaces: ensemble
                .iter()
                .map(|c| c.subspace().indices().to_vec())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ClassifierError> {
        serde_json::from_str(text)
            .map_err(|e| ClassifierError::Shape(format!("invalid manifest JSON: {e}")))
    }

    /// Refit the described ensemble on `train_data`.
    pub fn train(&self, train_data: &Dataset) -> Result<Vec<TrainedClassifier>, ClassifierError> {
        self.subspaces
            .iter()
            .map(|indices| {
                let subspace = Subspace::new(indices.clone()).map_err(ClassifierError::Index)?;
                train(self.algorithm, train_data, &subspace, &self.params)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn labeled(points: &[(f64, usize)]) -> Dataset {
        let samples: Vec<f64> = points.iter().map(|&(v, _)| v).collect();
        let labels: Vec<usize> = points.iter().map(|&(_, l)| l).collect();
        let classes = labels.iter().copied().max().unwrap() + 1;
        Dataset::new(samples, 1, labels, vec!["x".into()], classes).unwrap()
    }

    fn full_subspace(n_features: usize) -> Subspace {
        Subspace::new((0..n_features).collect()).unwrap()
    }

    #[test]
    fn knn_nearest_neighbor() {
        let data = labeled(&[(0.0, 0), (10.0, 1)]);
        let model = train(
            Algorithm::Knn,
            &data,
            &full_subspace(1),
            &ClassifierParams::default(),
        )
        .unwrap();
        let query = Dataset::new(vec![1.0], 1, vec![0], vec!["x".into()], 2).unwrap();
        assert_eq!(model.predict(&query).unwrap(), vec![0]);
    }

    #[test]
    fn knn_training_error_is_zero_on_distinct_points() {
        let data = labeled(&[(0.0, 0), (1.0, 1), (2.0, 0), (5.0, 1)]);
        let model = train(
            Algorithm::Knn,
            &data,
            &full_subspace(1),
            &ClassifierParams::default(),
        )
        .unwrap();
        assert_eq!(model.predict(&data).unwrap(), data.labels());
    }

    #[test]
    fn qdc_boundary_is_midway_for_symmetric_gaussians() {
        // Two mirrored clouds with identical covariance around 0 and 10.
        let mut points = Vec::new();
        for &offset in &[-1.0, -0.5, 0.0, 0.5, 1.0] {
            points.push((offset, 0));
            points.push((10.0 + offset, 1));
        }
        let data = labeled(&points);
        let model = train(
            Algorithm::Qdc,
            &data,
            &full_subspace(1),
            &ClassifierParams::default(),
        )
        .unwrap();
        let query = Dataset::new(vec![4.9, 5.1], 1, vec![0, 0], vec!["x".into()], 2).unwrap();
        assert_eq!(model.predict(&query).unwrap(), vec![0, 1]);
    }

    #[test]
    fn qdc_survives_degenerate_covariance() {
        // A class whose points coincide has zero covariance; the ridge must
        // keep the fit alive.
        let data = labeled(&[(1.0, 0), (1.0, 0), (5.0, 1), (6.0, 1)]);
        let model = train(
            Algorithm::Qdc,
            &data,
            &full_subspace(1),
            &ClassifierParams::default(),
        )
        .unwrap();
        let query = Dataset::new(vec![1.0], 1, vec![0], vec!["x".into()], 2).unwrap();
        assert_eq!(model.predict(&query).unwrap(), vec![0]);
    }

    #[test]
    fn parzen_tiny_bandwidth_reproduces_training_labels() {
        let data = labeled(&[(0.0, 0), (1.0, 1), (2.0, 0), (3.0, 1)]);
        let params = ClassifierParams {
            parzen_bandwidth: Some(1e-4),
            ..Default::default()
        };
        let model = train(Algorithm::Parzen, &data, &full_subspace(1), &params).unwrap();
        assert_eq!(model.predict(&data).unwrap(), data.labels());
    }

    #[test]
    fn training_increments_the_counter() {
        let before = training_count();
        let data = labeled(&[(0.0, 0), (10.0, 1)]);
        let _ = train(
            Algorithm::Knn,
            &data,
            &full_subspace(1),
            &ClassifierParams::default(),
        )
        .unwrap();
        assert!(training_count() > before);
    }

    #[test]
    fn votes_single_classifier_matches_predictions() {
        let data = labeled(&[(0.0, 0), (10.0, 1), (9.0, 1)]);
        let model = train(
            Algorithm::Knn,
            &data,
            &full_subspace(1),
            &ClassifierParams::default(),
        )
        .unwrap();
        let votes = predict_votes(std::slice::from_ref(&model), &data).unwrap();
        assert_eq!(votes.n_classifiers(), 1);
        assert_eq!(votes.row(0), model.predict(&data).unwrap());
    }

    #[test]
    fn votes_on_empty_batch_are_empty() {
        let data = labeled(&[(0.0, 0), (10.0, 1)]);
        let model = train(
            Algorithm::Knn,
            &data,
            &full_subspace(1),
            &ClassifierParams::default(),
        )
        .unwrap();
        let empty = Dataset::new(Vec::new(), 1, Vec::new(), vec!["x".into()], 2).unwrap();
        let votes = predict_votes(&[model.clone(), model], &empty).unwrap();
        assert_eq!(votes.n_classifiers(), 2);
        assert_eq!(votes.n_samples(), 0);
    }

    #[test]
    fn duplicated_classifier_duplicates_rows() {
        let data = labeled(&[(0.0, 0), (10.0, 1)]);
        let model = train(
            Algorithm::Knn,
            &data,
            &full_subspace(1),
            &ClassifierParams::default(),
        )
        .unwrap();
        let votes = predict_votes(&[model.clone(), model], &data).unwrap();
        assert_eq!(votes.row(0), votes.row(1));
    }

    fn matrix(rows: &[&[usize]], class_count: usize) -> VoteMatrix {
        let n = rows[0].len();
        VoteMatrix::new(rows.iter().map(|r| r.to_vec()).collect(), n, class_count)
    }

    #[test]
    fn majority_and_tie_rules() {
        let votes = matrix(&[&[0], &[0], &[1]], 2);
        assert_eq!(majority_vote(&votes), vec![0]);
        let tie = matrix(&[&[0], &[1]], 2);
        assert_eq!(majority_vote(&tie), vec![0]);
    }

    #[test]
    fn majority_matches_exhaustive_tally() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..200 {
            let e = rng.random_range(1..6);
            let n = rng.random_range(1..20);
            let classes = rng.random_range(2..5);
            let rows: Vec<Vec<usize>> = (0..e)
                .map(|_| (0..n).map(|_| rng.random_range(0..classes)).collect())
                .collect();
            let votes = VoteMatrix::new(rows.clone(), n, classes);
            let fused = majority_vote(&votes);
            for s in 0..n {
                let mut counts = vec![0usize; classes];
                for row in &rows {
                    counts[row[s]] += 1;
                }
                let max = *counts.iter().max().unwrap();
                let expected = counts.iter().position(|&c| c == max).unwrap();
                assert_eq!(fused[s], expected);
            }
        }
    }

    #[test]
    fn mve_extremes_and_hand_tally() {
        let labels = [0, 1, 0, 1, 0];
        let perfect = matrix(&[&[0, 1, 0, 1, 0], &[0, 1, 0, 1, 0]], 2);
        assert_eq!(mve(&perfect, &labels).unwrap(), 0.0);
        let wrong = matrix(&[&[1, 0, 1, 0, 1], &[1, 0, 1, 0, 1]], 2);
        assert_eq!(mve(&wrong, &labels).unwrap(), 1.0);
        // Fused votes: [0,1,1,1,0] -> wrong on sample 2 only.
        let mixed = matrix(&[&[0, 1, 1, 1, 0], &[0, 1, 1, 0, 0], &[1, 1, 1, 1, 0]], 2);
        assert!((mve(&mixed, &labels).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn me_is_the_mean_of_individual_errors() {
        let labels = [0, 1, 0, 1, 0];
        // Row errors 0.2 and 0.4.
        let votes = matrix(&[&[0, 1, 0, 1, 1], &[0, 1, 1, 0, 0]], 2);
        assert!((me(&votes, &labels).unwrap() - 0.3).abs() < 1e-12);
        let single = matrix(&[&[0, 1, 0, 1, 0]], 2);
        assert_eq!(me(&single, &labels).unwrap(), 0.0);
        assert_eq!(
            me(&single, &labels).unwrap(),
            mve(&single, &labels).unwrap()
        );
    }

    #[test]
    fn me_matches_independent_recomputation_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..200 {
            let e = rng.random_range(1..6);
            let n = rng.random_range(1..25);
            let classes = rng.random_range(2..4);
            let rows: Vec<Vec<usize>> = (0..e)
                .map(|_| (0..n).map(|_| rng.random_range(0..classes)).collect())
                .collect();
            let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
            let votes = VoteMatrix::new(rows.clone(), n, classes);
            // Second route: tally disagreements sample by sample first.
            let mut wrong_total = 0usize;
            for s in 0..n {
                for row in &rows {
                    if row[s] != labels[s] {
                        wrong_total += 1;
                    }
                }
            }
            let expected = wrong_total as f64 / (e * n) as f64;
            assert!((me(&votes, &labels).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn vote_matrix_csv_one_row_per_classifier() {
        let votes = matrix(&[&[0, 1, 2], &[2, 1, 0]], 3);
        assert_eq!(votes.to_csv(), "0,1,2\n2,1,0\n");
    }

    #[test]
    fn oracle_rate_cases() {
        let labels = [0, 1, 0];
        let with_perfect = matrix(&[&[0, 1, 0], &[1, 0, 1]], 2);
        assert_eq!(oracle_rate(&with_perfect, &labels).unwrap(), 1.0);
        // All classifiers wrong on exactly the last sample.
        let miss_one = matrix(&[&[0, 1, 1], &[0, 1, 1]], 2);
        assert!((oracle_rate(&miss_one, &labels).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_bounds_majority_accuracy_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let e = rng.random_range(1..7);
            let n = rng.random_range(1..25);
            let classes = rng.random_range(2..5);
            let rows: Vec<Vec<usize>> = (0..e)
                .map(|_| (0..n).map(|_| rng.random_range(0..classes)).collect())
                .collect();
            let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
            let votes = VoteMatrix::new(rows, n, classes);
            let oracle = oracle_rate(&votes, &labels).unwrap();
            let accuracy = 1.0 - mve(&votes, &labels).unwrap();
            assert!(oracle >= accuracy - 1e-12);
        }
    }

    #[test]
    fn oracle_is_monotone_in_ensemble_growth() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..100 {
            let n = rng.random_range(1..20);
            let classes = 3;
            let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
            let base: Vec<Vec<usize>> = (0..3)
                .map(|_| (0..n).map(|_| rng.random_range(0..classes)).collect())
                .collect();
            let extra: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
            let small = VoteMatrix::new(base.clone(), n, classes);
            let mut grown_rows = base;
            grown_rows.push(extra);
            let grown = VoteMatrix::new(grown_rows, n, classes);
            assert!(
                oracle_rate(&grown, &labels).unwrap()
                    >= oracle_rate(&small, &labels).unwrap() - 1e-12
            );
        }
    }

    #[test]
    fn identical_members_fuse_to_the_member() {
        let data = labeled(&[(0.0, 0), (4.0, 1), (9.0, 1)]);
        let model = train(
            Algorithm::Knn,
            &data,
            &full_subspace(1),
            &ClassifierParams::default(),
        )
        .unwrap();
        let solo = model.predict(&data).unwrap();
        let votes = predict_votes(&[model.clone(), model.clone(), model], &data).unwrap();
        assert_eq!(majority_vote(&votes), solo);
    }

    #[test]
    fn manifest_round_trip_retrains() {
        let data = labeled(&[(0.0, 0), (1.0, 0), (9.0, 1), (10.0, 1)]);
        let params = ClassifierParams::default();
        let ensemble = vec![train(Algorithm::Knn, &data, &full_subspace(1), &params).unwrap()];
        let manifest = EnsembleManifest::describe(&ensemble, &params);
        let back = EnsembleManifest::from_json(&manifest.to_json()).unwrap();
        assert_eq!(manifest, back);
        let retrained = back.train(&data).unwrap();
        assert_eq!(
            retrained[0].predict(&data).unwrap(),
            ensemble[0].predict(&data).unwrap()
        );
    }
}
