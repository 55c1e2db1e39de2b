//! End-to-end experiment orchestration: the classifier-free and
//! classifier-based selection protocols, Pareto-front evaluation, replication
//! statistics, and report assembly.
//!
//! Replications run sequentially with derived seeds (streams are fixed
//! constants, so reports are reproducible byte for byte); parallelism lives
//! inside the per-replication stages (pool clustering, pairwise diversity).

mod config;
mod report;

pub use config::{ErrorObjective, ExperimentConfig, SearchKind, SelectionMode};
pub use report::{
    mean_std, replicate_stats, wilcoxon_signed_rank, Aggregates, Baseline, ReplicationFailure,
    ReplicationRecord, Report, Significance,
};

use std::sync::atomic::{AtomicU64, Ordering};

use log::warn;
use rayon::prelude::*;
use thiserror::Error;

use crate::classifiers::{
    self, mve, oracle_rate, predict_votes, ClassifierParams, TrainedClassifier, VoteMatrix,
};
use crate::clustering::{cluster_pool, select_k, ClusterError};
use crate::dataset::{
    load_csv, load_csv_pair, split, train_test_split, DataError, Dataset, SplitRole, SplitSet,
};
use crate::diversity::{
    global_diversity, pairwise_matrix, DiversityError, DiversityMatrix, Orientation,
};
use crate::rng::derive_seed;
use crate::search::{ga_run, nsga2_run, GenerationRecord, Objective, ParetoArchive, SearchError};
use crate::subspace::{generate_pool, Genome, SubspaceError, SubspacePool};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Diversity(#[from] DiversityError),
    #[error(transparent)]
    Classifier(#[from] classifiers::ClassifierError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

// Fixed seed streams; changing these changes every derived random sequence.
const STREAM_TEST_CARVE: u64 = 1;
const STREAM_POOL: u64 = 2;
const STREAM_SELECT_K: u64 = 3;
const STREAM_REPLICATION_BASE: u64 = 1000;
const REP_STREAM_SPLIT: u64 = 0;
const REP_STREAM_CLUSTER: u64 = 1;
const REP_STREAM_SEARCH: u64 = 2;

/// A report plus the pool it was produced with and the per-replication
/// generation histories (empty history for a failed replication).
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub pool: SubspacePool,
    pub histories: Vec<Vec<GenerationRecord>>,
}

/// Refuse to let test rows reach a stage they must never influence.
fn ensure_not_test(dataset: &Dataset, stage: &str) -> Result<(), ExperimentError> {
    if dataset.role() == Some(SplitRole::Test) {
        return Err(ExperimentError::Config(format!(
            "test rows must not reach {stage}"
        )));
    }
    Ok(())
}

/// Load the training and test datasets named by the config. With a single
/// data file, a stratified test portion is carved out first.
pub fn prepare_data(config: &ExperimentConfig) -> Result<(Dataset, Dataset), ExperimentError> {
    let data_path = config.data.as_ref().ok_or_else(|| {
        ExperimentError::Config("no data file configured (set data = <path>)".into())
    })?;
    match &config.test_data {
        Some(test_path) => {
            let (train, test) = load_csv_pair(data_path, test_path, &config.label_column)?;
            Ok((
                train.with_role(SplitRole::Training),
                test.with_role(SplitRole::Test),
            ))
        }
        None => {
            let full = load_csv(data_path, &config.label_column)?;
            let (train, test) = train_test_split(
                &full,
                config.test_fraction,
                derive_seed(config.seed, STREAM_TEST_CARVE),
            )?;
            Ok((train, test))
        }
    }
}

fn classifier_params(config: &ExperimentConfig) -> ClassifierParams {
    ClassifierParams {
        knn_k: config.knn_k,
        parzen_bandwidth: config.parzen_bandwidth,
    }
}

/// Diversity objective backed by a precomputed pairwise matrix: the mean
/// pairwise diversity of the selected subspaces, oriented per index kind.
pub struct DiversityObjective<'a> {
    matrix: &'a DiversityMatrix,
}

impl<'a> DiversityObjective<'a> {
    pub fn new(matrix: &'a DiversityMatrix) -> Self {
        Self { matrix }
    }
}

impl Objective for DiversityObjective<'_> {
    fn evaluate(&self, genome: &Genome) -> Result<f64, String> {
        global_diversity(self.matrix, genome).map_err(|e| e.to_string())
    }

    fn orientation(&self) -> Orientation {
        self.matrix.kind().orientation()
    }
}

/// ME/MVE objective over precomputed votes of the full classifier pool.
struct VoteObjective<'a> {
    votes: &'a VoteMatrix,
    labels: &'a [usize],
    objective: ErrorObjective,
}

impl VoteObjective<'_> {
    fn value(&self, genome: &Genome) -> Result<f64, String> {
        let rows = genome.selected();
        if rows.is_empty() {
            return Err("genome selects no classifiers".into());
        }
        let subset = self.votes.select_rows(&rows);
        let result = match self.objective {
            ErrorObjective::Me => classifiers::me(&subset, self.labels),
            ErrorObjective::Mve => classifiers::mve(&subset, self.labels),
        };
        result.map_err(|e| e.to_string())
    }
}

impl Objective for VoteObjective<'_> {
    fn evaluate(&self, genome: &Genome) -> Result<f64, String> {
        self.value(genome)
    }

    fn orientation(&self) -> Orientation {
        Orientation::Minimize
    }
}

/// Counts the classifier fits one experiment performs. Experiment-local so
/// the per-replication "fits during search" deltas are exact even when other
/// experiments train concurrently in the same process (the global
/// [`classifiers::training_count`] stays available as a cross-cutting
/// instrument).
#[derive(Debug, Default)]
struct FitMeter(AtomicU64);

impl FitMeter {
    fn count(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    fn add(&self, fits: u64) {
        self.0.fetch_add(fits, Ordering::Relaxed);
    }
}

/// Train one classifier per genome-selected subspace.
fn train_ensemble(
    config: &ExperimentConfig,
    data: &Dataset,
    pool: &SubspacePool,
    genome: &Genome,
    meter: &FitMeter,
) -> Result<Vec<TrainedClassifier>, ExperimentError> {
    ensure_not_test(data, "classifier training")?;
    let params = classifier_params(config);
    let ensemble: Vec<TrainedClassifier> = genome
        .selected()
        .into_iter()
        .map(|i| {
            classifiers::train(config.classifier, data, &pool.subspaces[i], &params)
                .map_err(ExperimentError::from)
        })
        .collect::<Result<_, _>>()?;
    meter.add(ensemble.len() as u64);
    Ok(ensemble)
}

fn majority_accuracy(
    ensemble: &[TrainedClassifier],
    data: &Dataset,
) -> Result<f64, ExperimentError> {
    let votes = predict_votes(ensemble, data)?;
    Ok(1.0 - mve(&votes, data.labels())?)
}

/// Majority-vote accuracy and oracle rate of the whole pool on the test set.
fn compute_baseline(
    config: &ExperimentConfig,
    pool: &SubspacePool,
    train: &Dataset,
    test: &Dataset,
) -> Result<Baseline, ExperimentError> {
    ensure_not_test(train, "classifier training")?;
    let all = Genome::new(vec![true; pool.len()]);
    let ensemble = train_ensemble(config, train, pool, &all, &FitMeter::default())?;
    let votes = predict_votes(&ensemble, test)?;
    Ok(Baseline {
        all_accuracy: 1.0 - mve(&votes, test.labels())?,
        all_size: pool.len(),
        oracle_rate: oracle_rate(&votes, test.labels())?,
    })
}

fn resolve_k(config: &ExperimentConfig, train: &Dataset) -> Result<usize, ExperimentError> {
    match config.clusters {
        Some(k) => Ok(k),
        None => {
            let k_max = config.k_max.min(train.n_rows().saturating_sub(1));
            if config.k_min > k_max {
                return Err(ExperimentError::Config(format!(
                    "cluster range [{}, {}] is empty for {} training rows",
                    config.k_min,
                    config.k_max,
                    train.n_rows()
                )));
            }
            Ok(select_k(
                train,
                config.k_min,
                k_max,
                derive_seed(config.seed, STREAM_SELECT_K),
            )?)
        }
    }
}

/// Train an ensemble per archived genome on `training`, score majority-vote
/// accuracy on `evaluation`, and return the best genome (ties toward the
/// smaller ensemble, then lexicographic bits). Genomes whose training fails
/// are skipped with a warning.
pub fn evaluate_pareto(
    archive: &ParetoArchive,
    pool: &SubspacePool,
    training: &Dataset,
    evaluation: &Dataset,
    config: &ExperimentConfig,
) -> Result<(Genome, f64), ExperimentError> {
    if archive.is_empty() {
        return Err(ExperimentError::Config(
            "cannot evaluate an empty Pareto archive".into(),
        ));
    }
    ensure_not_test(training, "classifier training")?;
    ensure_not_test(evaluation, "Pareto-front evaluation")?;

    // Entries score in parallel (training included); the argmax scan is
    // sequential over the in-order results, so the pick is deterministic.
    let meter = FitMeter::default();
    let scored: Vec<Option<(f64, usize, Genome)>> = archive
        .entries()
        .par_iter()
        .map(|entry| {
            let ensemble = match train_ensemble(config, training, pool, &entry.genome, &meter) {
                Ok(e) => e,
                Err(err) => {
                    warn!("skipping archived genome {}: {err}", entry.genome);
                    return Ok(None);
                }
            };
            let accuracy = majority_accuracy(&ensemble, evaluation)?;
            Ok(Some((
                accuracy,
                entry.genome.popcount(),
                entry.genome.clone(),
            )))
        })
        .collect::<Result<_, ExperimentError>>()?;

    let mut best: Option<(f64, usize, Genome)> = None;
    for (accuracy, size, genome) in scored.into_iter().flatten() {
        let improves = match &best {
            None => true,
            Some((best_acc, best_size, best_genome)) => {
                accuracy > *best_acc
                    || (accuracy == *best_acc
                        && (size < *best_size || (size == *best_size && genome < *best_genome)))
            }
        };
        if improves {
            best = Some((accuracy, size, genome));
        }
    }
    best.map(|(accuracy, _, genome)| (genome, accuracy))
        .ok_or_else(|| ExperimentError::Config("every archived genome failed to train".into()))
}

fn free_replication(
    config: &ExperimentConfig,
    pool: &SubspacePool,
    k: usize,
    train: &Dataset,
    test: &Dataset,
    replication: usize,
) -> Result<(ReplicationRecord, Vec<GenerationRecord>), ExperimentError> {
    let rep_seed = derive_seed(config.seed, STREAM_REPLICATION_BASE + replication as u64);
    let splits: SplitSet = split(train, config.split, derive_seed(rep_seed, REP_STREAM_SPLIT))?;
    ensure_not_test(&splits.optimization, "clustering")?;
    ensure_not_test(&splits.archive_validation, "clustering")?;

    let cluster_seed = derive_seed(rep_seed, REP_STREAM_CLUSTER);
    let partitions_opt = cluster_pool(&splits.optimization, pool, k, cluster_seed)?;
    // Archive validation re-clusters the validation rows with the same k and
    // the same per-subspace seeds; only the data differs.
    let partitions_val = cluster_pool(&splits.archive_validation, pool, k, cluster_seed)?;
    let matrix_opt = pairwise_matrix(&partitions_opt, config.diversity)?;
    let matrix_val = pairwise_matrix(&partitions_val, config.diversity)?;

    let objective = DiversityObjective::new(&matrix_opt);
    let validation = DiversityObjective::new(&matrix_val);
    let ga = config.ga_config(derive_seed(rep_seed, REP_STREAM_SEARCH));

    // This replication's fits, counted between search start and search end;
    // the classifier-free path must report zero.
    let meter = FitMeter::default();
    let fits_before_search = meter.count();
    let (genome, validation_value, history, trainings_during_search) = match config.search {
        SearchKind::Ga => {
            let out = ga_run(&objective, &validation, pool.len(), &ga)?;
            let during = meter.count() - fits_before_search;
            (out.best, Some(out.best_validation), out.history, during)
        }
        SearchKind::Moga => {
            let out = nsga2_run(&objective, &validation, pool.len(), &ga)?;
            let during = meter.count() - fits_before_search;
            ensure_not_test(&splits.evaluation, "Pareto-front evaluation")?;
            let (genome, _) = evaluate_pareto(
                &out.archive,
                pool,
                &splits.training,
                &splits.evaluation,
                config,
            )?;
            let validation_value = out
                .archive
                .entries()
                .iter()
                .find(|e| e.genome == genome)
                .map(|e| e.validation[0]);
            (genome, validation_value, out.history, during)
        }
    };

    let ensemble = train_ensemble(config, &splits.training, pool, &genome, &meter)?;
    let test_accuracy = majority_accuracy(&ensemble, test)?;
    let objective_value = global_diversity(&matrix_opt, &genome).ok();

    Ok((
        ReplicationRecord {
            replication,
            genome: genome.to_string(),
            ensemble_size: genome.popcount(),
            test_accuracy,
            objective_value,
            validation_value,
            trainings_during_search,
        },
        history,
    ))
}

fn based_replication(
    config: &ExperimentConfig,
    pool: &SubspacePool,
    train: &Dataset,
    test: &Dataset,
    replication: usize,
) -> Result<(ReplicationRecord, Vec<GenerationRecord>), ExperimentError> {
    let rep_seed = derive_seed(config.seed, STREAM_REPLICATION_BASE + replication as u64);
    let splits: SplitSet = split(train, config.split, derive_seed(rep_seed, REP_STREAM_SPLIT))?;

    // The whole pool is trained up front on the training portion.
    let meter = FitMeter::default();
    let all = Genome::new(vec![true; pool.len()]);
    let ensemble_all = train_ensemble(config, &splits.training, pool, &all, &meter)?;
    let votes_opt = predict_votes(&ensemble_all, &splits.optimization)?;
    let votes_val = predict_votes(&ensemble_all, &splits.archive_validation)?;
    let votes_test = predict_votes(&ensemble_all, test)?;

    let objective = VoteObjective {
        votes: &votes_opt,
        labels: splits.optimization.labels(),
        objective: config.objective,
    };
    let validation = VoteObjective {
        votes: &votes_val,
        labels: splits.archive_validation.labels(),
        objective: config.objective,
    };
    let ga = config.ga_config(derive_seed(rep_seed, REP_STREAM_SEARCH));

    let fits_before_search = meter.count();
    let (genome, validation_value, history) = match config.search {
        SearchKind::Ga => {
            let out = ga_run(&objective, &validation, pool.len(), &ga)?;
            (out.best, Some(out.best_validation), out.history)
        }
        SearchKind::Moga => {
            // The error objective was already evaluated during the search, so
            // the pick is the archived individual with the smallest validated
            // error; no separate evaluation split is used here.
            let out = nsga2_run(&objective, &validation, pool.len(), &ga)?;
            let picked = out
                .archive
                .entries()
                .iter()
                .min_by(|a, b| {
                    a.validation[0]
                        .partial_cmp(&b.validation[0])
                        .unwrap()
                        .then(a.genome.popcount().cmp(&b.genome.popcount()))
                        .then(a.genome.cmp(&b.genome))
                })
                .expect("archive is never empty after a run");
            (
                picked.genome.clone(),
                Some(picked.validation[0]),
                out.history,
            )
        }
    };
    let trainings_during_search = meter.count() - fits_before_search;

    let selected_votes = votes_test.select_rows(&genome.selected());
    let test_accuracy = 1.0 - mve(&selected_votes, test.labels())?;
    let objective_value = objective.value(&genome).ok();

    Ok((
        ReplicationRecord {
            replication,
            genome: genome.to_string(),
            ensemble_size: genome.popcount(),
            test_accuracy,
            objective_value,
            validation_value,
            trainings_during_search,
        },
        history,
    ))
}

fn assemble_report(
    config: &ExperimentConfig,
    pool: SubspacePool,
    baseline: Baseline,
    records: Vec<ReplicationRecord>,
    failures: Vec<ReplicationFailure>,
    histories: Vec<Vec<GenerationRecord>>,
) -> RunOutput {
    let aggregates = replicate_stats(&records);
    let accuracies: Vec<f64> = records.iter().map(|r| r.test_accuracy).collect();
    let all_accuracies = vec![baseline.all_accuracy; accuracies.len()];
    let significance = Significance {
        test: "wilcoxon-signed-rank".into(),
        p_value_vs_all: wilcoxon_signed_rank(&accuracies, &all_accuracies),
    };
    RunOutput {
        report: Report {
            config: config.clone(),
            records,
            failures,
            aggregates,
            baseline,
            significance,
        },
        pool,
        histories,
    }
}

/// Classifier-free protocol on already-loaded data: per replication, split,
/// cluster the pool, precompute the diversity matrix, search, and only then
/// train classifiers for the selected subspaces.
pub fn run_classifier_free_on(
    config: &ExperimentConfig,
    train: &Dataset,
    test: &Dataset,
) -> Result<RunOutput, ExperimentError> {
    config.validate()?;
    let train = train.clone().with_role(SplitRole::Training);
    let test = test.clone().with_role(SplitRole::Test);
    let pool = generate_pool(
        train.n_features(),
        config.cardinality,
        config.pool_size,
        derive_seed(config.seed, STREAM_POOL),
    )?;
    let k = resolve_k(config, &train)?;
    let baseline = compute_baseline(config, &pool, &train, &test)?;

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut histories = Vec::new();
    for replication in 0..config.replications {
        match free_replication(config, &pool, k, &train, &test, replication) {
            Ok((record, history)) => {
                records.push(record);
                histories.push(history);
            }
            Err(error) => {
                warn!("replication {replication} failed: {error}");
                failures.push(ReplicationFailure {
                    replication,
                    error: error.to_string(),
                });
                histories.push(Vec::new());
            }
        }
    }
    Ok(assemble_report(
        config, pool, baseline, records, failures, histories,
    ))
}

/// Classifier-based protocol on already-loaded data: per replication, train
/// the whole pool, then search on ME/MVE over the precomputed votes.
pub fn run_classifier_based_on(
    config: &ExperimentConfig,
    train: &Dataset,
    test: &Dataset,
) -> Result<RunOutput, ExperimentError> {
    config.validate()?;
    let train = train.clone().with_role(SplitRole::Training);
    let test = test.clone().with_role(SplitRole::Test);
    let pool = generate_pool(
        train.n_features(),
        config.cardinality,
        config.pool_size,
        derive_seed(config.seed, STREAM_POOL),
    )?;
    let baseline = compute_baseline(config, &pool, &train, &test)?;

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut histories = Vec::new();
    for replication in 0..config.replications {
        match based_replication(config, &pool, &train, &test, replication) {
            Ok((record, history)) => {
                records.push(record);
                histories.push(history);
            }
            Err(error) => {
                warn!("replication {replication} failed: {error}");
                failures.push(ReplicationFailure {
                    replication,
                    error: error.to_string(),
                });
                histories.push(Vec::new());
            }
        }
    }
    Ok(assemble_report(
        config, pool, baseline, records, failures, histories,
    ))
}

/// Classifier-free protocol, loading data from the configured paths.
pub fn run_classifier_free(config: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    let (train, test) = prepare_data(config)?;
    run_classifier_free_on(config, &train, &test)
}

/// Classifier-based protocol, loading data from the configured paths.
pub fn run_classifier_based(config: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    let (train, test) = prepare_data(config)?;
    run_classifier_based_on(config, &train, &test)
}

/// Dispatch on the configured mode.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    match config.mode {
        SelectionMode::Free => run_classifier_free(config),
        SelectionMode::Based => run_classifier_based(config),
    }
}

/// Dispatch on the configured mode with data supplied directly.
pub fn run_on(
    config: &ExperimentConfig,
    train: &Dataset,
    test: &Dataset,
) -> Result<RunOutput, ExperimentError> {
    match config.mode {
        SelectionMode::Free => run_classifier_free_on(config, train, test),
        SelectionMode::Based => run_classifier_based_on(config, train, test),
    }
}
