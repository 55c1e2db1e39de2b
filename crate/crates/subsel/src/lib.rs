//! Ensemble selection for the random subspace method without training
//! classifiers first.
//!
//! Classifiers built on random feature subspaces are diverse exactly when the
//! data, clustered per subspace, partitions differently. This crate measures
//! that data diversity directly: it clusters each subspace with K-Means,
//! compares the partitions pairwise with clustering-diversity indices
//! (Wallace-1/2, Fowlkes-Mallows, Rand, Jacard, Mirkin), and searches subset
//! combinations with a single-objective GA or NSGA-II -- so only the
//! subspaces that survive selection ever get a classifier trained on them.
//! Classifier-based selection (ME / MVE objectives over majority-voting
//! ensembles) is included as the baseline to beat.
//!
//! The pipeline, end to end:
//!
//! 1. [`dataset`]: load a CSV (or synthesize blobs), split the training rows
//!    into optimization / archive-validation / evaluation parts.
//! 2. [`subspace`]: draw a pool of fixed-cardinality feature subspaces.
//! 3. [`clustering`]: K-Means each subspace's projection; pick the cluster
//!    count once per problem with the Xie-Beni index.
//! 4. [`diversity`]: precompute the pairwise diversity matrix.
//! 5. [`search`]: GA or NSGA-II over selection bitstrings, validated each
//!    generation on a held-out split.
//! 6. [`classifiers`] + [`experiment`]: train classifiers only for the
//!    selected subspaces, fuse by majority vote, and report replicated
//!    statistics against the all-subspaces baseline.
//!
//! Each capability has a runnable demo under `examples/`; the `subsel` binary
//! drives full experiments from a config file.

pub mod classifiers;
pub mod clustering;
pub mod dataset;
pub mod diversity;
pub mod experiment;
pub mod rng;
pub mod search;
pub mod subspace;

pub use classifiers::{
    majority_vote, me, mve, oracle_rate, predict_votes, train, Algorithm, ClassifierParams,
    TrainedClassifier, VoteMatrix,
};
pub use clustering::{cluster_pool, kmeans, select_k, xie_beni, Partition};
pub use dataset::{generate_synthetic, load_csv, split, Dataset, SplitRole, SplitSet};
pub use diversity::{
    brute_force_pair_counts, contingency, global_diversity, measure, pair_counts, pairwise_matrix,
    ContingencyTable, DiversityKind, DiversityMatrix, Orientation, PairCounts,
};
pub use experiment::{
    evaluate_pareto, replicate_stats, run_classifier_based, run_classifier_free, ExperimentConfig,
    Report,
};
pub use search::{
    bitflip_mutation, crowding_distance, ga_run, non_dominated_sort, nsga2_run,
    one_point_crossover, repair_min_size, roulette_select, GaConfig, ParetoArchive,
};
pub use subspace::{generate_pool, project, Genome, Subspace, SubspacePool};
