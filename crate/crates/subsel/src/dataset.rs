//! Labeled tabular datasets: CSV ingestion, deterministic stratified splits,
//! and synthetic blob generation for tests and examples.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema error at row {row}: {message}")]
    Schema {
        /// 1-based file row (the header is row 1).
        row: usize,
        /// 1-based column, when the error is tied to a single cell.
        column: Option<usize>,
        message: String,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Which portion of an experiment split a dataset belongs to.
///
/// Carried by every [`Dataset`] produced by [`split`] so downstream stages can
/// assert that test rows never leak into search, clustering or training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitRole {
    Training,
    Optimization,
    ArchiveValidation,
    Evaluation,
    Test,
}

/// An immutable N x F feature matrix with integer class labels.
///
/// Labels are contiguous in `[0, class_count)`. Ingestion operations reject
/// empty inputs; derived views (e.g. an empty prediction batch) may have zero
/// rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<f64>, // row-major, n_rows x n_features
    n_features: usize,
    labels: Vec<usize>,
    feature_names: Vec<String>,
    class_count: usize,
    role: Option<SplitRole>,
}

impl Dataset {
    pub fn new(
        samples: Vec<f64>,
        n_features: usize,
        labels: Vec<usize>,
        feature_names: Vec<String>,
        class_count: usize,
    ) -> Result<Self, DataError> {
        if n_features == 0 {
            return Err(DataError::Config("n_features must be >= 1".into()));
        }
        if class_count == 0 {
            return Err(DataError::Config("class_count must be >= 1".into()));
        }
        if samples.len() != labels.len() * n_features {
            return Err(DataError::Config(format!(
                "sample buffer holds {} values, expected {} rows x {} features",
                samples.len(),
                labels.len(),
                n_features
            )));
        }
        if feature_names.len() != n_features {
            return Err(DataError::Config(format!(
                "{} feature names for {} features",
                feature_names.len(),
                n_features
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_count) {
            return Err(DataError::Config(format!(
                "label {bad} out of range [0, {class_count})"
            )));
        }
        Ok(Self {
            samples,
            n_features,
            labels,
            feature_names,
            class_count,
            role: None,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn row(&self, index: usize) -> &[f64] {
        let start = index * self.n_features;
        &self.samples[start..start + self.n_features]
    }

    pub fn value(&self, row: usize, column: usize) -> f64 {
        self.samples[row * self.n_features + column]
    }

    pub fn role(&self) -> Option<SplitRole> {
        self.role
    }

    pub fn with_role(mut self, role: SplitRole) -> Self {
        self.role = Some(role);
        self
    }

    /// New dataset holding the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        let mut samples = Vec::with_capacity(rows.len() * self.n_features);
        let mut labels = Vec::with_capacity(rows.len());
        for &r in rows {
            samples.extend_from_slice(self.row(r));
            labels.push(self.labels[r]);
        }
        Dataset {
            samples,
            n_features: self.n_features,
            labels,
            feature_names: self.feature_names.clone(),
            class_count: self.class_count,
            role: self.role,
        }
    }

    /// Row indices of each class, in dataset order.
    pub(crate) fn rows_by_class(&self) -> Vec<Vec<usize>> {
        let mut by_class = vec![Vec::new(); self.class_count];
        for (i, &label) in self.labels.iter().enumerate() {
            by_class[label].push(i);
        }
        by_class
    }
}

/// The split of a training portion into the three search-time parts, plus the
/// training portion itself and the held-out test set.
#[derive(Debug, Clone)]
pub struct SplitSet {
    pub optimization: Dataset,
    pub archive_validation: Dataset,
    pub evaluation: Dataset,
    pub training: Dataset,
    /// Attached by the caller; the splitter only sees the training portion.
    pub test: Option<Dataset>,
}

impl SplitSet {
    pub fn with_test(mut self, test: Dataset) -> Self {
        self.test = Some(test.with_role(SplitRole::Test));
        self
    }
}

/// Load a labeled dataset from a headered CSV file.
///
/// `label_column` is matched against header names first, then interpreted as
/// a 0-based column index. Labels are remapped to contiguous integers in
/// lexicographic order of their original text.
pub fn load_csv(path: impl AsRef<Path>, label_column: &str) -> Result<Dataset, DataError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_csv(&text, label_column)
}

/// Load a train/test file pair with one shared label mapping, so a class
/// missing from one file cannot shift the other file's label ids.
pub fn load_csv_pair(
    train_path: impl AsRef<Path>,
    test_path: impl AsRef<Path>,
    label_column: &str,
) -> Result<(Dataset, Dataset), DataError> {
    let read = |path: &Path| -> Result<String, DataError> {
        fs::read_to_string(path).map_err(|source| DataError::Io {
            path: path.display().to_string(),
            source,
        })
    };
    let train_raw = parse_rows(&read(train_path.as_ref())?, label_column)?;
    let test_raw = parse_rows(&read(test_path.as_ref())?, label_column)?;
    if train_raw.feature_names.len() != test_raw.feature_names.len() {
        return Err(DataError::Config(format!(
            "train file has {} features, test file has {}",
            train_raw.feature_names.len(),
            test_raw.feature_names.len()
        )));
    }
    let mut unique: Vec<String> = train_raw
        .label_texts
        .iter()
        .chain(&test_raw.label_texts)
        .cloned()
        .collect();
    unique.sort();
    unique.dedup();
    Ok((
        train_raw.into_dataset(&unique)?,
        test_raw.into_dataset(&unique)?,
    ))
}

/// CSV parsing split out from the I/O so tests can feed strings directly.
pub fn parse_csv(text: &str, label_column: &str) -> Result<Dataset, DataError> {
    let raw = parse_rows(text, label_column)?;
    let mut unique = raw.label_texts.clone();
    unique.sort();
    unique.dedup();
    raw.into_dataset(&unique)
}

struct RawRows {
    feature_names: Vec<String>,
    samples: Vec<f64>,
    label_texts: Vec<String>,
}

impl RawRows {
    fn into_dataset(self, classes: &[String]) -> Result<Dataset, DataError> {
        let labels: Vec<usize> = self
            .label_texts
            .iter()
            .map(|t| classes.binary_search(t).expect("label present"))
            .collect();
        let n_features = self.feature_names.len();
        Dataset::new(
            self.samples,
            n_features,
            labels,
            self.feature_names,
            classes.len(),
        )
    }
}

fn parse_rows(text: &str, label_column: &str) -> Result<RawRows, DataError> {
    let mut lines = text.lines().enumerate();
    let (_, header_line) = lines.next().ok_or(DataError::Schema {
        row: 1,
        column: None,
        message: "file is empty".into(),
    })?;
    let header: Vec<String> = split_line(header_line);
    if header.is_empty() {
        return Err(DataError::Schema {
            row: 1,
            column: None,
            message: "header row has no columns".into(),
        });
    }

    let label_idx = resolve_label_column(&header, label_column)?;
    if header.len() < 2 {
        return Err(DataError::Schema {
            row: 1,
            column: None,
            message: "need at least one feature column besides the label".into(),
        });
    }

    let n_features = header.len() - 1;
    let mut samples = Vec::new();
    let mut label_texts = Vec::new();
    for (line_idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row = line_idx + 1; // 1-based file row
        let cells = split_line(line);
        if cells.len() != header.len() {
            return Err(DataError::Schema {
                row,
                column: None,
                message: format!("row has {} cells, expected {}", cells.len(), header.len()),
            });
        }
        for (col, cell) in cells.iter().enumerate() {
            if col == label_idx {
                label_texts.push(cell.clone());
            } else {
                let value: f64 = cell.parse().map_err(|_| DataError::Schema {
                    row,
                    column: Some(col + 1),
                    message: format!("cell '{cell}' is not numeric"),
                })?;
                samples.push(value);
            }
        }
    }
    if label_texts.is_empty() {
        return Err(DataError::Schema {
            row: 1,
            column: None,
            message: "file has no data rows".into(),
        });
    }

    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, name)| name.clone())
        .collect();
    debug_assert_eq!(feature_names.len(), n_features);

    Ok(RawRows {
        feature_names,
        samples,
        label_texts,
    })
}

fn resolve_label_column(header: &[String], label_column: &str) -> Result<usize, DataError> {
    if let Some(idx) = header.iter().position(|h| h == label_column) {
        return Ok(idx);
    }
    if let Ok(idx) = label_column.parse::<usize>() {
        if idx < header.len() {
            return Ok(idx);
        }
    }
    Err(DataError::Schema {
        row: 1,
        column: None,
        message: format!("label column '{label_column}' not found in header"),
    })
}

fn split_line(line: &str) -> Vec<String> {
    line.trim_end_matches('\r')
        .split(',')
        .map(|cell| unquote(cell.trim()).to_string())
        .collect()
}

fn unquote(cell: &str) -> &str {
    if cell.len() >= 2 && cell.starts_with('"') && cell.ends_with('"') {
        &cell[1..cell.len() - 1]
    } else {
        cell
    }
}

/// Split a training dataset into optimization / archive-validation /
/// evaluation parts.
///
/// Rows are shuffled by a seeded permutation and partitioned class by class
/// (stratified). Per-class part sizes are floored; remainder rows go to the
/// parts with the largest fractional share, ties toward the optimization
/// part, which keeps every part within one sample per class of its exact
/// share. The same `(dataset, fractions, seed)` always yields the identical
/// split.
pub fn split(dataset: &Dataset, fractions: [f64; 3], seed: u64) -> Result<SplitSet, DataError> {
    if fractions.iter().any(|&f| f < 0.0) {
        return Err(DataError::Config(
            "split fractions must be nonnegative".into(),
        ));
    }
    let total: f64 = fractions.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(DataError::Config(format!(
            "split fractions must sum to 1.0, got {total}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for mut class_rows in dataset.rows_by_class() {
        class_rows.shuffle(&mut rng);
        let n = class_rows.len();
        let exact: Vec<f64> = fractions.iter().map(|f| n as f64 * f).collect();
        let mut sizes: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
        let mut remainder = n - sizes.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by(|&a, &b| {
            let fa = exact[a] - sizes[a] as f64;
            let fb = exact[b] - sizes[b] as f64;
            fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
        });
        for &p in &order {
            if remainder == 0 {
                break;
            }
            sizes[p] += 1;
            remainder -= 1;
        }
        let mut cursor = 0;
        for (part, &size) in parts.iter_mut().zip(&sizes) {
            part.extend_from_slice(&class_rows[cursor..cursor + size]);
            cursor += size;
        }
    }

    let names = ["optimization", "archive_validation", "evaluation"];
    for (part, name) in parts.iter().zip(names) {
        if part.is_empty() {
            return Err(DataError::Config(format!(
                "the {name} part would be empty for {} rows and fractions {fractions:?}",
                dataset.n_rows()
            )));
        }
    }

    Ok(SplitSet {
        optimization: dataset
            .select_rows(&parts[0])
            .with_role(SplitRole::Optimization),
        archive_validation: dataset
            .select_rows(&parts[1])
            .with_role(SplitRole::ArchiveValidation),
        evaluation: dataset
            .select_rows(&parts[2])
            .with_role(SplitRole::Evaluation),
        training: dataset.clone().with_role(SplitRole::Training),
        test: None,
    })
}

/// Stratified two-way split for carving a test set out of a single file.
/// The training side absorbs per-class rounding remainders.
pub fn train_test_split(
    dataset: &Dataset,
    test_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset), DataError> {
    if !(0.0..1.0).contains(&test_fraction) || test_fraction == 0.0 {
        return Err(DataError::Config(format!(
            "test fraction must be in (0, 1), got {test_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_rows = Vec::new();
    let mut test_rows = Vec::new();
    for mut class_rows in dataset.rows_by_class() {
        class_rows.shuffle(&mut rng);
        let n_test = (class_rows.len() as f64 * test_fraction).floor() as usize;
        test_rows.extend_from_slice(&class_rows[..n_test]);
        train_rows.extend_from_slice(&class_rows[n_test..]);
    }
    if train_rows.is_empty() || test_rows.is_empty() {
        return Err(DataError::Config(
            "train/test split left one side empty".into(),
        ));
    }
    Ok((
        dataset
            .select_rows(&train_rows)
            .with_role(SplitRole::Training),
        dataset.select_rows(&test_rows).with_role(SplitRole::Test),
    ))
}

/// Generate Gaussian class blobs with distinct means (one per class),
/// deterministic under `seed`. Intended for tests and examples.
pub fn generate_synthetic(
    n: usize,
    f: usize,
    classes: usize,
    seed: u64,
) -> Result<Dataset, DataError> {
    if classes < 2 {
        return Err(DataError::Config("need at least 2 classes".into()));
    }
    if n < classes {
        return Err(DataError::Config(format!(
            "need at least one sample per class: n={n}, classes={classes}"
        )));
    }
    if f == 0 {
        return Err(DataError::Config("need at least 1 feature".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).expect("valid normal");
    let mut samples = Vec::with_capacity(n * f);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % classes;
        labels.push(class);
        let mean = 10.0 * class as f64;
        for _ in 0..f {
            samples.push(mean + normal.sample(&mut rng));
        }
    }
    let feature_names = (0..f).map(|j| format!("f{j}")).collect();
    Dataset::new(samples, f, labels, feature_names, classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toy(labels: &[usize], class_count: usize) -> Dataset {
        let n = labels.len();
        let samples: Vec<f64> = (0..n * 2).map(|v| v as f64).collect();
        Dataset::new(
            samples,
            2,
            labels.to_vec(),
            vec!["a".into(), "b".into()],
            class_count,
        )
        .unwrap()
    }

    #[test]
    fn labels_remap_lexicographically() {
        let csv = "x,label\n1.0,b\n2.0,a\n3.0,a\n";
        let ds = parse_csv(csv, "label").unwrap();
        assert_eq!(ds.labels(), &[1, 0, 0]);
        assert_eq!(ds.class_count(), 2);
    }

    #[test]
    fn non_numeric_cell_reports_file_row() {
        // Header is row 1, so the bad cell in the fourth data row is row 5.
        let csv = "x,y,label\n1,2,a\n3,4,b\n5,6,a\noops,8,b\n";
        match parse_csv(csv, "label") {
            Err(DataError::Schema { row, column, .. }) => {
                assert_eq!(row, 5);
                assert_eq!(column, Some(1));
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn row_length_mismatch_is_rejected() {
        let csv = "x,y,label\n1,2,a\n3,4\n";
        match parse_csv(csv, "label") {
            Err(DataError::Schema { row, .. }) => assert_eq!(row, 3),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn pima_shaped_file_has_eight_features() {
        let mut csv = String::from("p1,p2,p3,p4,p5,p6,p7,p8,outcome\n");
        csv.push_str("6,148,72,35,0,33.6,0.627,50,1\n");
        csv.push_str("1,85,66,29,0,26.6,0.351,31,0\n");
        let ds = parse_csv(&csv, "outcome").unwrap();
        assert_eq!(ds.n_features(), 8);
        assert_eq!(ds.class_count(), 2);
    }

    #[test]
    fn csv_pair_shares_one_label_mapping() {
        use std::io::Write;
        let dir = tempfile::tempdir().unwrap();
        let train_path = dir.path().join("train.csv");
        let test_path = dir.path().join("test.csv");
        // The test file only contains class "b"; a per-file remap would give
        // it label 0 while the training file maps b -> 1.
        let mut f = fs::File::create(&train_path).unwrap();
        writeln!(f, "x,label\n1.0,a\n2.0,b\n3.0,a").unwrap();
        let mut f = fs::File::create(&test_path).unwrap();
        writeln!(f, "x,label\n9.0,b").unwrap();

        let (train, test) = load_csv_pair(&train_path, &test_path, "label").unwrap();
        assert_eq!(train.labels(), &[0, 1, 0]);
        assert_eq!(test.labels(), &[1]);
        assert_eq!(train.class_count(), 2);
        assert_eq!(test.class_count(), 2);
    }

    #[test]
    fn label_column_by_index() {
        let csv = "x,y,z\n1,2,3\n4,5,6\n";
        let ds = parse_csv(csv, "1").unwrap();
        assert_eq!(ds.n_features(), 2);
        assert_eq!(ds.feature_names(), &["x".to_string(), "z".to_string()]);
    }

    #[test]
    fn missing_label_column_is_schema_error() {
        let csv = "x,y\n1,2\n";
        assert!(matches!(
            parse_csv(csv, "label"),
            Err(DataError::Schema { row: 1, .. })
        ));
    }

    #[test]
    fn split_exact_fractions() {
        // Class sizes 60/40 make 0.7/0.15/0.15 exact per class.
        let labels: Vec<usize> = (0..100).map(|i| usize::from(i >= 60)).collect();
        let ds = toy(&labels, 2);
        let s = split(&ds, [0.7, 0.15, 0.15], 1).unwrap();
        assert_eq!(s.optimization.n_rows(), 70);
        assert_eq!(s.archive_validation.n_rows(), 15);
        assert_eq!(s.evaluation.n_rows(), 15);
    }

    #[test]
    fn split_of_384_rows_gives_269_optimization_rows() {
        // A Pima-sized training portion with a 250/134 class balance.
        let labels: Vec<usize> = (0..384).map(|i| usize::from(i >= 250)).collect();
        let ds = toy(&labels, 2);
        let s = split(&ds, [0.7, 0.15, 0.15], 5).unwrap();

        // Independent oracle: apply the floor + largest-share rule per class.
        let mut expected = 0usize;
        for &n in &[250usize, 134] {
            let exact = [n as f64 * 0.7, n as f64 * 0.15, n as f64 * 0.15];
            let mut sizes = [
                exact[0].floor() as usize,
                exact[1].floor() as usize,
                exact[2].floor() as usize,
            ];
            let mut rem = n - sizes.iter().sum::<usize>();
            let mut order = [0usize, 1, 2];
            order.sort_by(|&a, &b| {
                (exact[b] - sizes[b] as f64)
                    .partial_cmp(&(exact[a] - sizes[a] as f64))
                    .unwrap()
                    .then(a.cmp(&b))
            });
            for &p in &order {
                if rem == 0 {
                    break;
                }
                sizes[p] += 1;
                rem -= 1;
            }
            expected += sizes[0];
        }
        assert_eq!(s.optimization.n_rows(), expected);
        assert!((268..=270).contains(&s.optimization.n_rows()));
        assert_eq!(expected, 269);
    }

    #[test]
    fn split_is_deterministic() {
        let ds = generate_synthetic(97, 3, 2, 5).unwrap();
        let a = split(&ds, [0.7, 0.15, 0.15], 42).unwrap();
        let b = split(&ds, [0.7, 0.15, 0.15], 42).unwrap();
        assert_eq!(a.optimization, b.optimization);
        assert_eq!(a.archive_validation, b.archive_validation);
        assert_eq!(a.evaluation, b.evaluation);
    }

    #[test]
    fn split_parts_carry_roles() {
        let ds = generate_synthetic(40, 2, 2, 9).unwrap();
        let s = split(&ds, [0.7, 0.15, 0.15], 3).unwrap();
        assert_eq!(s.optimization.role(), Some(SplitRole::Optimization));
        assert_eq!(
            s.archive_validation.role(),
            Some(SplitRole::ArchiveValidation)
        );
        assert_eq!(s.evaluation.role(), Some(SplitRole::Evaluation));
        assert_eq!(s.training.role(), Some(SplitRole::Training));
        assert!(s.test.is_none());
        let s = s.with_test(ds);
        assert_eq!(s.test.unwrap().role(), Some(SplitRole::Test));
    }

    #[test]
    fn empty_part_is_config_error() {
        let ds = generate_synthetic(10, 2, 2, 0).unwrap();
        assert!(matches!(
            split(&ds, [0.98, 0.01, 0.01], 0),
            Err(DataError::Config(_))
        ));
    }

    #[test]
    fn synthetic_is_deterministic_and_validated() {
        let a = generate_synthetic(100, 8, 2, 7).unwrap();
        let b = generate_synthetic(100, 8, 2, 7).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            generate_synthetic(1, 1, 2, 0),
            Err(DataError::Config(_))
        ));
    }

    #[test]
    fn synthetic_blobs_are_well_separated() {
        let ds = generate_synthetic(4, 1, 2, 11).unwrap();
        // Means 0 and 10: every class-0 value is far below every class-1 value.
        for (i, &l) in ds.labels().iter().enumerate() {
            let v = ds.value(i, 0);
            if l == 0 {
                assert!(v < 5.0);
            } else {
                assert!(v > 5.0);
            }
        }
    }

    proptest! {
        #[test]
        fn split_partitions_all_rows(n in 20usize..120, seed in 0u64..500) {
            let labels: Vec<usize> = (0..n).map(|i| i % 2).collect();
            let ds = toy(&labels, 2);
            let s = split(&ds, [0.7, 0.15, 0.15], seed).unwrap();
            let total = s.optimization.n_rows() + s.archive_validation.n_rows()
                + s.evaluation.n_rows();
            prop_assert_eq!(total, n);

            // The three parts reassemble the training portion exactly (no
            // row shared, none lost): compare sorted (label, row bits).
            let mut rebuilt: Vec<(usize, Vec<u64>)> = Vec::new();
            for part in [&s.optimization, &s.archive_validation, &s.evaluation] {
                for i in 0..part.n_rows() {
                    let bits = part.row(i).iter().map(|v| v.to_bits()).collect();
                    rebuilt.push((part.labels()[i], bits));
                }
            }
            let mut original: Vec<(usize, Vec<u64>)> = (0..ds.n_rows())
                .map(|i| (ds.labels()[i], ds.row(i).iter().map(|v| v.to_bits()).collect()))
                .collect();
            rebuilt.sort();
            original.sort();
            prop_assert_eq!(rebuilt, original);
            // Per-class proportions match the whole within 1 sample.
            for class in 0..2 {
                let whole = ds.labels().iter().filter(|&&l| l == class).count();
                for (part, frac) in [(&s.optimization, 0.7f64),
                                     (&s.archive_validation, 0.15),
                                     (&s.evaluation, 0.15)] {
                    let got = part.labels().iter().filter(|&&l| l == class).count();
                    let expected = whole as f64 * frac;
                    prop_assert!((got as f64 - expected).abs() <= 1.0 + 1e-9);
                }
            }
        }
    }
}
