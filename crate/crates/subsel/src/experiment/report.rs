//! Per-replication records, aggregate statistics, and report emission.

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub replication: usize,
    /// Selected genome as a bit string over the pool.
    pub genome: String,
    pub ensemble_size: usize,
    pub test_accuracy: f64,
    /// Primary objective of the selected genome on the optimization split.
    pub objective_value: Option<f64>,
    /// Objective of the selected genome on the archive-validation split.
    pub validation_value: Option<f64>,
    /// Classifier fits that happened between search start and search end.
    /// Zero for the classifier-free pipeline, by construction.
    pub trainings_during_search: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationFailure {
    pub replication: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub size_mean: f64,
    pub size_std: f64,
    /// Number of successful replications behind the aggregates.
    pub effective_n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    /// Majority-vote test accuracy of the full pool.
    pub all_accuracy: f64,
    pub all_size: usize,
    /// Fraction of test samples at least one pool member gets right.
    pub oracle_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Significance {
    pub test: String,
    /// Two-sided p-value of the replication accuracies against the constant
    /// all-subspaces baseline; `None` until enough replications succeeded.
    pub p_value_vs_all: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub records: Vec<ReplicationRecord>,
    pub failures: Vec<ReplicationFailure>,
    pub aggregates: Aggregates,
    pub baseline: Baseline,
    pub significance: Significance,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Table rows: the selected ensembles, the all-subspaces baseline, and
    /// the oracle bound.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,accuracy_mean,accuracy_std,size_mean,size_std,n\n");
        out.push_str(&format!(
            "selected,{:.4},{:.4},{:.2},{:.2},{}\n",
            self.aggregates.accuracy_mean,
            self.aggregates.accuracy_std,
            self.aggregates.size_mean,
            self.aggregates.size_std,
            self.aggregates.effective_n
        ));
        out.push_str(&format!(
            "all,{:.4},0.0000,{:.2},0.00,1\n",
            self.baseline.all_accuracy, self.baseline.all_size as f64
        ));
        out.push_str(&format!("oracle,{:.4},,,,\n", self.baseline.oracle_rate));
        out
    }
}

/// Mean and sample standard deviation (n - 1 denominator; 0 for n < 2).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Aggregate accuracy and ensemble size over the successful replications.
pub fn replicate_stats(records: &[ReplicationRecord]) -> Aggregates {
    let accuracies: Vec<f64> = records.iter().map(|r| r.test_accuracy).collect();
    let sizes: Vec<f64> = records.iter().map(|r| r.ensemble_size as f64).collect();
    let (accuracy_mean, accuracy_std) = mean_std(&accuracies);
    let (size_mean, size_std) = mean_std(&sizes);
    Aggregates {
        accuracy_mean,
        accuracy_std,
        size_mean,
        size_std,
        effective_n: records.len(),
    }
}

/// Two-sided Wilcoxon signed-rank test (normal approximation with tie and
/// continuity corrections). Returns 1.0 when every pair is tied.
pub fn wilcoxon_signed_rank(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.is_empty() {
        return None;
    }
    let mut diffs: Vec<f64> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| x - y)
        .filter(|d| d.abs() > 1e-12)
        .collect();
    if diffs.is_empty() {
        return Some(1.0);
    }
    diffs.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());

    // Average ranks over ties on |d|.
    let n = diffs.len();
    let mut ranks = vec![0.0; n];
    let mut tie_correction = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && (diffs[j + 1].abs() - diffs[i].abs()).abs() <= 1e-12 {
            j += 1;
        }
        let avg_rank = (i + j + 2) as f64 / 2.0;
        for r in ranks.iter_mut().take(j + 1).skip(i) {
            *r = avg_rank;
        }
        let t = (j - i + 1) as f64;
        tie_correction += t * t * t - t;
        i = j + 1;
    }

    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_correction / 48.0;
    if var <= 0.0 {
        return Some(1.0);
    }
    let continuity = 0.5 * (w_plus - mean).signum();
    let z = (w_plus - mean - continuity) / var.sqrt();
    Some((2.0 * normal_sf(z.abs())).min(1.0))
}

/// Upper tail of the standard normal via an erfc approximation
/// (Abramowitz & Stegun 7.1.26, |error| < 1.5e-7).
fn normal_sf(z: f64) -> f64 {
    let x = z / std::f64::consts::SQRT_2;
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    0.5 * poly * (-x * x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(replication: usize, accuracy: f64, size: usize) -> ReplicationRecord {
        ReplicationRecord {
            replication,
            genome: "111".into(),
            ensemble_size: size,
            test_accuracy: accuracy,
            objective_value: None,
            validation_value: None,
            trainings_during_search: 0,
        }
    }

    #[test]
    fn mean_std_hand_cases() {
        let (m, s) = mean_std(&[0.8, 0.8]);
        assert_eq!((m, s), (0.8, 0.0));
        let (m, s) = mean_std(&[0.7, 0.9]);
        assert!((m - 0.8).abs() < 1e-12);
        assert!((s - 0.1414).abs() < 1e-4);
    }

    #[test]
    fn stats_match_an_independent_recomputation() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(30);
        let records: Vec<ReplicationRecord> = (0..30)
            .map(|i| record(i, rng.random::<f64>(), rng.random_range(3..10)))
            .collect();
        let agg = replicate_stats(&records);

        // Second implementation: sum and sum of squares.
        let xs: Vec<f64> = records.iter().map(|r| r.test_accuracy).collect();
        let n = xs.len() as f64;
        let sum: f64 = xs.iter().sum();
        let sum_sq: f64 = xs.iter().map(|x| x * x).sum();
        let mean = sum / n;
        let var = (sum_sq - n * mean * mean) / (n - 1.0);
        assert!((agg.accuracy_mean - mean).abs() < 1e-12);
        assert!((agg.accuracy_std - var.sqrt()).abs() < 1e-9);
        assert_eq!(agg.effective_n, 30);
    }

    #[test]
    fn wilcoxon_tied_and_separated() {
        let a = [0.5, 0.6, 0.7];
        assert_eq!(wilcoxon_signed_rank(&a, &a), Some(1.0));

        let xs: Vec<f64> = (0..30).map(|i| 0.9 + i as f64 * 1e-4).collect();
        let ys: Vec<f64> = (0..30).map(|i| 0.5 + i as f64 * 1e-4).collect();
        let p = wilcoxon_signed_rank(&xs, &ys).unwrap();
        assert!(p < 0.001, "p = {p}");
    }

    #[test]
    fn wilcoxon_is_symmetric_in_direction() {
        let xs: Vec<f64> = (0..20).map(|i| 0.8 + (i % 3) as f64 * 0.01).collect();
        let ys: Vec<f64> = (0..20).map(|i| 0.7 + (i % 5) as f64 * 0.01).collect();
        let p1 = wilcoxon_signed_rank(&xs, &ys).unwrap();
        let p2 = wilcoxon_signed_rank(&ys, &xs).unwrap();
        assert!((p1 - p2).abs() < 1e-12);
    }

    #[test]
    fn csv_has_three_rows() {
        let report = Report {
            config: ExperimentConfig::default(),
            records: vec![record(0, 0.8, 4)],
            failures: vec![],
            aggregates: replicate_stats(&[record(0, 0.8, 4)]),
            baseline: Baseline {
                all_accuracy: 0.82,
                all_size: 10,
                oracle_rate: 0.98,
            },
            significance: Significance {
                test: "wilcoxon-signed-rank".into(),
                p_value_vs_all: Some(0.2),
            },
        };
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("selected,"));
        assert!(lines[2].starts_with("all,"));
        assert!(lines[3].starts_with("oracle,"));
    }
}
