// Indexed loops over objective vectors keep the front bookkeeping readable.
#![allow(clippy::needless_range_loop)]

//! Genome search: a single-objective GA and an NSGA-II multi-objective GA
//! over subspace-selection bitstrings, both validated per generation against
//! a held-out objective to resist overfitting the search split.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diversity::Orientation;
use crate::subspace::Genome;

const FITNESS_EPS: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("objective failed at generation {generation}: {message}")]
    Objective { generation: usize, message: String },
}

/// A scalar objective over genomes, tagged with its search orientation.
pub trait Objective: Sync {
    fn evaluate(&self, genome: &Genome) -> Result<f64, String>;
    fn orientation(&self) -> Orientation;
}

/// Normalize a raw objective value so that larger is always better.
fn to_score(orientation: Orientation, value: f64) -> f64 {
    match orientation {
        Orientation::Maximize => value,
        Orientation::Minimize => -value,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    /// Per-bit flip probability; `None` uses 1/L for genome length L.
    pub mutation_prob: Option<f64>,
    pub min_size: usize,
    pub elitism_count: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 32,
            generations: 500,
            crossover_prob: 0.5,
            mutation_prob: None,
            min_size: 3,
            elitism_count: 1,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self, genome_len: usize) -> Result<(), SearchError> {
        if self.population_size < 2 {
            return Err(SearchError::Config("population_size must be >= 2".into()));
        }
        if self.generations == 0 {
            return Err(SearchError::Config("generations must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            return Err(SearchError::Config(format!(
                "crossover_prob must be in [0, 1], got {}",
                self.crossover_prob
            )));
        }
        if let Some(p) = self.mutation_prob {
            if !(0.0..=1.0).contains(&p) {
                return Err(SearchError::Config(format!(
                    "mutation_prob must be in [0, 1], got {p}"
                )));
            }
        }
        if self.min_size < 2 {
            return Err(SearchError::Config("min_size must be >= 2".into()));
        }
        if self.min_size > genome_len {
            return Err(SearchError::Config(format!(
                "min_size {} exceeds pool size {genome_len}",
                self.min_size
            )));
        }
        if self.elitism_count >= self.population_size {
            return Err(SearchError::Config(
                "elitism_count must be below population_size".into(),
            ));
        }
        Ok(())
    }

    fn mutation_prob_for(&self, genome_len: usize) -> f64 {
        self.mutation_prob.unwrap_or(1.0 / genome_len.max(1) as f64)
    }
}

/// Roulette-wheel selection on shifted-positive fitness
/// (fitness - min + eps).
pub fn roulette_select<'a, T>(
    population: &'a [T],
    fitnesses: &[f64],
    rng: &mut ChaCha8Rng,
) -> Result<&'a T, SearchError> {
    if population.is_empty() || population.len() != fitnesses.len() {
        return Err(SearchError::Config(format!(
            "{} individuals with {} fitness values",
            population.len(),
            fitnesses.len()
        )));
    }
    if fitnesses.iter().any(|f| !f.is_finite()) {
        return Err(SearchError::Config(
            "roulette selection needs finite fitness values".into(),
        ));
    }
    let min = fitnesses.iter().cloned().fold(f64::INFINITY, f64::min);
    let shifted: Vec<f64> = fitnesses.iter().map(|f| f - min + FITNESS_EPS).collect();
    let total: f64 = shifted.iter().sum();
    let mut target = rng.random::<f64>() * total;
    for (item, &w) in population.iter().zip(&shifted) {
        target -= w;
        if target <= 0.0 {
            return Ok(item);
        }
    }
    Ok(population.last().expect("non-empty"))
}

/// One-point crossover: with probability `crossover_prob`, swap the suffixes
/// of the two parents at a uniform cut point in [1, L-1].
pub fn one_point_crossover(
    a: &Genome,
    b: &Genome,
    crossover_prob: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(Genome, Genome), SearchError> {
    if a.len() != b.len() {
        return Err(SearchError::Shape(format!(
            "parent lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(SearchError::Shape("genomes must have length >= 2".into()));
    }
    if crossover_prob > 0.0 && rng.random::<f64>() < crossover_prob {
        let cut = rng.random_range(1..a.len());
        let mut c1 = a.clone();
        let mut c2 = b.clone();
        for i in cut..a.len() {
            c1.set(i, b.bit(i));
            c2.set(i, a.bit(i));
        }
        Ok((c1, c2))
    } else {
        Ok((a.clone(), b.clone()))
    }
}

/// Flip each bit independently with probability `p`.
pub fn bitflip_mutation(genome: &Genome, p: f64, rng: &mut ChaCha8Rng) -> Genome {
    assert!((0.0..=1.0).contains(&p), "mutation probability {p}");
    let mut out = genome.clone();
    for i in 0..out.len() {
        if rng.random::<f64>() < p {
            out.flip(i);
        }
    }
    out
}

/// Set uniformly-chosen unset bits until the genome selects at least
/// `min_size` subspaces.
pub fn repair_min_size(genome: &Genome, min_size: usize, rng: &mut ChaCha8Rng) -> Genome {
    assert!(min_size <= genome.len(), "min_size exceeds genome length");
    let mut out = genome.clone();
    while out.popcount() < min_size {
        let unset: Vec<usize> = (0..out.len()).filter(|&i| !out.bit(i)).collect();
        let pick = unset[rng.random_range(0..unset.len())];
        out.set(pick, true);
    }
    out
}

/// True when `a` Pareto-dominates `b` (all objectives normalized to
/// maximize): no worse everywhere and strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        if x > y {
            strictly = true;
        }
    }
    strictly
}

/// Fast non-dominated sorting: returns fronts of point indices, best first.
/// All objective vectors must be normalized to maximize.
pub fn non_dominated_sort(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&points[i], &points[j]) {
                dominated_by[i].push(j);
                domination_count[j] += 1;
            } else if dominates(&points[j], &points[i]) {
                dominated_by[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// NSGA-II crowding distance within one front: boundary points get infinity,
/// interior points the sum over objectives of normalized neighbor gaps.
pub fn crowding_distance(front: &[Vec<f64>]) -> Vec<f64> {
    let n = front.len();
    assert!(n > 0, "crowding distance of an empty front");
    let m = front[0].len();
    let mut distance = vec![0.0f64; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    for obj in 0..m {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            front[a][obj]
                .partial_cmp(&front[b][obj])
                .unwrap()
                .then(a.cmp(&b))
        });
        let lo = front[order[0]][obj];
        let hi = front[order[n - 1]][obj];
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        if hi > lo {
            for w in 1..(n - 1) {
                let gap = front[order[w + 1]][obj] - front[order[w - 1]][obj];
                distance[order[w]] += gap / (hi - lo);
            }
        }
    }
    distance
}

/// One generation's summary, emitted as a JSON line in run histories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_objective: f64,
    pub best_validation: f64,
    pub archive_size: usize,
}

/// Result of a single-objective GA run: the best genome under the held-out
/// validation objective, plus the per-generation history.
#[derive(Debug, Clone)]
pub struct GaOutcome {
    pub best: Genome,
    pub best_validation: f64,
    pub history: Vec<GenerationRecord>,
}

fn eval_all(
    objective: &dyn Objective,
    population: &[Genome],
    generation: usize,
) -> Result<Vec<f64>, SearchError> {
    population
        .iter()
        .map(|g| {
            objective
                .evaluate(g)
                .map_err(|message| SearchError::Objective {
                    generation,
                    message,
                })
        })
        .collect()
}

fn random_population(genome_len: usize, config: &GaConfig, rng: &mut ChaCha8Rng) -> Vec<Genome> {
    (0..config.population_size)
        .map(|_| {
            let bits = (0..genome_len).map(|_| rng.random::<bool>()).collect();
            repair_min_size(&Genome::new(bits), config.min_size, rng)
        })
        .collect()
}

/// Generational GA with elitism and roulette selection. After every
/// generation the population is re-scored on `validation_objective` and the
/// best-so-far validated genome is kept in a one-slot archive, which is what
/// the run returns.
pub fn ga_run(
    objective: &dyn Objective,
    validation_objective: &dyn Objective,
    genome_len: usize,
    config: &GaConfig,
) -> Result<GaOutcome, SearchError> {
    config.validate(genome_len)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let p_mut = config.mutation_prob_for(genome_len);
    let mut population = random_population(genome_len, config, &mut rng);
    let mut archive: Option<(Genome, f64, f64)> = None; // genome, raw value, score
    let mut history = Vec::with_capacity(config.generations);

    for generation in 0..config.generations {
        let values = eval_all(objective, &population, generation)?;
        let scores: Vec<f64> = values
            .iter()
            .map(|&v| to_score(objective.orientation(), v))
            .collect();

        let validation = eval_all(validation_objective, &population, generation)?;
        for (genome, &raw) in population.iter().zip(&validation) {
            let score = to_score(validation_objective.orientation(), raw);
            let improves = archive.as_ref().is_none_or(|(_, _, best)| score > *best);
            if improves {
                archive = Some((genome.clone(), raw, score));
            }
        }

        let best_idx = (0..scores.len())
            .max_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap().then(b.cmp(&a)))
            .expect("population non-empty");
        let archived = archive.as_ref().expect("archive filled above");
        history.push(GenerationRecord {
            generation,
            best_objective: values[best_idx],
            best_validation: archived.1,
            archive_size: 1,
        });

        // Elites first, offspring fill the rest.
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));
        let mut next: Vec<Genome> = order
            .iter()
            .take(config.elitism_count)
            .map(|&i| population[i].clone())
            .collect();
        while next.len() < config.population_size {
            let pa = roulette_select(&population, &scores, &mut rng)?.clone();
            let pb = roulette_select(&population, &scores, &mut rng)?.clone();
            let (c1, c2) = one_point_crossover(&pa, &pb, config.crossover_prob, &mut rng)?;
            for child in [c1, c2] {
                if next.len() == config.population_size {
                    break;
                }
                let mutated = bitflip_mutation(&child, p_mut, &mut rng);
                next.push(repair_min_size(&mutated, config.min_size, &mut rng));
            }
        }
        population = next;
    }

    let (best, best_validation, _) = archive.expect("at least one generation ran");
    Ok(GaOutcome {
        best,
        best_validation,
        history,
    })
}

/// One validated solution in a [`ParetoArchive`].
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry {
    pub genome: Genome,
    /// Objective vector on the search split.
    pub objectives: Vec<f64>,
    /// Objective vector on the archive-validation split; dominance in the
    /// archive is decided on this vector.
    pub validation: Vec<f64>,
}

/// Non-dominated solutions accumulated across generations, deduplicated by
/// bit pattern. Insertion prunes entries the newcomer dominates and rejects
/// newcomers dominated by an existing entry.
#[derive(Debug, Clone)]
pub struct ParetoArchive {
    orientations: Vec<Orientation>,
    entries: Vec<ArchiveEntry>,
}

impl ParetoArchive {
    pub fn new(orientations: Vec<Orientation>) -> Self {
        Self {
            orientations,
            entries: Vec::new(),
        }
    }

    pub fn orientations(&self) -> &[Orientation] {
        &self.orientations
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, entry: ArchiveEntry) -> bool {
        if entry.validation.len() != self.orientations.len() {
            return false;
        }
        if self.entries.iter().any(|e| e.genome == entry.genome) {
            return false;
        }
        let orientations = self.orientations.clone();
        let normalize = |values: &[f64]| -> Vec<f64> {
            values
                .iter()
                .zip(&orientations)
                .map(|(&v, &o)| to_score(o, v))
                .collect()
        };
        let candidate = normalize(&entry.validation);
        if self
            .entries
            .iter()
            .any(|e| dominates(&normalize(&e.validation), &candidate))
        {
            return false;
        }
        self.entries
            .retain(|e| !dominates(&candidate, &normalize(&e.validation)));
        self.entries.push(entry);
        true
    }

    /// JSON dump of the archived genomes and their objective vectors.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            genome: String,
            size: usize,
            objectives: &'a [f64],
            validation: &'a [f64],
        }
        let dumps: Vec<Dump<'_>> = self
            .entries
            .iter()
            .map(|e| Dump {
                genome: e.genome.to_string(),
                size: e.genome.popcount(),
                objectives: &e.objectives,
                validation: &e.validation,
            })
            .collect();
        serde_json::to_string_pretty(&dumps).expect("archive serializes")
    }
}

/// Result of an NSGA-II run.
#[derive(Debug, Clone)]
pub struct MogaOutcome {
    pub archive: ParetoArchive,
    pub history: Vec<GenerationRecord>,
}

struct Scored {
    genome: Genome,
    objectives: Vec<f64>, // raw
    normalized: Vec<f64>,
}

/// NSGA-II over two objectives: the supplied primary objective and the
/// maximization of the number of selected subspaces. Each generation the
/// population is re-scored on the validation objective and merged into the
/// Pareto archive, which is what the run returns.
pub fn nsga2_run(
    objective: &dyn Objective,
    validation_objective: &dyn Objective,
    genome_len: usize,
    config: &GaConfig,
) -> Result<MogaOutcome, SearchError> {
    config.validate(genome_len)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let p_mut = config.mutation_prob_for(genome_len);
    let orientation = objective.orientation();

    let score_genomes =
        |genomes: &[Genome], generation: usize| -> Result<Vec<Scored>, SearchError> {
            let values = eval_all(objective, genomes, generation)?;
            Ok(genomes
                .iter()
                .zip(values)
                .map(|(g, v)| {
                    let size = g.popcount() as f64;
                    Scored {
                        genome: g.clone(),
                        objectives: vec![v, size],
                        normalized: vec![to_score(orientation, v), size],
                    }
                })
                .collect())
        };

    let population = random_population(genome_len, config, &mut rng);
    let mut population = score_genomes(&population, 0)?;
    let mut archive = ParetoArchive::new(vec![
        validation_objective.orientation(),
        Orientation::Maximize,
    ]);
    let mut history = Vec::with_capacity(config.generations);

    let merge_into_archive =
        |population: &[Scored], archive: &mut ParetoArchive, generation: usize| {
            let genomes: Vec<Genome> = population.iter().map(|s| s.genome.clone()).collect();
            let validation = eval_all(validation_objective, &genomes, generation)?;
            let mut best_validation = f64::NEG_INFINITY;
            for (scored, raw) in population.iter().zip(validation) {
                best_validation =
                    best_validation.max(to_score(validation_objective.orientation(), raw));
                archive.insert(ArchiveEntry {
                    genome: scored.genome.clone(),
                    objectives: scored.objectives.clone(),
                    validation: vec![raw, scored.genome.popcount() as f64],
                });
            }
            Ok::<f64, SearchError>(best_validation)
        };

    for generation in 0..config.generations {
        let best_validation = merge_into_archive(&population, &mut archive, generation)?;
        let best_objective = population
            .iter()
            .map(|s| s.normalized[0])
            .fold(f64::NEG_INFINITY, f64::max);
        history.push(GenerationRecord {
            generation,
            best_objective: to_score(orientation, best_objective), // undo sign
            best_validation: to_score(validation_objective.orientation(), best_validation),
            archive_size: archive.len(),
        });

        // Mating selection: binary tournament on (rank, crowding), ties
        // broken by bit pattern for determinism.
        let points: Vec<Vec<f64>> = population.iter().map(|s| s.normalized.clone()).collect();
        let fronts = non_dominated_sort(&points);
        let mut rank = vec![0usize; population.len()];
        let mut crowd = vec![0.0f64; population.len()];
        for (r, front) in fronts.iter().enumerate() {
            let front_points: Vec<Vec<f64>> = front.iter().map(|&i| points[i].clone()).collect();
            let distances = crowding_distance(&front_points);
            for (&i, &d) in front.iter().zip(&distances) {
                rank[i] = r;
                crowd[i] = d;
            }
        }
        let better = |a: usize, b: usize, population: &[Scored]| -> usize {
            match rank[a].cmp(&rank[b]) {
                std::cmp::Ordering::Less => a,
                std::cmp::Ordering::Greater => b,
                std::cmp::Ordering::Equal => match crowd[a].partial_cmp(&crowd[b]).unwrap() {
                    std::cmp::Ordering::Greater => a,
                    std::cmp::Ordering::Less => b,
                    std::cmp::Ordering::Equal => {
                        if population[a].genome <= population[b].genome {
                            a
                        } else {
                            b
                        }
                    }
                },
            }
        };

        let mut offspring = Vec::with_capacity(config.population_size);
        while offspring.len() < config.population_size {
            let pick = |rng: &mut ChaCha8Rng, population: &[Scored]| {
                let a = rng.random_range(0..population.len());
                let b = rng.random_range(0..population.len());
                better(a, b, population)
            };
            let pa = population[pick(&mut rng, &population)].genome.clone();
            let pb = population[pick(&mut rng, &population)].genome.clone();
            let (c1, c2) = one_point_crossover(&pa, &pb, config.crossover_prob, &mut rng)?;
            for child in [c1, c2] {
                if offspring.len() == config.population_size {
                    break;
                }
                let mutated = bitflip_mutation(&child, p_mut, &mut rng);
                offspring.push(repair_min_size(&mutated, config.min_size, &mut rng));
            }
        }
        let offspring = score_genomes(&offspring, generation)?;

        // Survival: combine parents and offspring, refill by fronts, then by
        // crowding within the last partial front.
        let mut combined = population;
        combined.extend(offspring);
        let combined_points: Vec<Vec<f64>> =
            combined.iter().map(|s| s.normalized.clone()).collect();
        let fronts = non_dominated_sort(&combined_points);
        let mut next: Vec<Scored> = Vec::with_capacity(config.population_size);
        let mut slots = config.population_size;
        let mut combined: Vec<Option<Scored>> = combined.into_iter().map(Some).collect();
        for front in fronts {
            if slots == 0 {
                break;
            }
            if front.len() <= slots {
                slots -= front.len();
                for i in front {
                    next.push(combined[i].take().expect("front indices unique"));
                }
            } else {
                let front_points: Vec<Vec<f64>> =
                    front.iter().map(|&i| combined_points[i].clone()).collect();
                let distances = crowding_distance(&front_points);
                let mut order: Vec<usize> = (0..front.len()).collect();
                order.sort_by(|&x, &y| {
                    distances[y]
                        .partial_cmp(&distances[x])
                        .unwrap()
                        .then_with(|| {
                            combined[front[x]]
                                .as_ref()
                                .unwrap()
                                .genome
                                .cmp(&combined[front[y]].as_ref().unwrap().genome)
                        })
                });
                for &x in order.iter().take(slots) {
                    next.push(combined[front[x]].take().expect("unique"));
                }
                slots = 0;
            }
        }
        population = next;
    }

    // The final bred population has not been merged yet.
    merge_into_archive(&population, &mut archive, config.generations)?;

    Ok(MogaOutcome { archive, history })
}
