//! Monte-Carlo harness measuring filter behaviour over randomized trials.
//!
//! Trial protocol: draw `n + probes` distinct elements, insert the first
//! `n`, measure the false-positive rate on the remaining `probes`
//! non-members, remove all `n` members in random order, then measure the
//! residual data bits and the false-positive rate again on the same probes.
//! Trial `i` seeds its own rng by mixing the master seed with `i`, so
//! results are identical for any worker-thread count and independent of
//! which other trials run.

mod elements;
mod figures;
mod oracle;

pub use elements::{generate_elements, ElementSource};
pub use figures::{
    fig2_densities, figure_dataset, FigureConfig, FigureDataset, FigureId, FprComparisonRow,
    UnknownFigure, FIG2_RATIOS, FIG3_REGION_SWEEP, FIGURE_N_SWEEP,
};
pub use oracle::ReferenceModel;

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::ModelError;
use crate::filter::{DeletableBloomFilter, FilterParams, RemoveOutcome, StandardBloomFilter};
use crate::table::{format_sig, TableRow};
use elements::ElementPool;

/// Simulation setup or input failure.
#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("failed to read wordlist {path}: {source}")]
    WordlistRead {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("element pool holds {available} distinct elements but the run needs {needed}")]
    PoolExhausted { available: usize, needed: usize },
    #[error("n (inserted elements) must be at least 1")]
    ZeroElements,
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("probes must be at least 1")]
    ZeroProbes,
    #[error(transparent)]
    Model(#[from] ModelError),
}

const GOLDEN_GAMMA: u64 = 0x9E3779B97F4A7C15;

fn splitmix64(z: u64) -> u64 {
    let z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    let z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Per-trial rng seed: output `trial_index` of the splitmix64 stream
/// started at `master_seed`.
pub fn mix_seed(master_seed: u64, trial_index: u64) -> u64 {
    splitmix64(master_seed.wrapping_add(trial_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Which filter a set of results was measured on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilterKind {
    Deletable,
    /// Standard Bloom baseline: insert and probe only; the removal-related
    /// metrics are reported as zero and `r` as 0.
    Standard,
}

/// One experiment: repeated trials at fixed dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub params: FilterParams,
    /// Elements inserted per trial.
    pub n: u32,
    pub trials: u32,
    /// Non-member elements queried per trial.
    pub probes: u32,
    pub master_seed: u64,
    pub source: ElementSource,
}

impl ExperimentConfig {
    /// Synthetic-element experiment.
    pub fn new(params: FilterParams, n: u32, trials: u32, probes: u32, master_seed: u64) -> Self {
        ExperimentConfig {
            params,
            n,
            trials,
            probes,
            master_seed,
            source: ElementSource::Synthetic,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.n == 0 {
            return Err(SimError::ZeroElements);
        }
        if self.trials == 0 {
            return Err(SimError::ZeroTrials);
        }
        if self.probes == 0 {
            return Err(SimError::ZeroProbes);
        }
        Ok(())
    }

    fn elements_per_trial(&self) -> usize {
        self.n as usize + self.probes as usize
    }
}

/// Measurements of a single trial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialResult {
    /// Fraction of the `n` removals that returned `Deleted`.
    pub deletable_fraction: f64,
    /// Fraction of the initially set data bits cleared by removing all
    /// members; zero when no bit was set.
    pub bits_reset_fraction: f64,
    /// False-positive rate on the probes with all members inserted.
    pub fpr_before: f64,
    /// False-positive rate on the same probes after all removals.
    pub fpr_after: f64,
    /// Data bits set after the insertion phase.
    pub data_bits_before: u32,
    /// Fraction of regions marked as collided after the insertion phase.
    pub bitmap_saturation: f64,
}

fn false_positive_rate(filter_hit: impl Fn(&str) -> bool, probes: &[String]) -> f64 {
    let hits = probes.iter().filter(|e| filter_hit(e)).count();
    hits as f64 / probes.len() as f64
}

fn run_trial_with_pool(
    config: &ExperimentConfig,
    pool: &ElementPool,
    trial_index: u32,
) -> Result<TrialResult, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(config.master_seed, u64::from(trial_index)));
    let elements = pool.sample(config.elements_per_trial(), &mut rng)?;
    let (members, probes) = elements.split_at(config.n as usize);

    let mut filter = DeletableBloomFilter::new(config.params);
    for e in members {
        filter.insert(e.as_bytes());
    }
    let data_bits_before = filter.bit_counts().0 as u32;
    let bitmap_saturation = filter.bitmap_saturation();
    let fpr_before = false_positive_rate(|e| filter.query(e.as_bytes()), probes);

    let mut order: Vec<&String> = members.iter().collect();
    order.shuffle(&mut rng);
    let deleted = order
        .into_iter()
        .filter(|e| filter.remove(e.as_bytes()) == RemoveOutcome::Deleted)
        .count();

    let data_bits_after = filter.bit_counts().0 as u32;
    let fpr_after = false_positive_rate(|e| filter.query(e.as_bytes()), probes);
    Ok(TrialResult {
        deletable_fraction: deleted as f64 / f64::from(config.n),
        bits_reset_fraction: if data_bits_before == 0 {
            0.0
        } else {
            f64::from(data_bits_before - data_bits_after) / f64::from(data_bits_before)
        },
        fpr_before,
        fpr_after,
        data_bits_before,
        bitmap_saturation,
    })
}

fn run_sbf_trial_with_pool(
    config: &ExperimentConfig,
    pool: &ElementPool,
    trial_index: u32,
) -> Result<TrialResult, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(config.master_seed, u64::from(trial_index)));
    let elements = pool.sample(config.elements_per_trial(), &mut rng)?;
    let (members, probes) = elements.split_at(config.n as usize);

    let mut filter = StandardBloomFilter::new(config.params.m(), config.params.k(), config.params.seed())
        .expect("params are validated");
    for e in members {
        filter.insert(e.as_bytes());
    }
    Ok(TrialResult {
        deletable_fraction: 0.0,
        bits_reset_fraction: 0.0,
        fpr_before: false_positive_rate(|e| filter.query(e.as_bytes()), probes),
        fpr_after: 0.0,
        data_bits_before: filter.count_ones() as u32,
        bitmap_saturation: 0.0,
    })
}

/// Runs trial `trial_index` of `config` in isolation.
pub fn run_trial(config: &ExperimentConfig, trial_index: u32) -> Result<TrialResult, SimError> {
    config.validate()?;
    let pool = ElementPool::load(&config.source)?;
    run_trial_with_pool(config, &pool, trial_index)
}

/// Mean, sample standard deviation and half-width of the normal 95%
/// confidence interval of a per-trial metric.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MetricStats {
    pub mean: f64,
    pub std_dev: f64,
    pub ci95: f64,
}

fn metric_stats(values: impl ExactSizeIterator<Item = f64>) -> MetricStats {
    let count = values.len() as f64;
    let values: Vec<f64> = values.collect();
    let mean = values.iter().sum::<f64>() / count;
    let std_dev = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0)).sqrt()
    } else {
        0.0
    };
    MetricStats {
        mean,
        std_dev,
        ci95: 1.96 * std_dev / count.sqrt(),
    }
}

/// Aggregated experiment results, one [`MetricStats`] per trial metric.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateResult {
    pub config: ExperimentConfig,
    pub kind: FilterKind,
    pub deletable: MetricStats,
    pub bits_reset: MetricStats,
    pub fpr_before: MetricStats,
    pub fpr_after: MetricStats,
    pub data_bits_before: MetricStats,
    pub bitmap_saturation: MetricStats,
}

fn aggregate(config: ExperimentConfig, kind: FilterKind, trials: &[TrialResult]) -> AggregateResult {
    AggregateResult {
        kind,
        deletable: metric_stats(trials.iter().map(|t| t.deletable_fraction)),
        bits_reset: metric_stats(trials.iter().map(|t| t.bits_reset_fraction)),
        fpr_before: metric_stats(trials.iter().map(|t| t.fpr_before)),
        fpr_after: metric_stats(trials.iter().map(|t| t.fpr_after)),
        data_bits_before: metric_stats(trials.iter().map(|t| f64::from(t.data_bits_before))),
        bitmap_saturation: metric_stats(trials.iter().map(|t| t.bitmap_saturation)),
        config,
    }
}

fn run_all_trials<F>(config: &ExperimentConfig, trial: F) -> Result<Vec<TrialResult>, SimError>
where
    F: Fn(&ExperimentConfig, &ElementPool, u32) -> Result<TrialResult, SimError> + Sync,
{
    config.validate()?;
    let pool = ElementPool::load(&config.source)?;
    if let Some(available) = pool.available() {
        let needed = config.elements_per_trial();
        if available < needed {
            return Err(SimError::PoolExhausted { available, needed });
        }
    }
    // Indexed parallel collect keeps trial order, so aggregation folds the
    // same f64 sequence regardless of thread count.
    (0..config.trials)
        .into_par_iter()
        .map(|t| trial(config, &pool, t))
        .collect()
}

/// Runs all trials of `config` on the deletable filter.
pub fn run_experiment(config: &ExperimentConfig) -> Result<AggregateResult, SimError> {
    let trials = run_all_trials(config, run_trial_with_pool)?;
    Ok(aggregate(config.clone(), FilterKind::Deletable, &trials))
}

/// Runs all trials of `config` on a standard Bloom filter of the same `m`,
/// `k` and seed, drawing the same per-trial elements.
pub fn run_sbf_baseline(config: &ExperimentConfig) -> Result<AggregateResult, SimError> {
    let trials = run_all_trials(config, run_sbf_trial_with_pool)?;
    Ok(aggregate(config.clone(), FilterKind::Standard, &trials))
}

/// Flat row of an aggregated experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AggregateRow {
    pub m: u32,
    pub r: u32,
    pub k: u32,
    pub n: u32,
    pub trials: u32,
    pub probes: u32,
    pub master_seed: u64,
    pub mean_deletable: f64,
    pub std_deletable: f64,
    pub ci95_deletable: f64,
    pub mean_bits_reset: f64,
    pub mean_fpr_before: f64,
    pub ci95_fpr_before: f64,
    pub mean_fpr_after: f64,
    pub ci95_fpr_after: f64,
    pub mean_bitmap_saturation: f64,
}

impl AggregateResult {
    /// Flattens to the tabular schema. Baseline runs report `r = 0`: they
    /// spend no bits on a collision bitmap.
    pub fn to_row(&self) -> AggregateRow {
        AggregateRow {
            m: self.config.params.m(),
            r: match self.kind {
                FilterKind::Deletable => self.config.params.r(),
                FilterKind::Standard => 0,
            },
            k: self.config.params.k(),
            n: self.config.n,
            trials: self.config.trials,
            probes: self.config.probes,
            master_seed: self.config.master_seed,
            mean_deletable: self.deletable.mean,
            std_deletable: self.deletable.std_dev,
            ci95_deletable: self.deletable.ci95,
            mean_bits_reset: self.bits_reset.mean,
            mean_fpr_before: self.fpr_before.mean,
            ci95_fpr_before: self.fpr_before.ci95,
            mean_fpr_after: self.fpr_after.mean,
            ci95_fpr_after: self.fpr_after.ci95,
            mean_bitmap_saturation: self.bitmap_saturation.mean,
        }
    }
}

impl TableRow for AggregateRow {
    const CSV_HEADER: &'static str = "m,r,k,n,trials,probes,master_seed,mean_deletable,\
        std_deletable,ci95_deletable,mean_bits_reset,mean_fpr_before,ci95_fpr_before,\
        mean_fpr_after,ci95_fpr_after,mean_bitmap_saturation";

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.m,
            self.r,
            self.k,
            self.n,
            self.trials,
            self.probes,
            self.master_seed,
            format_sig(self.mean_deletable, 6),
            format_sig(self.std_deletable, 6),
            format_sig(self.ci95_deletable, 6),
            format_sig(self.mean_bits_reset, 6),
            format_sig(self.mean_fpr_before, 6),
            format_sig(self.ci95_fpr_before, 6),
            format_sig(self.mean_fpr_after, 6),
            format_sig(self.ci95_fpr_after, 6),
            format_sig(self.mean_bitmap_saturation, 6),
        )
    }
}
