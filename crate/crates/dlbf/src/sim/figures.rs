//! Canned parameter sweeps behind the CLI `figure` command.

use serde::Serialize;

use super::{
    run_experiment, run_sbf_baseline, AggregateRow, ElementSource, ExperimentConfig, SimError,
};
use crate::analysis::{deletability_curve, ModelPoint};
use crate::filter::FilterParams;
use crate::table::{format_sig, TableRow};

/// Region counts swept by the deletability figure.
pub const FIG3_REGION_SWEEP: [u32; 4] = [12, 24, 60, 120];

/// Insertion counts swept by the simulated figures.
pub const FIGURE_N_SWEEP: [u32; 13] = [2, 6, 10, 14, 18, 22, 26, 30, 34, 38, 42, 46, 50];

/// `m/r` ratios swept by the model figure.
pub const FIG2_RATIOS: [f64; 4] = [2.0, 4.0, 10.0, 20.0];

/// `m/n` densities swept by the model figure: 8 through 48 in steps of 2.
pub fn fig2_densities() -> Vec<f64> {
    (8..=48u32).step_by(2).map(f64::from).collect()
}

const FIGURE_M: u32 = 240;
const FIGURE_K: u32 = 5;
const FIG4_R: u32 = 24;

/// The datasets this crate can reproduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    /// Modelled deletability over the `(m/r, m/n)` grid at `m = 240`,
    /// `k = 5`.
    Fig2,
    /// Simulated deletability and residual bits over `n`, one series per
    /// region count in [`FIG3_REGION_SWEEP`].
    Fig3,
    /// Simulated false-positive rates over `n` at `r = 24`, before and
    /// after removal, against a standard Bloom filter of the same size.
    Fig4,
}

/// Unrecognized figure name.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown figure {0:?}, expected one of: fig2, fig3, fig4")]
pub struct UnknownFigure(String);

impl std::str::FromStr for FigureId {
    type Err = UnknownFigure;

    fn from_str(s: &str) -> Result<Self, UnknownFigure> {
        match s {
            "fig2" => Ok(FigureId::Fig2),
            "fig3" => Ok(FigureId::Fig3),
            "fig4" => Ok(FigureId::Fig4),
            other => Err(UnknownFigure(other.to_string())),
        }
    }
}

/// Knobs of the simulated figures; the model figure ignores them.
#[derive(Clone, Debug)]
pub struct FigureConfig {
    pub trials: u32,
    pub probes: u32,
    pub master_seed: u64,
    pub source: ElementSource,
}

impl Default for FigureConfig {
    fn default() -> Self {
        FigureConfig {
            trials: 2000,
            probes: 500,
            master_seed: 42,
            source: ElementSource::Synthetic,
        }
    }
}

/// One `n` of the false-positive comparison: deletable filter before and
/// after removing all members, standard Bloom filter as built.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FprComparisonRow {
    pub m: u32,
    pub r: u32,
    pub k: u32,
    pub n: u32,
    pub trials: u32,
    pub probes: u32,
    pub master_seed: u64,
    pub mean_fpr_dlbf_before: f64,
    pub ci95_fpr_dlbf_before: f64,
    pub mean_fpr_dlbf_after: f64,
    pub ci95_fpr_dlbf_after: f64,
    pub mean_fpr_sbf: f64,
    pub ci95_fpr_sbf: f64,
}

impl TableRow for FprComparisonRow {
    const CSV_HEADER: &'static str = "m,r,k,n,trials,probes,master_seed,mean_fpr_dlbf_before,\
        ci95_fpr_dlbf_before,mean_fpr_dlbf_after,ci95_fpr_dlbf_after,mean_fpr_sbf,ci95_fpr_sbf";

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.m,
            self.r,
            self.k,
            self.n,
            self.trials,
            self.probes,
            self.master_seed,
            format_sig(self.mean_fpr_dlbf_before, 6),
            format_sig(self.ci95_fpr_dlbf_before, 6),
            format_sig(self.mean_fpr_dlbf_after, 6),
            format_sig(self.ci95_fpr_dlbf_after, 6),
            format_sig(self.mean_fpr_sbf, 6),
            format_sig(self.ci95_fpr_sbf, 6),
        )
    }
}

/// Rows of one reproduced figure.
#[derive(Clone, Debug)]
pub enum FigureDataset {
    Model(Vec<ModelPoint>),
    Simulated(Vec<AggregateRow>),
    FprComparison(Vec<FprComparisonRow>),
}

fn experiment(n: u32, r: u32, cfg: &FigureConfig) -> ExperimentConfig {
    let params = FilterParams::new(FIGURE_M, r, FIGURE_K, cfg.master_seed)
        .expect("figure dimensions are valid");
    ExperimentConfig {
        params,
        n,
        trials: cfg.trials,
        probes: cfg.probes,
        master_seed: cfg.master_seed,
        source: cfg.source.clone(),
    }
}

/// Computes the dataset of `id`.
pub fn figure_dataset(id: FigureId, cfg: &FigureConfig) -> Result<FigureDataset, SimError> {
    match id {
        FigureId::Fig2 => {
            let points =
                deletability_curve(FIGURE_M, &FIG2_RATIOS, FIGURE_K, &fig2_densities())?;
            Ok(FigureDataset::Model(points))
        }
        FigureId::Fig3 => {
            let mut rows = Vec::with_capacity(FIG3_REGION_SWEEP.len() * FIGURE_N_SWEEP.len());
            for &r in &FIG3_REGION_SWEEP {
                for &n in &FIGURE_N_SWEEP {
                    rows.push(run_experiment(&experiment(n, r, cfg))?.to_row());
                }
            }
            Ok(FigureDataset::Simulated(rows))
        }
        FigureId::Fig4 => {
            let mut rows = Vec::with_capacity(FIGURE_N_SWEEP.len());
            for &n in &FIGURE_N_SWEEP {
                let config = experiment(n, FIG4_R, cfg);
                let dlbf = run_experiment(&config)?;
                let sbf = run_sbf_baseline(&config)?;
                rows.push(FprComparisonRow {
                    m: FIGURE_M,
                    r: FIG4_R,
                    k: FIGURE_K,
                    n,
                    trials: cfg.trials,
                    probes: cfg.probes,
                    master_seed: cfg.master_seed,
                    mean_fpr_dlbf_before: dlbf.fpr_before.mean,
                    ci95_fpr_dlbf_before: dlbf.fpr_before.ci95,
                    mean_fpr_dlbf_after: dlbf.fpr_after.mean,
                    ci95_fpr_dlbf_after: dlbf.fpr_after.ci95,
                    mean_fpr_sbf: sbf.fpr_before.mean,
                    ci95_fpr_sbf: sbf.fpr_before.ci95,
                });
            }
            Ok(FigureDataset::FprComparison(rows))
        }
    }
}
