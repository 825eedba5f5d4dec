//! Closed-form model of the filter: cell occupancy, element deletability
//! and false-positive rates.
//!
//! After `n` insertions, `kn` set events fall uniformly on the `m' = m - r`
//! data cells. A cell holding two or more events is a collision and marks
//! its region. With `p_c` the per-cell collision probability and `m'/r`
//! cells per region, a region stays collision-free with probability
//! `(1 - p_c)^(m'/r)`, and an element is deletable when at least one of its
//! `k` cells lies in such a region. Powers of `1 - 1/m'` are evaluated in
//! log space so large `kn` stays accurate.

use serde::Serialize;

use crate::table::{format_sig, TableRow};

/// Invalid model dimensions or sweep values.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("k (hash count) must be at least 1")]
    ZeroHashes,
    #[error("r (region count) must be at least 1")]
    ZeroRegions,
    #[error("m (filter size in bits) must be at least 1")]
    ZeroBits,
    #[error("m' (cell count) must be at least 1")]
    ZeroCells,
    #[error("m - r must be at least 1 (m = {m}, r = {r})")]
    DataBitsExhausted { m: u32, r: u32 },
    #[error("the {what} list must not be empty")]
    EmptySweep { what: &'static str },
    #[error("{what} entry {value} must be finite, positive, and yield a rounded count in 1..=2^32-1")]
    InvalidSweepValue { what: &'static str, value: f64 },
}

/// Model dimensions: `m` total bits, `r` of them the collision bitmap,
/// `k` hash indices per element, `n` inserted elements. Construction
/// enforces `k >= 1` and `1 <= r <= m - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModelParams {
    m: u32,
    r: u32,
    k: u32,
    n: u32,
}

impl ModelParams {
    pub fn new(m: u32, r: u32, k: u32, n: u32) -> Result<Self, ModelError> {
        if k == 0 {
            return Err(ModelError::ZeroHashes);
        }
        if r == 0 {
            return Err(ModelError::ZeroRegions);
        }
        if m <= r {
            return Err(ModelError::DataBitsExhausted { m, r });
        }
        Ok(ModelParams { m, r, k, n })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Cell count `m' = m - r`.
    pub fn m_prime(&self) -> u32 {
        self.m - self.r
    }
}

/// Distribution of set events over one data cell after `n` insertions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellProbabilities {
    /// No event hit the cell.
    pub p0: f64,
    /// Exactly one event hit the cell.
    pub p1: f64,
    /// Two or more events hit the cell (a collision).
    pub pc: f64,
}

/// `(1 - 1/cells)^events`, in log space. `events == 0` returns 1 even when
/// `cells == 1`.
fn pow_miss(cells: u32, events: f64) -> f64 {
    if events == 0.0 {
        return 1.0;
    }
    (events * (-1.0 / cells as f64).ln_1p()).exp()
}

/// Occupancy of a single cell when `k * n` events fall uniformly on
/// `m_prime` cells: `p0 = (1 - 1/m')^(kn)`,
/// `p1 = kn * (1/m') * (1 - 1/m')^(kn - 1)`, `pc = 1 - p0 - p1` clamped to
/// `[0, 1]`.
pub fn cell_probabilities(m_prime: u32, k: u32, n: u32) -> Result<CellProbabilities, ModelError> {
    if m_prime == 0 {
        return Err(ModelError::ZeroCells);
    }
    if k == 0 {
        return Err(ModelError::ZeroHashes);
    }
    let events = u64::from(k) * u64::from(n);
    if events == 0 {
        return Ok(CellProbabilities { p0: 1.0, p1: 0.0, pc: 0.0 });
    }
    let x = 1.0 / f64::from(m_prime);
    let p0 = pow_miss(m_prime, events as f64);
    // With a single event p1 is exactly 1/m'; the log-space product would
    // hit 0 * ln(0) = NaN at m' = 1.
    let p1 = if events == 1 {
        x
    } else {
        events as f64 * x * pow_miss(m_prime, events as f64 - 1.0)
    };
    let pc = (1.0 - p0 - p1).clamp(0.0, 1.0);
    Ok(CellProbabilities { p0, p1, pc })
}

/// Probability that an inserted element can be removed: at least one of its
/// `k` cells falls in a region none of whose `m'/r` cells collided.
pub fn deletability_probability(params: ModelParams) -> f64 {
    let pc = cell_probabilities(params.m_prime(), params.k(), params.n())
        .expect("params are validated")
        .pc;
    let cells_per_region = f64::from(params.m_prime()) / f64::from(params.r());
    let region_free = (1.0 - pc).powf(cells_per_region);
    1.0 - (1.0 - region_free).powf(f64::from(params.k()))
}

/// False-positive rate of the deletable filter,
/// `(1 - (1 - 1/(m - r))^(kn))^k`; `r = 0` gives the classic Bloom rate.
pub fn fpr_dlbf(m: u32, r: u32, k: u32, n: u32) -> Result<f64, ModelError> {
    if k == 0 {
        return Err(ModelError::ZeroHashes);
    }
    if m <= r {
        return Err(ModelError::DataBitsExhausted { m, r });
    }
    let events = (u64::from(k) * u64::from(n)) as f64;
    Ok((1.0 - pow_miss(m - r, events)).powf(f64::from(k)))
}

/// False-positive rate of a standard Bloom filter spending all `m` bits on
/// data.
pub fn fpr_sbf(m: u32, k: u32, n: u32) -> Result<f64, ModelError> {
    if m == 0 {
        return Err(ModelError::ZeroBits);
    }
    if k == 0 {
        return Err(ModelError::ZeroHashes);
    }
    let events = (u64::from(k) * u64::from(n)) as f64;
    Ok((1.0 - pow_miss(m, events)).powf(f64::from(k)))
}

/// One evaluated model configuration; `density` is `m/n`, absent when
/// `n = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelPoint {
    #[serde(flatten)]
    pub params: ModelParams,
    pub density: Option<f64>,
    pub p0: f64,
    pub p1: f64,
    pub pc: f64,
    pub pd: f64,
    pub fpr_dlbf: f64,
    pub fpr_sbf: f64,
}

impl ModelPoint {
    /// Evaluates every model quantity at `params`.
    pub fn compute(params: ModelParams) -> ModelPoint {
        let cell = cell_probabilities(params.m_prime(), params.k(), params.n())
            .expect("params are validated");
        ModelPoint {
            params,
            density: (params.n() > 0).then(|| f64::from(params.m()) / f64::from(params.n())),
            p0: cell.p0,
            p1: cell.p1,
            pc: cell.pc,
            pd: deletability_probability(params),
            fpr_dlbf: fpr_dlbf(params.m(), params.r(), params.k(), params.n())
                .expect("params are validated"),
            fpr_sbf: fpr_sbf(params.m(), params.k(), params.n()).expect("params are validated"),
        }
    }
}

impl TableRow for ModelPoint {
    const CSV_HEADER: &'static str = "m,r,k,n,density,p0,p1,pc,pd,fpr_dlbf,fpr_sbf";

    fn csv_row(&self) -> String {
        let density = self.density.map(|d| format_sig(d, 6)).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.params.m(),
            self.params.r(),
            self.params.k(),
            self.params.n(),
            density,
            format_sig(self.p0, 6),
            format_sig(self.p1, 6),
            format_sig(self.pc, 6),
            format_sig(self.pd, 6),
            format_sig(self.fpr_dlbf, 6),
            format_sig(self.fpr_sbf, 6),
        )
    }
}

fn rounded_count(m: u32, divisor: f64, what: &'static str) -> Result<u32, ModelError> {
    if !divisor.is_finite() || divisor <= 0.0 {
        return Err(ModelError::InvalidSweepValue { what, value: divisor });
    }
    let count = (f64::from(m) / divisor).round();
    if count < 1.0 || count > f64::from(u32::MAX) {
        return Err(ModelError::InvalidSweepValue { what, value: divisor });
    }
    Ok(count as u32)
}

/// Evaluates the model over a grid: one point per `(ratio, density)` pair
/// with `r = round(m / ratio)` and `n = round(m / density)`, ratios in the
/// outer loop. Lists must be nonempty and every derived `(m, r, k, n)` must
/// be a valid [`ModelParams`].
pub fn deletability_curve(
    m: u32,
    ratios: &[f64],
    k: u32,
    densities: &[f64],
) -> Result<Vec<ModelPoint>, ModelError> {
    if ratios.is_empty() {
        return Err(ModelError::EmptySweep { what: "ratios" });
    }
    if densities.is_empty() {
        return Err(ModelError::EmptySweep { what: "densities" });
    }
    let mut points = Vec::with_capacity(ratios.len() * densities.len());
    for &ratio in ratios {
        let r = rounded_count(m, ratio, "ratios")?;
        for &density in densities {
            let n = rounded_count(m, density, "densities")?;
            points.push(ModelPoint::compute(ModelParams::new(m, r, k, n)?));
        }
    }
    Ok(points)
}
