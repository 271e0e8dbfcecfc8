//! Batch harness: scaling of the longest MST edge, occupancy of maximal
//! packings, lonely-ball counts, and the set F counterexample.
//!
//! Every trial draws from its own stream derived from
//! `[measure label, m, trial]`, so results do not depend on worker count and
//! extending a grid never changes existing rows. Reference clouds and the
//! regularity estimate use separate tagged paths.

mod config;
mod format;
mod records;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::emst::mst_fast;
use crate::error::{Error, Result};
use crate::geometry::{derive_stream, label_for_str, RandomStream};
use crate::measures::{sample, MeasureKind, MeasureParams, MeasureSpec};
use crate::regularity::{
    covering_delta, estimate_regularity, lonely_delta, maximal_packing, occupancy, LonelyBallStats,
    RegularityEstimate,
};
use crate::stats::{least_squares, mean, median, variance};

pub use config::{Experiment, RunConfig};
pub use format::{fmt_f64, geometric_grid, parse_m_grid, parse_real_list};
pub use records::{
    read_scaling_csv, write_fit_csv, write_lonely_csv, write_occupancy_csv, write_ratio_csv,
    write_regularity_csv, write_scaling_csv, SCALING_HEADER,
};

const REFERENCE_TAG: &str = "reference";
const REGULARITY_TAG: &str = "regularity";

/// Stream for trial `trial` at size `m`; the cloud it produces is the one
/// recorded in the matching [`ScalingRecord`].
pub fn trial_stream(
    measure: &MeasureSpec,
    m: usize,
    trial: usize,
    master_seed: u64,
) -> RandomStream {
    derive_stream(
        master_seed,
        &[label_for_str(&measure.id()), m as u64, trial as u64],
    )
}

/// Stream for the reference cloud behind the packing at size `m`.
pub fn reference_stream(
    measure: &MeasureSpec,
    m: usize,
    slot: usize,
    master_seed: u64,
) -> RandomStream {
    derive_stream(
        master_seed,
        &[
            label_for_str(&measure.id()),
            m as u64,
            label_for_str(REFERENCE_TAG),
            slot as u64,
        ],
    )
}

fn regularity_stream(measure: &MeasureSpec, master_seed: u64) -> RandomStream {
    derive_stream(
        master_seed,
        &[label_for_str(&measure.id()), label_for_str(REGULARITY_TAG)],
    )
}

/// One (measure, m, trial) observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRecord {
    pub measure_id: String,
    pub m: usize,
    pub trial: usize,
    /// Seed of the trial's stream: `RandomStream::from_seed(seed)` regenerates the cloud.
    pub seed: u64,
    pub longest_edge: f64,
    pub threshold_radius: f64,
    pub runtime_ms: f64,
}

fn check_grid(m_grid: &[usize], trials: usize, min_m: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::usage("trials must be at least 1"));
    }
    if m_grid.is_empty() {
        return Err(Error::usage("empty m grid"));
    }
    if let Some(m) = m_grid.iter().find(|&&m| m < min_m) {
        return Err(Error::usage(format!("m = {m} below the minimum {min_m}")));
    }
    Ok(())
}

/// Longest MST edge for every (m, trial), in (m, trial) order.
pub fn scaling_run(
    measure: &MeasureSpec,
    m_grid: &[usize],
    trials: usize,
    master_seed: u64,
) -> Result<Vec<ScalingRecord>> {
    check_grid(m_grid, trials, 1)?;
    let jobs: Vec<(usize, usize)> = m_grid
        .iter()
        .flat_map(|&m| (0..trials).map(move |t| (m, t)))
        .collect();
    let mut records = jobs
        .par_iter()
        .map(|&(m, trial)| scaling_trial(measure, m, trial, master_seed))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| (r.m, r.trial));
    Ok(records)
}

fn scaling_trial(
    measure: &MeasureSpec,
    m: usize,
    trial: usize,
    master_seed: u64,
) -> Result<ScalingRecord> {
    let mut stream = trial_stream(measure, m, trial, master_seed);
    let seed = stream.seed();
    let start = Instant::now();
    let cloud = sample(measure, m, &mut stream);
    let fail = |reason: String| Error::Trial {
        measure: measure.id(),
        m,
        trial,
        seed,
        reason,
    };
    let mst = mst_fast(&cloud).map_err(|e| fail(e.to_string()))?;
    if !mst.longest_edge.is_finite() || mst.edges.len() + 1 != m {
        return Err(fail("spanning tree is malformed".into()));
    }
    Ok(ScalingRecord {
        measure_id: measure.id(),
        m,
        trial,
        seed,
        longest_edge: mst.longest_edge,
        threshold_radius: mst.longest_edge / 2.0,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Regressor used by a log-log fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predictor {
    /// log(log m / m); the slope estimates 1/d.
    LogLogMOverM,
    /// log m.
    LogM,
}

impl Predictor {
    pub fn name(self) -> &'static str {
        match self {
            Predictor::LogLogMOverM => "log_log_m_over_m",
            Predictor::LogM => "log_m",
        }
    }

    fn apply(self, m: usize) -> f64 {
        let m = m as f64;
        match self {
            Predictor::LogLogMOverM => (m.ln() / m).ln(),
            Predictor::LogM => m.ln(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub n_range: (usize, usize),
    pub predictor: Predictor,
}

/// OLS of log(value) against the predictor over `(m, value)` pairs.
pub fn fit_log_log(points: &[(usize, f64)], predictor: Predictor) -> Result<FitResult> {
    let mut ms: Vec<usize> = points.iter().map(|p| p.0).collect();
    ms.sort_unstable();
    ms.dedup();
    if ms.len() < 3 {
        return Err(Error::usage(format!(
            "fit needs at least 3 distinct m, got {}",
            ms.len()
        )));
    }
    if ms[0] < 2 {
        return Err(Error::usage("fit needs m >= 2 so that log m > 0"));
    }
    if let Some(p) = points.iter().find(|p| !(p.1 > 0.0) || !p.1.is_finite()) {
        return Err(Error::usage(format!(
            "cannot take the log of {} at m = {}",
            p.1, p.0
        )));
    }
    let x: Vec<f64> = points.iter().map(|p| predictor.apply(p.0)).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let fit = least_squares(&x, &y).ok_or_else(|| Error::usage("degenerate fit"))?;
    Ok(FitResult {
        slope: fit.slope,
        intercept: fit.intercept,
        r2: fit.r2,
        n_range: (ms[0], ms[ms.len() - 1]),
        predictor,
    })
}

/// Median longest edge per m, in increasing m.
pub fn medians_by_m(records: &[ScalingRecord]) -> Vec<(usize, f64)> {
    let mut by_m: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records {
        by_m.entry(r.m).or_default().push(r.longest_edge);
    }
    by_m.into_iter().map(|(m, v)| (m, median(&v))).collect()
}

/// Regresses log(median longest edge) on log(log m / m); the slope estimates 1/d.
pub fn fit_scaling(records: &[ScalingRecord]) -> Result<FitResult> {
    fit_log_log(&medians_by_m(records), Predictor::LogLogMOverM)
}

/// Knobs shared by the packing-based runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HarnessOptions {
    /// Reference cloud for packings holds `reference_factor · m` points ...
    pub reference_factor: usize,
    /// ... but never fewer than this.
    pub min_reference: usize,
    pub regularity_reference: usize,
    pub regularity_centers: usize,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions {
            reference_factor: 4,
            min_reference: 4096,
            regularity_reference: 100_000,
            regularity_centers: 200,
        }
    }
}

impl HarnessOptions {
    fn reference_size(&self, m: usize) -> usize {
        (self.reference_factor * m).max(self.min_reference)
    }
}

/// The dimension and constants that set packing radii for a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunCalibration {
    /// Dimension used in δ(m): the nominal dimension.
    pub d_used: f64,
    pub d_hat: f64,
    pub alpha: f64,
    pub beta: f64,
    pub estimate: RegularityEstimate,
}

/// Estimates α̂ and β̂ (1% / 99% quantiles) at the measure's nominal
/// dimension; d̂ is reported alongside.
pub fn calibrate(
    measure: &MeasureSpec,
    master_seed: u64,
    options: &HarnessOptions,
) -> Result<RunCalibration> {
    let estimate = estimate_regularity(
        measure,
        options.regularity_reference,
        options.regularity_centers,
        None,
        &mut regularity_stream(measure, master_seed),
    )?;
    let d_used = measure.nominal_dim();
    let k = estimate.constants_at(d_used);
    log::info!(
        "{}: d_hat = {:.4} (using d = {:.4}), alpha = {:.4}, beta = {:.4}",
        measure.id(),
        estimate.d_hat,
        d_used,
        k.alpha_q01,
        k.beta_q99
    );
    Ok(RunCalibration {
        d_used,
        d_hat: estimate.d_hat,
        alpha: k.alpha_q01,
        beta: k.beta_q99,
        estimate,
    })
}

/// Fraction of trials in which every packing ball is hit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyRow {
    pub measure_id: String,
    pub m: usize,
    pub c: f64,
    pub delta: f64,
    pub n_delta: usize,
    pub trials: usize,
    pub full_occupancy: usize,
    pub fraction: f64,
    /// Fewer than two balls: the event is trivial.
    pub degenerate: bool,
}

/// For each C, δ = C · (2 log m / (α̂ m))^{1/d}; C = 1 is the radius at which
/// full occupancy should hold with high probability. One packing per (m, C),
/// shared by all trials.
pub fn occupancy_run(
    measure: &MeasureSpec,
    m_grid: &[usize],
    trials: usize,
    c_grid: &[f64],
    master_seed: u64,
    options: &HarnessOptions,
    calibration: Option<&RunCalibration>,
) -> Result<Vec<OccupancyRow>> {
    check_grid(m_grid, trials, 2)?;
    if c_grid.is_empty() || c_grid.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
        return Err(Error::usage("C grid must be nonempty and positive"));
    }
    let owned;
    let cal = match calibration {
        Some(c) => c,
        None => {
            owned = calibrate(measure, master_seed, options)?;
            &owned
        }
    };
    let mut rows = Vec::with_capacity(m_grid.len() * c_grid.len());
    for &m in m_grid {
        let samples: Vec<_> = (0..trials)
            .into_par_iter()
            .map(|t| sample(measure, m, &mut trial_stream(measure, m, t, master_seed)))
            .collect();
        for (slot, &c) in c_grid.iter().enumerate() {
            let delta = c * covering_delta(m, cal.alpha, cal.d_used);
            let reference = sample(
                measure,
                options.reference_size(m),
                &mut reference_stream(measure, m, slot, master_seed),
            );
            let packing = maximal_packing(&reference, delta)?;
            let full = samples
                .par_iter()
                .map(|s| occupancy(&packing, s).map(|o| o.fully_occupied() as usize))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .sum::<usize>();
            rows.push(OccupancyRow {
                measure_id: measure.id(),
                m,
                c,
                delta,
                n_delta: packing.n_delta,
                trials,
                full_occupancy: full,
                fraction: full as f64 / trials as f64,
                degenerate: packing.n_delta < 2,
            });
        }
    }
    Ok(rows)
}

/// Lonely-ball counts at one m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LonelySummary {
    pub measure_id: String,
    pub m: usize,
    pub delta: f64,
    pub n_delta: usize,
    pub seeds: Vec<u64>,
    pub trials: Vec<LonelyBallStats>,
    pub median_y: f64,
    pub mean_y: f64,
    pub var_y: f64,
    /// Sum over balls of m q_j (1 - q_j)^{m-1} with q_j the reference mass.
    pub expected_y: f64,
    pub degenerate: bool,
}

impl LonelySummary {
    /// Var(Y) / E(Y)², with E(Y) estimated by the trial mean.
    pub fn relative_variance(&self) -> f64 {
        self.var_y / (self.mean_y * self.mean_y)
    }
}

/// Packs at δ(m) = (log m / (2 β̂ m))^{1/d} and counts singly occupied balls.
pub fn lonely_run(
    measure: &MeasureSpec,
    m_grid: &[usize],
    trials: usize,
    master_seed: u64,
    options: &HarnessOptions,
    calibration: Option<&RunCalibration>,
) -> Result<Vec<LonelySummary>> {
    check_grid(m_grid, trials, 2)?;
    let owned;
    let cal = match calibration {
        Some(c) => c,
        None => {
            owned = calibrate(measure, master_seed, options)?;
            &owned
        }
    };
    m_grid
        .iter()
        .map(|&m| {
            let delta = lonely_delta(m, cal.beta, cal.d_used);
            let reference = sample(
                measure,
                options.reference_size(m),
                &mut reference_stream(measure, m, 0, master_seed),
            );
            let packing = maximal_packing(&reference, delta)?;
            let (seeds, stats): (Vec<u64>, Vec<LonelyBallStats>) = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut stream = trial_stream(measure, m, t, master_seed);
                    let seed = stream.seed();
                    let s = sample(measure, m, &mut stream);
                    occupancy(&packing, &s).map(|o| (seed, o))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .unzip();
            let ys: Vec<f64> = stats.iter().map(|s| s.y as f64).collect();
            let expected_y = packing
                .ball_masses()
                .iter()
                .map(|&q| crate::regularity::expected_singleton(m, q))
                .sum::<Result<f64>>()?;
            Ok(LonelySummary {
                measure_id: measure.id(),
                m,
                delta,
                n_delta: packing.n_delta,
                seeds,
                median_y: median(&ys),
                mean_y: mean(&ys),
                var_y: variance(&ys),
                expected_y,
                degenerate: packing.n_delta < 2,
                trials: stats,
            })
        })
        .collect()
}

/// R(m) = median longest edge / (log m / m)^{1/2} at one m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub m: usize,
    pub median_longest_edge: f64,
    pub rate: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub records: Vec<ScalingRecord>,
    pub series: Vec<RatioPoint>,
    pub strictly_increasing: bool,
    /// R at the largest m over R at the smallest.
    pub growth: f64,
}

/// Ratio of median longest edges to the two-dimensional rate (log m / m)^{1/2}.
pub fn ratio_series(records: &[ScalingRecord]) -> Vec<RatioPoint> {
    medians_by_m(records)
        .into_iter()
        .map(|(m, med)| {
            let mf = m as f64;
            let rate = (mf.ln() / mf).sqrt();
            RatioPoint {
                m,
                median_longest_edge: med,
                rate,
                ratio: med / rate,
            }
        })
        .collect()
}

/// Scaling run on set F with the divergence series.
pub fn counterexample_run(
    m_grid: &[usize],
    trials: usize,
    master_seed: u64,
    i_max: Option<u32>,
) -> Result<CounterexampleReport> {
    check_grid(m_grid, trials, 2)?;
    let measure =
        MeasureSpec::with_params(MeasureKind::SetF, MeasureParams { depth: None, i_max })?;
    let records = scaling_run(&measure, m_grid, trials, master_seed)?;
    let series = ratio_series(&records);
    let strictly_increasing = series.windows(2).all(|w| w[1].ratio > w[0].ratio);
    let growth = series.last().unwrap().ratio / series[0].ratio;
    Ok(CounterexampleReport {
        records,
        series,
        strictly_increasing,
        growth,
    })
}
