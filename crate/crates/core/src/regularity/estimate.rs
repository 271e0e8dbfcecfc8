use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, RandomStream};
use crate::measures::{sample, MeasureSpec};
use crate::stats::{least_squares, quantile_sorted};

pub const DEFAULT_GRID_STEPS: usize = 12;
/// The smallest default radius puts about this many reference points in a
/// typical ball.
pub const MIN_BALL_OCCUPANCY: usize = 50;
/// Default largest radius as a fraction of the support's diameter.
const DELTA_MAX_FRACTION: f64 = 1.0 / 16.0;

/// Geometric grid of radii `min, …, max` with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaGrid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl DeltaGrid {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min > 0.0 && max > min && max.is_finite()) || steps < 2 {
            return Err(Error::usage(format!(
                "bad radius grid [{min}, {max}] with {steps} steps"
            )));
        }
        Ok(DeltaGrid { min, max, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        let ratio = (self.max / self.min).ln() / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.max
                } else {
                    self.min * (ratio * k as f64).exp()
                }
            })
            .collect()
    }
}

/// Empirical mass of one ball B(x, δ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallMass {
    pub center: usize,
    pub delta: f64,
    pub mass: f64,
}

/// Bounds α δ^d ≤ μ(B(x, δ)) ≤ β δ^d read off the observed ball masses for a
/// given d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiUniformConstants {
    pub d: f64,
    pub alpha_min: f64,
    pub alpha_q01: f64,
    pub beta_q99: f64,
    pub beta_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityEstimate {
    pub d_hat: f64,
    /// 1% quantile of μ̂(B)/δ^d̂; the headline lower constant.
    pub alpha_hat: f64,
    /// 99% quantile of μ̂(B)/δ^d̂; the headline upper constant.
    pub beta_hat: f64,
    pub alpha_min: f64,
    pub beta_max: f64,
    pub delta_range: (f64, f64),
    pub n_centers: usize,
    pub excluded_centers: usize,
    pub reference_size: usize,
    pub fit_r2: f64,
    #[serde(skip)]
    pub observations: Vec<BallMass>,
}

impl RegularityEstimate {
    /// Semi-uniformity constants for a dimension other than d̂, e.g. the
    /// nominal dimension of a known measure.
    pub fn constants_at(&self, d: f64) -> SemiUniformConstants {
        let mut ratios: Vec<f64> = self
            .observations
            .iter()
            .filter(|o| o.mass > 0.0)
            .map(|o| o.mass / o.delta.powf(d))
            .collect();
        ratios.sort_by(f64::total_cmp);
        SemiUniformConstants {
            d,
            alpha_min: ratios[0],
            alpha_q01: quantile_sorted(&ratios, 0.01),
            beta_q99: quantile_sorted(&ratios, 0.99),
            beta_max: ratios[ratios.len() - 1],
        }
    }
}

fn sorted_distances(center: &Point, reference: &[Point]) -> Vec<f64> {
    let mut d: Vec<f64> = reference.iter().map(|p| p.dist(center)).collect();
    d.sort_unstable_by(f64::total_cmp);
    d
}

/// Estimates (d, α, β) from `reference_size` reference points and
/// `n_centers` independent centres, all drawn from the measure.
///
/// d̂ is the pooled least-squares slope of log μ̂(B(x, δ)) against log δ.
/// Without an explicit grid the radii run from the median distance to the
/// 50th-nearest reference point up to diameter/16.
pub fn estimate_regularity(
    measure: &MeasureSpec,
    reference_size: usize,
    n_centers: usize,
    delta_grid: Option<DeltaGrid>,
    stream: &mut RandomStream,
) -> Result<RegularityEstimate> {
    if n_centers == 0 || reference_size <= MIN_BALL_OCCUPANCY {
        return Err(Error::usage(format!(
            "regularity estimate needs centres and more than {MIN_BALL_OCCUPANCY} reference points"
        )));
    }
    let reference = sample(measure, reference_size, stream);
    let centers = sample(measure, n_centers, stream);
    let ref_pts = reference.points();

    let grid = match delta_grid {
        Some(g) => g,
        None => {
            let mut kth: Vec<f64> = centers
                .points()
                .par_iter()
                .map(|c| {
                    let mut d: Vec<f64> = ref_pts.iter().map(|p| p.dist(c)).collect();
                    *d.select_nth_unstable_by(MIN_BALL_OCCUPANCY - 1, f64::total_cmp)
                        .1
                })
                .collect();
            kth.sort_by(f64::total_cmp);
            let min = quantile_sorted(&kth, 0.5);
            DeltaGrid::new(
                min,
                measure.diameter() * DELTA_MAX_FRACTION,
                DEFAULT_GRID_STEPS,
            )
            .map_err(|_| {
                Error::usage(format!(
                    "reference of {reference_size} points too sparse for a radius grid"
                ))
            })?
        }
    };
    let deltas = grid.values();
    if grid.max >= measure.diameter() {
        return Err(Error::usage("radius grid must stay below the diameter"));
    }

    let n = reference_size as f64;
    let masses: Vec<Vec<f64>> = centers
        .points()
        .par_iter()
        .map(|c| {
            let d = sorted_distances(c, ref_pts);
            deltas
                .iter()
                .map(|&r| d.partition_point(|&x| x <= r) as f64 / n)
                .collect()
        })
        .collect();

    let mut observations = Vec::with_capacity(n_centers * deltas.len());
    let mut excluded = 0;
    for (c, row) in masses.iter().enumerate() {
        if *row.last().unwrap() == 0.0 {
            log::warn!(
                "centre {c} has no reference mass at δ = {}; excluded",
                grid.max
            );
            excluded += 1;
            continue;
        }
        observations.extend(deltas.iter().zip(row).map(|(&delta, &mass)| BallMass {
            center: c,
            delta,
            mass,
        }));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = observations
        .iter()
        .filter(|o| o.mass > 0.0)
        .map(|o| (o.delta.ln(), o.mass.ln()))
        .unzip();
    let fit = least_squares(&xs, &ys)
        .ok_or_else(|| Error::usage("no usable ball masses for the dimension fit"))?;
    if !(fit.slope > 0.0) {
        return Err(Error::usage(format!(
            "nonpositive dimension estimate {}",
            fit.slope
        )));
    }

    let mut estimate = RegularityEstimate {
        d_hat: fit.slope,
        alpha_hat: 0.0,
        beta_hat: 0.0,
        alpha_min: 0.0,
        beta_max: 0.0,
        delta_range: (grid.min, grid.max),
        n_centers: n_centers - excluded,
        excluded_centers: excluded,
        reference_size,
        fit_r2: fit.r2,
        observations,
    };
    let k = estimate.constants_at(fit.slope);
    estimate.alpha_hat = k.alpha_q01;
    estimate.beta_hat = k.beta_q99;
    estimate.alpha_min = k.alpha_min;
    estimate.beta_max = k.beta_max;
    Ok(estimate)
}
