use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, PointCloud};
use crate::grid::HashGrid;

/// A maximal family of disjoint closed δ-balls centred on reference points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingResult {
    pub delta: f64,
    /// Indices of the centres p_j in the reference cloud, increasing.
    pub center_indices: Vec<usize>,
    pub centers: Vec<Point>,
    /// Reference points within δ of each centre. Divided by
    /// `reference_size` this is the empirical ball mass q_j.
    pub occupancy: Vec<usize>,
    pub n_delta: usize,
    pub reference_size: usize,
}

impl PackingResult {
    pub fn ball_masses(&self) -> Vec<f64> {
        let n = self.reference_size as f64;
        self.occupancy.iter().map(|&c| c as f64 / n).collect()
    }

    fn grid(&self) -> HashGrid {
        let dim = self.centers.first().map(Point::dim).unwrap_or(1);
        let mut grid = HashGrid::new(2.0 * self.delta, dim);
        for (k, c) in self.centers.iter().enumerate() {
            grid.insert(c, k as u32);
        }
        grid
    }

    /// Index of the ball containing `p`, if any. Balls are disjoint, so there
    /// is at most one.
    fn ball_of(&self, grid: &HashGrid, p: &Point) -> Option<usize> {
        let mut hit = None;
        grid.scan_near(p, |k| {
            if self.centers[k as usize].dist(p) <= self.delta {
                hit = Some(k as usize);
                false
            } else {
                true
            }
        });
        hit
    }
}

/// Greedy sweep in index order: a reference point becomes a centre iff it
/// is farther than 2δ from every centre accepted so far. Every rejected
/// point is within 2δ of a centre, so the 2δ-balls cover the reference.
pub fn maximal_packing(reference: &PointCloud, delta: f64) -> Result<PackingResult> {
    if reference.is_empty() {
        return Err(Error::usage("packing needs a nonempty reference cloud"));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::usage(format!(
            "packing radius must be positive, got {delta}"
        )));
    }
    let reach = 2.0 * delta;
    let mut grid = HashGrid::new(reach, reference.ambient_dim());
    let mut center_indices = Vec::new();
    let mut centers: Vec<Point> = Vec::new();
    for (i, p) in reference.points().iter().enumerate() {
        let free = grid.scan_near(p, |k| centers[k as usize].dist(p) > reach);
        if free {
            grid.insert(p, centers.len() as u32);
            center_indices.push(i);
            centers.push(*p);
        }
    }
    let mut packing = PackingResult {
        delta,
        n_delta: centers.len(),
        occupancy: vec![0; centers.len()],
        center_indices,
        centers,
        reference_size: reference.len(),
    };
    for p in reference.points() {
        if let Some(k) = packing.ball_of(&grid, p) {
            packing.occupancy[k] += 1;
        }
    }
    Ok(packing)
}

/// Brute-force audit of a packing against its reference cloud.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingCheck {
    /// Smallest distance between two centres (infinite for one centre).
    pub min_center_gap: f64,
    /// Largest distance from a reference point to its nearest centre.
    pub cover_radius: f64,
}

impl PackingCheck {
    pub fn holds(&self, delta: f64) -> bool {
        self.min_center_gap > 2.0 * delta && self.cover_radius <= 2.0 * delta
    }
}

pub fn check_packing(reference: &PointCloud, packing: &PackingResult) -> PackingCheck {
    let c = &packing.centers;
    let mut min_center_gap = f64::INFINITY;
    for a in 0..c.len() {
        for b in a + 1..c.len() {
            min_center_gap = min_center_gap.min(c[a].dist(&c[b]));
        }
    }
    let cover_radius = reference
        .points()
        .iter()
        .map(|p| c.iter().map(|q| q.dist(p)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    PackingCheck {
        min_center_gap,
        cover_radius,
    }
}

/// Occupancy of the packing balls by one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LonelyBallStats {
    pub m: usize,
    pub delta: f64,
    pub n_delta: usize,
    /// Balls holding exactly one sample point (Y).
    pub y: usize,
    pub empty_balls: usize,
    pub counts: Vec<usize>,
}

impl LonelyBallStats {
    /// Every ball holds at least one point.
    pub fn fully_occupied(&self) -> bool {
        self.empty_balls == 0
    }
}

pub fn occupancy(packing: &PackingResult, sample: &PointCloud) -> Result<LonelyBallStats> {
    if let Some(c) = packing.centers.first() {
        if c.dim() != sample.ambient_dim() {
            return Err(Error::usage(format!(
                "packing in dimension {} vs sample in dimension {}",
                c.dim(),
                sample.ambient_dim()
            )));
        }
    }
    let grid = packing.grid();
    let mut counts = vec![0usize; packing.n_delta];
    for p in sample.points() {
        if let Some(k) = packing.ball_of(&grid, p) {
            counts[k] += 1;
        }
    }
    Ok(LonelyBallStats {
        m: sample.len(),
        delta: packing.delta,
        n_delta: packing.n_delta,
        y: counts.iter().filter(|&&c| c == 1).count(),
        empty_balls: counts.iter().filter(|&&c| c == 0).count(),
        counts,
    })
}
