//! The occupancy machinery behind the scaling law: maximal δ-packings,
//! per-ball occupancy (full coverage and lonely balls), exact binomial
//! moments of the lonely-ball indicators, and estimation of the
//! semi-uniformity constants from samples.

mod binomial;
mod estimate;
mod packing;

pub use binomial::{expected_pair, expected_singleton};
pub use estimate::{
    estimate_regularity, BallMass, DeltaGrid, RegularityEstimate, SemiUniformConstants,
    DEFAULT_GRID_STEPS, MIN_BALL_OCCUPANCY,
};
pub use packing::{
    check_packing, maximal_packing, occupancy, LonelyBallStats, PackingCheck, PackingResult,
};

/// Radius at which every packing ball is hit with high probability:
/// (2 log m / (α m))^{1/d}.
pub fn covering_delta(m: usize, alpha: f64, d: f64) -> f64 {
    let m = m as f64;
    (2.0 * m.ln() / (alpha * m)).powf(1.0 / d)
}

/// Radius at which many packing balls hold exactly one sample point:
/// (log m / (2 β m))^{1/d}.
pub fn lonely_delta(m: usize, beta: f64, d: f64) -> f64 {
    let m = m as f64;
    (m.ln() / (2.0 * beta * m)).powf(1.0 / d)
}
