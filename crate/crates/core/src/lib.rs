//! Simulation toolkit for the connectivity threshold of random samples from
//! semi-uniform measures: the longest edge of the Euclidean minimum spanning
//! tree of m i.i.d. points scales like (log m / m)^{1/d}.
//!
//! Modules, bottom-up:
//! - [`geometry`]: points, the Euclidean metric, seeded streams.
//! - [`measures`]: samplers and membership oracles.
//! - [`emst`]: exact minimum spanning trees (dense Prim and k-d Borůvka).
//! - [`rgg`]: union-of-balls connectivity and its threshold.
//! - [`regularity`]: packings, occupancy statistics, (d, α, β) estimation.
//! - [`experiments`]: batch runs, exponent fits, CSV persistence.

pub mod dsu;
pub mod emst;
pub mod error;
pub mod experiments;
pub mod geometry;
mod grid;
pub mod measures;
pub mod regularity;
pub mod rgg;
pub mod stats;

pub use emst::{longest_edge, mst_fast, mst_oracle, MstEdge, MstResult};
pub use error::{Error, Result};
pub use geometry::{derive_stream, distance, Point, PointCloud, RandomStream};
pub use measures::{contains, sample, set_f_geometry, MeasureKind, MeasureSpec, SetFGeometry};
pub use regularity::{
    estimate_regularity, expected_pair, expected_singleton, maximal_packing, occupancy,
    LonelyBallStats, PackingResult, RegularityEstimate,
};
pub use rgg::{connectivity_threshold, is_connected_at, ConnectivityReport};
