//! Connectivity of the union of closed balls B(X_i, r).
//!
//! Two closed balls of radius r meet iff their centres are at distance
//! ≤ 2r, so the union is connected iff the 2r-graph on the sample is. The
//! closed convention makes the threshold exactly half the longest MST edge.

use serde::{Deserialize, Serialize};

use crate::dsu::UnionFind;
use crate::emst::mst_fast;
use crate::error::{Error, Result};
use crate::geometry::PointCloud;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityReport {
    pub radius: f64,
    pub component_count: usize,
    pub is_connected: bool,
}

/// All-pairs union-find, O(m²). Meant for validation-scale clouds.
pub fn is_connected_at(cloud: &PointCloud, r: f64) -> Result<ConnectivityReport> {
    if cloud.is_empty() {
        return Err(Error::usage("connectivity of an empty cloud"));
    }
    if !(r >= 0.0) {
        return Err(Error::usage(format!("radius must be nonnegative, got {r}")));
    }
    let pts = cloud.points();
    let reach = 2.0 * r;
    let mut uf = UnionFind::new(pts.len());
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i].dist(&pts[j]) <= reach {
                uf.union(i, j);
            }
        }
    }
    let component_count = uf.components();
    Ok(ConnectivityReport {
        radius: r,
        component_count,
        is_connected: component_count == 1,
    })
}

/// Minimal r at which the union of balls is connected: half the longest
/// MST edge.
pub fn connectivity_threshold(cloud: &PointCloud) -> Result<f64> {
    Ok(mst_fast(cloud)?.longest_edge / 2.0)
}
