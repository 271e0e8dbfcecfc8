//! Exact Euclidean minimum spanning trees.
//!
//! Candidate edges are totally ordered by (squared length, smaller index,
//! larger index). Under a total order the MST is unique, so the dense Prim
//! reference and the k-d tree Borůvka produce identical edge lists, not just
//! identical length multisets.

mod kdtree;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dsu::UnionFind;
use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use kdtree::{EdgeKey, KdTree};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MstEdge {
    pub i: usize,
    pub j: usize,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MstResult {
    /// Tree edges with `i < j`, in increasing (length, i, j) order.
    pub edges: Vec<MstEdge>,
    pub longest_edge: f64,
    pub total_length: f64,
    pub sorted_lengths: Vec<f64>,
}

impl MstResult {
    fn from_keys(mut keys: Vec<EdgeKey>, cloud: &PointCloud) -> Self {
        keys.sort_by(|a, b| a.d2.total_cmp(&b.d2).then((a.lo, a.hi).cmp(&(b.lo, b.hi))));
        let pts = cloud.points();
        let edges: Vec<MstEdge> = keys
            .iter()
            .map(|k| {
                let (i, j) = (k.lo as usize, k.hi as usize);
                MstEdge {
                    i,
                    j,
                    length: pts[i].dist(&pts[j]),
                }
            })
            .collect();
        let sorted_lengths: Vec<f64> = edges.iter().map(|e| e.length).collect();
        MstResult {
            longest_edge: sorted_lengths.last().copied().unwrap_or(0.0),
            total_length: sorted_lengths.iter().sum(),
            sorted_lengths,
            edges,
        }
    }

    /// Writes the edge list as CSV with columns `i,j,length`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "length"])?;
        for e in &self.edges {
            w.write_record([
                e.i.to_string(),
                e.j.to_string(),
                crate::experiments::fmt_f64(e.length),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Longest tree edge; 0 for clouds with fewer than two points.
pub fn longest_edge(result: &MstResult) -> f64 {
    result.sorted_lengths.last().copied().unwrap_or(0.0)
}

fn check_cloud(cloud: &PointCloud) -> Result<()> {
    if cloud.is_empty() {
        return Err(Error::usage("minimum spanning tree of an empty cloud"));
    }
    if cloud.len() >= u32::MAX as usize {
        return Err(Error::usage("cloud too large"));
    }
    Ok(())
}

/// Dense Prim scan over all pairs, O(m²). The reference implementation.
pub fn mst_oracle(cloud: &PointCloud) -> Result<MstResult> {
    check_cloud(cloud)?;
    let pts = cloud.points();
    let m = pts.len();
    let mut in_tree = vec![false; m];
    let mut best = vec![EdgeKey::NONE; m];
    let mut keys = Vec::with_capacity(m.saturating_sub(1));
    let mut last = 0;
    in_tree[0] = true;
    for _ in 1..m {
        let mut next = usize::MAX;
        let mut next_key = EdgeKey::NONE;
        for v in 0..m {
            if in_tree[v] {
                continue;
            }
            let cand = EdgeKey::new(pts[last].dist2(&pts[v]), last as u32, v as u32);
            if cand.less(&best[v]) {
                best[v] = cand;
            }
            if next == usize::MAX || best[v].less(&next_key) {
                next = v;
                next_key = best[v];
            }
        }
        in_tree[next] = true;
        keys.push(next_key);
        last = next;
    }
    Ok(MstResult::from_keys(keys, cloud))
}

/// Borůvka rounds driven by k-d tree nearest-foreign-neighbour queries.
/// Exact; expected O(m log m) per round and O(log m) rounds.
pub fn mst_fast(cloud: &PointCloud) -> Result<MstResult> {
    check_cloud(cloud)?;
    let m = cloud.len();
    let mut tree = KdTree::build(cloud.points());
    let mut uf = UnionFind::new(m);
    let mut keys = Vec::with_capacity(m - 1);
    let mut best = vec![EdgeKey::NONE; m];
    while uf.components() > 1 {
        for p in 0..tree.len() {
            tree.comp[p] = uf.find(tree.order[p] as usize) as u32;
        }
        tree.refresh_labels();
        for p in 0..tree.len() {
            let c = tree.comp[p] as usize;
            let mut b = best[c];
            tree.nearest_foreign(p, &mut b);
            best[c] = b;
        }
        let mut merged = false;
        for c in 0..m {
            let k = std::mem::replace(&mut best[c], EdgeKey::NONE);
            if !k.is_none() && uf.union(k.lo as usize, k.hi as usize) {
                keys.push(k);
                merged = true;
            }
        }
        if !merged {
            return Err(Error::usage("Borůvka round made no progress"));
        }
    }
    Ok(MstResult::from_keys(keys, cloud))
}
