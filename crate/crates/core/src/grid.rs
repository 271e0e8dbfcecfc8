use std::collections::HashMap;

use crate::geometry::Point;

/// Uniform hash grid over point ids. With cell side `s`, every point within
/// distance `s` of a query lies in the query's cell or an adjacent one.
pub(crate) struct HashGrid {
    inv_cell: f64,
    dim: usize,
    cells: HashMap<[i64; 3], Vec<u32>>,
}

impl HashGrid {
    pub fn new(cell: f64, dim: usize) -> Self {
        debug_assert!(cell > 0.0);
        HashGrid {
            inv_cell: 1.0 / cell,
            dim,
            cells: HashMap::new(),
        }
    }

    fn key(&self, p: &Point) -> [i64; 3] {
        let c = p.padded();
        [
            (c[0] * self.inv_cell).floor() as i64,
            (c[1] * self.inv_cell).floor() as i64,
            (c[2] * self.inv_cell).floor() as i64,
        ]
    }

    pub fn insert(&mut self, p: &Point, id: u32) {
        let k = self.key(p);
        self.cells.entry(k).or_default().push(id);
    }

    /// Calls `f` on every id in the 3^dim block of cells around `p` until it
    /// returns false. Returns whether the scan ran to completion.
    pub fn scan_near(&self, p: &Point, mut f: impl FnMut(u32) -> bool) -> bool {
        let k = self.key(p);
        let span = |d: usize| if d < self.dim { -1..=1 } else { 0..=0 };
        for dx in span(0) {
            for dy in span(1) {
                for dz in span(2) {
                    if let Some(ids) = self.cells.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        for &id in ids {
                            if !f(id) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}
