//! A static k-d tree tailored to Borůvka rounds: every node caches the
//! component label shared by all of its points (or `MIXED`), so whole
//! subtrees belonging to the querying component are skipped.

use crate::geometry::{Point, MAX_DIM};

const LEAF_SIZE: usize = 8;
pub(super) const MIXED: u32 = u32::MAX;
const NO_CHILD: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Node {
    lo: [f64; MAX_DIM],
    hi: [f64; MAX_DIM],
    start: u32,
    end: u32,
    left: u32,
    right: u32,
}

/// Candidate edge, ordered by (squared length, smaller index, larger index).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(super) struct EdgeKey {
    pub d2: f64,
    pub lo: u32,
    pub hi: u32,
}

impl EdgeKey {
    pub const NONE: EdgeKey = EdgeKey {
        d2: f64::INFINITY,
        lo: u32::MAX,
        hi: u32::MAX,
    };

    #[inline]
    pub fn new(d2: f64, a: u32, b: u32) -> Self {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        EdgeKey { d2, lo, hi }
    }

    #[inline]
    pub fn less(&self, other: &EdgeKey) -> bool {
        self.d2 < other.d2 || (self.d2 == other.d2 && (self.lo, self.hi) < (other.lo, other.hi))
    }

    pub fn is_none(&self) -> bool {
        self.lo == u32::MAX
    }
}

pub(super) struct KdTree {
    /// Coordinates in tree order.
    pts: Vec<[f64; MAX_DIM]>,
    /// Tree order -> original index.
    pub order: Vec<u32>,
    nodes: Vec<Node>,
    /// Per-node component label, refreshed every round.
    node_comp: Vec<u32>,
    /// Per-point (tree order) component label.
    pub comp: Vec<u32>,
}

impl KdTree {
    pub fn build(points: &[Point]) -> Self {
        let n = points.len();
        let mut order: Vec<u32> = (0..n as u32).collect();
        let mut nodes = Vec::with_capacity(2 * n / LEAF_SIZE + 1);
        build_node(points, &mut order, 0, n, &mut nodes);
        let pts = order
            .iter()
            .map(|&i| *points[i as usize].padded())
            .collect();
        let node_count = nodes.len();
        KdTree {
            pts,
            order,
            nodes,
            node_comp: vec![MIXED; node_count],
            comp: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    /// Recomputes node labels from `self.comp`. Children always come after
    /// their parent in `nodes`, so a reverse sweep is bottom-up.
    pub fn refresh_labels(&mut self) {
        for k in (0..self.nodes.len()).rev() {
            let node = &self.nodes[k];
            self.node_comp[k] = if node.left == NO_CHILD {
                let first = self.comp[node.start as usize];
                if self.comp[node.start as usize..node.end as usize]
                    .iter()
                    .all(|&c| c == first)
                {
                    first
                } else {
                    MIXED
                }
            } else {
                let (l, r) = (
                    self.node_comp[node.left as usize],
                    self.node_comp[node.right as usize],
                );
                if l == r {
                    l
                } else {
                    MIXED
                }
            };
        }
    }

    /// Improves `best` with the shortest edge from tree-order point `p` to a
    /// point of a different component.
    pub fn nearest_foreign(&self, p: usize, best: &mut EdgeKey) {
        let c = self.comp[p];
        let q = self.pts[p];
        let qi = self.order[p];
        self.visit(0, &q, qi, c, best);
    }

    fn visit(&self, k: usize, q: &[f64; MAX_DIM], qi: u32, c: u32, best: &mut EdgeKey) {
        if self.node_comp[k] == c {
            return;
        }
        let node = &self.nodes[k];
        if box_dist2(node, q) > best.d2 {
            return;
        }
        if node.left == NO_CHILD {
            for t in node.start as usize..node.end as usize {
                if self.comp[t] == c {
                    continue;
                }
                let cand = EdgeKey::new(dist2(q, &self.pts[t]), qi, self.order[t]);
                if cand.less(best) {
                    *best = cand;
                }
            }
            return;
        }
        let (l, r) = (node.left as usize, node.right as usize);
        let dl = box_dist2(&self.nodes[l], q);
        let dr = box_dist2(&self.nodes[r], q);
        if dl <= dr {
            self.visit(l, q, qi, c, best);
            self.visit(r, q, qi, c, best);
        } else {
            self.visit(r, q, qi, c, best);
            self.visit(l, q, qi, c, best);
        }
    }
}

#[inline]
fn dist2(a: &[f64; MAX_DIM], b: &[f64; MAX_DIM]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    dx * dx + dy * dy + dz * dz
}

#[inline]
fn box_dist2(node: &Node, q: &[f64; MAX_DIM]) -> f64 {
    let mut s = 0.0;
    for d in 0..MAX_DIM {
        let v = if q[d] < node.lo[d] {
            node.lo[d] - q[d]
        } else if q[d] > node.hi[d] {
            q[d] - node.hi[d]
        } else {
            0.0
        };
        s += v * v;
    }
    s
}

fn build_node(
    points: &[Point],
    order: &mut [u32],
    start: usize,
    end: usize,
    nodes: &mut Vec<Node>,
) -> u32 {
    let mut lo = [f64::INFINITY; MAX_DIM];
    let mut hi = [f64::NEG_INFINITY; MAX_DIM];
    for &i in &order[start..end] {
        let p = points[i as usize].padded();
        for d in 0..MAX_DIM {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let k = nodes.len();
    nodes.push(Node {
        lo,
        hi,
        start: start as u32,
        end: end as u32,
        left: NO_CHILD,
        right: NO_CHILD,
    });
    let spread = |d: usize| hi[d] - lo[d];
    let axis = (0..MAX_DIM)
        .max_by(|&a, &b| spread(a).total_cmp(&spread(b)))
        .unwrap();
    if end - start <= LEAF_SIZE || spread(axis) == 0.0 {
        return k as u32;
    }
    let mid = (start + end) / 2;
    order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
        let pa = points[a as usize].padded()[axis];
        let pb = points[b as usize].padded()[axis];
        pa.total_cmp(&pb).then(a.cmp(&b))
    });
    let left = build_node(points, order, start, mid, nodes);
    let right = build_node(points, order, mid, end, nodes);
    nodes[k].left = left;
    nodes[k].right = right;
    k as u32
}
