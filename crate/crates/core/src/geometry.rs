//! Points, clouds, the Euclidean metric and seeded random streams.

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 3;

/// A point of R^k, k in 1..=3. Unused trailing coordinates are kept at zero
/// so that distance kernels can run over all three slots unconditionally.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: [f64; MAX_DIM],
    dim: u8,
}

impl Point {
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::usage(format!(
                "point dimension {} outside 1..={MAX_DIM}",
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::usage(format!("non-finite coordinate {c}")));
        }
        let mut buf = [0.0; MAX_DIM];
        buf[..coords.len()].copy_from_slice(coords);
        Ok(Point {
            coords: buf,
            dim: coords.len() as u8,
        })
    }

    pub fn new1(x: f64) -> Self {
        Point {
            coords: [x, 0.0, 0.0],
            dim: 1,
        }
    }

    pub fn new2(x: f64, y: f64) -> Self {
        Point {
            coords: [x, y, 0.0],
            dim: 2,
        }
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        Point {
            coords: [x, y, z],
            dim: 3,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim as usize]
    }

    /// All three slots, zero-padded.
    #[inline]
    pub(crate) fn padded(&self) -> &[f64; MAX_DIM] {
        &self.coords
    }

    #[inline]
    pub fn scaled(&self, s: f64) -> Point {
        Point {
            coords: [self.coords[0] * s, self.coords[1] * s, self.coords[2] * s],
            dim: self.dim,
        }
    }

    /// Squared Euclidean distance. Callers must ensure equal dimensions.
    #[inline]
    pub fn dist2(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let dx = self.coords[0] - other.coords[0];
        let dy = self.coords[1] - other.coords[1];
        let dz = self.coords[2] - other.coords[2];
        dx * dx + dy * dy + dz * dz
    }

    /// Euclidean distance. Every length reported by this crate goes through
    /// here, so comparisons between modules are bit-exact.
    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        self.dist2(other).sqrt()
    }
}

/// Euclidean distance with a dimension check.
pub fn distance(a: &Point, b: &Point) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::usage(format!(
            "dimension mismatch: {} vs {}",
            a.dim, b.dim
        )));
    }
    Ok(a.dist(b))
}

/// The sample X_1..X_m in generation order, together with what produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    points: Vec<Point>,
    ambient_dim: usize,
    pub seed: u64,
    pub measure_id: String,
}

impl PointCloud {
    pub fn new(points: Vec<Point>, ambient_dim: usize) -> Result<Self> {
        Self::with_origin(points, ambient_dim, 0, String::new())
    }

    pub fn with_origin(
        points: Vec<Point>,
        ambient_dim: usize,
        seed: u64,
        measure_id: String,
    ) -> Result<Self> {
        if ambient_dim == 0 || ambient_dim > MAX_DIM {
            return Err(Error::usage(format!(
                "ambient dimension {ambient_dim} outside 1..={MAX_DIM}"
            )));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != ambient_dim) {
            return Err(Error::usage(format!(
                "point of dimension {} in a cloud of dimension {ambient_dim}",
                p.dim()
            )));
        }
        Ok(PointCloud {
            points,
            ambient_dim,
            seed,
            measure_id,
        })
    }

    /// Builds a cloud from raw coordinate rows; handy in tests and bindings.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(1);
        let points = rows
            .iter()
            .map(|r| Point::new(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, dim)
    }

    #[inline]
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// A copy with every coordinate multiplied by `s`.
    pub fn scaled(&self, s: f64) -> PointCloud {
        PointCloud {
            points: self.points.iter().map(|p| p.scaled(s)).collect(),
            ambient_dim: self.ambient_dim,
            seed: self.seed,
            measure_id: self.measure_id.clone(),
        }
    }
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer: a 64-bit avalanche permutation.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a master seed and a label path into one 64-bit stream seed.
///
/// `h0 = mix64(master + γ)`, then for each label `h = mix64((h + γ) ^ mix64(label + γ))`,
/// with γ the golden-ratio increment of SplitMix64. The 256-bit generator
/// state is then expanded from `h` by SplitMix64.
pub fn derive_seed(master_seed: u64, labels: &[u64]) -> u64 {
    labels
        .iter()
        .fold(mix64(master_seed.wrapping_add(GOLDEN_GAMMA)), |h, &l| {
            mix64(h.wrapping_add(GOLDEN_GAMMA) ^ mix64(l.wrapping_add(GOLDEN_GAMMA)))
        })
}

/// 64-bit FNV-1a, used to turn string identifiers into stream labels.
pub fn label_for_str(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// xoshiro256** stream. Single-owner: derive a new stream per consumer
/// instead of sharing one.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: Xoshiro256StarStar,
}

impl RandomStream {
    pub fn from_seed(seed: u64) -> Self {
        RandomStream {
            seed,
            rng: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    /// The seed this stream was created from; `from_seed(s.seed())` replays it.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform deviate in [0, 1) with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform integer in [0, n).
    #[inline]
    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }
}

pub fn derive_stream(master_seed: u64, labels: &[u64]) -> RandomStream {
    RandomStream::from_seed(derive_seed(master_seed, labels))
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
