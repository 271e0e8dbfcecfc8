//! Samplers for the measures the experiments run on: uniform measures on
//! unit shapes, self-similar measures on IFS attractors, and the slab/bridge
//! set F whose normalized Lebesgue measure is not semi-uniform.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, PointCloud, RandomStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    #[serde(rename = "unit_interval")]
    UnitInterval,
    #[serde(rename = "unit_square")]
    UnitSquare,
    #[serde(rename = "unit_cube")]
    UnitCube,
    #[serde(rename = "unit_disk")]
    UnitDisk,
    #[serde(rename = "sierpinski_carpet")]
    SierpinskiCarpet,
    #[serde(rename = "sierpinski_triangle")]
    SierpinskiTriangle,
    #[serde(rename = "cantor_dust")]
    CantorDust,
    #[serde(rename = "set_F")]
    SetF,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 8] = [
        MeasureKind::UnitInterval,
        MeasureKind::UnitSquare,
        MeasureKind::UnitCube,
        MeasureKind::UnitDisk,
        MeasureKind::SierpinskiCarpet,
        MeasureKind::SierpinskiTriangle,
        MeasureKind::CantorDust,
        MeasureKind::SetF,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::UnitInterval => "unit_interval",
            MeasureKind::UnitSquare => "unit_square",
            MeasureKind::UnitCube => "unit_cube",
            MeasureKind::UnitDisk => "unit_disk",
            MeasureKind::SierpinskiCarpet => "sierpinski_carpet",
            MeasureKind::SierpinskiTriangle => "sierpinski_triangle",
            MeasureKind::CantorDust => "cantor_dust",
            MeasureKind::SetF => "set_F",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::usage(format!("unknown measure kind '{name}'")))
    }

    pub fn ambient_dim(self) -> usize {
        match self {
            MeasureKind::UnitInterval => 1,
            MeasureKind::UnitCube => 3,
            _ => 2,
        }
    }

    fn ifs(self) -> Option<&'static Ifs> {
        match self {
            MeasureKind::SierpinskiCarpet => Some(&CARPET),
            MeasureKind::SierpinskiTriangle => Some(&TRIANGLE),
            MeasureKind::CantorDust => Some(&DUST),
            _ => None,
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Kind-specific knobs. Unset fields take the kind's default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureParams {
    /// IFS address depth D.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    /// Number of slab/bridge pairs kept in set F.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_max: Option<u32>,
}

pub const DEFAULT_SET_F_I_MAX: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasureSpec", into = "RawMeasureSpec")]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    pub params: MeasureParams,
}

#[derive(Serialize, Deserialize)]
struct RawMeasureSpec {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ambient_dim: Option<usize>,
    #[serde(default)]
    params: MeasureParams,
}

impl TryFrom<RawMeasureSpec> for MeasureSpec {
    type Error = Error;

    fn try_from(raw: RawMeasureSpec) -> Result<Self> {
        let kind = MeasureKind::from_name(&raw.kind)?;
        if let Some(k) = raw.ambient_dim {
            if k != kind.ambient_dim() {
                return Err(Error::usage(format!(
                    "{kind} lives in dimension {}, not {k}",
                    kind.ambient_dim()
                )));
            }
        }
        MeasureSpec::with_params(kind, raw.params)
    }
}

impl From<MeasureSpec> for RawMeasureSpec {
    fn from(m: MeasureSpec) -> Self {
        RawMeasureSpec {
            kind: m.kind.name().to_string(),
            ambient_dim: Some(m.kind.ambient_dim()),
            params: m.params,
        }
    }
}

impl MeasureSpec {
    pub fn new(kind: MeasureKind) -> Self {
        MeasureSpec {
            kind,
            params: MeasureParams::default(),
        }
    }

    pub fn with_params(kind: MeasureKind, params: MeasureParams) -> Result<Self> {
        if params.depth.is_some() && kind.ifs().is_none() {
            return Err(Error::usage(format!("{kind} takes no 'depth' parameter")));
        }
        if params.i_max.is_some() && kind != MeasureKind::SetF {
            return Err(Error::usage(format!("{kind} takes no 'i_max' parameter")));
        }
        if params.depth == Some(0) || params.i_max == Some(0) {
            return Err(Error::usage("depth and i_max must be at least 1"));
        }
        Ok(MeasureSpec { kind, params })
    }

    /// Accepts either a bare kind name or a JSON object.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            Ok(serde_json::from_str(s)?)
        } else {
            MeasureKind::from_name(s).map(MeasureSpec::new)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure spec serializes")
    }

    /// Stable identifier: the kind name, with any overridden params appended.
    pub fn id(&self) -> String {
        let mut id = self.kind.name().to_string();
        match (self.params.depth, self.params.i_max) {
            (Some(d), _) => id.push_str(&format!("[depth={d}]")),
            (_, Some(i)) => id.push_str(&format!("[i_max={i}]")),
            _ => {}
        }
        id
    }

    pub fn ambient_dim(&self) -> usize {
        self.kind.ambient_dim()
    }

    /// The dimension d the measure is expected to be semi-uniform in.
    pub fn nominal_dim(&self) -> f64 {
        match self.kind {
            MeasureKind::UnitInterval => 1.0,
            MeasureKind::UnitSquare | MeasureKind::UnitDisk | MeasureKind::SetF => 2.0,
            MeasureKind::UnitCube => 3.0,
            MeasureKind::SierpinskiCarpet => 8f64.ln() / 3f64.ln(),
            MeasureKind::SierpinskiTriangle => 3f64.ln() / 2f64.ln(),
            MeasureKind::CantorDust => 4f64.ln() / 3f64.ln(),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.kind != MeasureKind::CantorDust
    }

    /// Connected but not semi-uniform.
    pub fn is_pathological(&self) -> bool {
        self.kind == MeasureKind::SetF
    }

    pub fn depth(&self) -> Option<u32> {
        self.kind
            .ifs()
            .map(|ifs| self.params.depth.unwrap_or(ifs.default_depth))
    }

    pub fn i_max(&self) -> Option<u32> {
        (self.kind == MeasureKind::SetF).then(|| self.params.i_max.unwrap_or(DEFAULT_SET_F_I_MAX))
    }

    /// Diameter of the support.
    pub fn diameter(&self) -> f64 {
        match self.kind {
            MeasureKind::UnitInterval => 1.0,
            MeasureKind::UnitCube => 3f64.sqrt(),
            MeasureKind::UnitDisk => 2.0,
            MeasureKind::SetF => {
                let i_max = self.i_max().unwrap() as f64;
                let x_min = 1.0 / (2.0 * i_max + 1.0);
                ((1.0 - x_min).powi(2) + 1.0).sqrt()
            }
            _ => 2f64.sqrt(),
        }
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// An IFS of similarities x -> (x + digit) / base on the unit square.
#[derive(Debug)]
struct Ifs {
    base: f64,
    digits: &'static [[u8; 2]],
    default_depth: u32,
}

// Corner contraction (digit (0,0)) comes first so that the all-zero address
// is the fixed point at the origin.
static CARPET: Ifs = Ifs {
    base: 3.0,
    digits: &[
        [0, 0],
        [1, 0],
        [2, 0],
        [0, 1],
        [2, 1],
        [0, 2],
        [1, 2],
        [2, 2],
    ],
    default_depth: 33,
};

// Right-angled gasket with vertices (0,0), (1,0), (0,1).
static TRIANGLE: Ifs = Ifs {
    base: 2.0,
    digits: &[[0, 0], [1, 0], [0, 1]],
    default_depth: 53,
};

static DUST: Ifs = Ifs {
    base: 3.0,
    digits: &[[0, 0], [2, 0], [0, 2], [2, 2]],
    default_depth: 33,
};

impl Ifs {
    /// Applies f_{s_1} ∘ … ∘ f_{s_D} to the anchor (the origin).
    fn point_at(&self, address: &[usize]) -> Point {
        let (mut x, mut y) = (0.0, 0.0);
        for &s in address.iter().rev() {
            let [dx, dy] = self.digits[s];
            x = (x + dx as f64) / self.base;
            y = (y + dy as f64) / self.base;
        }
        Point::new2(x, y)
    }

    fn sample(&self, depth: u32, stream: &mut RandomStream) -> Point {
        let (mut x, mut y) = (0.0, 0.0);
        // The innermost map is drawn first; symbols are i.i.d., so the order
        // of draws does not change the distribution.
        for _ in 0..depth {
            let [dx, dy] = self.digits[stream.below(self.digits.len())];
            x = (x + dx as f64) / self.base;
            y = (y + dy as f64) / self.base;
        }
        Point::new2(x, y)
    }

    /// Membership in the level-`depth` approximation (images of the unit
    /// square). Cells whose boundary lies within the rounding tolerance of
    /// the point are all explored; once the scaled tolerance reaches the
    /// cell size the remaining digits are unresolvable and accepted.
    fn contains(&self, x: f64, y: f64, depth: u32, tol: f64) -> bool {
        if !(-tol..=1.0 + tol).contains(&x) || !(-tol..=1.0 + tol).contains(&y) {
            return false;
        }
        if depth == 0 || tol >= 0.25 {
            return true;
        }
        let b = self.base;
        let candidates = |v: f64| {
            (0..b as u8).filter(move |&k| {
                let k = k as f64;
                v >= k / b - tol && v <= (k + 1.0) / b + tol
            })
        };
        for kx in candidates(x) {
            for ky in candidates(y) {
                if self.digits.contains(&[kx, ky])
                    && self.contains(
                        (b * x - kx as f64).clamp(0.0, 1.0),
                        (b * y - ky as f64).clamp(0.0, 1.0),
                        depth - 1,
                        b * tol,
                    )
                {
                    return true;
                }
            }
        }
        false
    }
}

/// Absolute rounding slack used by IFS membership tests.
const IFS_TOLERANCE: f64 = 1e-14;

/// The point with the given IFS address, for the fractal kinds.
pub fn ifs_point(measure: &MeasureSpec, address: &[usize]) -> Result<Point> {
    let ifs = measure
        .kind
        .ifs()
        .ok_or_else(|| Error::usage(format!("{} is not an IFS measure", measure.kind)))?;
    if let Some(&s) = address.iter().find(|&&s| s >= ifs.digits.len()) {
        return Err(Error::usage(format!("address symbol {s} out of range")));
    }
    Ok(ifs.point_at(address))
}

/// Rectangle [x0, x1] × [y0, y1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.x0..=self.x1).contains(&x) && (self.y0..=self.y1).contains(&y)
    }
}

/// Truncated geometry of set F: slabs A_i = [1/(2i), 1/(2i-1)] × [0, 1]
/// joined by bridges B_i = [1/(2i+1), 1/(2i)] × [0, 2^-i], for i ≤ i_max.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetFGeometry {
    pub i_max: u32,
    pub slabs: Vec<Rect>,
    pub bridges: Vec<Rect>,
    pub slab_areas: Vec<f64>,
    pub bridge_areas: Vec<f64>,
    pub total_area: f64,
    /// Cumulative areas over the interleaved order A_1, B_1, A_2, B_2, …
    cumulative: Vec<f64>,
}

pub fn set_f_geometry(i_max: u32) -> Result<SetFGeometry> {
    if i_max == 0 {
        return Err(Error::usage("set F needs i_max >= 1"));
    }
    let mut slabs = Vec::with_capacity(i_max as usize);
    let mut bridges = Vec::with_capacity(i_max as usize);
    for i in 1..=i_max {
        let i = i as f64;
        slabs.push(Rect {
            x0: 1.0 / (2.0 * i),
            x1: 1.0 / (2.0 * i - 1.0),
            y0: 0.0,
            y1: 1.0,
        });
        bridges.push(Rect {
            x0: 1.0 / (2.0 * i + 1.0),
            x1: 1.0 / (2.0 * i),
            y0: 0.0,
            y1: (-i).exp2(),
        });
    }
    let slab_areas: Vec<f64> = slabs.iter().map(Rect::area).collect();
    let bridge_areas: Vec<f64> = bridges.iter().map(Rect::area).collect();
    let mut cumulative = Vec::with_capacity(2 * i_max as usize);
    let mut acc = 0.0;
    for (a, b) in slab_areas.iter().zip(&bridge_areas) {
        acc += a;
        cumulative.push(acc);
        acc += b;
        cumulative.push(acc);
    }
    Ok(SetFGeometry {
        i_max,
        slabs,
        bridges,
        slab_areas,
        bridge_areas,
        total_area: acc,
        cumulative,
    })
}

impl SetFGeometry {
    /// Region in the interleaved order (even = slab A_{k/2+1}, odd = bridge).
    pub fn region(&self, k: usize) -> &Rect {
        if k.is_multiple_of(2) {
            &self.slabs[k / 2]
        } else {
            &self.bridges[k / 2]
        }
    }

    pub fn region_count(&self) -> usize {
        self.cumulative.len()
    }

    /// Index of the first region (interleaved order) containing the point.
    pub fn locate(&self, x: f64, y: f64) -> Option<usize> {
        (0..self.region_count()).find(|&k| self.region(k).contains(x, y))
    }

    fn sample(&self, stream: &mut RandomStream) -> Point {
        let u = stream.uniform() * self.total_area;
        let k = self
            .cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1);
        let r = self.region(k);
        let x = r.x0 + stream.uniform() * (r.x1 - r.x0);
        let y = r.y0 + stream.uniform() * (r.y1 - r.y0);
        Point::new2(x, y)
    }
}

/// Draws `m` i.i.d. points from the measure.
pub fn sample(measure: &MeasureSpec, m: usize, stream: &mut RandomStream) -> PointCloud {
    let seed = stream.seed();
    let mut points = Vec::with_capacity(m);
    match measure.kind {
        MeasureKind::UnitInterval => {
            points.extend((0..m).map(|_| Point::new1(stream.uniform())));
        }
        MeasureKind::UnitSquare => {
            points.extend((0..m).map(|_| Point::new2(stream.uniform(), stream.uniform())));
        }
        MeasureKind::UnitCube => points.extend(
            (0..m).map(|_| Point::new3(stream.uniform(), stream.uniform(), stream.uniform())),
        ),
        MeasureKind::UnitDisk => {
            while points.len() < m {
                let x = 2.0 * stream.uniform() - 1.0;
                let y = 2.0 * stream.uniform() - 1.0;
                if x * x + y * y <= 1.0 {
                    points.push(Point::new2(x, y));
                }
            }
        }
        MeasureKind::SierpinskiCarpet
        | MeasureKind::SierpinskiTriangle
        | MeasureKind::CantorDust => {
            let ifs = measure.kind.ifs().unwrap();
            let depth = measure.depth().unwrap();
            points.extend((0..m).map(|_| ifs.sample(depth, stream)));
        }
        MeasureKind::SetF => {
            let geometry =
                set_f_geometry(measure.i_max().unwrap()).expect("i_max validated at construction");
            points.extend((0..m).map(|_| geometry.sample(stream)));
        }
    }
    PointCloud::with_origin(points, measure.ambient_dim(), seed, measure.id())
        .expect("samplers produce points of the measure's dimension")
}

/// Membership oracle. `depth` only matters for the IFS kinds, where it is the
/// level of the approximation checked.
pub fn contains(measure: &MeasureSpec, p: &Point, depth: u32) -> bool {
    if p.dim() != measure.ambient_dim() {
        return false;
    }
    let c = p.coords();
    let unit = |v: f64| (0.0..=1.0).contains(&v);
    match measure.kind {
        MeasureKind::UnitInterval | MeasureKind::UnitSquare | MeasureKind::UnitCube => {
            c.iter().all(|&v| unit(v))
        }
        MeasureKind::UnitDisk => c[0] * c[0] + c[1] * c[1] <= 1.0,
        MeasureKind::SierpinskiCarpet
        | MeasureKind::SierpinskiTriangle
        | MeasureKind::CantorDust => {
            measure
                .kind
                .ifs()
                .unwrap()
                .contains(c[0], c[1], depth, IFS_TOLERANCE)
        }
        MeasureKind::SetF => set_f_geometry(measure.i_max().unwrap())
            .map(|g| g.locate(c[0], c[1]).is_some())
            .unwrap_or(false),
    }
}
