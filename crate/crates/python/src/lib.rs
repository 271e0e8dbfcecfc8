use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fracconn::experiments;
use fracconn::measures::{MeasureKind, MeasureParams};
use fracconn::regularity;

fn to_py(e: fracconn::Error) -> PyErr {
    match e {
        fracconn::Error::Usage(_) | fracconn::Error::Json(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Measure", frozen, from_py_object)]
#[derive(Clone)]
struct PyMeasure(fracconn::MeasureSpec);

#[pymethods]
impl PyMeasure {
    /// Kind name (e.g. "sierpinski_carpet") or a JSON measure object.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        fracconn::MeasureSpec::parse(spec)
            .map(PyMeasure)
            .map_err(to_py)
    }

    #[getter]
    fn id(&self) -> String {
        self.0.id()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind.name()
    }

    #[getter]
    fn nominal_dim(&self) -> f64 {
        self.0.nominal_dim()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }

    #[getter]
    fn diameter(&self) -> f64 {
        self.0.diameter()
    }

    #[getter]
    fn is_connected(&self) -> bool {
        self.0.is_connected()
    }

    #[getter]
    fn is_pathological(&self) -> bool {
        self.0.is_pathological()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    /// Trial `trial` of a run with master seed `seed` at size m.
    #[pyo3(signature = (m, seed, trial = 0))]
    fn sample(&self, m: usize, seed: u64, trial: usize) -> PyPointCloud {
        let mut stream = experiments::trial_stream(&self.0, m, trial, seed);
        PyPointCloud(fracconn::sample(&self.0, m, &mut stream))
    }

    #[pyo3(signature = (point, depth = 33))]
    fn contains(&self, point: Vec<f64>, depth: u32) -> PyResult<bool> {
        let p = fracconn::Point::new(&point).map_err(to_py)?;
        Ok(fracconn::contains(&self.0, &p, depth))
    }

    fn __repr__(&self) -> String {
        format!("Measure({})", self.0.to_json())
    }
}

#[pyclass(name = "PointCloud", frozen, from_py_object)]
#[derive(Clone)]
struct PyPointCloud(fracconn::PointCloud);

#[pymethods]
impl PyPointCloud {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        fracconn::PointCloud::from_rows(&rows)
            .map(PyPointCloud)
            .map_err(to_py)
    }

    #[getter]
    fn points(&self) -> Vec<Vec<f64>> {
        self.0
            .points()
            .iter()
            .map(|p| p.coords().to_vec())
            .collect()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    #[getter]
    fn measure_id(&self) -> String {
        self.0.measure_id.clone()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

#[pyclass(name = "MstResult", frozen, get_all)]
struct PyMstResult {
    edges: Vec<(usize, usize, f64)>,
    longest_edge: f64,
    total_length: f64,
    sorted_lengths: Vec<f64>,
}

impl From<fracconn::MstResult> for PyMstResult {
    fn from(r: fracconn::MstResult) -> Self {
        PyMstResult {
            edges: r.edges.iter().map(|e| (e.i, e.j, e.length)).collect(),
            longest_edge: r.longest_edge,
            total_length: r.total_length,
            sorted_lengths: r.sorted_lengths,
        }
    }
}

#[pyclass(name = "Packing", frozen)]
struct PyPacking(fracconn::PackingResult);

#[pymethods]
impl PyPacking {
    #[getter]
    fn delta(&self) -> f64 {
        self.0.delta
    }

    #[getter]
    fn center_indices(&self) -> Vec<usize> {
        self.0.center_indices.clone()
    }

    #[getter]
    fn occupancy(&self) -> Vec<usize> {
        self.0.occupancy.clone()
    }

    #[getter]
    fn n_delta(&self) -> usize {
        self.0.n_delta
    }

    fn ball_masses(&self) -> Vec<f64> {
        self.0.ball_masses()
    }
}

#[pyclass(name = "LonelyBallStats", frozen, get_all)]
struct PyLonelyBallStats {
    m: usize,
    delta: f64,
    n_delta: usize,
    y: usize,
    empty_balls: usize,
    counts: Vec<usize>,
}

#[pyclass(name = "ScalingRecord", frozen, get_all, from_py_object)]
#[derive(Clone)]
struct PyScalingRecord {
    measure_id: String,
    m: usize,
    trial: usize,
    seed: u64,
    longest_edge: f64,
    threshold_radius: f64,
    runtime_ms: f64,
}

impl From<&experiments::ScalingRecord> for PyScalingRecord {
    fn from(r: &experiments::ScalingRecord) -> Self {
        PyScalingRecord {
            measure_id: r.measure_id.clone(),
            m: r.m,
            trial: r.trial,
            seed: r.seed,
            longest_edge: r.longest_edge,
            threshold_radius: r.threshold_radius,
            runtime_ms: r.runtime_ms,
        }
    }
}

impl From<&PyScalingRecord> for experiments::ScalingRecord {
    fn from(r: &PyScalingRecord) -> Self {
        experiments::ScalingRecord {
            measure_id: r.measure_id.clone(),
            m: r.m,
            trial: r.trial,
            seed: r.seed,
            longest_edge: r.longest_edge,
            threshold_radius: r.threshold_radius,
            runtime_ms: r.runtime_ms,
        }
    }
}

#[pyfunction]
fn distance(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    let a = fracconn::Point::new(&a).map_err(to_py)?;
    let b = fracconn::Point::new(&b).map_err(to_py)?;
    fracconn::distance(&a, &b).map_err(to_py)
}

#[pyfunction]
fn mst_fast(cloud: &PyPointCloud) -> PyResult<PyMstResult> {
    fracconn::mst_fast(&cloud.0).map(Into::into).map_err(to_py)
}

#[pyfunction]
fn mst_oracle(cloud: &PyPointCloud) -> PyResult<PyMstResult> {
    fracconn::mst_oracle(&cloud.0)
        .map(Into::into)
        .map_err(to_py)
}

/// Returns (component_count, is_connected).
#[pyfunction]
fn is_connected_at(cloud: &PyPointCloud, r: f64) -> PyResult<(usize, bool)> {
    let rep = fracconn::is_connected_at(&cloud.0, r).map_err(to_py)?;
    Ok((rep.component_count, rep.is_connected))
}

#[pyfunction]
fn connectivity_threshold(cloud: &PyPointCloud) -> PyResult<f64> {
    fracconn::connectivity_threshold(&cloud.0).map_err(to_py)
}

#[pyfunction]
fn maximal_packing(reference: &PyPointCloud, delta: f64) -> PyResult<PyPacking> {
    fracconn::maximal_packing(&reference.0, delta)
        .map(PyPacking)
        .map_err(to_py)
}

#[pyfunction]
fn occupancy(packing: &PyPacking, sample: &PyPointCloud) -> PyResult<PyLonelyBallStats> {
    let s = fracconn::occupancy(&packing.0, &sample.0).map_err(to_py)?;
    Ok(PyLonelyBallStats {
        m: s.m,
        delta: s.delta,
        n_delta: s.n_delta,
        y: s.y,
        empty_balls: s.empty_balls,
        counts: s.counts,
    })
}

#[pyfunction]
fn expected_singleton(m: usize, q: f64) -> PyResult<f64> {
    regularity::expected_singleton(m, q).map_err(to_py)
}

#[pyfunction]
fn expected_pair(m: usize, q_i: f64, q_j: f64) -> PyResult<f64> {
    regularity::expected_pair(m, q_i, q_j).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (measure, reference_size = 100_000, n_centers = 200, seed = 0))]
fn estimate_regularity<'py>(
    py: Python<'py>,
    measure: &PyMeasure,
    reference_size: usize,
    n_centers: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let est = py
        .detach(|| {
            fracconn::estimate_regularity(
                &measure.0,
                reference_size,
                n_centers,
                None,
                &mut fracconn::derive_stream(seed, &[]),
            )
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("d_hat", est.d_hat)?;
    d.set_item("alpha_hat", est.alpha_hat)?;
    d.set_item("beta_hat", est.beta_hat)?;
    d.set_item("alpha_min", est.alpha_min)?;
    d.set_item("beta_max", est.beta_max)?;
    d.set_item("delta_range", est.delta_range)?;
    d.set_item("n_centers", est.n_centers)?;
    d.set_item("fit_r2", est.fit_r2)?;
    Ok(d)
}

#[pyfunction]
fn set_f_geometry<'py>(py: Python<'py>, i_max: u32) -> PyResult<Bound<'py, PyDict>> {
    let g = fracconn::set_f_geometry(i_max).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("i_max", g.i_max)?;
    d.set_item("slab_areas", g.slab_areas)?;
    d.set_item("bridge_areas", g.bridge_areas)?;
    d.set_item("total_area", g.total_area)?;
    Ok(d)
}

#[pyfunction]
fn scaling_run(
    py: Python<'_>,
    measure: &PyMeasure,
    m_grid: Vec<usize>,
    trials: usize,
    seed: u64,
) -> PyResult<Vec<PyScalingRecord>> {
    let records = py
        .detach(|| experiments::scaling_run(&measure.0, &m_grid, trials, seed))
        .map_err(to_py)?;
    Ok(records.iter().map(Into::into).collect())
}

/// Returns (slope, intercept, r2).
#[pyfunction]
fn fit_scaling(records: Vec<PyScalingRecord>) -> PyResult<(f64, f64, f64)> {
    let records: Vec<experiments::ScalingRecord> = records.iter().map(Into::into).collect();
    let fit = experiments::fit_scaling(&records).map_err(to_py)?;
    Ok((fit.slope, fit.intercept, fit.r2))
}

/// (series of (m, median_longest_edge, ratio), strictly_increasing, growth)
type RatioReport = (Vec<(usize, f64, f64)>, bool, f64);

/// Set F scaling run with its R(m) series.
#[pyfunction]
#[pyo3(signature = (m_grid, trials, seed, i_max = None))]
fn counterexample_run(
    py: Python<'_>,
    m_grid: Vec<usize>,
    trials: usize,
    seed: u64,
    i_max: Option<u32>,
) -> PyResult<RatioReport> {
    let report = py
        .detach(|| experiments::counterexample_run(&m_grid, trials, seed, i_max))
        .map_err(to_py)?;
    let series = report
        .series
        .iter()
        .map(|p| (p.m, p.median_longest_edge, p.ratio))
        .collect();
    Ok((series, report.strictly_increasing, report.growth))
}

/// Names of the built-in measure kinds.
#[pyfunction]
fn measure_kinds() -> Vec<&'static str> {
    MeasureKind::ALL.iter().map(|k| k.name()).collect()
}

/// Set F with a custom truncation index.
#[pyfunction]
fn set_f(i_max: u32) -> PyResult<PyMeasure> {
    fracconn::MeasureSpec::with_params(
        MeasureKind::SetF,
        MeasureParams {
            depth: None,
            i_max: Some(i_max),
        },
    )
    .map(PyMeasure)
    .map_err(to_py)
}

#[pymodule]
#[pyo3(name = "fracconn")]
fn fracconn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMeasure>()?;
    m.add_class::<PyPointCloud>()?;
    m.add_class::<PyMstResult>()?;
    m.add_class::<PyPacking>()?;
    m.add_class::<PyLonelyBallStats>()?;
    m.add_class::<PyScalingRecord>()?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(mst_fast, m)?)?;
    m.add_function(wrap_pyfunction!(mst_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(is_connected_at, m)?)?;
    m.add_function(wrap_pyfunction!(connectivity_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(maximal_packing, m)?)?;
    m.add_function(wrap_pyfunction!(occupancy, m)?)?;
    m.add_function(wrap_pyfunction!(expected_singleton, m)?)?;
    m.add_function(wrap_pyfunction!(expected_pair, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_regularity, m)?)?;
    m.add_function(wrap_pyfunction!(set_f_geometry, m)?)?;
    m.add_function(wrap_pyfunction!(scaling_run, m)?)?;
    m.add_function(wrap_pyfunction!(fit_scaling, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_run, m)?)?;
    m.add_function(wrap_pyfunction!(measure_kinds, m)?)?;
    m.add_function(wrap_pyfunction!(set_f, m)?)?;
    Ok(())
}
