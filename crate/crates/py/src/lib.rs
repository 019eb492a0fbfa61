//! Python bindings: projections and their pair geometry, alpha-to-distance conversions,
//! the join bounds and their oracle, the maximin distance and the catalog runner.
//! Structured reports are returned as JSON strings in the CLI schema.

use std::collections::HashMap;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use projkit::bounds::{self, Case, GridSpec, OracleConfig};
use projkit::catalog::{self, Params};
use projkit::config::RunConfig;
use projkit::linalg::{CMat, FinProjection};
use projkit::report::to_json_string;
use projkit::{nearest, pairgeom, ProjError};

fn err(e: ProjError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix_from_rows(rows: &[Vec<Complex64>]) -> PyResult<CMat> {
    let n = rows.len();
    let m = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    Ok(CMat::from_fn(n, m, |i, j| rows[i][j]))
}

fn parse_case(case: &str) -> PyResult<Case> {
    case.parse().map_err(err)
}

/// Orthogonal projection on `C^n`.
#[pyclass(name = "Projection", module = "projkit_py", frozen)]
struct PyProjection(FinProjection);

#[pymethods]
impl PyProjection {
    /// From a square matrix given as rows; must be Hermitian and idempotent.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(PyProjection(FinProjection::new(matrix_from_rows(&rows)?).map_err(err)?))
    }

    /// Projection onto the span of the given vectors (any spanning set).
    #[staticmethod]
    fn span(vectors: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let n = vectors.first().map(|v| v.len()).unwrap_or(0);
        if vectors.iter().any(|v| v.len() != n) {
            return Err(PyValueError::new_err("vectors have different lengths"));
        }
        let m = CMat::from_fn(n, vectors.len(), |i, j| vectors[j][i]);
        Ok(PyProjection(projkit::linalg::range_projection(&m)))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn complement(&self) -> Self {
        PyProjection(self.0.complement())
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        let m = self.0.as_mat();
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
    }

    fn __repr__(&self) -> String {
        format!("Projection(dim={}, rank={})", self.0.dim(), self.0.rank())
    }
}

/// Corner dimensions and generic principal angles of a pair of projections.
#[pyclass(name = "PairDecomposition", module = "projkit_py", frozen, get_all)]
struct PyPairDecomposition {
    dim_11: usize,
    dim_10: usize,
    dim_01: usize,
    dim_00: usize,
    generic_angles: Vec<f64>,
    norm_distance: f64,
    angle: f64,
}

#[pymethods]
impl PyPairDecomposition {
    fn __repr__(&self) -> String {
        format!(
            "PairDecomposition(dims=({}, {}, {}, {}), generic_angles={:?})",
            self.dim_11, self.dim_10, self.dim_01, self.dim_00, self.generic_angles
        )
    }
}

#[pyfunction]
fn decompose_pair(p: &PyProjection, q: &PyProjection) -> PyResult<PyPairDecomposition> {
    let d = pairgeom::decompose_pair(&p.0, &q.0).map_err(err)?;
    Ok(PyPairDecomposition {
        dim_11: d.dim_11,
        dim_10: d.dim_10,
        dim_01: d.dim_01,
        dim_00: d.dim_00,
        norm_distance: d.norm_distance(),
        angle: d.angle(),
        generic_angles: d.generic_angles,
    })
}

#[pyfunction]
fn pair_norm_distance(p: &PyProjection, q: &PyProjection) -> PyResult<f64> {
    pairgeom::pair_norm_distance(&p.0, &q.0).map_err(err)
}

#[pyfunction]
fn d_a(p: &PyProjection, q: &PyProjection) -> PyResult<f64> {
    pairgeom::d_a(&p.0, &q.0).map_err(err)
}

/// `sqrt(1 - 1/alpha)`.
#[pyfunction]
fn dist_from_alpha(alpha: f64) -> PyResult<f64> {
    nearest::dist_from_alpha(alpha).map_err(err)
}

/// `arccos(alpha^(-1/2))`.
#[pyfunction]
fn d_a_from_alpha(alpha: f64) -> PyResult<f64> {
    nearest::d_a_from_alpha(alpha).map_err(err)
}

/// `(value, branch, out_of_domain)` of the join bound for case "I" or "II".
#[pyfunction]
fn closed_form(case: &str, theta: f64, theta1: f64, theta2: f64) -> PyResult<(f64, String, bool)> {
    let cf = bounds::closed_form(parse_case(case)?, theta, theta1, theta2).map_err(err)?;
    Ok((cf.value, cf.branch.to_string(), cf.out_of_domain))
}

#[pyfunction]
#[pyo3(signature = (case, theta, theta1, theta2, inner_grid = 2048, outer_grid = 512, delta_grid = 5))]
fn oracle_min(
    case: &str,
    theta: f64,
    theta1: f64,
    theta2: f64,
    inner_grid: usize,
    outer_grid: usize,
    delta_grid: usize,
) -> PyResult<f64> {
    let cfg = OracleConfig { inner_grid, outer_grid, delta_grid, ..Default::default() };
    Ok(bounds::oracle_min(parse_case(case)?, theta, theta1, theta2, &cfg).map_err(err)?.value)
}

/// Closed form against the oracle over a grid (`default` or `theta=..;t1=..;t2=..`); JSON rows.
#[pyfunction]
#[pyo3(signature = (case, grid = "default"))]
fn verify_grid(case: &str, grid: &str) -> PyResult<String> {
    let g = GridSpec::parse(grid).map_err(err)?;
    let rows = bounds::verify_grid(parse_case(case)?, &g, &OracleConfig::default()).map_err(err)?;
    to_json_string(&rows).map_err(err)
}

/// `(numeric, recipe, d_a, dist)` for a unit vector `u`.
#[pyfunction]
fn maximin(u: Vec<Complex64>) -> PyResult<(f64, f64, f64, f64)> {
    let r = bounds::maximin_cap_distance(&u).map_err(err)?;
    Ok((r.numeric, r.recipe, r.d_a, r.dist))
}

fn run_config(seed: u64, trunc: Option<usize>) -> PyResult<RunConfig> {
    let mut cfg = RunConfig { seed, ..Default::default() };
    if let Some(n) = trunc {
        if n < 8 {
            return Err(PyValueError::new_err("trunc must be at least 8"));
        }
        cfg.trunc = n;
    }
    Ok(cfg)
}

#[pyfunction]
fn list_examples() -> Vec<(String, bool)> {
    catalog::ENTRIES.iter().map(|e| (e.id.to_string(), e.unbuildable.is_none())).collect()
}

/// Builds and measures a catalog entry; returns its JSON report.
#[pyfunction]
#[pyo3(signature = (id, params = None, seed = 0, trunc = None))]
fn run_example(id: &str, params: Option<HashMap<String, f64>>, seed: u64, trunc: Option<usize>) -> PyResult<String> {
    let cfg = run_config(seed, trunc)?;
    let mut p = Params::new();
    for (k, v) in params.unwrap_or_default() {
        p = p.with(&k, v);
    }
    let rep = catalog::run_example(id, &p, &cfg, seed).map_err(err)?;
    to_json_string(&rep).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (s, t, seed = 0))]
fn pairs_table(s: Vec<f64>, t: Vec<f64>, seed: u64) -> PyResult<String> {
    let cfg = run_config(seed, None)?;
    to_json_string(&catalog::achievable_pairs_table(&s, &t, &cfg)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (seed = 0))]
fn suite_all(py: Python<'_>, seed: u64) -> PyResult<String> {
    let cfg = run_config(seed, None)?;
    let rep = py.detach(|| catalog::suite_all(&cfg)).map_err(err)?;
    to_json_string(&rep).map_err(err)
}

/// Runs the command line with `args` (without the program name); returns the exit code.
#[pyfunction]
fn cli(py: Python<'_>, args: Vec<String>) -> i32 {
    py.detach(|| projkit::cli::run(std::iter::once("projkit".to_string()).chain(args)))
}

#[pymodule]
fn projkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProjection>()?;
    m.add_class::<PyPairDecomposition>()?;
    m.add_function(wrap_pyfunction!(decompose_pair, m)?)?;
    m.add_function(wrap_pyfunction!(pair_norm_distance, m)?)?;
    m.add_function(wrap_pyfunction!(d_a, m)?)?;
    m.add_function(wrap_pyfunction!(dist_from_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(d_a_from_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_min, m)?)?;
    m.add_function(wrap_pyfunction!(verify_grid, m)?)?;
    m.add_function(wrap_pyfunction!(maximin, m)?)?;
    m.add_function(wrap_pyfunction!(list_examples, m)?)?;
    m.add_function(wrap_pyfunction!(run_example, m)?)?;
    m.add_function(wrap_pyfunction!(pairs_table, m)?)?;
    m.add_function(wrap_pyfunction!(suite_all, m)?)?;
    m.add_function(wrap_pyfunction!(cli, m)?)?;
    Ok(())
}
