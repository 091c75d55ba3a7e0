//! Python module `qgeodiv`.
//!
//! Matrices cross the boundary as nested lists of Python `complex` (or
//! `float`). Input validation failures raise `ValueError`; numerical failures
//! (quadrature, convergence, target mismatch) raise `ArithmeticError`.

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use qgeodiv::channels;
use qgeodiv::divergences;
use qgeodiv::harness::{self, HarnessConfig};
use qgeodiv::metrics;
use qgeodiv::states::{self, RandomSpec};
use qgeodiv::transport;
use qgeodiv::{ComplexMatrix, Error, GeodesicKind, MatrixFile, MetricKind, ProbabilityDistribution, QuadratureConfig};

fn to_py_err(e: Error) -> PyErr {
    if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for qgeodiv::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

fn matrix_from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if n == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("matrix rows must be non-empty and of equal length"));
    }
    Ok(ComplexMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn parse_metric(name: &str) -> PyResult<MetricKind> {
    name.parse().py_err()
}

fn parse_kind(name: &str) -> PyResult<GeodesicKind> {
    name.parse().py_err()
}

fn quadrature(nodes: usize, rel_tol: f64, max_nodes: usize) -> PyResult<QuadratureConfig> {
    let cfg = QuadratureConfig {
        nodes,
        rel_tol,
        max_nodes,
    };
    cfg.validate().py_err()?;
    Ok(cfg)
}

/// A validated density matrix.
#[pyclass(name = "DensityMatrix", module = "qgeodiv", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDensityMatrix {
    inner: qgeodiv::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    #[new]
    #[pyo3(signature = (rows, tol = states::DENSITY_TOL))]
    fn new(rows: Vec<Vec<Complex64>>, tol: f64) -> PyResult<Self> {
        let inner = states::validate_density(&matrix_from_rows(rows)?, tol).py_err()?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_diagonal(weights: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: qgeodiv::DensityMatrix::from_diagonal(&weights).py_err()?,
        })
    }

    /// Seeded random state with smallest eigenvalue at least `min_eigenvalue`.
    #[staticmethod]
    #[pyo3(signature = (dim, seed, min_eigenvalue = 1e-3))]
    fn random(dim: usize, seed: u64, min_eigenvalue: f64) -> PyResult<Self> {
        let spec = RandomSpec::new(dim, seed, min_eigenvalue).py_err()?;
        Ok(Self {
            inner: states::random_density(&spec),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: MatrixFile::from_json(text).and_then(|f| f.to_state()).py_err()?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_file().to_json()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(self.inner.matrix())
    }

    /// Eigenvalues in ascending order.
    fn spectrum(&self) -> Vec<f64> {
        self.inner.spectrum().to_vec()
    }

    fn is_full_rank(&self) -> bool {
        self.inner.is_full_rank()
    }

    fn entropy(&self) -> f64 {
        states::von_neumann_entropy(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dim={}, spectrum={:?})", self.inner.dim(), self.inner.spectrum())
    }
}

/// e-geodesic `θ ↦ Π^θ_{L,x}σ` for kind s, b, r or half.
#[pyclass(name = "Geodesic", module = "qgeodiv", frozen)]
struct PyGeodesic {
    inner: transport::Geodesic,
}

#[pymethods]
impl PyGeodesic {
    #[new]
    fn new(kind: &str, base: &PyDensityMatrix, direction: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let g = transport::Geodesic::new(parse_kind(kind)?, base.inner.clone(), matrix_from_rows(direction)?);
        Ok(Self { inner: g.py_err()? })
    }

    /// Geodesic from `sigma` (θ = 0) that reaches `rho` at θ = 1.
    #[staticmethod]
    fn solve(kind: &str, rho: &PyDensityMatrix, sigma: &PyDensityMatrix) -> PyResult<Self> {
        Ok(Self {
            inner: transport::solve_direction(parse_kind(kind)?, &rho.inner, &sigma.inner).py_err()?,
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().label()
    }

    fn direction(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(self.inner.direction())
    }

    fn state_at(&self, theta: f64) -> PyResult<PyDensityMatrix> {
        Ok(PyDensityMatrix {
            inner: self.inner.state_at(theta).py_err()?,
        })
    }

    /// Log-normalization `μ(θ)`.
    fn moment(&self, theta: f64) -> PyResult<f64> {
        self.inner.moment(theta).py_err()
    }

    fn moment_slope(&self, theta: f64) -> PyResult<f64> {
        self.inner.moment_slope(theta).py_err()
    }

    /// Fisher information of the family at θ, equal to `μ''(θ)`.
    fn fisher_info(&self, theta: f64) -> PyResult<f64> {
        self.inner.fisher_info(theta).py_err()
    }
}

#[pyfunction]
fn relative_entropy(rho: &PyDensityMatrix, sigma: &PyDensityMatrix) -> PyResult<f64> {
    divergences::quantum_relative_entropy(&rho.inner, &sigma.inner).py_err()
}

#[pyfunction]
fn bs_divergence(rho: &PyDensityMatrix, sigma: &PyDensityMatrix) -> PyResult<f64> {
    divergences::bs_divergence(&rho.inner, &sigma.inner).py_err()
}

/// e-divergence for kind s, b, r or half; `method` is "closed" or "quadrature".
#[pyfunction]
#[pyo3(signature = (kind, rho, sigma, method = "closed", nodes = 32, rel_tol = 1e-8, max_nodes = 512))]
fn e_divergence(
    kind: &str,
    rho: &PyDensityMatrix,
    sigma: &PyDensityMatrix,
    method: &str,
    nodes: usize,
    rel_tol: f64,
    max_nodes: usize,
) -> PyResult<f64> {
    let kind = parse_kind(kind)?;
    match method {
        "closed" => divergences::e_divergence_closed(kind, &rho.inner, &sigma.inner).py_err(),
        "quadrature" => {
            let cfg = quadrature(nodes, rel_tol, max_nodes)?;
            Ok(divergences::e_divergence_quadrature(kind, &rho.inner, &sigma.inner, &cfg)
                .py_err()?
                .value)
        }
        other => Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
}

/// m-divergence along the mixture path from `rho` (t = 0) to `sigma` (t = 1).
#[pyfunction]
#[pyo3(signature = (metric, rho, sigma, nodes = 32, rel_tol = 1e-8, max_nodes = 512))]
fn m_divergence(
    metric: &str,
    rho: &PyDensityMatrix,
    sigma: &PyDensityMatrix,
    nodes: usize,
    rel_tol: f64,
    max_nodes: usize,
) -> PyResult<f64> {
    let cfg = quadrature(nodes, rel_tol, max_nodes)?;
    Ok(divergences::m_divergence(&parse_metric(metric)?, &rho.inner, &sigma.inner, &cfg)
        .py_err()?
        .value)
}

#[pyfunction]
fn fisher_info_mixture(rho: &PyDensityMatrix, sigma: &PyDensityMatrix, metric: &str, t: f64) -> PyResult<f64> {
    metrics::fisher_info_mixture(&rho.inner, &sigma.inner, &parse_metric(metric)?, t).py_err()
}

/// Squared m-norm of a Hermitian tangent at `rho`.
#[pyfunction]
fn m_norm_sq(rho: &PyDensityMatrix, metric: &str, tangent: Vec<Vec<Complex64>>) -> PyResult<f64> {
    metrics::m_norm_sq(&rho.inner, &parse_metric(metric)?, &matrix_from_rows(tangent)?).py_err()
}

#[pyfunction]
fn commutation_defect(rho: &PyDensityMatrix, sigma: &PyDensityMatrix) -> PyResult<f64> {
    states::commutation_defect(&rho.inner, &sigma.inner).py_err()
}

/// Eigenspace projectors of `σ^{-1/2}(σ^{1/2} ρ σ^{1/2})^{1/2} σ^{-1/2}`.
#[pyfunction]
fn sandwich_pvm(rho: &PyDensityMatrix, sigma: &PyDensityMatrix) -> PyResult<Vec<Vec<Vec<Complex64>>>> {
    let pvm = channels::sandwich_pvm(&rho.inner, &sigma.inner).py_err()?;
    Ok(pvm.elements().iter().map(matrix_to_rows).collect())
}

/// Outcome probabilities of `rho` under a POVM given as a list of matrices.
#[pyfunction]
fn measure(rho: &PyDensityMatrix, povm: Vec<Vec<Vec<Complex64>>>) -> PyResult<Vec<f64>> {
    let elements = povm.into_iter().map(matrix_from_rows).collect::<PyResult<Vec<_>>>()?;
    let povm = channels::Povm::new(elements).py_err()?;
    Ok(channels::measure(&rho.inner, &povm).py_err()?.weights().to_vec())
}

/// Applies a channel given by its Kraus operators.
#[pyfunction]
fn apply_channel(kraus: Vec<Vec<Vec<Complex64>>>, rho: &PyDensityMatrix) -> PyResult<PyDensityMatrix> {
    let kraus = kraus.into_iter().map(matrix_from_rows).collect::<PyResult<Vec<_>>>()?;
    let channel = channels::QuantumChannel::new(kraus).py_err()?;
    Ok(PyDensityMatrix {
        inner: channels::apply_channel(&channel, &rho.inner).py_err()?,
    })
}

#[pyfunction]
fn classical_kl(p: Vec<f64>, q: Vec<f64>) -> PyResult<f64> {
    let p = ProbabilityDistribution::new(p).py_err()?;
    let q = ProbabilityDistribution::new(q).py_err()?;
    divergences::classical_kl(&p, &q).py_err()
}

#[pyfunction]
fn claim_ids() -> Vec<&'static str> {
    harness::claim_ids()
}

/// Runs the verification harness and returns the report as JSON.
///
/// `config` is an optional harness configuration in JSON; the keyword
/// arguments override its fields.
#[pyfunction]
#[pyo3(signature = (config = None, seed = None, claims = None, trials = None))]
fn verify(
    py: Python<'_>,
    config: Option<&str>,
    seed: Option<u64>,
    claims: Option<Vec<String>>,
    trials: Option<usize>,
) -> PyResult<String> {
    let mut cfg = match config {
        Some(text) => HarnessConfig::from_json(text).py_err()?,
        None => HarnessConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if claims.is_some() {
        cfg.claims = claims;
    }
    if trials.is_some() {
        cfg.trials = trials;
    }
    let report = py.detach(|| harness::run_all(&cfg)).py_err()?;
    Ok(report.to_json())
}

#[pymodule]
#[pyo3(name = "qgeodiv")]
fn qgeodiv_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyGeodesic>()?;
    m.add_function(wrap_pyfunction!(relative_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(bs_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(e_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(m_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(fisher_info_mixture, m)?)?;
    m.add_function(wrap_pyfunction!(m_norm_sq, m)?)?;
    m.add_function(wrap_pyfunction!(commutation_defect, m)?)?;
    m.add_function(wrap_pyfunction!(sandwich_pvm, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(apply_channel, m)?)?;
    m.add_function(wrap_pyfunction!(classical_kl, m)?)?;
    m.add_function(wrap_pyfunction!(claim_ids, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
