//! Python bindings: models, ground states and resource measures.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use lgt_resources::hilbert::{Boundary, StateVector};
use lgt_resources::models::{ModelConfig, ModelKind};
use lgt_resources::resources::{self, JwConvention};
use lgt_resources::solver::{self, SolverOptions};
use lgt_resources::sweep::{self, SweepResult};
use lgt_resources::{zn_analytics, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Convergence { .. } | Error::SelfCheck(_) | Error::BudgetExceeded { .. } | Error::SymmetryViolation(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        e => PyValueError::new_err(e.to_string()),
    }
}

fn convention(name: &str) -> PyResult<JwConvention> {
    match name.to_ascii_lowercase().as_str() {
        "z" | "zstring" => Ok(JwConvention::ZString),
        "x" | "xstring" => Ok(JwConvention::XString),
        _ => Err(PyValueError::new_err(format!("unknown Jordan-Wigner convention `{name}` (use 'z' or 'x')"))),
    }
}

/// Dense pure state of `L` qudits, site 0 the least significant digit.
#[pyclass(name = "State", module = "lgt_resources_py")]
pub struct PyState {
    inner: StateVector,
}

#[pymethods]
impl PyState {
    #[new]
    fn new(d: usize, sites: usize, amplitudes: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self { inner: StateVector::new(d, sites, amplitudes).map_err(to_py)? })
    }

    #[staticmethod]
    fn basis(d: usize, sites: usize, index: usize) -> PyResult<Self> {
        Ok(Self { inner: StateVector::basis(d, sites, index).map_err(to_py)? })
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn sites(&self) -> usize {
        self.inner.sites()
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }

    fn __repr__(&self) -> String {
        format!("State(d={}, sites={})", self.inner.d(), self.inner.sites())
    }
}

/// A chain Hamiltonian: `Model("ZN", g2=1.0, L=4, N=3, k=1)`.
#[pyclass(name = "Model", module = "lgt_resources_py")]
pub struct PyModel {
    config: ModelConfig,
}

fn build_config(
    model: &str,
    g2: f64,
    sites: usize,
    n: usize,
    k: usize,
    epsilon: Option<[f64; 3]>,
    boundary: Option<&str>,
) -> lgt_resources::Result<ModelConfig> {
    let kind: ModelKind = model.parse()?;
    let mut cfg = match kind {
        ModelKind::Su2 => ModelConfig::su2(sites, g2),
        ModelKind::Zn => ModelConfig::zn(n, k, sites, g2),
        ModelKind::D3 => ModelConfig::d3(sites, g2),
    };
    if let Some(e) = epsilon {
        cfg = cfg.with_epsilon(e);
    }
    if let Some(b) = boundary {
        cfg = cfg.with_boundary(b.parse::<Boundary>()?);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn row_dict<'py>(py: Python<'py>, r: &SweepResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("model", r.model.to_string())?;
    d.set_item("N", r.n)?;
    d.set_item("k", r.k)?;
    d.set_item("L", r.l)?;
    d.set_item("g2", r.g2)?;
    d.set_item("boundary", r.boundary.to_string())?;
    d.set_item("energy", r.energy)?;
    d.set_item("gap", r.gap)?;
    d.set_item("gap_same_sector", r.gap_same_sector)?;
    d.set_item("plaquette", r.plaquette)?;
    d.set_item("ggm", r.ggm)?;
    d.set_item("sre2", r.sre2)?;
    d.set_item("faf2", r.faf2)?;
    d.set_item("solver_iterations", r.solver_iterations)?;
    d.set_item("wall_time_ms", r.wall_time_ms)?;
    d.set_item("error", r.error.clone())?;
    Ok(d)
}

#[pymethods]
impl PyModel {
    #[new]
    #[pyo3(signature = (model, g2, L, N = 2, k = 0, epsilon = None, boundary = None))]
    #[allow(non_snake_case)]
    fn new(
        model: &str,
        g2: f64,
        L: usize,
        N: usize,
        k: usize,
        epsilon: Option<[f64; 3]>,
        boundary: Option<&str>,
    ) -> PyResult<Self> {
        Ok(Self { config: build_config(model, g2, L, N, k, epsilon, boundary).map_err(to_py)? })
    }

    #[getter]
    fn local_dim(&self) -> usize {
        self.config.local_dim()
    }

    #[getter]
    fn boundary(&self) -> String {
        self.config.boundary.to_string()
    }

    /// `(energy, state)` of the representative ground state.
    #[pyo3(signature = (seed = sweep::DEFAULT_SEED))]
    fn ground_state(&self, py: Python<'_>, seed: u64) -> PyResult<(f64, PyState)> {
        let cfg = self.config.clone();
        let gs = py
            .detach(move || {
                let spec = cfg.build()?;
                let sym = cfg.global_symmetry()?.filter(|s| s.order() > 1);
                solver::representative_ground_state(&spec, sym.as_ref(), &SolverOptions::default().with_seed(seed))
            })
            .map_err(to_py)?;
        Ok((gs.energy, PyState { inner: gs.state }))
    }

    /// The `m` lowest eigenvalues.
    #[pyo3(signature = (m, seed = sweep::DEFAULT_SEED))]
    fn low_spectrum(&self, py: Python<'_>, m: usize, seed: u64) -> PyResult<Vec<f64>> {
        let cfg = self.config.clone();
        py.detach(move || {
            let spec = cfg.build()?;
            solver::low_spectrum(&spec, m, &SolverOptions::default().with_seed(seed)).map(|s| s.eigenvalues)
        })
        .map_err(to_py)
    }

    /// `<B_p>` per plaquette in `state`.
    fn plaquette(&self, state: &PyState) -> PyResult<f64> {
        lgt_resources::models::plaquette_observable(&self.config)
            .and_then(|p| p.evaluate(&state.inner))
            .map_err(to_py)
    }

    /// Every sweep column at this coupling, as a dict.
    #[pyo3(signature = (seed = sweep::DEFAULT_SEED))]
    fn resources<'py>(&self, py: Python<'py>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let cfg = self.config.clone();
        let row = py.detach(move || sweep::run_point(&cfg, &SolverOptions::default().with_seed(seed)).result);
        row_dict(py, &row)
    }

    fn __repr__(&self) -> String {
        format!("Model({:?}, g2={}, L={})", self.config.model.to_string(), self.config.g2, self.config.l)
    }
}

/// Generalized geometric measure `G_2`.
#[pyfunction]
fn ggm(state: &PyState) -> PyResult<f64> {
    resources::ggm(&state.inner).map_err(to_py)
}

/// Stabilizer Rényi entropy `M_k` (natural log).
#[pyfunction]
#[pyo3(signature = (state, k = 2))]
fn sre(py: Python<'_>, state: &PyState, k: u32) -> PyResult<f64> {
    let psi = state.inner.clone();
    py.detach(move || resources::sre(&psi, k)).map_err(to_py)
}

/// Fermionic antiflatness `F_k`; `convention` is `"z"` (default) or `"x"`.
#[pyfunction]
#[pyo3(signature = (state, k = 2, convention = "z"))]
fn faf(state: &PyState, k: u32, convention: &str) -> PyResult<f64> {
    resources::faf_with(&state.inner, k, self::convention(convention)?).map_err(to_py)
}

#[pyfunction]
fn haar_state(d: usize, sites: usize, seed: u64) -> PyResult<PyState> {
    Ok(PyState { inner: resources::haar_state(d, sites, seed).map_err(to_py)? })
}

#[pyfunction]
#[allow(non_snake_case)]
fn pair_state(N: usize, L: usize, a: usize, b: usize) -> PyResult<PyState> {
    Ok(PyState { inner: zn_analytics::pair_state(N, L, a, b).map_err(to_py)? })
}

/// Closed-form `M_2` of the ℤ_N pair state.
#[pyfunction]
#[allow(non_snake_case)]
fn analytic_sre(N: usize, L: usize, a: usize, b: usize) -> PyResult<f64> {
    zn_analytics::analytic_sre_pair(N, L, a, b).map_err(to_py)
}

/// `(degenerate sets, ground set or None)` of the uniform ℤ_N configurations.
#[pyfunction]
#[allow(non_snake_case, clippy::type_complexity)]
fn degenerate_pairs(N: usize, k: usize) -> PyResult<(Vec<Vec<usize>>, Option<Vec<usize>>)> {
    let r = zn_analytics::degenerate_pairs(N, k).map_err(to_py)?;
    Ok((r.degenerate_pairs, r.ground_pair))
}

/// Runs a TOML sweep file and returns one dict per grid point.
#[pyfunction]
#[pyo3(signature = (path, threads = None))]
fn run_sweep<'py>(py: Python<'py>, path: &str, threads: Option<usize>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = sweep::SweepConfig::load(path).map_err(to_py)?;
    let rows = py.detach(move || sweep::run_sweep(&cfg, threads)).map_err(to_py)?;
    rows.iter().map(|r| row_dict(py, r)).collect()
}

#[pymodule]
fn lgt_resources_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyState>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(ggm, m)?)?;
    m.add_function(wrap_pyfunction!(sre, m)?)?;
    m.add_function(wrap_pyfunction!(faf, m)?)?;
    m.add_function(wrap_pyfunction!(haar_state, m)?)?;
    m.add_function(wrap_pyfunction!(pair_state, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_sre, m)?)?;
    m.add_function(wrap_pyfunction!(degenerate_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_from_python_arguments() {
        let cfg = build_config("zn", 0.5, 4, 3, 1, None, None).unwrap();
        assert_eq!((cfg.n, cfg.k, cfg.l, cfg.local_dim()), (3, 1, 4, 3));
        assert_eq!(cfg.boundary, Boundary::Periodic);
        let cfg = build_config("D3", 1.0, 3, 2, 0, Some([1.0, 0.5, 0.0]), Some("open")).unwrap();
        assert_eq!(cfg.epsilon, [1.0, 0.5, 0.0]);
        assert!(build_config("D3", 1.0, 3, 2, 0, None, Some("periodic")).is_err());
        assert!(build_config("U1", 1.0, 3, 2, 0, None, None).is_err());
        assert!(build_config("ZN", 1.0, 3, 3, 3, None, None).is_err());
    }

    #[test]
    fn convention_names() {
        assert_eq!(convention("Z").unwrap(), JwConvention::ZString);
        assert_eq!(convention("xstring").unwrap(), JwConvention::XString);
        assert!(convention("y").is_err());
    }
}
