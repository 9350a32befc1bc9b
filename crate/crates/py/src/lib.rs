//! Python bindings for `glr-core`.
//!
//! ```python
//! import glr_bv
//! g = glr_bv.Graph.erdos_renyi(100, 0.1, seed=0)
//! s = g.spectrum()
//! curve = glr_bv.MseCurve(s, x, sigma=1.0)
//! curve.mse(0.5), curve.mse_ub(0.5)
//! ```

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use glr_core::analysis::{self, MonteCarloOptions, SnrSummary};
use glr_core::eigen::{self, LanczosOptions};
use glr_core::experiments::{self, GraphSource, Indexing, LoadOptions, Scenario, ScenarioConfig};
use glr_core::generators;
use glr_core::glr;
use glr_core::signal::{NoiseModel, SignalSpec};
use glr_core::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyOSError::new_err(io.to_string()),
        Error::EigenFailure(_)
        | Error::ConvergenceFailure { .. }
        | Error::SolveFailure { .. }
        | Error::GenerationFailure { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for glr_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn noise_model(n: usize, sigma: &Bound<'_, PyAny>) -> PyResult<NoiseModel> {
    if let Ok(s) = sigma.extract::<f64>() {
        NoiseModel::isotropic(n, s).py()
    } else {
        NoiseModel::new(sigma.extract::<Vec<f64>>()?).py()
    }
}

/// Undirected weighted connected graph.
#[pyclass(frozen, module = "glr_bv")]
struct Graph {
    inner: glr_core::Graph,
}

#[pymethods]
impl Graph {
    /// Build from `(i, j, weight)` triples over nodes `0..n`.
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> PyResult<Self> {
        Ok(Self {
            inner: glr_core::Graph::from_edges(n, &edges).py()?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (path, indexing=0, weighted=false, symmetrize=true))]
    fn from_edge_list(path: std::path::PathBuf, indexing: u8, weighted: bool, symmetrize: bool) -> PyResult<Self> {
        let indexing = match indexing {
            0 => Indexing::Zero,
            1 => Indexing::One,
            _ => return Err(PyValueError::new_err("indexing must be 0 or 1")),
        };
        let opts = LoadOptions {
            indexing,
            weighted,
            symmetrize,
        };
        Ok(Self {
            inner: experiments::load_edge_list(&path, &opts).py()?.graph,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (n, weight=1.0))]
    fn complete(n: usize, weight: f64) -> PyResult<Self> {
        Ok(Self {
            inner: generators::complete(n, weight).py()?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (n, p, seed=0))]
    fn erdos_renyi(n: usize, p: f64, seed: u64) -> PyResult<Self> {
        Ok(Self {
            inner: generators::erdos_renyi(n, p, seed).py()?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (n, d, q, seed=0))]
    fn watts_strogatz(n: usize, d: usize, q: f64, seed: u64) -> PyResult<Self> {
        Ok(Self {
            inner: generators::watts_strogatz(n, d, q, seed).py()?,
        })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner.edges().iter().map(|e| (e.i, e.j, e.weight)).collect()
    }

    fn degrees(&self) -> Vec<f64> {
        self.inner.degrees()
    }

    /// Dense Laplacian as a list of rows.
    fn laplacian(&self) -> Vec<Vec<f64>> {
        let n = self.inner.node_count();
        self.inner
            .laplacian()
            .to_dense()
            .chunks(n)
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// `x^T L x`.
    fn quadratic_form(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.quadratic_form(&x).py()
    }

    fn spectrum(&self, py: Python<'_>) -> PyResult<Spectrum> {
        let l = self.inner.laplacian();
        let inner = py.detach(|| eigen::Spectrum::compute(&l)).py()?;
        Ok(Spectrum { inner })
    }

    /// `(lambda_2, lambda_n)` by Lanczos, without the full spectrum.
    #[pyo3(signature = (tol=1e-9, seed=0))]
    fn extremal_eigs(&self, tol: f64, seed: u64) -> PyResult<(f64, f64)> {
        let opts = LanczosOptions {
            tol,
            seed,
            ..Default::default()
        };
        let e = eigen::extremal_eigs(&self.inner.laplacian(), opts).py()?;
        Ok((e.lambda_2, e.lambda_n))
    }

    /// Solve `(I + alpha L) x = y` directly.
    fn denoise(&self, y: Vec<f64>, alpha: f64) -> PyResult<Vec<f64>> {
        glr::denoise_direct(&y, &self.inner.laplacian(), alpha).py()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.node_count(), self.inner.edge_count())
    }
}

/// Full Laplacian eigendecomposition, eigenvalues ascending.
#[pyclass(frozen, module = "glr_bv")]
struct Spectrum {
    inner: eigen::Spectrum,
}

#[pymethods]
impl Spectrum {
    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues().to_vec()
    }

    fn eigenvector(&self, i: usize) -> PyResult<Vec<f64>> {
        if i >= self.inner.dim() {
            return Err(PyValueError::new_err(format!("mode {i} out of range")));
        }
        Ok(self.inner.eigenvector(i).to_vec())
    }

    #[getter]
    fn lambda_2(&self) -> f64 {
        self.inner.lambda_2()
    }

    #[getter]
    fn lambda_max(&self) -> f64 {
        self.inner.lambda_max()
    }

    fn project(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        if x.len() != self.inner.dim() {
            return Err(PyValueError::new_err("length does not match the graph"));
        }
        Ok(self.inner.project(&x))
    }

    fn synthesize(&self, coeffs: Vec<f64>) -> PyResult<Vec<f64>> {
        if coeffs.len() != self.inner.dim() {
            return Err(PyValueError::new_err("length does not match the graph"));
        }
        Ok(self.inner.synthesize(&coeffs))
    }

    /// GLR estimate through the eigenbasis.
    fn denoise(&self, y: Vec<f64>, alpha: f64) -> PyResult<Vec<f64>> {
        glr::denoise_spectral(&y, &self.inner, alpha).py()
    }

    /// `(h, q)` per mode.
    fn filter_gains(&self, alpha: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let g = glr::filter_gains(&self.inner, alpha).py()?;
        Ok((g.h, g.q))
    }

    /// Band-limited signal `sum_j w_j v_j` from `(mode, weight)` pairs.
    fn band_limited(&self, coeffs: Vec<(usize, f64)>) -> PyResult<Vec<f64>> {
        glr_core::signal::band_limited_signal(&self.inner, &coeffs).py()
    }

    /// Monte-Carlo MSE of the estimator for a fixed ground truth.
    #[pyo3(signature = (x, sigma, alpha, realizations=1000, seed=0, samples=1))]
    fn empirical_mse(
        &self,
        py: Python<'_>,
        x: Vec<f64>,
        sigma: &Bound<'_, PyAny>,
        alpha: f64,
        realizations: usize,
        seed: u64,
        samples: usize,
    ) -> PyResult<(f64, f64, f64, f64)> {
        let noise = noise_model(self.inner.dim(), sigma)?;
        let opts = MonteCarloOptions {
            realizations,
            seed,
            samples,
            redraw_signal: false,
        };
        let signal = SignalSpec::Deterministic(x);
        let r = py
            .detach(|| analysis::empirical_mse(&self.inner, &signal, &noise, alpha, &opts))
            .py()?;
        Ok((r.mse.mean, r.mse.std_error, r.variance.mean, r.variance.std_error))
    }
}

/// Closed-form bias, variance, MSE and MSE-UB as functions of alpha.
#[pyclass(frozen, module = "glr_bv")]
struct MseCurve {
    inner: analysis::MseCurve,
}

#[pymethods]
impl MseCurve {
    /// `sigma` is a scalar (isotropic) or one standard deviation per node.
    #[new]
    fn new(spectrum: &Spectrum, x: Vec<f64>, sigma: &Bound<'_, PyAny>) -> PyResult<Self> {
        let noise = noise_model(spectrum.inner.dim(), sigma)?;
        Ok(Self {
            inner: analysis::MseCurve::new(&spectrum.inner, &x, &noise).py()?,
        })
    }

    fn bias_sq(&self, alpha: f64) -> f64 {
        self.inner.bias_sq(alpha)
    }

    fn variance(&self, alpha: f64) -> f64 {
        self.inner.variance(alpha)
    }

    fn mse(&self, alpha: f64) -> f64 {
        self.inner.mse(alpha)
    }

    fn mse_ub(&self, alpha: f64) -> f64 {
        self.inner.mse_ub(alpha)
    }

    /// Curve for the mean of `t` i.i.d. observations.
    fn averaged(&self, t: usize) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.averaged(t).py()?,
        })
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.snr().theta
    }

    #[getter]
    fn e_snr(&self) -> f64 {
        self.inner.snr().e_snr
    }

    /// `(p_signal, p_noise, sigma1_sq)`.
    #[getter]
    fn powers(&self) -> (f64, f64, f64) {
        let s = self.inner.snr();
        (s.p_signal, s.p_noise, s.sigma1_sq)
    }

    /// Grid minimizer of the analytic MSE: `(alpha, mse)`.
    #[pyo3(signature = (b=2000.0, t=10000))]
    fn argmin_mse(&self, b: f64, t: usize) -> PyResult<(f64, f64)> {
        let grid = analysis::AlphaGrid::new(b, t).py()?;
        let opt = analysis::grid_search_on(&grid, |a| self.inner.mse(a));
        Ok((opt.alpha, opt.value))
    }

    /// Exact minimizer of MSE-UB: `(alpha, value, stationary)`.
    fn argmin_mse_ub(&self) -> PyResult<(f64, f64, bool)> {
        let m = analysis::minimize_mse_ub(self.inner.lambda_2(), self.inner.lambda_n(), self.inner.snr()).py()?;
        Ok((m.alpha, m.value, m.stationary))
    }
}

/// Order-matching regularization parameter.
#[pyfunction]
#[pyo3(signature = (theta, lambda_2, lambda_n, beta=1.0))]
fn alpha_star_match(theta: f64, lambda_2: f64, lambda_n: f64, beta: f64) -> PyResult<f64> {
    analysis::alpha_star_match(theta, beta, lambda_2, lambda_n).py()
}

/// `(label, predicted order, predicted alpha)` of the E-SNR regime.
#[pyfunction]
#[pyo3(signature = (theta, lambda_2, lambda_n, beta=1.0))]
fn regime(theta: f64, lambda_2: f64, lambda_n: f64, beta: f64) -> (&'static str, &'static str, f64) {
    let r = analysis::regime(theta, beta, lambda_2, lambda_n);
    (r.regime.label(), r.predicted_order, r.predicted_alpha)
}

/// MSE-UB at `alpha` from spectral bounds and powers.
#[pyfunction]
fn mse_ub(alpha: f64, lambda_2: f64, lambda_n: f64, p_signal: f64, p_noise: f64, sigma1_sq: f64) -> PyResult<f64> {
    let snr = SnrSummary::from_powers(p_signal, p_noise, sigma1_sq).py()?;
    analysis::mse_ub(alpha, lambda_2, lambda_n, &snr).py()
}

/// Run a harness scenario and return its table as CSV text.
///
/// `name` is one of `mse-vs-p`, `alpha-vs-theta`, `real-graph`,
/// `multi-sample`, `band-limited`.
#[pyfunction]
#[pyo3(signature = (name, seed=0, realizations=None, n=None, thetas=None, alphas=None, grid_b=None, grid_t=None, graph=None))]
#[allow(clippy::too_many_arguments)]
fn run_scenario(
    py: Python<'_>,
    name: &str,
    seed: u64,
    realizations: Option<usize>,
    n: Option<usize>,
    thetas: Option<Vec<f64>>,
    alphas: Option<Vec<f64>>,
    grid_b: Option<f64>,
    grid_t: Option<usize>,
    graph: Option<std::path::PathBuf>,
) -> PyResult<String> {
    let scenario = match name {
        "mse-vs-p" => Scenario::MseVsP,
        "alpha-vs-theta" => Scenario::AlphaVsTheta,
        "real-graph" => Scenario::RealGraph,
        "multi-sample" => Scenario::MultiSample,
        "band-limited" => Scenario::BandLimited,
        _ => return Err(PyValueError::new_err(format!("unknown scenario {name:?}"))),
    };
    let mut cfg = ScenarioConfig::new(scenario);
    cfg.seed = seed;
    if let Some(path) = graph {
        cfg.source = GraphSource::EdgeList {
            path,
            options: LoadOptions::default(),
        };
    } else if let (Some(n), GraphSource::Generated(spec)) = (n, &mut cfg.source) {
        spec.n = n;
    }
    if let Some(r) = realizations {
        cfg.realizations = r;
    }
    if let Some(t) = thetas {
        cfg.thetas = t;
    }
    if let Some(a) = alphas {
        cfg.alphas = a;
    }
    if let Some(b) = grid_b {
        cfg.grid_b = b;
    }
    if let Some(t) = grid_t {
        cfg.grid_t = t;
    }
    let table = py.detach(|| experiments::run(&cfg)).py()?;
    table.to_csv_string().py()
}

#[pymodule]
fn glr_bv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Spectrum>()?;
    m.add_class::<MseCurve>()?;
    m.add_function(wrap_pyfunction!(alpha_star_match, m)?)?;
    m.add_function(wrap_pyfunction!(regime, m)?)?;
    m.add_function(wrap_pyfunction!(mse_ub, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
