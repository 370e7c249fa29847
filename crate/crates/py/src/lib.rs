//! Python bindings for `netsearch`.
//!
//! Structured results are returned as plain dicts and lists.

use netsearch::bounds::{sandwich, SandwichConfig, SearchMode};
use netsearch::expanding::{default_levels, DoublingStrategy};
use netsearch::generate::{FamilySpec, Instance};
use netsearch::network::parse_network;
use netsearch::pathwise::{chinese_postman, rcpt_optimal_growth, PathwiseDoubling, RcptDoubling};
use netsearch::profile::RadiusProfile;
use netsearch::sim::{
    default_candidates, estimate_ratio, solve_small_game, GameConfig, RandomizedStrategy, SimConfig,
};
use netsearch::{ArcId, Error, MetricNetwork};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

pyo3::create_exception!(netsearch_py, NetsearchError, PyValueError);
pyo3::create_exception!(netsearch_py, BudgetError, NetsearchError);
pyo3::create_exception!(netsearch_py, VerificationError, NetsearchError);

fn err(e: Error) -> PyErr {
    match e {
        Error::Budget(_) => BudgetError::new_err(e.to_string()),
        Error::Verification(_) => VerificationError::new_err(e.to_string()),
        _ => NetsearchError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| err(e.into()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A rooted metric network.
#[pyclass(name = "Network", module = "netsearch_py", frozen)]
struct PyNetwork {
    inner: MetricNetwork,
}

#[pymethods]
impl PyNetwork {
    /// Parses the line-oriented network text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: parse_network(text).map_err(err)?,
        })
    }

    /// Builds a network from a spec such as `star:3`, `y:1,2` or
    /// `figure3:4`. Unbounded families are truncated to `radius`.
    #[staticmethod]
    #[pyo3(signature = (spec, radius = 16.0))]
    fn from_spec(spec: &str, radius: f64) -> PyResult<Self> {
        let spec: FamilySpec = spec.parse().map_err(err)?;
        let inner = match spec.instantiate().map_err(err)? {
            Instance::Net(n) => n,
            Instance::Family(f) => f.ball(radius).map_err(err)?,
        };
        Ok(Self { inner })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    #[getter]
    fn num_arcs(&self) -> usize {
        self.inner.num_arcs()
    }

    #[getter]
    fn total_measure(&self) -> f64 {
        self.inner.total_measure()
    }

    #[getter]
    fn r_max(&self) -> f64 {
        self.inner.r_max()
    }

    #[getter]
    fn root_degree(&self) -> usize {
        self.inner.root_degree()
    }

    fn arc_names(&self) -> Vec<String> {
        self.inner.arcs().iter().map(|a| a.name.clone()).collect()
    }

    /// Distance from the root to the point `offset` along arc `arc`.
    fn distance(&self, arc: usize, offset: f64) -> PyResult<f64> {
        self.inner.distance_on_arc(ArcId(arc), offset).map_err(err)
    }

    /// `(sigma, argmax_r)`: the optimal deterministic expanding ratio.
    fn sigma(&self) -> (f64, f64) {
        RadiusProfile::of(&self.inner).sigma()
    }

    /// Breakpoints `(r, f(r), slope)` of the radius profile.
    fn profile(&self) -> Vec<(f64, f64, u32)> {
        RadiusProfile::of(&self.inner)
            .breakpoints()
            .iter()
            .map(|b| (b.r, b.f, b.slope))
            .collect()
    }

    #[pyo3(signature = (mode = "expanding"))]
    fn sandwich<'py>(&self, py: Python<'py>, mode: &str) -> PyResult<Bound<'py, PyAny>> {
        let mode: SearchMode = mode.parse().map_err(err)?;
        let inst = Instance::Net(self.inner.clone());
        let rep = sandwich(&inst, mode, &SandwichConfig::default()).map_err(err)?;
        to_py(py, &rep)
    }

    /// Optimal closed tour length and the arcs it walks twice.
    fn chinese_postman<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let sol = chinese_postman(&self.inner).map_err(err)?;
        let names = |a: ArcId| self.inner.arcs()[a.0].name.clone();
        let d = PyDict::new(py);
        d.set_item("length", sol.length)?;
        d.set_item(
            "duplicated",
            sol.duplicated.iter().map(|&a| names(a)).collect::<Vec<_>>(),
        )?;
        d.set_item(
            "matching",
            sol.matching
                .iter()
                .map(|&(u, v, w)| {
                    (
                        self.inner.vertex_name(u).to_string(),
                        self.inner.vertex_name(v).to_string(),
                        w,
                    )
                })
                .collect::<Vec<_>>(),
        )?;
        Ok(d)
    }

    /// Monte Carlo estimate of a randomized strategy's ratio at the default
    /// candidate points.
    #[pyo3(signature = (strategy = "doubling", n = 10_000, seed = 0, grid = 4, threads = 0, r = None))]
    #[allow(clippy::too_many_arguments)]
    fn estimate<'py>(
        &self,
        py: Python<'py>,
        strategy: &str,
        n: usize,
        seed: u64,
        grid: usize,
        threads: usize,
        r: Option<f64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let net = &self.inner;
        let inst = Instance::Net(net.clone());
        let cands = default_candidates(net, grid).map_err(err)?;
        let min_d = cands
            .iter()
            .map(|c| c.distance)
            .fold(f64::INFINITY, f64::min);
        let (lo, hi) = default_levels(net.r_max(), min_d);
        let strat: Box<dyn RandomizedStrategy> = match strategy {
            "doubling" => Box::new(DoublingStrategy::new(&inst, lo, hi).map_err(err)?),
            "pathwise-doubling" => Box::new(PathwiseDoubling::new(&inst, lo, hi).map_err(err)?),
            "rcpt" => {
                let r = r.unwrap_or_else(rcpt_optimal_growth);
                let i_min = (min_d.ln() / r.ln()).floor() as i32 - 1;
                let i_max = ((net.r_max().ln() / r.ln() - 1e-9).ceil() as i32).max(i_min);
                Box::new(RcptDoubling::new(&inst, r, i_min, i_max).map_err(err)?)
            }
            other => {
                return Err(NetsearchError::new_err(format!(
                    "unknown strategy `{other}`"
                )))
            }
        };
        let est =
            estimate_ratio(strat.as_ref(), &cands, &SimConfig { n, seed, threads }).map_err(err)?;
        to_py(py, &est)
    }

    /// Brackets the value of the discretized search game.
    #[pyo3(signature = (h = 1.0, gap = 0.02))]
    fn game<'py>(&self, py: Python<'py>, h: f64, gap: f64) -> PyResult<Bound<'py, PyAny>> {
        let g = solve_small_game(&self.inner, &GameConfig::new(h, gap)).map_err(err)?;
        to_py(py, &g)
    }

    fn __repr__(&self) -> String {
        format!(
            "Network(vertices={}, arcs={}, measure={})",
            self.inner.num_vertices(),
            self.inner.num_arcs(),
            self.inner.total_measure()
        )
    }
}

/// Value of the Y-network game with arms `l <= m`.
#[pyfunction]
fn y_value(l: f64, m: f64) -> PyResult<f64> {
    netsearch::ynet::y_value(l, m).map_err(err)
}

/// Checks the Y-network mixture on a grid of hider points.
#[pyfunction]
#[pyo3(signature = (l, m, grid = 200))]
fn y_verify<'py>(py: Python<'py>, l: f64, m: f64, grid: usize) -> PyResult<Bound<'py, PyAny>> {
    let r = netsearch::ynet::y_verify(l, m, grid).map_err(err)?;
    to_py(py, &r)
}

/// Runs a CLI command in memory. Returns `(files, manifest)` where `files`
/// maps output names to their text.
#[pyfunction]
fn run<'py>(
    py: Python<'py>,
    args: Vec<String>,
) -> PyResult<(Bound<'py, PyDict>, Bound<'py, PyAny>)> {
    let out = netsearch::cli::execute_args(&args).map_err(err)?;
    let files = PyDict::new(py);
    for (name, bytes) in &out.files {
        files.set_item(name, String::from_utf8_lossy(bytes))?;
    }
    Ok((files, to_py(py, &out.manifest)?))
}

#[pymodule]
fn netsearch_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNetwork>()?;
    m.add_function(wrap_pyfunction!(y_value, m)?)?;
    m.add_function(wrap_pyfunction!(y_verify, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("NetsearchError", m.py().get_type::<NetsearchError>())?;
    m.add("BudgetError", m.py().get_type::<BudgetError>())?;
    m.add("VerificationError", m.py().get_type::<VerificationError>())?;
    Ok(())
}
