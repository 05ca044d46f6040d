// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


//! Python bindings for `graphonlab-core`.

use graphonlab_core as core;
use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

fn to_py(e: core::Error) -> PyErr {
    match e {
        core::Error::Overflow => PyOverflowError::new_err(e.to_string()),
        core::Error::WorkLimit { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Simple undirected graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "graphonlab", frozen)]
struct PyGraph(core::Graph);

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges=Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        core::Graph::new(n, edges).py().map(Self)
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        Self(core::Graph::complete(n))
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        core::Graph::cycle(n).py().map(Self)
    }

    #[staticmethod]
    fn complete_bipartite(a: usize, b: usize) -> Self {
        Self(core::Graph::complete_bipartite(a, b))
    }

    /// Parse the `n m` header plus edge lines format.
    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        core::parse_edge_list(text).py().map(Self)
    }

    fn to_edge_list(&self) -> String {
        self.0.to_edge_list()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.vertex_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().to_vec()
    }

    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.0.has_edge(u, v)
    }

    fn degrees(&self) -> Vec<usize> {
        self.0.degrees()
    }

    /// Edge `{u,v}` becomes `{perm[u], perm[v]}`.
    fn relabel(&self, perm: Vec<usize>) -> PyResult<Self> {
        self.0.relabel(&perm).py().map(Self)
    }

    fn disjoint_union(&self, other: &PyGraph) -> Self {
        Self(self.0.disjoint_union(&other.0))
    }

    fn __len__(&self) -> usize {
        self.0.vertex_count()
    }

    fn __eq__(&self, other: &PyGraph) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.0.vertex_count(), self.0.edge_count())
    }
}

/// Symmetric step function on `[0,1)^2` with values in `[0,1]`.
#[pyclass(name = "StepGraphon", module = "graphonlab", frozen)]
struct PyStepGraphon(core::StepGraphon);

#[pymethods]
impl PyStepGraphon {
    #[new]
    fn new(measures: Vec<f64>, weights: Vec<Vec<f64>>) -> PyResult<Self> {
        core::StepGraphon::new(measures, weights).py().map(Self)
    }

    #[staticmethod]
    fn uniform(weights: Vec<Vec<f64>>) -> PyResult<Self> {
        core::StepGraphon::uniform(weights).py().map(Self)
    }

    #[staticmethod]
    fn constant(p: f64) -> PyResult<Self> {
        core::constant_graphon(p).py().map(Self)
    }

    #[staticmethod]
    fn pixel(g: &PyGraph) -> PyResult<Self> {
        core::pixel_graphon(&g.0).py().map(Self)
    }

    #[staticmethod]
    fn bipartite_limit() -> Self {
        Self(core::bipartite_limit())
    }

    #[staticmethod]
    fn uniform_attachment_limit(m: usize) -> PyResult<Self> {
        core::uniform_attachment_limit(m).py().map(Self)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        core::parse_graphon(text).py().map(Self)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[getter]
    fn block_count(&self) -> usize {
        self.0.block_count()
    }

    #[getter]
    fn measures(&self) -> Vec<f64> {
        self.0.measures().to_vec()
    }

    #[getter]
    fn weights(&self) -> Vec<Vec<f64>> {
        self.0.weight_rows()
    }

    fn __call__(&self, x: f64, y: f64) -> PyResult<f64> {
        self.0.evaluate(x, y).py()
    }

    fn permute_blocks(&self, perm: Vec<usize>) -> PyResult<Self> {
        self.0.permute_blocks(&perm).py().map(Self)
    }

    /// Re-express on `m` equal blocks.
    fn equalize(&self, m: usize) -> PyResult<Self> {
        self.0.equalize(m).py().map(Self)
    }

    /// Binary PGM image, `px` by `px`, white for 0 and black for 1.
    fn render_pgm<'py>(&self, py: Python<'py>, px: usize) -> PyResult<Bound<'py, PyBytes>> {
        let bytes = core::render_pgm(&self.0, px).py()?;
        Ok(PyBytes::new(py, &bytes))
    }

    fn __repr__(&self) -> String {
        format!("StepGraphon(blocks={})", self.0.block_count())
    }
}

#[pyclass(name = "DensityEstimate", module = "graphonlab", frozen, get_all)]
struct PyDensityEstimate {
    value: f64,
    method: &'static str,
    samples: u64,
    std_error: f64,
}

impl From<core::DensityEstimate> for PyDensityEstimate {
    fn from(d: core::DensityEstimate) -> Self {
        Self { value: d.value, method: d.method.as_str(), samples: d.samples, std_error: d.std_error }
    }
}

#[pymethods]
impl PyDensityEstimate {
    fn __float__(&self) -> f64 {
        self.value
    }

    fn __repr__(&self) -> String {
        format!("DensityEstimate(value={}, method='{}', samples={}, std_error={})", self.value, self.method, self.samples, self.std_error)
    }
}

#[pyclass(name = "CutResult", module = "graphonlab", frozen, get_all)]
struct PyCutResult {
    value: f64,
    s: Vec<usize>,
    t: Vec<usize>,
    permutation: Option<Vec<usize>>,
    exact: bool,
}

impl From<core::CutResult> for PyCutResult {
    fn from(r: core::CutResult) -> Self {
        Self { value: r.value, s: r.s, t: r.t, permutation: r.permutation, exact: r.exact }
    }
}

#[pymethods]
impl PyCutResult {
    fn __float__(&self) -> f64 {
        self.value
    }

    fn __repr__(&self) -> String {
        format!("CutResult(value={}, exact={})", self.value, if self.exact { "True" } else { "False" })
    }
}

fn cut_config(exact_threshold: Option<usize>, restarts: Option<usize>) -> core::CutConfig {
    let mut cfg = core::CutConfig::default();
    if let Some(k) = exact_threshold {
        cfg.exact_threshold = k;
    }
    if let Some(r) = restarts {
        cfg.norm_restarts = r;
    }
    cfg
}

#[pyfunction]
fn hom_count(pattern: &PyGraph, host: &PyGraph) -> PyResult<u64> {
    core::hom_count(&pattern.0, &host.0).py()
}

/// `t(H, G)` for a finite host graph.
#[pyfunction]
fn density_graph(pattern: &PyGraph, host: &PyGraph) -> PyResult<PyDensityEstimate> {
    core::density_graph(&pattern.0, &host.0).py().map(Into::into)
}

/// `t(H, W)`. Exact by default; pass `samples` for Monte Carlo.
#[pyfunction]
#[pyo3(signature = (pattern, w, samples=None, seed=0, work_limit=None))]
fn density_step(
    py: Python<'_>,
    pattern: &PyGraph,
    w: &PyStepGraphon,
    samples: Option<u64>,
    seed: u64,
    work_limit: Option<f64>,
) -> PyResult<PyDensityEstimate> {
    let (h, w) = (&pattern.0, &w.0);
    let limit = work_limit.unwrap_or(core::density::DEFAULT_WORK_LIMIT);
    py.detach(|| match samples {
        Some(s) => core::density_mc(h, w, s, seed),
        None => core::density_step_with_limit(h, w, limit),
    })
    .py()
    .map(Into::into)
}

/// Cut norm of `w - u`.
#[pyfunction]
#[pyo3(signature = (w, u, exact=true, restarts=20, seed=0))]
fn cut_norm(
    py: Python<'_>,
    w: &PyStepGraphon,
    u: &PyStepGraphon,
    exact: bool,
    restarts: usize,
    seed: u64,
) -> PyResult<PyCutResult> {
    let k = core::subtract(&w.0, &u.0);
    py.detach(|| if exact { core::cut_norm_exact(&k) } else { core::cut_norm_heuristic(&k, restarts, seed) })
        .py()
        .map(Into::into)
}

/// Cut distance between `w` and `u` over relabelings of `m` equal blocks.
#[pyfunction]
#[pyo3(signature = (w, u, m, budget=1, seed=0, exact_threshold=None, restarts=None))]
#[allow(clippy::too_many_arguments)]
fn cut_distance(
    py: Python<'_>,
    w: &PyStepGraphon,
    u: &PyStepGraphon,
    m: usize,
    budget: usize,
    seed: u64,
    exact_threshold: Option<usize>,
    restarts: Option<usize>,
) -> PyResult<PyCutResult> {
    let cfg = cut_config(exact_threshold, restarts);
    py.detach(|| core::cut_distance_with(&w.0, &u.0, m, budget, seed, &cfg)).py().map(Into::into)
}

#[pyfunction]
#[pyo3(signature = (w, c, seed=0, exact_threshold=None, restarts=None))]
fn distance_to_constant(
    py: Python<'_>,
    w: &PyStepGraphon,
    c: f64,
    seed: u64,
    exact_threshold: Option<usize>,
    restarts: Option<usize>,
) -> PyResult<PyCutResult> {
    let cfg = cut_config(exact_threshold, restarts);
    py.detach(|| core::distance_to_constant_with(&w.0, c, &cfg, seed)).py().map(Into::into)
}

#[pyfunction]
#[pyo3(signature = (n, p, seed=0))]
fn erdos_renyi(n: usize, p: f64, seed: u64) -> PyResult<PyGraph> {
    core::erdos_renyi(n, p, seed).py().map(PyGraph)
}

#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn uniform_attachment(n: usize, seed: u64) -> PyResult<PyGraph> {
    core::uniform_attachment(n, seed).py().map(PyGraph)
}

#[pyfunction]
#[pyo3(signature = (w, n, seed=0))]
fn w_random_graph(w: &PyStepGraphon, n: usize, seed: u64) -> PyResult<PyGraph> {
    core::w_random_graph(&w.0, n, seed).py().map(PyGraph)
}

#[pymodule]
fn graphonlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyStepGraphon>()?;
    m.add_class::<PyDensityEstimate>()?;
    m.add_class::<PyCutResult>()?;
    m.add("TOL", core::graphon::TOL)?;
    m.add_function(wrap_pyfunction!(hom_count, m)?)?;
    m.add_function(wrap_pyfunction!(density_graph, m)?)?;
    m.add_function(wrap_pyfunction!(density_step, m)?)?;
    m.add_function(wrap_pyfunction!(cut_norm, m)?)?;
    m.add_function(wrap_pyfunction!(cut_distance, m)?)?;
    m.add_function(wrap_pyfunction!(distance_to_constant, m)?)?;
    m.add_function(wrap_pyfunction!(erdos_renyi, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_attachment, m)?)?;
    m.add_function(wrap_pyfunction!(w_random_graph, m)?)?;
    Ok(())
}
