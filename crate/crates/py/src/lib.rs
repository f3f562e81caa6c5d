//! Python bindings (`import happycolor`).

use std::collections::BTreeMap;

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;

use happy_core::io::{generate_random, parse_instance, serialize_instance};
use happy_core::mhe::{kernelize_mhe, KernelStatus};
use happy_core::reductions::{
    map_solution_back, reduce_any_set_partitioning_to_mhe, reduce_brds_to_mhe,
    reduce_colored_graph_to_mhv_subdivision, reduce_set_packing_to_mhv,
    reduce_x3c_to_mhe_above_guarantee, unique_coloring, verify_equivalence, ReductionOutput,
    SetSystem,
};
use happy_core::runner::{run, Algo, RunConfig};
use happy_core::solve::{DEFAULT_ENUMERATION_BUDGET, DEFAULT_MAX_DP_WIDTH};
use happy_core::{
    compute_happy_sets, evaluate, happy_edges, happy_vertices, trivial_extension, Coloring, Graph,
    HappyError, Instance, Limits, Precoloring, ProblemKind,
};

fn py_err(e: HappyError) -> PyErr {
    match e {
        HappyError::Io(_) => PyOSError::new_err(e.to_string()),
        HappyError::ResourceLimit(_) | HappyError::Internal(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    match v {
        Value::Null => Ok(py.None().into_bound(py)),
        Value::Bool(b) => b.into_bound_py_any(py),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_bound_py_any(py),
            (None, Some(i)) => i.into_bound_py_any(py),
            _ => n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py),
        },
        Value::String(s) => s.into_bound_py_any(py),
        Value::Array(items) => {
            let items = items
                .iter()
                .map(|x| json_to_py(py, x))
                .collect::<PyResult<Vec<_>>>()?;
            Ok(PyList::new(py, items)?.into_any())
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, x) in map {
                dict.set_item(k, json_to_py(py, x)?)?;
            }
            Ok(dict.into_any())
        }
    }
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn kind_of(s: &str) -> PyResult<ProblemKind> {
    s.parse().map_err(py_err)
}

fn coloring_for(instance: &Instance, colors: Vec<u32>) -> PyResult<Coloring> {
    let c = Coloring::from_vec(colors);
    instance.check_extension(&c).map_err(py_err)?;
    Ok(c)
}

/// A precolored graph with a problem kind and a target `k`.
#[pyclass(name = "Instance", module = "happycolor", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: Instance,
}

#[pymethods]
impl PyInstance {
    #[new]
    #[pyo3(signature = (kind, n, ell, edges, precoloring = None, k = 0))]
    fn new(
        kind: &str,
        n: usize,
        ell: u32,
        edges: Vec<(usize, usize)>,
        precoloring: Option<BTreeMap<usize, u32>>,
        k: u64,
    ) -> PyResult<Self> {
        let graph = Graph::new(n, edges).map_err(py_err)?;
        let p = Precoloring::new(n, ell, precoloring.unwrap_or_default()).map_err(py_err)?;
        let inner = Instance::new(kind_of(kind)?, graph, p, k).map_err(py_err)?;
        Ok(PyInstance { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyInstance {
            inner: parse_instance(text).map_err(py_err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (n, ell, edge_probability, precolor_fraction, seed, kind = "mhv"))]
    fn random(
        n: usize,
        ell: u32,
        edge_probability: f64,
        precolor_fraction: f64,
        seed: u64,
        kind: &str,
    ) -> PyResult<Self> {
        let inner = generate_random(
            n,
            ell,
            edge_probability,
            precolor_fraction,
            seed,
            kind_of(kind)?,
        )
        .map_err(py_err)?;
        Ok(PyInstance { inner })
    }

    fn serialize(&self) -> String {
        serialize_instance(&self.inner)
    }

    fn with_k(&self, k: u64) -> Self {
        PyInstance {
            inner: self.inner.with_k(k),
        }
    }

    #[getter]
    fn kind(&self) -> String {
        self.inner.kind.to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn ell(&self) -> u32 {
        self.inner.ell()
    }

    #[getter]
    fn k(&self) -> u64 {
        self.inner.k
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.graph.edges().to_vec()
    }

    #[getter]
    fn precoloring(&self) -> BTreeMap<usize, u32> {
        self.inner.precoloring.assigned().collect()
    }

    /// Happy vertices or edges, depending on the kind.
    fn evaluate(&self, coloring: Vec<u32>) -> PyResult<u64> {
        let c = coloring_for(&self.inner, coloring)?;
        evaluate(&self.inner, &c).map_err(py_err)
    }

    fn happy_vertices(&self, coloring: Vec<u32>) -> PyResult<Vec<usize>> {
        let c = coloring_for(&self.inner, coloring)?;
        Ok(happy_vertices(&self.inner.graph, &c).into_iter().collect())
    }

    fn happy_edges(&self, coloring: Vec<u32>) -> PyResult<Vec<(usize, usize)>> {
        let c = coloring_for(&self.inner, coloring)?;
        Ok(happy_edges(&self.inner.graph, &c))
    }

    /// `{"potentially_happy", "anchored", "free", "per_color"}`.
    fn happy_sets<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let sets = compute_happy_sets(&self.inner.graph, &self.inner.precoloring);
        let out = PyDict::new(py);
        out.set_item(
            "potentially_happy",
            sets.potentially_happy().into_iter().collect::<Vec<_>>(),
        )?;
        out.set_item("anchored", sets.anchored().into_iter().collect::<Vec<_>>())?;
        out.set_item("free", sets.free().into_iter().collect::<Vec<_>>())?;
        let per_color: BTreeMap<u32, Vec<usize>> = (1..=self.inner.ell())
            .map(|i| (i, sets.per_color(i).into_iter().collect()))
            .collect();
        out.set_item("per_color", per_color)?;
        Ok(out)
    }

    fn trivial_extension(&self, color: u32) -> PyResult<Vec<u32>> {
        Ok(trivial_extension(&self.inner, color)
            .map_err(py_err)?
            .into_vec())
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(kind={:?}, n={}, m={}, ell={}, k={})",
            self.inner.kind.to_string(),
            self.inner.n(),
            self.inner.graph.m(),
            self.inner.ell(),
            self.inner.k
        )
    }
}

/// Runs one solver and returns a report dict.
#[pyfunction]
#[pyo3(signature = (instance, algo = "brute", seed = 0, reps = None, budget = DEFAULT_ENUMERATION_BUDGET, max_dp_width = DEFAULT_MAX_DP_WIDTH))]
fn solve<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    algo: &str,
    seed: u64,
    reps: Option<u64>,
    budget: u64,
    max_dp_width: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let config = RunConfig {
        algo: algo.parse::<Algo>().map_err(py_err)?,
        seed,
        repetitions: reps,
        limits: Limits {
            enumeration_budget: budget,
            max_dp_width,
        },
    };
    let inst = &instance.inner;
    let result = py.detach(|| run(inst, &config)).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("decision", result.is_yes(inst.k))?;
    out.set_item("outcome", to_py(py, &result.outcome)?)?;
    out.set_item("value", result.value)?;
    out.set_item("certificate", result.certificate.map(Coloring::into_vec))?;
    out.set_item("stats", to_py(py, &result.stats)?)?;
    Ok(out)
}

/// Applies the MHE component rule and reports the kernel.
#[pyfunction]
fn kernelize<'py>(py: Python<'py>, instance: &PyInstance) -> PyResult<Bound<'py, PyDict>> {
    let kernel = kernelize_mhe(&instance.inner).map_err(py_err)?;
    let out = PyDict::new(py);
    let app = &kernel.application;
    out.set_item("credited", app.credited)?;
    out.set_item("remaining_target", app.remaining_target)?;
    out.set_item(
        "reduced",
        PyInstance {
            inner: app.reduced.clone(),
        },
    )?;
    match &kernel.status {
        KernelStatus::ResolvedYes { certificate } => {
            out.set_item("resolved", true)?;
            out.set_item("certificate", certificate.as_slice().to_vec())?;
        }
        KernelStatus::Reduced => out.set_item("resolved", false)?,
    }
    Ok(out)
}

/// A gadget instance together with its mapping back to the source.
#[pyclass(name = "Reduction", module = "happycolor", frozen)]
struct PyReduction {
    inner: ReductionOutput,
}

#[pymethods]
impl PyReduction {
    #[getter]
    fn instance(&self) -> PyInstance {
        PyInstance {
            inner: self.inner.instance.clone(),
        }
    }

    #[getter]
    fn source_kind(&self) -> &'static str {
        self.inner.source_kind()
    }

    /// `(color, value)` of the trivial extension baseline.
    #[getter]
    fn guarantee(&self) -> (u32, u64) {
        (self.inner.guarantee.color, self.inner.guarantee.value)
    }

    #[getter]
    fn mapper<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.mapper)
    }

    /// Source certificate for a gadget coloring meeting the target: chosen
    /// set indices (0-based) or an independent vertex set.
    fn map_back<'py>(&self, py: Python<'py>, coloring: Vec<u32>) -> PyResult<Bound<'py, PyAny>> {
        let cert = map_solution_back(&self.inner, &Coloring::from_vec(coloring)).map_err(py_err)?;
        to_py(py, &cert)
    }

    #[pyo3(signature = (budget = DEFAULT_ENUMERATION_BUDGET, max_dp_width = DEFAULT_MAX_DP_WIDTH))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        budget: u64,
        max_dp_width: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let limits = Limits {
            enumeration_budget: budget,
            max_dp_width,
        };
        let inner = &self.inner;
        let eq = py
            .detach(|| verify_equivalence(inner, &limits))
            .map_err(py_err)?;
        to_py(py, &eq)
    }

    fn sidecar<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.inner.sidecar())
    }
}

fn system(
    universe: usize,
    sets: Vec<Vec<usize>>,
    weights: Option<Vec<u64>>,
) -> PyResult<SetSystem> {
    let s = SetSystem::new(universe, sets).map_err(py_err)?;
    match weights {
        Some(w) => s.with_weights(w).map_err(py_err),
        None => Ok(s),
    }
}

fn wrap(r: happy_core::Result<ReductionOutput>) -> PyResult<PyReduction> {
    Ok(PyReduction {
        inner: r.map_err(py_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (universe, sets, k, weights = None))]
fn reduce_set_packing(
    universe: usize,
    sets: Vec<Vec<usize>>,
    k: u64,
    weights: Option<Vec<u64>>,
) -> PyResult<PyReduction> {
    wrap(reduce_set_packing_to_mhv(
        &system(universe, sets, weights)?,
        k,
    ))
}

#[pyfunction]
fn reduce_brds(universe: usize, sets: Vec<Vec<usize>>, k: u64) -> PyResult<PyReduction> {
    wrap(reduce_brds_to_mhe(&system(universe, sets, None)?, k))
}

/// Subdivision gadget; `coloring` defaults to a private color per vertex.
#[pyfunction]
#[pyo3(signature = (n, edges, k, coloring = None))]
fn reduce_subdivision(
    n: usize,
    edges: Vec<(usize, usize)>,
    k: u64,
    coloring: Option<Vec<u32>>,
) -> PyResult<PyReduction> {
    let graph = Graph::new(n, edges).map_err(py_err)?;
    let coloring = coloring.unwrap_or_else(|| unique_coloring(n));
    wrap(reduce_colored_graph_to_mhv_subdivision(
        &graph, &coloring, k,
    ))
}

#[pyfunction]
fn reduce_x3c(n: usize, sets: Vec<Vec<usize>>) -> PyResult<PyReduction> {
    wrap(reduce_x3c_to_mhe_above_guarantee(n, &sets))
}

/// Set partitioning gadget; two-element sets are eliminated first.
#[pyfunction]
fn reduce_set_partitioning(universe: usize, sets: Vec<Vec<usize>>) -> PyResult<PyReduction> {
    wrap(reduce_any_set_partitioning_to_mhe(&system(
        universe, sets, None,
    )?))
}

#[pymodule]
fn happycolor(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyReduction>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(kernelize, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_set_packing, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_brds, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_subdivision, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_x3c, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_set_partitioning, m)?)?;
    Ok(())
}
