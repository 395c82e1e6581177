//! Python bindings for codes, morphing, distillation analysis, HCT lattices
//! and decoding.

use morph_qec::code::{self, CodeJson, CssCode};
use morph_qec::decoder::{syndrome_of, Decoder};
use morph_qec::hct::{self, HctLattice, Method};
use morph_qec::morph::{self as morphing, MorphSpec, QubitOrigin};
use morph_qec::msd::{self, Poly, Protocol};
use morph_qec::scenarios::{self, ScenarioOptions};
use morph_qec::threshold::{self, ExperimentConfig};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Code", module = "morphpy")]
struct PyCode {
    inner: CssCode,
}

#[pymethods]
impl PyCode {
    /// Catalog code: steane, qrm2, qrm3, qrm (with d) or hyperoct (with d).
    #[staticmethod]
    #[pyo3(signature = (name, d=None))]
    fn catalog(name: &str, d: Option<usize>) -> PyResult<Self> {
        Ok(PyCode { inner: code::by_name(name, d).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        let j: CodeJson = serde_json::from_str(s).map_err(err)?;
        Ok(PyCode { inner: CssCode::from_json(&j).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_json()).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn distance(&self) -> PyResult<usize> {
        self.inner.distance().map_err(err)
    }

    fn x_stabs(&self) -> Vec<Vec<usize>> {
        self.inner.x_stabs().iter().map(|v| v.ones()).collect()
    }

    fn z_stabs(&self) -> Vec<Vec<usize>> {
        self.inner.z_stabs().iter().map(|v| v.ones()).collect()
    }

    fn weight2_logical_z_count(&self) -> usize {
        self.inner.count_weight2_logical_z()
    }

    fn __repr__(&self) -> String {
        format!("Code([[{}, {}]])", self.inner.n(), self.inner.k())
    }
}

/// Morph `region` of `code`; returns the new code and, per qubit, its
/// origin as ("parent", index) or ("child", logical index).
#[pyfunction]
#[pyo3(signature = (code, region, seed=None))]
fn morph(code: &PyCode, region: Vec<usize>, seed: Option<u64>) -> PyResult<(PyCode, Vec<(String, usize)>)> {
    let spec = match seed {
        None => MorphSpec::canonical(&code.inner, &region),
        Some(s) => MorphSpec::random(&code.inner, &region, s),
    }
    .map_err(err)?;
    let r = morphing::morph(&spec).map_err(err)?;
    let map = r
        .qubit_map
        .iter()
        .map(|o| match o {
            QubitOrigin::Parent(i) => ("parent".to_string(), *i),
            QubitOrigin::ChildLogical(j) => ("child".to_string(), *j),
        })
        .collect();
    Ok((PyCode { inner: r.code }, map))
}

type Terms = Vec<(usize, String, String)>;

fn terms(p: &Poly) -> Terms {
    msd::PolyJson::from(p).0
}

fn protocol(name: &str) -> PyResult<(Protocol, msd::Analysis)> {
    match name {
        "10" => msd::ten_to_one().map_err(err),
        "15" => msd::fifteen_to_one().map_err(err),
        other => Err(PyValueError::new_err(format!("unknown protocol {other:?}; use 10 or 15"))),
    }
}

/// Exact polynomials of a built-in protocol ("10" or "15") as lists of
/// (power, numerator, denominator): (p_s, p_out numerator, p_out series).
#[pyfunction]
#[pyo3(signature = (name, order=4))]
fn distillation_polynomials(name: &str, order: usize) -> PyResult<(Terms, Terms, Terms)> {
    let (_, a) = protocol(name)?;
    Ok((terms(&a.p_s), terms(&a.p_out_numerator), terms(&a.p_out_series(order))))
}

/// Cheapest sequence of built-in protocols: (sequence, cost, p_actual).
#[pyfunction]
#[pyo3(signature = (p_in, p_targ, protocols=vec!["15".to_string(), "10".to_string()], max_rounds=5))]
fn optimize_cost(p_in: f64, p_targ: f64, protocols: Vec<String>, max_rounds: usize) -> PyResult<(Vec<String>, f64, f64)> {
    let ps: Vec<Protocol> = protocols.iter().map(|n| protocol(n).map(|x| x.0)).collect::<PyResult<_>>()?;
    let r = msd::optimize_cost(p_in, p_targ, &ps, max_rounds).map_err(err)?;
    Ok((r.sequence, r.cost, r.p_actual))
}

fn method(s: &str) -> PyResult<Method> {
    s.parse().map_err(err)
}

#[pyclass(name = "Lattice", module = "morphpy")]
struct PyLattice {
    inner: HctLattice,
}

#[pymethods]
impl PyLattice {
    /// Random HCT lattice on an L x L triangular torus.
    #[staticmethod]
    #[pyo3(signature = (l, method_name="A1", q=0.0, seed=0))]
    fn generate(l: usize, method_name: &str, q: f64, seed: u64) -> PyResult<Self> {
        Ok(PyLattice { inner: hct::generate(l, method(method_name)?, q, seed).map_err(err)? })
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    #[getter]
    fn n_morphed(&self) -> usize {
        self.inner.balls().len()
    }

    fn code(&self) -> PyCode {
        PyCode { inner: self.inner.to_code() }
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_json(None, None, None)).map_err(err)
    }

    /// Violated X checks (vertex ids) of a Z error.
    fn syndrome(&self, error: Vec<usize>) -> PyResult<Vec<usize>> {
        syndrome_of(&self.inner, &error).map_err(err)
    }

    fn decode(&self, syndrome: Vec<usize>) -> PyResult<Vec<usize>> {
        Decoder::new(&self.inner).decode(&syndrome).map_err(err)
    }

    /// True if the correction undoes the error up to stabilizers.
    fn judge(&self, error: Vec<usize>, correction: Vec<usize>) -> PyResult<bool> {
        Decoder::new(&self.inner).judge(&error, &correction).map_err(err)
    }
}

/// Monte Carlo sweep; rows are (L, p, trials, failures).
#[pyfunction]
#[pyo3(signature = (method_name, q, ls, ps, lattices=10, trials=100, seed=0))]
fn threshold_sweep(
    py: Python<'_>,
    method_name: &str,
    q: f64,
    ls: Vec<usize>,
    ps: Vec<f64>,
    lattices: usize,
    trials: usize,
    seed: u64,
) -> PyResult<Vec<(usize, f64, u64, u64)>> {
    let cfg = ExperimentConfig { method: method(method_name)?, q, ls, ps, lattices_per_point: lattices, trials_per_lattice: trials, master_seed: seed };
    let rows = py.detach(|| threshold::run(&cfg)).map_err(err)?;
    Ok(rows.iter().map(|r| (r.l, r.p, r.trials, r.failures)).collect())
}

/// Run a named scenario: (passed, text report).
#[pyfunction]
#[pyo3(signature = (name, seed=2024))]
fn run_scenario(py: Python<'_>, name: &str, seed: u64) -> PyResult<(bool, String)> {
    let opts = ScenarioOptions { seed, ..Default::default() };
    let r = py.detach(|| scenarios::run_scenario(name, &opts)).map_err(err)?;
    Ok((r.passed(), r.to_string()))
}

#[pymodule]
fn morphpy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCode>()?;
    m.add_class::<PyLattice>()?;
    m.add_function(wrap_pyfunction!(morph, m)?)?;
    m.add_function(wrap_pyfunction!(distillation_polynomials, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_cost, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
