//! Python bindings: family specs, built groups and their invariants.
//! Structured results are returned as plain dicts and lists.

use orbifold_core::duval::{build, formula_order, required_conductor, tuple_of, DuvalError, FamilyId, FamilySpec, ProductGroup};
use orbifold_core::fibration::{base_orbifold, fibration_isometries, list_fibrations, preserves_fibration, FibrationError, Signature2D, StandardFibration};
use orbifold_core::isometry::{isom_plus_of, or_exists_of, verify_witness, IsometryError};
use orbifold_core::singular::{is_free_action, singular_locus, SingularError};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::{json, Value};

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn duval_err(e: DuvalError) -> PyErr {
    match e {
        DuvalError::UnknownFamily(_) | DuvalError::Constraint { .. } => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn iso_err(e: IsometryError) -> PyErr {
    match e {
        IsometryError::Duval(d) => duval_err(d),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn fib_err(e: FibrationError) -> PyErr {
    match e {
        FibrationError::Duval(d) => duval_err(d),
        FibrationError::Isometry(i) => iso_err(i),
        FibrationError::Parse(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn sing_err(e: SingularError) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// A family label with its parameters, normalized (s reduced mod r, unused parameters set to 1).
#[pyclass(name = "FamilySpec", module = "orbifold_py", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PySpec {
    inner: FamilySpec,
}

#[pymethods]
impl PySpec {
    #[new]
    #[pyo3(signature = (family, m = 1, n = 1, r = 1, s = 1))]
    fn new(family: &str, m: u32, n: u32, r: u32, s: i64) -> PyResult<PySpec> {
        FamilySpec::new(family, m, n, r, s).map(|inner| PySpec { inner }).map_err(duval_err)
    }

    #[getter]
    fn family(&self) -> String {
        self.inner.family.to_string()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n
    }

    #[getter]
    fn r(&self) -> u32 {
        self.inner.r
    }

    #[getter]
    fn s(&self) -> i64 {
        self.inner.s
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label()
    }

    /// Order predicted by the closed formula of the family.
    fn formula_order(&self) -> usize {
        formula_order(&self.inner)
    }

    fn conductor(&self) -> u32 {
        required_conductor(&self.inner)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.to_json())
    }

    fn __repr__(&self) -> String {
        format!("FamilySpec({})", self.inner.label())
    }
}

/// The finite subgroup of S^3 x S^3 built from a spec; its image in SO(4) acts on S^3.
#[pyclass(name = "Group", module = "orbifold_py", frozen)]
pub struct PyGroup {
    spec: FamilySpec,
    inner: ProductGroup,
}

#[pymethods]
impl PyGroup {
    #[new]
    fn new(spec: &PySpec) -> PyResult<PyGroup> {
        let inner = build(&spec.inner).map_err(duval_err)?;
        Ok(PyGroup { spec: spec.inner, inner })
    }

    #[getter]
    fn spec(&self) -> PySpec {
        PySpec { inner: self.spec }
    }

    /// Order of the image in SO(4).
    fn order(&self) -> usize {
        self.inner.order() / 2
    }

    fn contains_kernel(&self) -> bool {
        self.inner.contains_kernel()
    }

    fn round_trip(&self) -> bool {
        tuple_of(&self.inner).rebuild().same_set(&self.inner)
    }

    fn isom_plus<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let d = isom_plus_of(&self.inner).map_err(iso_err)?;
        to_py(py, &d.to_json())
    }

    fn or_exists<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let w = or_exists_of(&self.inner).map_err(iso_err)?;
        let mut v = w.to_json();
        if let Some(f) = &w.witness {
            v["witness_verified"] = json!(verify_witness(&self.inner, f).map_err(iso_err)?);
        }
        to_py(py, &v)
    }

    fn preserves_hopf(&self) -> bool {
        preserves_fibration(&self.inner, StandardFibration::HOPF)
    }

    fn fibrations<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let list = list_fibrations(&self.spec).map_err(fib_err)?;
        to_py(py, &Value::Array(list.iter().map(|e| e.to_json()).collect()))
    }

    /// Base orbifold of the Hopf fibration, e.g. "D2(2;3)".
    fn base_orbifold(&self) -> PyResult<String> {
        base_orbifold(&self.spec).map(|s| s.to_string()).map_err(fib_err)
    }

    fn fibration_isometries<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let f = fibration_isometries(&self.spec).map_err(fib_err)?;
        to_py(py, &f.to_json())
    }

    fn is_free(&self) -> bool {
        is_free_action(&self.inner)
    }

    fn singular_locus<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let g = singular_locus(&self.inner).map_err(sing_err)?;
        to_py(py, &g.to_json())
    }

    fn __len__(&self) -> usize {
        self.order()
    }

    fn __repr__(&self) -> String {
        format!("Group({}, order={})", self.spec.label(), self.order())
    }
}

/// All family labels, including the bis variants.
#[pyfunction]
fn families() -> Vec<String> {
    FamilyId::all().iter().map(|f| f.to_string()).collect()
}

/// Orbifold Euler characteristic of a signature such as "S2(2,3,5)", as (numerator, denominator).
#[pyfunction]
fn euler_characteristic(signature: &str) -> PyResult<(i64, i64)> {
    let sig: Signature2D = signature.parse().map_err(fib_err)?;
    let chi = sig.orbifold_euler_characteristic();
    Ok((*chi.numer(), *chi.denom()))
}

#[pymodule]
fn orbifold_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpec>()?;
    m.add_class::<PyGroup>()?;
    m.add_function(wrap_pyfunction!(families, m)?)?;
    m.add_function(wrap_pyfunction!(euler_characteristic, m)?)?;
    Ok(())
}
