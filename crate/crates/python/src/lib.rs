//! Python bindings for the `conftc` crate.

use conftc::certificate::{build, CertificateError, CertificateKind};
use conftc::closed_forms::{tc_case, upper_bound};
use conftc::expr::reduce_ring;
use conftc::isotopy::IsotopyError;
use conftc::{Coefficients, DetourPlanner, Instance};
use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_coeff(coeff: Option<&str>, m: u32) -> PyResult<Coefficients> {
    match coeff {
        Some(c) => c.parse().map_err(PyValueError::new_err),
        None => Ok(Coefficients::for_dimension(m)),
    }
}

/// Cohomology ring of `Conf(R^m - Q_p, n)`.
#[pyclass(frozen, eq, skip_from_py_object, name = "RingSpec")]
#[derive(Clone, Copy, PartialEq)]
struct PyRingSpec(conftc::RingSpec);

#[pymethods]
impl PyRingSpec {
    #[new]
    #[pyo3(signature = (m, n, p = 0, coeff = None))]
    fn new(m: u32, n: u32, p: u32, coeff: Option<&str>) -> PyResult<Self> {
        let spec = conftc::RingSpec::new(m, n, p, parse_coeff(coeff, m)?).map_err(value_error)?;
        Ok(PyRingSpec(spec))
    }

    #[getter]
    fn m(&self) -> u32 {
        self.0.m()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.0.n()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.p()
    }

    #[getter]
    fn coeff(&self) -> String {
        self.0.coeff().to_string()
    }

    /// Total rank of the ring.
    fn dimension(&self) -> BigInt {
        self.0.dimension()
    }

    /// Basis monomials with `factors` factors.
    fn basis(&self, factors: usize) -> PyResult<Vec<String>> {
        Ok(conftc::basis(&self.0, factors).map_err(value_error)?.iter().map(|m| m.to_string()).collect())
    }

    /// Parses and reduces an expression such as `"A[3,2]*A[3,1]"`.
    fn element(&self, expr: &str) -> PyResult<PyElement> {
        Ok(PyElement(reduce_ring(expr, self.0).map_err(value_error)?))
    }

    fn generator(&self, i: u32, j: u32) -> PyResult<PyElement> {
        Ok(PyElement(conftc::Element::generator(self.0, i, j).map_err(value_error)?))
    }

    fn __repr__(&self) -> String {
        format!("RingSpec({})", self.0)
    }
}

/// An element of the ring in normal form.
#[pyclass(frozen, eq, skip_from_py_object, name = "Element")]
#[derive(Clone, PartialEq)]
struct PyElement(conftc::Element);

impl PyElement {
    fn same_ring(&self, other: &PyElement) -> PyResult<()> {
        if self.0.spec() != other.0.spec() {
            return Err(PyValueError::new_err("elements live in different rings"));
        }
        Ok(())
    }
}

#[pymethods]
impl PyElement {
    fn __add__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.same_ring(other)?;
        Ok(PyElement(&self.0 + &other.0))
    }

    fn __sub__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.same_ring(other)?;
        Ok(PyElement(&self.0 - &other.0))
    }

    fn __mul__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.same_ring(other)?;
        Ok(PyElement(&self.0 * &other.0))
    }

    fn __neg__(&self) -> PyElement {
        PyElement(-&self.0)
    }

    fn __pow__(&self, exponent: u32, _modulo: Option<u32>) -> PyElement {
        PyElement(self.0.pow(exponent))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Cohomological degree, or `None` for mixed-degree elements.
    fn degree(&self) -> Option<u32> {
        self.0.degree()
    }

    /// `(monomial, coefficient)` pairs.
    fn terms(&self) -> Vec<(String, BigInt)> {
        self.0.terms().map(|(m, c)| (m.to_string(), c.clone())).collect()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({:?})", self.0.to_string())
    }
}

/// Normal form of an expression; slotted atoms `A[i,j]@l` reduce in the s-fold tensor power.
#[pyfunction]
#[pyo3(signature = (expr, m, n, p = 0, s = 2, coeff = None))]
fn reduce(expr: &str, m: u32, n: u32, p: u32, s: u32, coeff: Option<&str>) -> PyResult<String> {
    let spec = conftc::RingSpec::new(m, n, p, parse_coeff(coeff, m)?).map_err(value_error)?;
    let parsed = conftc::parse(expr).map_err(value_error)?;
    if parsed.is_slotted() {
        Ok(parsed.eval_tensor(spec, s).map_err(value_error)?.to_string())
    } else {
        Ok(parsed.eval_ring(spec).map_err(value_error)?.to_string())
    }
}

/// `(TC_s, case label)`.
#[pyfunction]
fn tc_s(m: u32, n: u32, p: u32, s: u32) -> PyResult<(u32, &'static str)> {
    let q = conftc::TcQuery::new(m, n, p, s).map_err(value_error)?;
    Ok((conftc::tc_s(&q), tc_case(&q).label()))
}

#[pyfunction]
fn tc_upper_bound(m: u32, n: u32, p: u32, s: u32) -> PyResult<u32> {
    Ok(upper_bound(&conftc::TcQuery::new(m, n, p, s).map_err(value_error)?))
}

#[pyfunction]
fn cl_s_conf(m: u32, n: u32, s: u32) -> PyResult<u32> {
    conftc::cl_s_conf(m, n, s).map_err(value_error)
}

#[pyfunction]
fn cat_conf(m: u32, n: u32, p: u32) -> PyResult<u32> {
    conftc::cat_conf(m, n, p).map_err(value_error)
}

#[pyfunction]
fn tc_s_wedge(p: u32, m: u32, s: u32) -> PyResult<u32> {
    conftc::tc_s_wedge(p, m, s).map_err(value_error)
}

/// Builds and verifies a named certificate and returns its record as a dict.
#[pyfunction]
#[pyo3(signature = (kind, m, n, p = 0, s = 2, coeff = None))]
fn certify<'py>(
    py: Python<'py>,
    kind: &str,
    m: u32,
    n: u32,
    p: u32,
    s: u32,
    coeff: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let kind: CertificateKind = kind.parse().map_err(PyValueError::new_err)?;
    let spec = conftc::RingSpec::new(m, n, p, parse_coeff(coeff, m)?).map_err(value_error)?;
    let cert = build(kind, spec, s).map_err(|e| match e {
        CertificateError::Regime { .. } => value_error(e),
        other => PyRuntimeError::new_err(other.to_string()),
    })?;
    let report = conftc::verify(&cert);
    let rec = cert.record(&report);
    let d = PyDict::new(py);
    d.set_item("kind", rec.kind.name())?;
    d.set_item("m", rec.m)?;
    d.set_item("n", rec.n)?;
    d.set_item("p", rec.p)?;
    d.set_item("coeff", rec.coeff.to_string())?;
    d.set_item("s", rec.s)?;
    d.set_item("length", rec.length)?;
    d.set_item("factors", rec.factors)?;
    d.set_item("product", rec.product)?;
    d.set_item("product_terms", rec.product_terms)?;
    d.set_item("witness", rec.witness)?;
    d.set_item("kernel_ok", rec.kernel_ok)?;
    d.set_item("nonzero_ok", rec.nonzero_ok)?;
    d.set_item("lower_bound", rec.lower_bound)?;
    Ok(d)
}

/// Exhaustive cup-length search over degree-(m-1) kernel factors.
#[pyfunction]
#[pyo3(signature = (m, n, p = 0, s = 2, max_len = None))]
fn brute_force_zcl(m: u32, n: u32, p: u32, s: u32, max_len: Option<usize>) -> PyResult<usize> {
    let spec = conftc::RingSpec::auto(m, n, p).map_err(value_error)?;
    conftc::brute_force_zcl(spec, s, max_len.unwrap_or((n * s) as usize)).map_err(value_error)
}

fn numeric_error(e: IsotopyError) -> PyErr {
    match e {
        IsotopyError::Instance(_) | IsotopyError::InvalidInput(_) | IsotopyError::UnsupportedDimension(_) => {
            value_error(e)
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Plans a path for an instance file and returns the verified samples.
#[pyfunction]
fn plan<'py>(py: Python<'py>, instance_path: &str) -> PyResult<Bound<'py, PyDict>> {
    let inst = Instance::load(instance_path).map_err(numeric_error)?;
    let seq = inst.sequence().map_err(numeric_error)?;
    let traj = inst.trajectory().map_err(numeric_error)?;
    let planner = DetourPlanner { margin: inst.settings.margin };
    let planned = py
        .detach(|| {
            conftc::plan_with_moving_obstacles(&seq, &traj, &planner, &inst.isotopy_config(), inst.settings.samples_per_leg)
        })
        .map_err(numeric_error)?;
    let dim = inst.m;
    let path: Vec<Vec<Vec<f64>>> = planned
        .path
        .samples()
        .iter()
        .map(|c| c.iter().map(|x| x[..dim].to_vec()).collect())
        .collect();
    let d = PyDict::new(py);
    d.set_item("times", planned.path.times())?;
    d.set_item("path", path)?;
    d.set_item("min_clearance", planned.report.min_clearance)?;
    d.set_item("snap_error", planned.snap_error)?;
    d.set_item("tracking_error", planned.field.tracking_error())?;
    Ok(d)
}

#[pymodule]
fn conftc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRingSpec>()?;
    m.add_class::<PyElement>()?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(tc_s, m)?)?;
    m.add_function(wrap_pyfunction!(tc_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(cl_s_conf, m)?)?;
    m.add_function(wrap_pyfunction!(cat_conf, m)?)?;
    m.add_function(wrap_pyfunction!(tc_s_wedge, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_zcl, m)?)?;
    m.add_function(wrap_pyfunction!(plan, m)?)?;
    Ok(())
}
