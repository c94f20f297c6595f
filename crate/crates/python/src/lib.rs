//! Python bindings for `symtorsion`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use symtorsion::cli;
use symtorsion::io;
use symtorsion::lattice::Lattice as CoreLattice;
use symtorsion::series::{parse_rational, NovikovElement as CoreElement};
use symtorsion::torsion::{BasedComplex, TorsionError, TorsionOptions, WhiteheadClass as CoreClass, DEFAULT_CUTOFF};
use symtorsion::torus;

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn torsion_error(e: TorsionError) -> PyErr {
    if e.is_indeterminate() {
        PyRuntimeError::new_err(format!("indeterminate: {e}"))
    } else {
        value_error(e)
    }
}

fn rational(text: &str) -> PyResult<BigRational> {
    parse_rational(text).ok_or_else(|| value_error(format!("invalid rational '{text}'")))
}

fn options(cutoff: Option<&str>) -> PyResult<TorsionOptions> {
    match cutoff {
        None => Ok(TorsionOptions::with_cutoff(BigRational::from_integer(DEFAULT_CUTOFF.into()))),
        Some(t) => Ok(TorsionOptions::with_cutoff(rational(t)?)),
    }
}

/// Finitely generated free abelian group with weights `phi` and Chern
/// values `c1`. Rationals are passed as strings such as `"7/1000"`.
#[pyclass(frozen, module = "symtorsion_py")]
struct Lattice {
    inner: Arc<CoreLattice>,
}

#[pymethods]
impl Lattice {
    #[new]
    fn new(phi: Vec<String>, c1: Vec<i64>) -> PyResult<Self> {
        let phi = phi.iter().map(|p| rational(p)).collect::<PyResult<Vec<_>>>()?;
        let inner = CoreLattice::new(phi, c1).map_err(value_error)?;
        Ok(Lattice { inner: Arc::new(inner) })
    }

    #[staticmethod]
    fn laurent() -> Self {
        Lattice {
            inner: Arc::new(CoreLattice::laurent()),
        }
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn phi(&self) -> Vec<String> {
        self.inner.phi().iter().map(|p| p.to_string()).collect()
    }

    #[getter]
    fn c1(&self) -> Vec<i64> {
        self.inner.c1().to_vec()
    }

    fn weight(&self, coords: Vec<i64>) -> PyResult<String> {
        let g = self.inner.element(coords).map_err(value_error)?;
        Ok(self.inner.weight(&g).map_err(value_error)?.to_string())
    }

    fn element(&self, text: &str) -> PyResult<NovikovElement> {
        NovikovElement::parse(self, text)
    }

    fn __repr__(&self) -> String {
        format!("Lattice(phi={:?}, c1={:?})", self.phi(), self.c1())
    }
}

/// Element of the Novikov ring, written as in the document format.
#[pyclass(frozen, from_py_object, module = "symtorsion_py")]
#[derive(Clone)]
struct NovikovElement {
    inner: CoreElement,
}

fn wrap(inner: CoreElement) -> NovikovElement {
    NovikovElement { inner }
}

#[pymethods]
impl NovikovElement {
    #[staticmethod]
    fn parse(lattice: &Lattice, text: &str) -> PyResult<Self> {
        CoreElement::parse(&lattice.inner, text).map(wrap).map_err(value_error)
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.inner.checked_add(&other.inner).map(wrap).map_err(value_error)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.inner.checked_sub(&other.inner).map(wrap).map_err(value_error)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.inner.checked_mul(&other.inner).map(wrap).map_err(value_error)
    }

    fn __neg__(&self) -> Self {
        wrap(-&self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    /// Inverse up to the weight `cutoff`; exact monomials need none.
    #[pyo3(signature = (cutoff=None))]
    fn invert(&self, cutoff: Option<&str>) -> PyResult<Self> {
        let w = cutoff.map(rational).transpose()?;
        self.inner.invert(w.as_ref()).map(wrap).map_err(value_error)
    }

    fn leading_monomial(&self) -> PyResult<(String, Vec<i64>)> {
        let (c, g) = self.inner.leading_monomial().map_err(value_error)?;
        Ok((c.to_string(), g.coords().to_vec()))
    }

    fn is_unit(&self) -> bool {
        self.inner.is_certified_unit()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn agrees_with(&self, other: &Self) -> PyResult<bool> {
        Ok(self.inner.agreement(&other.inner).map_err(value_error)?.holds())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("NovikovElement('{}')", self.inner)
    }
}

/// Torsion class modulo units ±g.
#[pyclass(frozen, module = "symtorsion_py")]
struct WhiteheadClass {
    inner: CoreClass,
}

#[pymethods]
impl WhiteheadClass {
    #[staticmethod]
    fn from_unit(u: &NovikovElement) -> PyResult<Self> {
        CoreClass::from_unit(u.inner.clone())
            .map(|inner| WhiteheadClass { inner })
            .map_err(value_error)
    }

    fn is_trivial(&self) -> bool {
        self.inner.is_trivial()
    }

    fn same_class(&self, other: &Self) -> bool {
        self.inner.same_class(&other.inner)
    }

    fn inverse(&self) -> Self {
        WhiteheadClass {
            inner: self.inner.inverse(),
        }
    }

    fn leading_coefficient(&self) -> String {
        self.inner.leading_coefficient().to_string()
    }

    fn in_lambda0(&self) -> bool {
        self.inner.in_lambda0()
    }

    #[pyo3(signature = (cutoff=None))]
    fn representative(&self, cutoff: Option<&str>) -> PyResult<NovikovElement> {
        let opts = options(cutoff)?;
        self.inner
            .representative(&opts.working_cutoff)
            .map(wrap)
            .map_err(value_error)
    }

    fn __str__(&self) -> PyResult<String> {
        Ok(self.representative(None)?.inner.to_string())
    }
}

/// Based chain complex taken from a parsed document.
#[pyclass(frozen, module = "symtorsion_py")]
struct Complex {
    name: String,
    inner: Arc<BasedComplex>,
}

#[pymethods]
impl Complex {
    #[getter]
    fn name(&self) -> &str {
        &self.name
    }

    fn generators(&self) -> Vec<(String, i64)> {
        self.inner
            .generators()
            .iter()
            .map(|g| (g.name.clone(), g.degree))
            .collect()
    }

    fn euler_parity(&self) -> (usize, usize) {
        self.inner.euler_parity()
    }

    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map(|_| ()).map_err(torsion_error)
    }

    #[pyo3(signature = (cutoff=None))]
    fn homology_ranks(&self, cutoff: Option<&str>) -> PyResult<BTreeMap<i64, usize>> {
        let opts = options(cutoff)?;
        Ok(self
            .inner
            .homology_ranks(&opts.working_cutoff)
            .map_err(torsion_error)?
            .ranks)
    }

    #[pyo3(signature = (cutoff=None))]
    fn torsion(&self, cutoff: Option<&str>) -> PyResult<WhiteheadClass> {
        let opts = options(cutoff)?;
        self.inner
            .milnor_torsion(&opts)
            .map(|inner| WhiteheadClass { inner })
            .map_err(torsion_error)
    }
}

/// Parsed document with named complexes and maps.
#[pyclass(frozen, module = "symtorsion_py")]
struct Document {
    inner: io::Document,
}

#[pymethods]
impl Document {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        io::parse(text).map(|inner| Document { inner }).map_err(value_error)
    }

    fn complex_names(&self) -> Vec<String> {
        self.inner.complexes.iter().map(|c| c.name.clone()).collect()
    }

    fn map_names(&self) -> Vec<String> {
        self.inner.maps.iter().map(|m| m.name.clone()).collect()
    }

    fn complex(&self, name: &str) -> PyResult<Complex> {
        let c = self
            .inner
            .complex(name)
            .ok_or_else(|| value_error(format!("no complex named '{name}'")))?;
        Ok(Complex {
            name: name.to_string(),
            inner: c.clone(),
        })
    }

    #[pyo3(signature = (map, cutoff=None))]
    fn relative_torsion(&self, map: &str, cutoff: Option<&str>) -> PyResult<WhiteheadClass> {
        let opts = options(cutoff)?;
        let m = self
            .inner
            .map(map)
            .ok_or_else(|| value_error(format!("no map named '{map}'")))?;
        m.map
            .relative_torsion(&opts)
            .map(|inner| WhiteheadClass { inner })
            .map_err(torsion_error)
    }

    fn render(&self) -> String {
        io::render(&self.inner)
    }
}

/// Normal form of a document.
#[pyfunction]
fn normalize(text: &str) -> PyResult<String> {
    io::normalize(text).map_err(value_error)
}

/// Runs the torus example and returns a summary dictionary.
#[pyfunction]
#[pyo3(signature = (b="1/5", tol=torus::DEFAULT_NEWTON_TOL, cutoff=None))]
fn torus_example<'py>(py: Python<'py>, b: &str, tol: f64, cutoff: Option<&str>) -> PyResult<Bound<'py, PyDict>> {
    let opts = options(cutoff)?;
    let b = rational(b)?;
    let report = py
        .detach(|| torus::run_example(b, tol, &opts))
        .map_err(value_error)?;
    let d = PyDict::new(py);
    let xs: Vec<f64> = report.search.orbits.iter().map(|o| o.x).collect();
    let dets: Vec<f64> = report.search.orbits.iter().map(|o| o.det_i_minus_m).collect();
    d.set_item("orbits", xs)?;
    d.set_item("det_i_minus_m", dets)?;
    d.set_item("cz_indices", report.indices.clone())?;
    d.set_item("monodromy_error", report.monodromy_error.clone())?;
    d.set_item("connecting_labels", report.connecting.labels())?;
    let torsion = PyDict::new(py);
    for v in &report.variants {
        let rep = v
            .torsion
            .representative(&opts.working_cutoff)
            .map_err(value_error)?;
        torsion.set_item(v.convention.to_string(), rep.to_string())?;
    }
    d.set_item("torsion", torsion)?;
    Ok(d)
}

/// Runs the command line interface; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let o = cli::run(std::iter::once("symtorsion".to_string()).chain(args));
    (o.code, o.stdout, o.stderr)
}

#[pymodule]
fn symtorsion_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Lattice>()?;
    m.add_class::<NovikovElement>()?;
    m.add_class::<WhiteheadClass>()?;
    m.add_class::<Complex>()?;
    m.add_class::<Document>()?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(torus_example, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
