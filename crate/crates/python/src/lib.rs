//! Python bindings for `nicefn`.
//!
//! ```python
//! import pynicefn as nf
//! g = nf.parse("exp(-pi*[[1]][x,x])")
//! assert g.ft() == g
//! ```

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use nicefn::expr::ExprError;
use nicefn::{json, LinearMap, MultiIndex, NiceFunction};

create_exception!(
    pynicefn,
    NiceFnError,
    PyValueError,
    "Error raised by nicefn; `code` holds the machine-readable code."
);

fn raise(code: &str, message: String) -> PyErr {
    let err = NiceFnError::new_err(format!("{code}: {message}"));
    Python::attach(|py| {
        let _ = err.value(py).setattr("code", code);
    });
    err
}

fn core_err(e: nicefn::Error) -> PyErr {
    raise(e.code(), e.to_string())
}

fn expr_err(e: ExprError) -> PyErr {
    raise(e.code(), e.to_string())
}

/// A finite sum of `poly(x) · exp(-π x·Q x + b·x)` terms in canonical form.
#[pyclass(name = "NiceFunction", module = "pynicefn", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyNiceFunction {
    inner: NiceFunction,
}

impl From<NiceFunction> for PyNiceFunction {
    fn from(inner: NiceFunction) -> Self {
        PyNiceFunction { inner }
    }
}

#[pymethods]
impl PyNiceFunction {
    /// Parses the expression language, e.g. `"x1*exp(-pi*[[1]][x,x])"`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        nicefn::expr::parse_function(text)
            .map(Self::from)
            .map_err(expr_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        json::function_from_json(text)
            .map(Self::from)
            .map_err(core_err)
    }

    /// `exp(-π x·x)` on `R^dim`.
    #[staticmethod]
    fn gaussian(dim: usize) -> PyResult<Self> {
        if dim == 0 {
            return Err(raise("E_INVALID", "dimension must be positive".into()));
        }
        Ok(NiceFunction::standard_gaussian(dim).into())
    }

    #[staticmethod]
    fn zero(dim: usize) -> Self {
        NiceFunction::zero(dim).into()
    }

    fn to_json(&self) -> PyResult<String> {
        json::function_to_json(&self.inner).map_err(core_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn num_terms(&self) -> usize {
        self.inner.terms().len()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn __call__(&self, x: Vec<Complex64>) -> PyResult<Complex64> {
        self.inner.evaluate(&x).map_err(core_err)
    }

    fn __str__(&self) -> String {
        nicefn::expr::print_function(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "NiceFunction({:?})",
            nicefn::expr::print_function(&self.inner)
        )
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.inner
            .add(&other.inner)
            .map(Self::from)
            .map_err(core_err)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.inner
            .sub(&other.inner)
            .map(Self::from)
            .map_err(core_err)
    }

    fn __neg__(&self) -> Self {
        self.inner.scale(Complex64::new(-1.0, 0.0)).into()
    }

    /// Pointwise product with another function or a complex scalar.
    fn __mul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Ok(f) = other.extract::<PyRef<'_, PyNiceFunction>>() {
            return self
                .inner
                .multiply(&f.inner)
                .map(Self::from)
                .map_err(core_err);
        }
        let s: Complex64 = other.extract()?;
        Ok(self.inner.scale(s).into())
    }

    fn __rmul__(&self, other: Complex64) -> Self {
        self.inner.scale(other).into()
    }

    /// Canonical coefficient distance to `other`.
    fn distance(&self, other: &Self) -> f64 {
        self.inner.distance(&other.inner)
    }

    fn ft(&self) -> Self {
        nicefn::fourier_transform(&self.inner).into()
    }

    fn ift(&self) -> Self {
        nicefn::inverse_transform(&self.inner).into()
    }

    fn conj(&self) -> Self {
        self.inner.conjugate().into()
    }

    /// `x -> f(x - a)`.
    fn translate(&self, a: Vec<Complex64>) -> PyResult<Self> {
        self.inner.translate(&a).map(Self::from).map_err(core_err)
    }

    /// `f(x) · exp(-2πi x·b)`.
    fn modulate(&self, b: Vec<Complex64>) -> PyResult<Self> {
        self.inner.modulate(&b).map(Self::from).map_err(core_err)
    }

    fn diff(&self, alpha: Vec<u32>) -> PyResult<Self> {
        self.inner
            .differentiate(&MultiIndex::new(alpha))
            .map(Self::from)
            .map_err(core_err)
    }

    /// `x -> f(T x)` for a square real matrix given as a list of rows.
    fn compose(&self, matrix: Vec<Vec<f64>>) -> PyResult<Self> {
        let t = LinearMap::from_rows(&matrix).map_err(core_err)?;
        self.inner
            .compose_linear(&t)
            .map(Self::from)
            .map_err(core_err)
    }

    fn convolve(&self, other: &Self) -> PyResult<Self> {
        nicefn::convolve(&self.inner, &other.inner)
            .map(Self::from)
            .map_err(core_err)
    }

    /// `∫ f · conj(g)`.
    fn inner(&self, other: &Self) -> PyResult<Complex64> {
        nicefn::inner_product(&self.inner, &other.inner)
            .map(|v| v.value)
            .map_err(core_err)
    }

    fn integral(&self) -> Complex64 {
        nicefn::integral(&self.inner)
    }

    /// Derivative-basis expansion as JSON, one entry per Gaussian key.
    fn derivative_basis_json(&self) -> PyResult<String> {
        let e = nicefn::function_to_derivative_basis(&self.inner).map_err(core_err)?;
        json::expansions_to_json(&e).map_err(core_err)
    }
}

#[pyfunction]
fn parse(text: &str) -> PyResult<PyNiceFunction> {
    PyNiceFunction::parse(text)
}

#[pyfunction]
fn fourier_transform(f: &PyNiceFunction) -> PyNiceFunction {
    f.ft()
}

#[pyfunction]
fn inverse_transform(f: &PyNiceFunction) -> PyNiceFunction {
    f.ift()
}

#[pyfunction]
fn convolve(f: &PyNiceFunction, g: &PyNiceFunction) -> PyResult<PyNiceFunction> {
    f.convolve(g)
}

#[pyfunction]
fn inner_product(f: &PyNiceFunction, g: &PyNiceFunction) -> PyResult<Complex64> {
    f.inner(g)
}

#[pyfunction]
fn integral(f: &PyNiceFunction) -> Complex64 {
    f.integral()
}

#[pymodule]
fn pynicefn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNiceFunction>()?;
    m.add("NiceFnError", m.py().get_type::<NiceFnError>())?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_transform, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_transform, m)?)?;
    m.add_function(wrap_pyfunction!(convolve, m)?)?;
    m.add_function(wrap_pyfunction!(inner_product, m)?)?;
    m.add_function(wrap_pyfunction!(integral, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
