//! Python bindings: sequences, step functions, norms, coefficient maps and
//! the verification suites.

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use grandlorentz::fourier::{walsh_coefficients, TrigSpectrum, DEFAULT_DEFECT_SHARE};
use grandlorentz::grand::{default_inner_alpha, eps_argmax_analytic, grand_fun_norm, grand_seq_star_norm};
use grandlorentz::norms::{
    lambda_norm, lorentz_fun_norm, lorentz_seq_norm, lorentz_seq_star_norm, lpqtau_fun_norm,
};
use grandlorentz::report::ParamValue;
use grandlorentz::verify::{run_suites, Suite, SuiteConfig};
use grandlorentz::{Complex64, EpsGrid, Error, GrandParams, NormParams};

create_exception!(grandlorentz, DivergentError, PyArithmeticError, "The requested norm is infinite.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Divergent(msg) => DivergentError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn params(p: f64, q: f64, tau: Option<f64>, alpha: Option<f64>) -> NormParams {
    let mut pr = NormParams::new(p, q);
    if let Some(t) = tau {
        pr = pr.with_tau(t);
    }
    if let Some(a) = alpha {
        pr = pr.with_alpha(a);
    }
    pr
}

fn grand_params(theta: f64, pr: NormParams, eps_samples: usize) -> GrandParams {
    let mut gp = GrandParams::new(theta, pr);
    gp.eps_grid = EpsGrid::with_samples(eps_samples);
    gp
}

/// Finite sequence of complex numbers.
#[pyclass(frozen, module = "grandlorentz")]
struct Sequence(grandlorentz::Sequence);

#[pymethods]
impl Sequence {
    #[new]
    fn new(values: Vec<Complex64>) -> PyResult<Self> {
        grandlorentz::Sequence::new(values).map(Sequence).map_err(py_err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Sequence(len={})", self.0.len())
    }

    fn entries(&self) -> Vec<Complex64> {
        self.0.entries().to_vec()
    }

    /// Non-increasing rearrangement of the moduli.
    fn rearranged(&self) -> Vec<f64> {
        self.0.rearranged()
    }

    /// `||a||_{l_{p,q}}`.
    fn lorentz_norm(&self, p: f64, q: f64) -> PyResult<f64> {
        lorentz_seq_norm(&self.0, &params(p, q, None, None)).map_err(py_err)
    }

    /// `||a||_{l*_{p,q}}` with Cesaro exponent `alpha`; returns `(value, radius)`.
    #[pyo3(signature = (p, q, alpha = 2.0))]
    fn star_norm(&self, p: f64, q: f64, alpha: f64) -> PyResult<(f64, f64)> {
        let c = lorentz_seq_star_norm(&self.0, &params(p, q, None, Some(alpha))).map_err(py_err)?;
        Ok((c.value, c.radius()))
    }

    /// `||a||_{Lambda_{p,q,tau}}`; `tau` defaults to `q`. Returns `(value, radius)`.
    #[pyo3(signature = (p, q, tau = None))]
    fn lambda_norm(&self, p: f64, q: f64, tau: Option<f64>) -> PyResult<(f64, f64)> {
        let c = lambda_norm(&self.0, &params(p, q, tau, None)).map_err(py_err)?;
        Ok((c.value, c.radius()))
    }

    /// `||a||_{G^theta l*_{p,q}}`; returns `(value, argmax_eps)`.
    #[pyo3(signature = (theta, p, q, alpha = None, eps_samples = 2048))]
    fn grand_star_norm(&self, theta: f64, p: f64, q: f64, alpha: Option<f64>, eps_samples: usize) -> PyResult<(f64, f64)> {
        let alpha = alpha.unwrap_or_else(|| default_inner_alpha(p));
        let gp = grand_params(theta, params(p, q, None, Some(alpha)), eps_samples);
        let (v, prof) = grand_seq_star_norm(&self.0, &gp).map_err(py_err)?;
        Ok((v, prof.argmax_eps))
    }
}

/// Step function on `[0, 1)` constant on the `2^level` dyadic cells.
#[pyclass(frozen, module = "grandlorentz")]
struct StepFunction(grandlorentz::DyadicStepFunction);

#[pymethods]
impl StepFunction {
    #[new]
    fn new(level: u32, values: Vec<Complex64>) -> PyResult<Self> {
        grandlorentz::DyadicStepFunction::new(level, values)
            .map(StepFunction)
            .map_err(py_err)
    }

    #[getter]
    fn level(&self) -> u32 {
        self.0.level()
    }

    fn __repr__(&self) -> String {
        format!("StepFunction(level={})", self.0.level())
    }

    fn values(&self) -> Vec<Complex64> {
        self.0.values().to_vec()
    }

    fn lp_norm(&self, p: f64) -> f64 {
        self.0.lp_norm(p)
    }

    /// `||f||_{L_{p,q}}`.
    fn lorentz_norm(&self, p: f64, q: f64) -> PyResult<f64> {
        lorentz_fun_norm(&self.0, &params(p, q, None, None)).map_err(py_err)
    }

    /// `||f||_{L_{p,q,tau}}`.
    fn lpqtau_norm(&self, p: f64, q: f64, tau: f64) -> PyResult<f64> {
        lpqtau_fun_norm(&self.0, &params(p, q, Some(tau), None)).map_err(py_err)
    }

    /// `||f||_{G^theta L_{p,q}}`; returns `(value, argmax_eps)`.
    #[pyo3(signature = (theta, p, q, eps_samples = 2048))]
    fn grand_norm(&self, theta: f64, p: f64, q: f64, eps_samples: usize) -> PyResult<(f64, f64)> {
        let gp = grand_params(theta, params(p, q, None, None), eps_samples);
        let (v, prof) = grand_fun_norm(&self.0, &gp).map_err(py_err)?;
        Ok((v, prof.argmax_eps))
    }

    /// Walsh-Paley coefficients.
    fn walsh(&self) -> Sequence {
        Sequence(walsh_coefficients(&self.0))
    }

    /// Trigonometric coefficients `a_{-K..K}`; `K` is chosen so that the
    /// omitted `l_2` mass is below `1e-6 ||f||_2^2` when not given.
    #[pyo3(signature = (k_max = None))]
    fn trig(&self, k_max: Option<usize>) -> Vec<Complex64> {
        let sp = TrigSpectrum::new(&self.0);
        sp.coefficients(k_max.unwrap_or_else(|| sp.auto_k(DEFAULT_DEFECT_SHARE)))
    }
}

fn param_to_py(py: Python<'_>, v: &ParamValue) -> PyResult<Py<PyAny>> {
    Ok(match v {
        ParamValue::Int(i) => i.into_pyobject(py)?.into_any().unbind(),
        ParamValue::Num(x) => x.into_pyobject(py)?.into_any().unbind(),
        ParamValue::Text(s) => s.into_pyobject(py)?.into_any().unbind(),
    })
}

/// Run a verification suite (`"all"` for every suite) and return one dict
/// per check.
#[pyfunction]
#[pyo3(signature = (suite, seed = 7, count = None, eps_samples = 2048))]
fn verify(py: Python<'_>, suite: &str, seed: u64, count: Option<usize>, eps_samples: usize) -> PyResult<Vec<Py<PyDict>>> {
    let suites = Suite::parse_list(suite).map_err(py_err)?;
    let cfg = SuiteConfig {
        seed,
        count,
        eps_samples,
        ..SuiteConfig::default()
    };
    let reports = py.detach(|| run_suites(&suites, &cfg)).map_err(py_err)?;
    reports
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("check", &r.check)?;
            let ps = PyDict::new(py);
            for (k, v) in &r.params {
                ps.set_item(k, param_to_py(py, v)?)?;
            }
            d.set_item("params", ps)?;
            d.set_item("lhs", r.lhs)?;
            d.set_item("rhs", r.rhs)?;
            d.set_item("constant", r.constant)?;
            d.set_item("margin", r.margin)?;
            d.set_item("ratio", r.ratio)?;
            d.set_item("verdict", r.verdict.as_str())?;
            d.set_item("seed", r.seed)?;
            d.set_item("notes", &r.notes)?;
            Ok(d.unbind())
        })
        .collect()
}

/// `(1/p - 1/q) / ln n`, the maximiser of `eps^{1/p - 1/q} n^{-eps}`.
#[pyfunction]
fn eps_argmax(n: usize, p: f64, q: f64) -> PyResult<f64> {
    eps_argmax_analytic(n, p, q).map_err(py_err)
}

#[pymodule]
#[pyo3(name = "grandlorentz")]
fn grandlorentz_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Sequence>()?;
    m.add_class::<StepFunction>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(eps_argmax, m)?)?;
    m.add("DivergentError", m.py().get_type::<DivergentError>())?;
    Ok(())
}
