//! Python bindings for the twin-basic calculus library.
//!
//! The module keeps a deliberately flat, function-first surface: complex
//! scalars cross the boundary as Python `complex`, doublets as `(complex,
//! complex)` tuples, and structured results (series diagnostics, identity
//! reports, relation residuals) as plain dicts.  Library errors surface as
//! `ValueError` with the library's message text.

use num_complex::Complex64;
use pqcalc::{
    build_fock, check_exp_identity, check_pq_binomial, eval_pq_hypergeometric,
    eval_q_hypergeometric, fibonacci_sequence, pq_binomial_coeff, pq_factorial, pq_number,
    pq_shifted_factorial, product_permutation_check, product_unit_check, verify_oscillator,
    Error, EvalConfig, IdentityReport, PQBase, PQPair, SeriesSpec, Termination,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py_err(err: Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn pairs_of(raw: &[(Complex64, Complex64)]) -> Vec<PQPair> {
    raw.iter().map(|&(p, q)| PQPair::new(p, q)).collect()
}

fn config_from(
    rel_tol: Option<f64>,
    max_terms: Option<usize>,
    growth_window: Option<usize>,
) -> EvalConfig {
    let mut cfg = EvalConfig::default();
    if let Some(v) = rel_tol {
        cfg.rel_tol = v;
    }
    if let Some(v) = max_terms {
        cfg.max_terms = v;
    }
    if let Some(v) = growth_window {
        cfg.growth_window = v;
    }
    cfg
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::Natural => "natural",
        Termination::ToleranceReached => "tolerance_reached",
        Termination::MaxTermsReached => "max_terms_reached",
    }
}

fn series_dict(py: Python<'_>, result: pqcalc::SeriesResult) -> PyResult<Py<PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("value", result.value)?;
    d.set_item("terms_used", result.terms_used)?;
    d.set_item("termination", termination_name(result.termination))?;
    d.set_item("error_estimate", result.error_estimate)?;
    Ok(d.into())
}

fn report_dict(py: Python<'_>, report: &IdentityReport) -> PyResult<Py<PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("lhs", report.lhs)?;
    d.set_item("rhs", report.rhs)?;
    d.set_item("abs_residual", report.abs_residual)?;
    d.set_item("rel_residual", report.rel_residual)?;
    d.set_item("passed", report.passed)?;
    Ok(d.into())
}

/// Twin-basic number [x] over the base doublet (p, q).
#[pyfunction]
fn number(x: Complex64, p: Complex64, q: Complex64) -> PyResult<Complex64> {
    pq_number(x, PQBase::new(p, q)).map_err(to_py_err)
}

/// Twin-basic factorial [n]! over the base doublet (p, q).
#[pyfunction]
fn factorial(n: usize, p: Complex64, q: Complex64) -> Complex64 {
    pq_factorial(n, PQBase::new(p, q))
}

/// Twin-basic shifted factorial of the doublet (xp, xq) with n factors.
#[pyfunction]
fn shifted_factorial(
    xp: Complex64,
    xq: Complex64,
    p: Complex64,
    q: Complex64,
    n: usize,
) -> Complex64 {
    pq_shifted_factorial(PQPair::new(xp, xq), PQBase::new(p, q), n)
}

/// Twin-basic binomial coefficient [n choose k] over the base doublet.
#[pyfunction]
fn binomial_coefficient(n: usize, k: usize, p: Complex64, q: Complex64) -> PyResult<Complex64> {
    pq_binomial_coeff(n, k, PQBase::new(p, q)).map_err(to_py_err)
}

/// Adaptive evaluation of a twin-basic hypergeometric series.
///
/// `num_pairs` and `den_pairs` are lists of (xp, xq) tuples.  Returns a dict
/// with keys value, terms_used, termination and error_estimate.
#[pyfunction]
#[pyo3(signature = (num_pairs, den_pairs, p, q, z, rel_tol=None, max_terms=None, growth_window=None))]
#[allow(clippy::too_many_arguments)]
fn series(
    py: Python<'_>,
    num_pairs: Vec<(Complex64, Complex64)>,
    den_pairs: Vec<(Complex64, Complex64)>,
    p: Complex64,
    q: Complex64,
    z: Complex64,
    rel_tol: Option<f64>,
    max_terms: Option<usize>,
    growth_window: Option<usize>,
) -> PyResult<Py<PyDict>> {
    let spec = SeriesSpec {
        numerator: pairs_of(&num_pairs),
        denominator: pairs_of(&den_pairs),
        base: PQBase::new(p, q),
        z,
    };
    let cfg = config_from(rel_tol, max_terms, growth_window);
    let result = eval_pq_hypergeometric(&spec, &cfg).map_err(to_py_err)?;
    series_dict(py, result)
}

/// Adaptive evaluation of a classical basic hypergeometric series.
///
/// Useful as an in-Python cross-check of the twin-basic engine at (1, q).
#[pyfunction]
#[pyo3(signature = (upper, lower, q, z, rel_tol=None, max_terms=None, growth_window=None))]
#[allow(clippy::too_many_arguments)]
fn q_series(
    py: Python<'_>,
    upper: Vec<Complex64>,
    lower: Vec<Complex64>,
    q: Complex64,
    z: Complex64,
    rel_tol: Option<f64>,
    max_terms: Option<usize>,
    growth_window: Option<usize>,
) -> PyResult<Py<PyDict>> {
    let cfg = config_from(rel_tol, max_terms, growth_window);
    let result = eval_q_hypergeometric(&upper, &lower, q, z, &cfg).map_err(to_py_err)?;
    series_dict(py, result)
}

/// Binomial-theorem residual for one doublet: series vs product ratio.
#[pyfunction]
#[pyo3(signature = (ap, aq, p, q, z, tol=1e-10))]
fn binomial_check(
    py: Python<'_>,
    ap: Complex64,
    aq: Complex64,
    p: Complex64,
    q: Complex64,
    z: Complex64,
    tol: f64,
) -> PyResult<Py<PyDict>> {
    let report = check_pq_binomial(
        PQPair::new(ap, aq),
        PQBase::new(p, q),
        z,
        &EvalConfig::default(),
        tol,
    )
    .map_err(to_py_err)?;
    report_dict(py, &report)
}

/// Residual of e_q(z) E_q(-z) = 1.
#[pyfunction]
#[pyo3(signature = (q, z, tol=1e-10))]
fn exp_identity_check(py: Python<'_>, q: Complex64, z: Complex64, tol: f64) -> PyResult<Py<PyDict>> {
    let report = check_exp_identity(q, z, &EvalConfig::default(), tol).map_err(to_py_err)?;
    report_dict(py, &report)
}

/// Euler's small q-exponential e_q(z), |q| < 1, |z| < 1.
#[pyfunction]
fn exp_small(q: Complex64, z: Complex64) -> PyResult<Complex64> {
    pqcalc::q_exp_small(q, z, &EvalConfig::default()).map_err(to_py_err)
}

/// Euler's big q-exponential E_q(z), |q| < 1, entire in z.
#[pyfunction]
fn exp_big(q: Complex64, z: Complex64) -> PyResult<Complex64> {
    pqcalc::q_exp_big(q, z, &EvalConfig::default()).map_err(to_py_err)
}

/// Permutation invariance of a product of binomial series.
#[pyfunction]
#[pyo3(signature = (pairs, p, q, z, perm_p, perm_q, tol=1e-10))]
#[allow(clippy::too_many_arguments)]
fn permutation_check(
    py: Python<'_>,
    pairs: Vec<(Complex64, Complex64)>,
    p: Complex64,
    q: Complex64,
    z: Complex64,
    perm_p: Vec<usize>,
    perm_q: Vec<usize>,
    tol: f64,
) -> PyResult<Py<PyDict>> {
    let report = product_permutation_check(
        &pairs_of(&pairs),
        PQBase::new(p, q),
        z,
        &perm_p,
        &perm_q,
        &EvalConfig::default(),
        tol,
    )
    .map_err(to_py_err)?;
    report_dict(py, &report)
}

/// Product of binomial series over a component-matched family against one.
#[pyfunction]
#[pyo3(signature = (pairs, p, q, z, tol=1e-10))]
fn unit_check(
    py: Python<'_>,
    pairs: Vec<(Complex64, Complex64)>,
    p: Complex64,
    q: Complex64,
    z: Complex64,
    tol: f64,
) -> PyResult<Py<PyDict>> {
    let report = product_unit_check(
        &pairs_of(&pairs),
        PQBase::new(p, q),
        z,
        &EvalConfig::default(),
        tol,
    )
    .map_err(to_py_err)?;
    report_dict(py, &report)
}

/// Residuals of the deformed oscillator relations on a dim-level Fock
/// truncation; keys are relation names plus "subspace_dim".
#[pyfunction]
fn oscillator_residuals(
    py: Python<'_>,
    p: Complex64,
    q: Complex64,
    dim: usize,
) -> PyResult<Py<PyDict>> {
    let fock = build_fock(p, q, dim).map_err(to_py_err)?;
    let verdict = verify_oscillator(&fock);
    let d = PyDict::new_bound(py);
    for (name, residual) in &verdict.residuals {
        d.set_item(name, residual)?;
    }
    d.set_item("subspace_dim", verdict.subspace_dim)?;
    Ok(d.into())
}

/// Lowering and raising matrices of the dim-level Fock truncation, as
/// nested row-major lists.
#[pyfunction]
fn fock_ladder(
    p: Complex64,
    q: Complex64,
    dim: usize,
) -> PyResult<(Vec<Vec<Complex64>>, Vec<Vec<Complex64>>)> {
    let fock = build_fock(p, q, dim).map_err(to_py_err)?;
    let rows = |m: &nalgebra::DMatrix<Complex64>| {
        (0..dim)
            .map(|i| (0..dim).map(|j| m[(i, j)]).collect())
            .collect()
    };
    Ok((rows(&fock.a), rows(&fock.a_dag)))
}

/// Values f_0..f_n_max of the generalized Fibonacci recurrence of (p, q).
#[pyfunction]
fn fibonacci(p: Complex64, q: Complex64, n_max: usize) -> Vec<Complex64> {
    fibonacci_sequence(PQBase::new(p, q), n_max)
}

#[pymodule]
fn _pqcalc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(number, m)?)?;
    m.add_function(wrap_pyfunction!(factorial, m)?)?;
    m.add_function(wrap_pyfunction!(shifted_factorial, m)?)?;
    m.add_function(wrap_pyfunction!(binomial_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(series, m)?)?;
    m.add_function(wrap_pyfunction!(q_series, m)?)?;
    m.add_function(wrap_pyfunction!(binomial_check, m)?)?;
    m.add_function(wrap_pyfunction!(exp_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(exp_small, m)?)?;
    m.add_function(wrap_pyfunction!(exp_big, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_check, m)?)?;
    m.add_function(wrap_pyfunction!(unit_check, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator_residuals, m)?)?;
    m.add_function(wrap_pyfunction!(fock_ladder, m)?)?;
    m.add_function(wrap_pyfunction!(fibonacci, m)?)?;
    Ok(())
}
