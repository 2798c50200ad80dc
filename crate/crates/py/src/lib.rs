//! Python bindings: `import pylandau`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use landau::classical::{self, ClassicalState};
use landau::eigen::{self, Family};
use landau::gauge::{self, Branch, DisplacementOp, Gauge};
use landau::grid::{self, Grid2D};
use landau::symbolic::{GaussianPolynomial, PolyDiffOperator};
use landau::units::PhysicalParams;

fn err(e: landau::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr>(what: &str, s: &str) -> PyResult<T> {
    s.parse()
        .map_err(|_| PyValueError::new_err(format!("unknown {what} '{s}'")))
}

fn parse_branch(s: &str) -> PyResult<Branch> {
    match s {
        "first" => Ok(Branch::First),
        "second" => Ok(Branch::Second),
        _ => Err(PyValueError::new_err(format!("unknown branch '{s}'"))),
    }
}

#[pyclass(name = "Params", module = "pylandau", frozen, from_py_object)]
#[derive(Clone)]
pub struct Params(PhysicalParams);

#[pymethods]
impl Params {
    #[new]
    #[pyo3(signature = (m=1.0, q=1.0, B=1.0, c=1.0, hbar=1.0))]
    #[allow(non_snake_case)]
    fn new(m: f64, q: f64, B: f64, c: f64, hbar: f64) -> PyResult<Self> {
        PhysicalParams::new(m, q, B, c, hbar)
            .map(Params)
            .map_err(err)
    }

    #[getter]
    fn mass(&self) -> f64 {
        self.0.mass()
    }

    #[getter]
    fn charge(&self) -> f64 {
        self.0.charge()
    }

    #[getter]
    fn field(&self) -> f64 {
        self.0.field()
    }

    #[getter]
    fn light_speed(&self) -> f64 {
        self.0.light_speed()
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.0.hbar()
    }

    fn cyclotron_frequency(&self) -> f64 {
        self.0.cyclotron_frequency()
    }

    fn magnetic_length(&self) -> f64 {
        self.0.magnetic_length()
    }

    fn landau_level(&self, n: u32) -> f64 {
        self.0.landau_level(n)
    }

    fn hall_resistivity(&self, l1: f64, l2: f64) -> f64 {
        self.0.hall_resistivity(l1, l2)
    }

    fn __repr__(&self) -> String {
        let p = &self.0;
        format!(
            "Params(m={}, q={}, B={}, c={}, hbar={})",
            p.mass(),
            p.charge(),
            p.field(),
            p.light_speed(),
            p.hbar()
        )
    }
}

/// `P(x, y) exp(Q(x, y))`.
#[pyclass(
    name = "GaussianPolynomial",
    module = "pylandau",
    frozen,
    from_py_object
)]
#[derive(Clone)]
pub struct PyGaussianPolynomial(GaussianPolynomial);

#[pymethods]
impl PyGaussianPolynomial {
    fn eval(&self, x: f64, y: f64) -> Complex64 {
        self.0.eval(x, y)
    }

    /// `[(a, b, coefficient)]` for the monomials `x^a y^b`.
    fn terms(&self) -> Vec<(u32, u32, Complex64)> {
        self.0.terms().map(|((a, b), c)| (a, b, c)).collect()
    }

    /// `[(name, coefficient)]` for the exponent terms xx, yy, xy, x, y and 1.
    fn exponent(&self) -> Vec<(&'static str, Complex64)> {
        let e = self.0.exponent();
        vec![
            ("xx", e.xx),
            ("yy", e.yy),
            ("xy", e.xy),
            ("x", e.x),
            ("y", e.y),
            ("1", e.constant),
        ]
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn scale(&self, c: Complex64) -> Self {
        Self(self.0.scale(c))
    }

    fn add(&self, other: &Self) -> PyResult<Self> {
        self.0.add(&other.0).map(Self).map_err(err)
    }

    fn translate(&self, dx: f64, dy: f64) -> Self {
        Self(self.0.translate(dx, dy))
    }

    fn derivative_x(&self) -> Self {
        Self(self.0.derivative_x())
    }

    fn derivative_y(&self) -> Self {
        Self(self.0.derivative_y())
    }

    /// `c` with `self = c * other`, or `None`.
    fn multiple_of(&self, other: &Self, tol: f64) -> PyResult<Option<Complex64>> {
        self.0.multiple_of(&other.0, tol).map_err(err)
    }

    fn mismatch(&self, other: &Self) -> PyResult<f64> {
        self.0.mismatch(&other.0).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("<GaussianPolynomial with {} terms>", self.0.num_terms())
    }
}

#[derive(FromPyObject)]
enum OperatorOrScalar {
    Operator(PyOperator),
    Scalar(Complex64),
}

/// Polynomial differential operator in normal order.
#[pyclass(name = "Operator", module = "pylandau", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyOperator(PolyDiffOperator);

#[pymethods]
impl PyOperator {
    #[staticmethod]
    fn x() -> Self {
        Self(PolyDiffOperator::x())
    }

    #[staticmethod]
    fn y() -> Self {
        Self(PolyDiffOperator::y())
    }

    #[staticmethod]
    fn dx() -> Self {
        Self(PolyDiffOperator::dx())
    }

    #[staticmethod]
    fn dy() -> Self {
        Self(PolyDiffOperator::dy())
    }

    #[staticmethod]
    fn scalar(c: Complex64) -> Self {
        Self(PolyDiffOperator::scalar(c))
    }

    /// `[((a, b, p, q), coefficient)]` for the terms `x^a y^b dx^p dy^q`.
    fn terms(&self) -> Vec<((u32, u32, u32, u32), Complex64)> {
        self.0
            .terms()
            .map(|(t, c)| ((t.xpow, t.ypow, t.dxpow, t.dypow), c))
            .collect()
    }

    fn compose(&self, other: &Self) -> Self {
        Self(self.0.compose(&other.0))
    }

    fn commutator(&self, other: &Self) -> Self {
        Self(self.0.commutator(&other.0))
    }

    fn apply(&self, psi: &PyGaussianPolynomial) -> PyGaussianPolynomial {
        PyGaussianPolynomial(self.0.apply(&psi.0))
    }

    /// `|(self - e) psi| / |psi|` over polynomial coefficients.
    fn residual(&self, e: Complex64, psi: &PyGaussianPolynomial) -> PyResult<f64> {
        self.0.residual(e, &psi.0).map_err(err)
    }

    fn max_coeff(&self) -> f64 {
        self.0.max_coeff()
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    fn __neg__(&self) -> Self {
        Self(-self.0.clone())
    }

    /// Composition with an operator, scaling with a number.
    fn __mul__(&self, other: OperatorOrScalar) -> Self {
        match other {
            OperatorOrScalar::Operator(op) => Self(self.0.compose(&op.0)),
            OperatorOrScalar::Scalar(c) => Self(self.0.scale(c)),
        }
    }

    fn __rmul__(&self, c: Complex64) -> Self {
        Self(self.0.scale(c))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("<Operator with {} terms>", self.0.num_terms())
    }
}

/// Translation by `shift` followed by the phase `exp(i k . r)`.
#[pyclass(name = "Displacement", module = "pylandau", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyDisplacement(DisplacementOp);

#[pymethods]
impl PyDisplacement {
    #[new]
    fn new(shift: (f64, f64), wavevector: (f64, f64)) -> PyResult<Self> {
        DisplacementOp::new(shift, wavevector)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn shift(&self) -> (f64, f64) {
        self.0.shift()
    }

    #[getter]
    fn wavevector(&self) -> (f64, f64) {
        self.0.wavevector()
    }

    fn apply(&self, psi: &PyGaussianPolynomial) -> PyGaussianPolynomial {
        PyGaussianPolynomial(self.0.apply(&psi.0))
    }

    /// `self` after `first`.
    fn then(&self, first: &Self) -> Self {
        Self(self.0.then(&first.0))
    }

    fn __repr__(&self) -> String {
        format!(
            "Displacement(shift={:?}, wavevector={:?})",
            self.0.shift(),
            self.0.wavevector()
        )
    }
}

#[pyclass(name = "Grid", module = "pylandau", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyGrid(Grid2D);

#[pymethods]
impl PyGrid {
    #[new]
    fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> PyResult<Self> {
        Grid2D::new(x_min, x_max, y_min, y_max, nx, ny)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn square(half_width: f64, n: usize) -> PyResult<Self> {
        Grid2D::square(half_width, n).map(Self).map_err(err)
    }

    #[getter]
    fn nx(&self) -> usize {
        self.0.nx()
    }

    #[getter]
    fn ny(&self) -> usize {
        self.0.ny()
    }

    #[getter]
    fn spacing(&self) -> (f64, f64) {
        (self.0.hx(), self.0.hy())
    }

    /// Values at the nodes, row-major with x fastest.
    fn sample(&self, psi: &PyGaussianPolynomial) -> PyResult<Vec<Complex64>> {
        grid::sample(&psi.0, &self.0)
            .map(|f| f.values().to_vec())
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        let (x0, x1, y0, y1) = self.0.bounds();
        format!(
            "Grid([{x0}, {x1}] x [{y0}, {y1}], {}x{})",
            self.0.nx(),
            self.0.ny()
        )
    }
}

fn family(name: &str) -> PyResult<Family> {
    parse("family", name)
}

#[pyfunction]
fn hamiltonian(gauge: &str, params: &Params) -> PyResult<PyOperator> {
    Ok(PyOperator(gauge::hamiltonian(
        parse("gauge", gauge)?,
        &params.0,
    )))
}

/// The two constants of motion of `gauge`.
#[pyfunction]
fn invariants(gauge: &str, params: &Params) -> PyResult<(PyOperator, PyOperator)> {
    let (a, b) = gauge::invariant_pair(parse("gauge", gauge)?, &params.0);
    Ok((PyOperator(a), PyOperator(b)))
}

#[pyfunction]
fn displacement(gauge: &str, branch: &str, lam: f64, params: &Params) -> PyResult<PyDisplacement> {
    gauge::displacement(
        parse("gauge", gauge)?,
        parse_branch(branch)?,
        lam,
        &params.0,
    )
    .map(PyDisplacement)
    .map_err(err)
}

#[pyfunction]
fn gauge_transform(psi: &PyGaussianPolynomial, params: &Params) -> PyGaussianPolynomial {
    PyGaussianPolynomial(gauge::gauge_transform_landau_to_symmetric(
        &psi.0, &params.0,
    ))
}

/// Family names: landau-first, landau-second, symmetric-first, symmetric-second.
#[pyfunction]
fn eigenfunction(
    family_name: &str,
    n: u32,
    lam: f64,
    params: &Params,
) -> PyResult<PyGaussianPolynomial> {
    eigen::eigenfunction(family(family_name)?, n, lam, &params.0)
        .map(PyGaussianPolynomial)
        .map_err(err)
}

#[pyfunction]
fn ladder_state(
    family_name: &str,
    n: u32,
    j: u32,
    lam: f64,
    params: &Params,
) -> PyResult<PyGaussianPolynomial> {
    eigen::ladder_state(family(family_name)?, n, j, lam, &params.0)
        .map(PyGaussianPolynomial)
        .map_err(err)
}

#[pyfunction]
fn resum_displaced(
    family_name: &str,
    n: u32,
    lam: f64,
    j_max: u32,
    params: &Params,
) -> PyResult<PyGaussianPolynomial> {
    eigen::resum_displaced(family(family_name)?, n, lam, j_max, &params.0)
        .map(PyGaussianPolynomial)
        .map_err(err)
}

#[pyfunction]
fn flux_phase(lam1: f64, lam2: f64, params: &Params) -> PyResult<Complex64> {
    eigen::flux_phase(lam1, lam2, &params.0).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (lam1, lam2, params, tol=1e-9))]
fn is_flux_quantized(lam1: f64, lam2: f64, params: &Params, tol: f64) -> PyResult<Option<i64>> {
    eigen::is_flux_quantized(lam1, lam2, &params.0, tol).map_err(err)
}

/// Finite-difference residual `|(op - e) psi|` on the grid interior.
#[pyfunction]
fn grid_residual(
    op: &PyOperator,
    e: Complex64,
    psi: &PyGaussianPolynomial,
    grid: &PyGrid,
) -> PyResult<f64> {
    grid::residual_norm(&op.0, e, &psi.0, &grid.0).map_err(err)
}

/// `(t, x, y, px, py)`.
type Row = (f64, f64, f64, f64, f64);

/// RK4 trajectory from `(x, y, px, py)`.
#[pyfunction]
fn rk4(
    gauge: &str,
    state: (f64, f64, f64, f64),
    dt: f64,
    steps: usize,
    params: &Params,
) -> PyResult<Vec<Row>> {
    let s0 = ClassicalState::new(state.0, state.1, state.2, state.3);
    let traj =
        classical::rk4_integrate(parse("gauge", gauge)?, s0, dt, steps, &params.0).map_err(err)?;
    Ok(traj.iter().map(|s| (s.t, s.x, s.y, s.px, s.py)).collect())
}

/// Canonical `(x, y, px, py)` for a position and physical velocity.
#[pyfunction]
fn state_from_velocity(
    gauge: &str,
    x: f64,
    y: f64,
    vx: f64,
    vy: f64,
    params: &Params,
) -> PyResult<(f64, f64, f64, f64)> {
    let s = ClassicalState::from_velocity(parse("gauge", gauge)?, x, y, vx, vy, &params.0);
    Ok((s.x, s.y, s.px, s.py))
}

/// The two momentum-like constants and the energy at `(x, y, px, py)`.
#[pyfunction]
fn constants_of_motion(
    gauge: &str,
    state: (f64, f64, f64, f64),
    params: &Params,
) -> PyResult<(f64, f64, f64)> {
    let s = ClassicalState::new(state.0, state.1, state.2, state.3);
    Ok(classical::invariants_eval(
        parse::<Gauge>("gauge", gauge)?,
        &s,
        &params.0,
    ))
}

#[pymodule]
fn pylandau(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Params>()?;
    m.add_class::<PyGaussianPolynomial>()?;
    m.add_class::<PyOperator>()?;
    m.add_class::<PyDisplacement>()?;
    m.add_class::<PyGrid>()?;
    m.add_function(wrap_pyfunction!(hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(displacement, m)?)?;
    m.add_function(wrap_pyfunction!(gauge_transform, m)?)?;
    m.add_function(wrap_pyfunction!(eigenfunction, m)?)?;
    m.add_function(wrap_pyfunction!(ladder_state, m)?)?;
    m.add_function(wrap_pyfunction!(resum_displaced, m)?)?;
    m.add_function(wrap_pyfunction!(flux_phase, m)?)?;
    m.add_function(wrap_pyfunction!(is_flux_quantized, m)?)?;
    m.add_function(wrap_pyfunction!(grid_residual, m)?)?;
    m.add_function(wrap_pyfunction!(rk4, m)?)?;
    m.add_function(wrap_pyfunction!(state_from_velocity, m)?)?;
    m.add_function(wrap_pyfunction!(constants_of_motion, m)?)?;
    Ok(())
}
