//! Python bindings for the cvfid library.
//!
//! Exposes the Gaussian-state type, the closed-form classical and quantum
//! fidelities, the brute-force oracles, and the transfer-function
//! benchmarking toolkit:
//!
//! ```python
//! import cvfid_py as cv
//!
//! s1 = cv.GaussianState.isotropic(1.0)
//! s2 = cv.GaussianState.isotropic(2.0)
//! cv.quantum_fidelity(s1, s2)        # 0.666...
//! cv.uhlmann_fidelity_fock(s1, s2)   # same, from the Fock-basis oracle
//! ```

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use cvfid::ingest::{QuadratureSamples, Record};
use cvfid::{fidelity, ingest, oracle, state, teleport};

fn to_py_err(e: cvfid::Error) -> PyErr {
    use cvfid::Error::*;
    match e {
        Io(_) => PyIOError::new_err(e.to_string()),
        Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A single-mode Gaussian state in measured variances (shot-noise units).
#[pyclass(name = "GaussianState", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGaussianState {
    inner: state::GaussianState,
}

#[pymethods]
impl PyGaussianState {
    #[new]
    #[pyo3(signature = (v_plus, v_minus, phi = 0.0, delta_re = 0.0, delta_im = 0.0))]
    fn new(v_plus: f64, v_minus: f64, phi: f64, delta_re: f64, delta_im: f64) -> PyResult<Self> {
        state::GaussianState::new(v_plus, v_minus, phi, delta_re, delta_im)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    #[staticmethod]
    fn vacuum() -> Self {
        Self {
            inner: state::GaussianState::vacuum(),
        }
    }

    #[staticmethod]
    fn coherent(delta_re: f64, delta_im: f64) -> PyResult<Self> {
        state::GaussianState::coherent(delta_re, delta_im)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    #[staticmethod]
    fn isotropic(v: f64) -> PyResult<Self> {
        state::GaussianState::isotropic(v)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    #[getter]
    fn v_plus(&self) -> f64 {
        self.inner.v_plus()
    }

    #[getter]
    fn v_minus(&self) -> f64 {
        self.inner.v_minus()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.inner.phi()
    }

    #[getter]
    fn delta_re(&self) -> f64 {
        self.inner.delta().re
    }

    #[getter]
    fn delta_im(&self) -> f64 {
        self.inner.delta().im
    }

    /// Variance product; 1 for pure states.
    #[getter]
    fn breadth(&self) -> f64 {
        self.inner.breadth()
    }

    fn is_physical(&self) -> bool {
        self.inner.is_physical()
    }

    fn squeezing_parameter(&self) -> f64 {
        self.inner.squeezing_parameter()
    }

    /// Wigner density at the phase-space point `alpha_re + 1j * alpha_im`.
    fn wigner(&self, alpha_re: f64, alpha_im: f64) -> f64 {
        self.inner
            .wigner(num_complex::Complex64::new(alpha_re, alpha_im))
    }

    /// Rigid phase-space rotation by `dtheta` radians.
    fn rotate(&self, dtheta: f64) -> Self {
        Self {
            inner: self.inner.rotate(dtheta),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "GaussianState(v_plus={}, v_minus={}, phi={}, delta_re={}, delta_im={})",
            self.inner.v_plus(),
            self.inner.v_minus(),
            self.inner.phi(),
            self.inner.delta().re,
            self.inner.delta().im
        )
    }
}

/// Per-quadrature gains and additive noise variances of a Gaussian channel.
#[pyclass(name = "TransferFunction", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTransferFunction {
    inner: teleport::TransferFunction,
}

#[pymethods]
impl PyTransferFunction {
    #[new]
    fn new(gain_plus: f64, gain_minus: f64, noise_plus: f64, noise_minus: f64) -> PyResult<Self> {
        teleport::TransferFunction::new(gain_plus, gain_minus, noise_plus, noise_minus)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    #[getter]
    fn gain_plus(&self) -> f64 {
        self.inner.gain_plus()
    }

    #[getter]
    fn gain_minus(&self) -> f64 {
        self.inner.gain_minus()
    }

    #[getter]
    fn noise_plus(&self) -> f64 {
        self.inner.noise_plus()
    }

    #[getter]
    fn noise_minus(&self) -> f64 {
        self.inner.noise_minus()
    }

    fn __repr__(&self) -> String {
        format!(
            "TransferFunction(gain_plus={}, gain_minus={}, noise_plus={}, noise_minus={})",
            self.inner.gain_plus(),
            self.inner.gain_minus(),
            self.inner.noise_plus(),
            self.inner.noise_minus()
        )
    }
}

/// Measured first and second moments of the two quadratures.
#[pyclass(name = "QuadratureStats", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyQuadratureStats {
    inner: teleport::QuadratureStats,
}

#[pymethods]
impl PyQuadratureStats {
    #[new]
    fn new(mean_plus: f64, mean_minus: f64, var_plus: f64, var_minus: f64) -> PyResult<Self> {
        teleport::QuadratureStats::new(mean_plus, mean_minus, var_plus, var_minus)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    /// Exact statistics of an axis-aligned state.
    #[staticmethod]
    fn of_state(state: &PyGaussianState) -> PyResult<Self> {
        teleport::QuadratureStats::of_state(&state.inner)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    #[getter]
    fn mean_plus(&self) -> f64 {
        self.inner.mean_plus
    }

    #[getter]
    fn mean_minus(&self) -> f64 {
        self.inner.mean_minus
    }

    #[getter]
    fn var_plus(&self) -> f64 {
        self.inner.var_plus
    }

    #[getter]
    fn var_minus(&self) -> f64 {
        self.inner.var_minus
    }

    fn __repr__(&self) -> String {
        format!(
            "QuadratureStats(mean_plus={}, mean_minus={}, var_plus={}, var_minus={})",
            self.inner.mean_plus, self.inner.mean_minus, self.inner.var_plus, self.inner.var_minus
        )
    }
}

/// Squared Bhattacharyya coefficient of the two phase-space distributions.
#[pyfunction]
fn classical_fidelity(s1: &PyGaussianState, s2: &PyGaussianState) -> PyResult<f64> {
    fidelity::classical_fidelity(&s1.inner, &s2.inner)
        .map_err(to_py_err)?
        .value()
        .ok_or_else(|| PyRuntimeError::new_err("classical fidelity left the closed-form regime"))
}

/// Uhlmann fidelity in closed form. Raises ValueError for a rotated and
/// separated pair (use `uhlmann_fidelity_fock` there) or unphysical input.
#[pyfunction]
fn quantum_fidelity(s1: &PyGaussianState, s2: &PyGaussianState) -> PyResult<f64> {
    fidelity::quantum_fidelity(&s1.inner, &s2.inner)
        .map_err(to_py_err)?
        .value()
        .ok_or_else(|| {
            PyValueError::new_err(
                "no closed form for a rotated and separated pair; use uhlmann_fidelity_fock",
            )
        })
}

/// Whether the pair has a closed-form quantum fidelity:
/// "closed_form" or "unsupported".
#[pyfunction]
fn quantum_fidelity_regime(s1: &PyGaussianState, s2: &PyGaussianState) -> PyResult<&'static str> {
    let f = fidelity::quantum_fidelity(&s1.inner, &s2.inner).map_err(to_py_err)?;
    Ok(match f.regime() {
        fidelity::Regime::ClosedForm => "closed_form",
        fidelity::Regime::Unsupported => "unsupported",
    })
}

#[pyfunction]
fn thermal_fidelity(v1: f64, v2: f64) -> PyResult<f64> {
    fidelity::thermal_fidelity(v1, v2).map_err(to_py_err)
}

#[pyfunction]
fn no_entanglement_fidelity(v: f64) -> PyResult<f64> {
    teleport::no_entanglement_fidelity(v).map_err(to_py_err)
}

/// Fidelity attenuation from a center separation `x` between aligned-axes
/// states, `x` given in the shared principal-axis frame.
#[pyfunction]
fn displacement_factor(
    s1: &PyGaussianState,
    s2: &PyGaussianState,
    x_re: f64,
    x_im: f64,
) -> f64 {
    fidelity::displacement_factor(&s1.inner, &s2.inner, x_re, x_im)
}

/// The value the quantum fidelity must take when state 1 is pure, given the
/// classical fidelity of the pair.
#[pyfunction]
fn pure_relation_rhs(s2: &PyGaussianState, f_c: f64) -> f64 {
    fidelity::pure_relation_rhs(&s2.inner, f_c)
}

/// Brute-force Uhlmann fidelity in a truncated Fock basis, with the
/// truncation doubled until the value is stable to 1e-8.
#[pyfunction]
fn uhlmann_fidelity_fock(s1: &PyGaussianState, s2: &PyGaussianState) -> PyResult<f64> {
    let p1 = s1.inner.to_thermal_params().map_err(to_py_err)?;
    let p2 = s2.inner.to_thermal_params().map_err(to_py_err)?;
    oracle::uhlmann_fidelity_converged(&p1, &p2)
        .map(|c| c.value)
        .map_err(to_py_err)
}

/// Classical fidelity by midpoint-rule grid integration.
#[pyfunction]
#[pyo3(signature = (s1, s2, points_per_axis = 801, half_extent_sigmas = 6.0))]
fn classical_fidelity_grid(
    s1: &PyGaussianState,
    s2: &PyGaussianState,
    points_per_axis: usize,
    half_extent_sigmas: f64,
) -> PyResult<f64> {
    let grid = oracle::GridSpec::new(half_extent_sigmas, points_per_axis).map_err(to_py_err)?;
    Ok(oracle::classical_fidelity_grid(&s1.inner, &s2.inner, &grid))
}

/// Phase-space overlap `pi * integral(W1 W2)` and whether it is a fidelity
/// (true only when at least one state is pure).
#[pyfunction]
#[pyo3(signature = (s1, s2, points_per_axis = 801, half_extent_sigmas = 6.0))]
fn wigner_overlap(
    s1: &PyGaussianState,
    s2: &PyGaussianState,
    points_per_axis: usize,
    half_extent_sigmas: f64,
) -> PyResult<(f64, bool)> {
    let grid = oracle::GridSpec::new(half_extent_sigmas, points_per_axis).map_err(to_py_err)?;
    let o = oracle::wigner_overlap(&s1.inner, &s2.inner, &grid);
    Ok((o.value, o.is_fidelity))
}

/// Truncated purification overlap series for two thermal variances.
#[pyfunction]
#[pyo3(signature = (v1, v2, n_terms = 4096))]
fn epr_overlap_fidelity(v1: f64, v2: f64, n_terms: usize) -> PyResult<f64> {
    oracle::epr_overlap_fidelity(v1, v2, n_terms).map_err(to_py_err)
}

/// Push an axis-aligned physical state through a channel.
#[pyfunction]
fn apply_transfer(
    tf: &PyTransferFunction,
    state: &PyGaussianState,
) -> PyResult<PyGaussianState> {
    teleport::apply_transfer(&tf.inner, &state.inner)
        .map(|inner| PyGaussianState { inner })
        .map_err(to_py_err)
}

/// Recover a channel's gains and noise variances from measured statistics.
#[pyfunction]
fn estimate_transfer(
    input: &PyQuadratureStats,
    output: &PyQuadratureStats,
) -> PyResult<PyTransferFunction> {
    teleport::estimate_transfer(&input.inner, &output.inner)
        .map(|inner| PyTransferFunction { inner })
        .map_err(to_py_err)
}

/// Fidelity the channel would achieve on a pure, axis-aligned reference.
#[pyfunction]
fn reference_fidelity(tf: &PyTransferFunction, reference: &PyGaussianState) -> PyResult<f64> {
    teleport::reference_fidelity(&tf.inner, &reference.inner).map_err(to_py_err)
}

/// Monte-Carlo measure-and-reprepare channel; deterministic per seed.
#[pyfunction]
fn simulate_heterodyne_teleport(
    state: &PyGaussianState,
    n_samples: usize,
    seed: u64,
) -> PyResult<PyQuadratureStats> {
    teleport::simulate_heterodyne_teleport(&state.inner, n_samples, seed)
        .map(|inner| PyQuadratureStats { inner })
        .map_err(to_py_err)
}

/// Least-squares state estimate from homodyne records given as parallel
/// `angles`/`values` lists. Returns `(state, variance_residual, mean_residual)`.
#[pyfunction]
fn estimate_state(
    angles: Vec<f64>,
    values: Vec<f64>,
) -> PyResult<(PyGaussianState, f64, f64)> {
    if angles.len() != values.len() {
        return Err(PyValueError::new_err(format!(
            "angles and values differ in length: {} vs {}",
            angles.len(),
            values.len()
        )));
    }
    let records: Vec<Record> = angles
        .into_iter()
        .zip(values)
        .map(|(angle, value)| Record { angle, value })
        .collect();
    let samples = QuadratureSamples::new(records).map_err(to_py_err)?;
    let est = ingest::estimate_state(&samples).map_err(to_py_err)?;
    Ok((
        PyGaussianState { inner: est.state },
        est.variance_residual,
        est.mean_residual,
    ))
}

/// Load homodyne records from a CSV file (`angle_rad,value` schema) and
/// estimate the state.
#[pyfunction]
fn estimate_state_file(path: &str) -> PyResult<(PyGaussianState, f64, f64)> {
    let samples = ingest::load_samples(path).map_err(to_py_err)?;
    let est = ingest::estimate_state(&samples).map_err(to_py_err)?;
    Ok((
        PyGaussianState { inner: est.state },
        est.variance_residual,
        est.mean_residual,
    ))
}

#[pymodule]
fn cvfid_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGaussianState>()?;
    m.add_class::<PyTransferFunction>()?;
    m.add_class::<PyQuadratureStats>()?;

    m.add_function(wrap_pyfunction!(classical_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_fidelity_regime, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(no_entanglement_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(displacement_factor, m)?)?;
    m.add_function(wrap_pyfunction!(pure_relation_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(uhlmann_fidelity_fock, m)?)?;
    m.add_function(wrap_pyfunction!(classical_fidelity_grid, m)?)?;
    m.add_function(wrap_pyfunction!(wigner_overlap, m)?)?;
    m.add_function(wrap_pyfunction!(epr_overlap_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(apply_transfer, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_transfer, m)?)?;
    m.add_function(wrap_pyfunction!(reference_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_heterodyne_teleport, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_state, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_state_file, m)?)?;
    Ok(())
}
