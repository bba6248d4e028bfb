//! Python bindings for `barrierclock`.
//!
//! Complex amplitudes and times are returned as Python `complex`; undefined
//! channel times are `None`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use barrierclock::clock::{self, SpinState};
use barrierclock::oracle::OracleReport;
use barrierclock::scattering::{self, Channel};
use barrierclock::verify::{self, VerifyOptions};
use barrierclock::weaktimes::{self, TimeChannel};
use barrierclock::{Complex64, PotentialProfile, Region, ScatteringSolution, Segment, UnitSystem};

fn err(e: barrierclock::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn units(hbar: f64, mass: f64) -> PyResult<UnitSystem> {
    UnitSystem::new(hbar, mass).map_err(err)
}

fn region(x1: f64, x2: f64) -> PyResult<Region> {
    Region::new(x1, x2).map_err(err)
}

fn channel(name: &str) -> PyResult<Channel> {
    name.parse().map_err(err)
}

fn time_channel(name: &str) -> PyResult<TimeChannel> {
    name.parse().map_err(err)
}

/// Piecewise-constant potential with zero potential outside its support.
#[pyclass(name = "Profile", module = "barrierclock_py", frozen)]
struct PyProfile {
    inner: PotentialProfile,
}

#[pymethods]
impl PyProfile {
    /// Segments as `(x_left, x_right, V)`; gaps are filled with `V = 0`.
    #[new]
    fn new(segments: Vec<(f64, f64, f64)>) -> PyResult<Self> {
        let segs = segments.into_iter().map(|(a, b, v)| Segment::new(a, b, v)).collect();
        Ok(PyProfile { inner: PotentialProfile::new(segs).map_err(err)? })
    }

    /// Barrier of height `v0` on `[-d/2, d/2]`.
    #[staticmethod]
    fn rectangular(v0: f64, d: f64) -> PyResult<Self> {
        Ok(PyProfile { inner: PotentialProfile::rectangular(v0, d).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyProfile { inner: PotentialProfile::from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn segments(&self) -> Vec<(f64, f64, f64)> {
        self.inner.segments().iter().map(|s| (s.x_left, s.x_right, s.potential)).collect()
    }

    fn support(&self) -> Option<(f64, f64)> {
        self.inner.support()
    }

    fn potential_at(&self, x: f64) -> f64 {
        self.inner.potential_at(x)
    }

    fn __repr__(&self) -> String {
        format!("Profile({:?})", self.segments())
    }
}

/// Stationary scattering state at one energy, for both incidence directions.
#[pyclass(name = "Solution", module = "barrierclock_py", frozen)]
struct PySolution {
    inner: ScatteringSolution,
}

#[pymethods]
impl PySolution {
    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy()
    }

    #[getter]
    fn k(&self) -> f64 {
        self.inner.wavenumber()
    }

    #[getter]
    fn t(&self) -> Complex64 {
        self.inner.t()
    }

    #[getter]
    fn r(&self) -> Complex64 {
        self.inner.r()
    }

    #[getter]
    fn t_rev(&self) -> Complex64 {
        self.inner.t_rev()
    }

    #[getter]
    fn r_rev(&self) -> Complex64 {
        self.inner.r_rev()
    }

    #[getter]
    fn transmission(&self) -> f64 {
        self.inner.transmission()
    }

    #[getter]
    fn reflection(&self) -> f64 {
        self.inner.reflection()
    }

    /// `psi_i`, `psi_t` or `psi_r` at `x`; channel is "i", "t" or "r".
    #[pyo3(signature = (x, channel = "i"))]
    fn wavefunction(&self, x: f64, channel: &str) -> PyResult<Complex64> {
        Ok(scattering::wavefunction_at(&self.inner, self::channel(channel)?, x))
    }

    /// Pointwise weak-value density of channel "t", "r" or "d".
    fn density(&self, channel: &str, x: f64) -> PyResult<Complex64> {
        weaktimes::density(&self.inner, time_channel(channel)?, x).map_err(err)
    }

    /// `(tau_T, tau_R, tau_d, w_T, w_R)` over `[x1, x2]`.
    fn channel_times(&self, x1: f64, x2: f64) -> PyResult<PyChannelTimes> {
        Ok(PyChannelTimes { inner: weaktimes::channel_times(&self.inner, &region(x1, x2)?) })
    }

    fn weak_value_time(&self, x1: f64, x2: f64, channel: &str) -> PyResult<Complex64> {
        weaktimes::weak_value_time(&self.inner, &region(x1, x2)?, time_channel(channel)?)
            .map(|t| t.value())
            .map_err(err)
    }

    /// `arg r - arg t`.
    fn phase_difference(&self) -> PyResult<f64> {
        scattering::phase_relation_check(&self.inner).map(|p| p.phase_difference).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Solution(E={}, t={}, r={})", self.inner.energy(), self.inner.t(), self.inner.r())
    }
}

#[pyclass(name = "ChannelTimes", module = "barrierclock_py", frozen)]
struct PyChannelTimes {
    inner: weaktimes::ChannelTimes,
}

#[pymethods]
impl PyChannelTimes {
    #[getter]
    fn tau_t(&self) -> Option<Complex64> {
        self.inner.tau_t.map(|t| t.value())
    }

    #[getter]
    fn tau_r(&self) -> Option<Complex64> {
        self.inner.tau_r.map(|t| t.value())
    }

    #[getter]
    fn tau_d(&self) -> f64 {
        self.inner.tau_d
    }

    #[getter]
    fn w_t(&self) -> f64 {
        self.inner.w_t
    }

    #[getter]
    fn w_r(&self) -> f64 {
        self.inner.w_r
    }

    /// `w_T tau_T + w_R tau_R - tau_d`.
    fn identity_residual(&self) -> Complex64 {
        self.inner.identity_residual()
    }

    fn __repr__(&self) -> String {
        format!(
            "ChannelTimes(tau_t={:?}, tau_r={:?}, tau_d={}, w_t={}, w_r={})",
            self.tau_t(),
            self.tau_r(),
            self.inner.tau_d,
            self.inner.w_t,
            self.inner.w_r
        )
    }
}

#[pyfunction]
#[pyo3(signature = (profile, energy, hbar = 1.0, mass = 1.0))]
fn solve(profile: &PyProfile, energy: f64, hbar: f64, mass: f64) -> PyResult<PySolution> {
    let inner = barrierclock::solve_stationary(&profile.inner, energy, units(hbar, mass)?).map_err(err)?;
    Ok(PySolution { inner })
}

/// Closed-form times of the centred rectangular barrier.
#[pyfunction]
#[pyo3(signature = (v0, d, energy, hbar = 1.0, mass = 1.0))]
fn rectangular_times(v0: f64, d: f64, energy: f64, hbar: f64, mass: f64) -> PyResult<PyChannelTimes> {
    let inner = weaktimes::conditional_times_rectangular(v0, d, energy, units(hbar, mass)?).map_err(err)?;
    Ok(PyChannelTimes { inner })
}

/// `tau_T` on `[x1, x2]` from derivatives of `t` with respect to a uniform
/// potential shift on the region.
#[pyfunction]
#[pyo3(signature = (profile, x1, x2, energy, hbar = 1.0, mass = 1.0))]
fn derivative_time(profile: &PyProfile, x1: f64, x2: f64, energy: f64, hbar: f64, mass: f64) -> PyResult<Complex64> {
    weaktimes::complex_time_via_derivative(&profile.inner, &region(x1, x2)?, energy, units(hbar, mass)?)
        .map(|t| t.value())
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (profile, energy, hbar = 1.0, mass = 1.0))]
fn group_delay(profile: &PyProfile, energy: f64, hbar: f64, mass: f64) -> PyResult<f64> {
    weaktimes::group_delay(&profile.inner, energy, units(hbar, mass)?).map(|g| g.value).map_err(err)
}

/// `(re_limit, im_limit)` of an opaque rectangular barrier.
#[pyfunction]
#[pyo3(signature = (v0, d, energy, hbar = 1.0, mass = 1.0))]
fn opaque_limits(v0: f64, d: f64, energy: f64, hbar: f64, mass: f64) -> PyResult<(f64, f64)> {
    let lim = weaktimes::opaque_asymptotics(v0, d, energy, units(hbar, mass)?).map_err(err)?;
    Ok((lim.re_limit, lim.im_limit))
}

/// Larmor clock on `[x1, x2]`. The initial spin state is coherent along x,
/// or squeezed to `Delta S_z = squeeze` when given.
#[pyfunction]
#[pyo3(signature = (profile, x1, x2, energy, omega, spin = 0.5, squeeze = None, channel = "t", hbar = 1.0, mass = 1.0))]
#[allow(clippy::too_many_arguments)]
fn larmor_clock<'py>(
    py: Python<'py>,
    profile: &PyProfile,
    x1: f64,
    x2: f64,
    energy: f64,
    omega: f64,
    spin: f64,
    squeeze: Option<f64>,
    channel: &str,
    hbar: f64,
    mass: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let state: SpinState = match squeeze {
        Some(w) => clock::squeezed_spin_state(spin, w),
        None => clock::coherent_spin_state(spin),
    }
    .map_err(err)?;
    let res = clock::larmor_spin_s(
        &profile.inner,
        &region(x1, x2)?,
        energy,
        omega,
        &state,
        self::channel(channel)?,
        units(hbar, mass)?,
    )
    .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("omega_l", res.omega_l)?;
    d.set_item("in_plane_angle", res.in_plane_angle)?;
    d.set_item("out_of_plane", res.out_of_plane)?;
    d.set_item("tau_y", res.tau_y)?;
    d.set_item("tau_z", res.tau_z)?;
    d.set_item("norm", res.norm)?;
    Ok(d)
}

/// Gaussian pointer of width `sigma` coupled with strength `g0` to the
/// projector on `[x1, x2]`.
#[pyfunction]
#[pyo3(signature = (profile, x1, x2, energy, g0, sigma = 1.0, channel = "t", hbar = 1.0, mass = 1.0))]
#[allow(clippy::too_many_arguments)]
fn pointer<'py>(
    py: Python<'py>,
    profile: &PyProfile,
    x1: f64,
    x2: f64,
    energy: f64,
    g0: f64,
    sigma: f64,
    channel: &str,
    hbar: f64,
    mass: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let res = clock::pointer_measurement(
        &profile.inner,
        &region(x1, x2)?,
        energy,
        g0,
        sigma,
        self::channel(channel)?,
        units(hbar, mass)?,
    )
    .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("g0", res.g0)?;
    d.set_item("sigma", res.sigma)?;
    d.set_item("dq", res.dq)?;
    d.set_item("dp", res.dp)?;
    d.set_item("norm", res.norm)?;
    Ok(d)
}

fn report_dict<'py>(py: Python<'py>, r: &OracleReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("quantity", &r.quantity)?;
    d.set_item("primary", r.primary)?;
    d.set_item("oracle", r.oracle)?;
    d.set_item("abs_error", r.abs_error)?;
    d.set_item("rel_error", r.rel_error)?;
    d.set_item("tolerance", r.tolerance)?;
    d.set_item("relative", r.relative)?;
    d.set_item("pass", r.pass)?;
    Ok(d)
}

/// Seeded invariant and oracle suite; one dict per report.
#[pyfunction]
#[pyo3(signature = (seed = verify::DEFAULT_SEED, cases = verify::DEFAULT_CASES, tolerance = None))]
fn run_verify<'py>(py: Python<'py>, seed: u64, cases: usize, tolerance: Option<f64>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let opts = VerifyOptions { seed, cases, tolerance_override: tolerance, ..VerifyOptions::default() };
    let reports = py.detach(|| verify::run_suite(&opts));
    reports.iter().map(|r| report_dict(py, r)).collect()
}

#[pymodule]
fn barrierclock_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProfile>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyChannelTimes>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(rectangular_times, m)?)?;
    m.add_function(wrap_pyfunction!(derivative_time, m)?)?;
    m.add_function(wrap_pyfunction!(group_delay, m)?)?;
    m.add_function(wrap_pyfunction!(opaque_limits, m)?)?;
    m.add_function(wrap_pyfunction!(larmor_clock, m)?)?;
    m.add_function(wrap_pyfunction!(pointer, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
