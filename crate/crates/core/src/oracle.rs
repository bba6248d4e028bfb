//! Brute-force validators for the primary path.
//!
//! Nothing here reuses the closed-form machinery: scattering amplitudes come
//! from direct RK4 integration of the Schrödinger equation, overlap integrals
//! from adaptive Gauss-Kronrod quadrature of pointwise wavefunctions, and
//! derivatives from Richardson-extrapolated central differences.
//!
//! The integrator needs at least 50 steps per `1/k` and per `1/kappa_max`.
//! Opaque barriers with `kappa d > 30` are outside its budget and are not
//! compared against it.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::profile::{PotentialProfile, Region};
use crate::scattering::{wavefunction_at, Channel, ScatteringSolution};
use crate::weaktimes::{ComplexTime, TimeChannel};
use crate::{Error, Result, UnitSystem};

/// Minimum steps per local length scale for [`integrate_schrodinger`].
pub const POINTS_PER_SCALE: f64 = 50.0;

/// Largest `kappa d` the dense integrator is trusted with.
pub const OPAQUE_BUDGET: f64 = 30.0;

/// Largest admissible step for the given profile and energy.
pub fn max_grid_step(profile: &PotentialProfile, energy: f64, units: UnitSystem) -> f64 {
    let scale = 2.0 * units.mass / (units.hbar * units.hbar);
    let k = (scale * energy).sqrt();
    let stiff = profile
        .segments()
        .iter()
        .map(|s| (scale * (s.potential - energy)).abs().sqrt())
        .fold(k, f64::max);
    1.0 / (POINTS_PER_SCALE * stiff)
}

/// Integrates `psi'' = (2m/hbar^2)(V - E) psi` with classical RK4 from the
/// right edge of the support, where `psi = exp(ikx)`, to the left edge, and
/// decomposes the result into incident and reflected plane waves.
pub fn integrate_schrodinger(profile: &PotentialProfile, energy: f64, grid_step: f64, units: UnitSystem) -> Result<(C64, C64)> {
    units.validate()?;
    if !(energy > 0.0) {
        return Err(Error::NonPositiveEnergy(energy));
    }
    let limit = max_grid_step(profile, energy, units);
    if !(grid_step > 0.0) || grid_step > limit {
        return Err(Error::GridResolution(format!("grid step {grid_step} exceeds the limit {limit}")));
    }
    let Some((xl, xr)) = profile.support() else {
        return Ok((C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
    };
    let scale = 2.0 * units.mass / (units.hbar * units.hbar);
    let k = (scale * energy).sqrt();
    let ik = C64::new(0.0, k);
    let mut psi = (ik * xr).exp();
    let mut dpsi = ik * psi;
    for seg in profile.segments().iter().rev() {
        let q = scale * (seg.potential - energy);
        let n = (seg.width() / grid_step).ceil().max(1.0) as usize;
        // stepping leftward: h < 0
        let h = -seg.width() / n as f64;
        for _ in 0..n {
            let (k1p, k1d) = (dpsi, q * psi);
            let (k2p, k2d) = (dpsi + 0.5 * h * k1d, q * (psi + 0.5 * h * k1p));
            let (k3p, k3d) = (dpsi + 0.5 * h * k2d, q * (psi + 0.5 * h * k2p));
            let (k4p, k4d) = (dpsi + h * k3d, q * (psi + h * k3p));
            psi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            dpsi += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        }
    }
    let incoming = 0.5 * (psi + dpsi / ik) * (-ik * xl).exp();
    let outgoing = 0.5 * (psi - dpsi / ik) * (ik * xl).exp();
    Ok((1.0 / incoming, outgoing / incoming))
}

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7-K15 panel: (Kronrod estimate, |Kronrod - Gauss|).
fn gk15(f: &impl Fn(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

/// Maximum number of panels before giving up.
pub const QUADRATURE_BUDGET: usize = 20_000;

/// Adaptive G7-K15 integration over the listed breakpoints to absolute
/// tolerance `tol`.
pub fn adaptive_integrate(f: impl Fn(f64) -> C64, breakpoints: &[f64], tol: f64) -> Result<C64> {
    let mut panels: Vec<(f64, f64, C64, f64)> = breakpoints
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (v, e) = gk15(&f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    let mut used = panels.len();
    loop {
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= tol {
            return Ok(panels.iter().map(|p| p.2).sum());
        }
        if used >= QUADRATURE_BUDGET {
            return Err(Error::QuadratureNoConvergence(used));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .3.total_cmp(&b.1 .3))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let (a, b, _, _) = panels.swap_remove(worst);
        let m = 0.5 * (a + b);
        for (lo, hi) in [(a, m), (m, b)] {
            let (v, e) = gk15(&f, lo, hi);
            panels.push((lo, hi, v, e));
        }
        used += 2;
    }
}

/// The conditional time of `channel` over `region` by adaptive quadrature of
/// `psi_f^* psi_i` evaluated point by point.
pub fn quadrature_weak_value(
    solution: &ScatteringSolution,
    region: &Region,
    channel: TimeChannel,
    tolerance: f64,
) -> Result<ComplexTime> {
    if region.is_empty() {
        return Ok(ComplexTime(C64::new(0.0, 0.0)));
    }
    let mut points = vec![region.x1];
    points.extend(solution.edges().into_iter().filter(|&e| e > region.x1 && e < region.x2));
    points.push(region.x2);
    let final_channel = match channel {
        TimeChannel::Transmitted => Channel::Transmitted,
        TimeChannel::Reflected => Channel::Reflected,
        TimeChannel::Dwell => Channel::Incident,
    };
    let integrand = |x: f64| wavefunction_at(solution, final_channel, x).conj() * wavefunction_at(solution, Channel::Incident, x);
    let amplitude = match channel {
        TimeChannel::Transmitted => solution.t(),
        TimeChannel::Reflected => solution.r(),
        TimeChannel::Dwell => C64::new(1.0, 0.0),
    };
    if amplitude.norm() == 0.0 {
        return Err(Error::InvalidArgument("post-selected amplitude vanishes".into()));
    }
    // tolerance is on the time; convert to the raw integral
    let raw_tol = tolerance * amplitude.norm() / solution.inverse_flux();
    let integral = adaptive_integrate(integrand, &points, raw_tol)?;
    let mut value = solution.inverse_flux() * integral / amplitude;
    if channel == TimeChannel::Dwell {
        value.im = 0.0;
    }
    Ok(ComplexTime(value))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeEstimate {
    pub value: f64,
    /// Disagreement between the two Richardson levels.
    pub error: f64,
}

impl DerivativeEstimate {
    /// Fails when the error estimate exceeds `bound`.
    pub fn within(self, bound: f64) -> Result<Self> {
        if self.error <= bound {
            Ok(self)
        } else {
            Err(Error::DerivativeInaccurate { estimate: self.error, bound })
        }
    }
}

/// Central differences at steps `h` and `h/2`, each once extrapolated, then
/// extrapolated again: `D = (16 D(h/2) - D(h)) / 15` at the first level.
pub fn richardson_derivative(f: impl Fn(f64) -> f64, x0: f64, base_step: f64) -> DerivativeEstimate {
    let central = |h: f64| (f(x0 + h) - f(x0 - h)) / (2.0 * h);
    let d1 = central(base_step);
    let d2 = central(0.5 * base_step);
    let d4 = central(0.25 * base_step);
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d4 - d2) / 3.0;
    let value = (16.0 * r2 - r1) / 15.0;
    DerivativeEstimate { value, error: (r2 - value).abs() }
}

/// One primary-versus-oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub quantity: String,
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub primary: f64,
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub oracle: f64,
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub abs_error: f64,
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub rel_error: f64,
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub tolerance: f64,
    /// Whether `tolerance` bounds the relative (true) or absolute error.
    pub relative: bool,
    pub pass: bool,
}

impl OracleReport {
    /// Relative comparison; falls back to absolute when the oracle is zero.
    pub fn relative(quantity: impl Into<String>, primary: f64, oracle: f64, tolerance: f64) -> Self {
        let scale = if oracle == 0.0 { 1.0 } else { oracle.abs() };
        OracleReport::scaled(quantity, primary, oracle, scale, tolerance)
    }

    /// Error measured relative to an explicit `scale`, e.g. the modulus of
    /// the complex quantity whose real or imaginary part is compared.
    pub fn scaled(quantity: impl Into<String>, primary: f64, oracle: f64, scale: f64, tolerance: f64) -> Self {
        let abs_error = (primary - oracle).abs();
        let rel_error = abs_error / scale;
        OracleReport {
            quantity: quantity.into(),
            primary,
            oracle,
            abs_error,
            rel_error,
            tolerance,
            relative: true,
            pass: rel_error <= tolerance,
        }
    }

    pub fn absolute(quantity: impl Into<String>, primary: f64, oracle: f64, tolerance: f64) -> Self {
        let abs_error = (primary - oracle).abs();
        let rel_error = if oracle == 0.0 { abs_error } else { abs_error / oracle.abs() };
        OracleReport {
            quantity: quantity.into(),
            primary,
            oracle,
            abs_error,
            rel_error,
            tolerance,
            relative: false,
            pass: abs_error <= tolerance,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl std::fmt::Display for OracleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {}: primary {:e}, oracle {:e}, {} error {:e} (tolerance {:e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.quantity,
            self.primary,
            self.oracle,
            if self.relative { "relative" } else { "absolute" },
            if self.relative { self.rel_error } else { self.abs_error },
            self.tolerance
        )
    }
}
