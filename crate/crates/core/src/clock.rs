//! Physical clocks that read out the conditional times.
//!
//! A Larmor clock couples the spin to a field on the region: the spin
//! component `m` sees `V - hbar omega_L m` there. The post-selected amplitudes
//! `a_m = t_m c_m` (or `r_m c_m`) precess in the plane by
//! `-omega_L Re tau` and tilt towards the field by `-omega_L Im tau`, so
//!
//! ```text
//! tau_y = -in_plane_angle / omega_L  ->  Re tau
//! tau_z =  out_of_plane   / omega_L  -> -Im tau   (coherent states)
//! ```
//!
//! with `O(omega_L^2)` corrections. The von Neumann pointer works in its
//! momentum representation, where each `P` sees `V + g0 P` on the region.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::profile::{PotentialProfile, Region};
use crate::scattering::{solve_stationary, Channel};
use crate::{Error, Result, UnitSystem};

/// Spin-`S` state in the `S_z` basis, amplitudes ordered `m = -S, ..., S`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinState {
    twice_s: u32,
    amplitudes: Vec<C64>,
}

impl SpinState {
    /// Normalizes `amplitudes`; their count must be `2S + 1`.
    pub fn new(spin: f64, amplitudes: Vec<C64>) -> Result<Self> {
        let twice_s = twice_spin(spin)?;
        if amplitudes.len() != twice_s as usize + 1 {
            return Err(Error::InvalidArgument(format!(
                "spin {spin} needs {} amplitudes, got {}",
                twice_s + 1,
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidArgument("spin state has zero or non-finite norm".into()));
        }
        Ok(SpinState { twice_s, amplitudes: amplitudes.into_iter().map(|a| a / norm).collect() })
    }

    pub fn spin(&self) -> f64 {
        0.5 * self.twice_s as f64
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `m` for each amplitude index.
    pub fn m_values(&self) -> impl Iterator<Item = f64> + '_ {
        let s = self.spin();
        (0..self.amplitudes.len()).map(move |j| j as f64 - s)
    }

    /// `<S_z>` in units of `hbar`.
    pub fn mean_sz(&self) -> f64 {
        mean_m(&self.amplitudes, self.spin())
    }

    /// `Delta S_z` in units of `hbar`.
    pub fn width_sz(&self) -> f64 {
        let mean = self.mean_sz();
        self.m_values()
            .zip(&self.amplitudes)
            .map(|(m, a)| (m - mean).powi(2) * a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

fn twice_spin(spin: f64) -> Result<u32> {
    let twice = 2.0 * spin;
    if !(spin >= 0.5) || twice.fract() != 0.0 || twice > 100_000.0 {
        return Err(Error::InvalidArgument(format!("spin must be a positive half-integer, got {spin}")));
    }
    Ok(twice as u32)
}

/// `sum m |a_m|^2 / sum |a_m|^2`, accumulated in `+-m` pairs so a symmetric
/// profile gives exactly zero.
fn mean_m(a: &[C64], s: f64) -> f64 {
    let n = a.len();
    let mut first = 0.0;
    let mut total = 0.0;
    for j in 0..n / 2 {
        let m = s - j as f64;
        first += m * (a[n - 1 - j].norm_sqr() - a[j].norm_sqr());
    }
    for x in a {
        total += x.norm_sqr();
    }
    first / total
}

/// Spin coherent state pointing along `x`: binomial `S_z` profile of width
/// `sqrt(S/2)`.
pub fn coherent_spin_state(spin: f64) -> Result<SpinState> {
    let twice_s = twice_spin(spin)?;
    let n = twice_s as usize;
    // ln C(n, j) via running sums of logs
    let mut ln_binom = vec![0.0; n + 1];
    for j in 1..=n / 2 {
        ln_binom[j] = ln_binom[j - 1] + ((n + 1 - j) as f64).ln() - (j as f64).ln();
    }
    // mirror so the profile is exactly symmetric
    for j in n / 2 + 1..=n {
        ln_binom[j] = ln_binom[n - j];
    }
    let half_ln2 = 0.5 * n as f64 * std::f64::consts::LN_2;
    let amplitudes = ln_binom.iter().map(|l| C64::new((0.5 * l - half_ln2).exp(), 0.0)).collect();
    SpinState::new(spin, amplitudes)
}

fn gaussian_state(spin: f64, param: f64) -> SpinState {
    let n = (2.0 * spin) as usize + 1;
    let amps = (0..n)
        .map(|j| {
            let m = j as f64 - spin;
            C64::new((-m * m / (4.0 * param * param)).exp(), 0.0)
        })
        .collect();
    SpinState::new(spin, amps).expect("gaussian profile is normalizable")
}

/// Squeezed proxy: real Gaussian amplitudes `exp(-m^2 / 4 s^2)`, with `s`
/// tuned so the discrete profile has exactly the requested `Delta S_z`.
///
/// `width` must lie in `(0, sqrt(S/2)]`; for half-integer `S` it cannot go
/// below `1/2`, the spread of the two central components.
pub fn squeezed_spin_state(spin: f64, width: f64) -> Result<SpinState> {
    let twice_s = twice_spin(spin)?;
    if !(width > 0.0) {
        return Err(Error::InvalidArgument(format!("squeeze width must be positive, got {width}")));
    }
    let coherent = (0.5 * spin).sqrt();
    if width > coherent * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!("squeeze width {width} exceeds the coherent width {coherent}")));
    }
    let half_integer = twice_s % 2 == 1;
    if half_integer && width < 0.5 {
        return Err(Error::InvalidArgument(format!("half-integer spin cannot be squeezed below 0.5, got {width}")));
    }
    if half_integer && width == 0.5 {
        let mut amps = vec![C64::new(0.0, 0.0); twice_s as usize + 1];
        let mid = twice_s as usize / 2;
        amps[mid] = C64::new(1.0, 0.0);
        amps[mid + 1] = C64::new(1.0, 0.0);
        return SpinState::new(spin, amps);
    }
    // Delta S_z grows monotonically with the Gaussian parameter.
    let (mut lo, mut hi) = (1e-3_f64, 1e3_f64);
    if gaussian_state(spin, hi).width_sz() < width {
        return Ok(gaussian_state(spin, hi));
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if gaussian_state(spin, mid).width_sz() < width {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-15 {
            break;
        }
    }
    Ok(gaussian_state(spin, 0.5 * (lo + hi)))
}

/// Outcome of a Larmor clock run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinClockResult {
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub omega_l: f64,
    /// Rotation about the field axis, `arg <S_+>` of the post-selected state.
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub in_plane_angle: f64,
    /// `<S_z> / (hbar S)` of the post-selected state.
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub out_of_plane: f64,
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub tau_y: f64,
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub tau_z: f64,
    pub channel: Channel,
    /// Post-selection probability `sum |a_m|^2`.
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub norm: f64,
}

fn check_channel(channel: Channel) -> Result<()> {
    if channel == Channel::Incident {
        return Err(Error::InvalidArgument("clock post-selection must be transmitted or reflected".into()));
    }
    Ok(())
}

fn amplitude(profile: &PotentialProfile, energy: f64, units: UnitSystem, channel: Channel) -> Result<C64> {
    let s = solve_stationary(profile, energy, units)?;
    Ok(match channel {
        Channel::Reflected => s.r(),
        _ => s.t(),
    })
}

/// Spin-1/2 Larmor clock: components `m = +-1/2` see `V -+ hbar omega_L / 2`.
pub fn larmor_spin_half(
    profile: &PotentialProfile,
    region: &Region,
    energy: f64,
    omega_l: f64,
    channel: Channel,
    units: UnitSystem,
) -> Result<SpinClockResult> {
    let state = coherent_spin_state(0.5)?;
    larmor_spin_s(profile, region, energy, omega_l, &state, channel, units)
}

/// Spin-`S` Larmor clock for an arbitrary initial state.
pub fn larmor_spin_s(
    profile: &PotentialProfile,
    region: &Region,
    energy: f64,
    omega_l: f64,
    state: &SpinState,
    channel: Channel,
    units: UnitSystem,
) -> Result<SpinClockResult> {
    check_channel(channel)?;
    if !omega_l.is_finite() {
        return Err(Error::NonFinite("omega_L"));
    }
    let s = state.spin();
    let split = profile.split_at_region(region);
    if omega_l == 0.0 {
        let norm = amplitude(profile, energy, units, channel)?.norm_sqr();
        if !(norm > 0.0) {
            return Err(Error::PostSelectedNormZero(norm));
        }
        return Ok(SpinClockResult { omega_l, in_plane_angle: 0.0, out_of_plane: 0.0, tau_y: 0.0, tau_z: 0.0, channel, norm });
    }
    let post: Vec<C64> = state
        .m_values()
        .zip(state.amplitudes())
        .map(|(m, c)| {
            let shifted = split.shifted_on(region, -units.hbar * omega_l * m);
            amplitude(&shifted, energy, units, channel).map(|a| a * c)
        })
        .collect::<Result<_>>()?;
    let norm: f64 = post.iter().map(|a| a.norm_sqr()).sum();
    if !(norm > 0.0) {
        return Err(Error::PostSelectedNormZero(norm));
    }
    // <S_+> = sum_m sqrt(S(S+1) - m(m+1)) a_{m+1}^* a_m
    let raising: C64 = state
        .m_values()
        .zip(post.windows(2))
        .map(|(m, w)| (s * (s + 1.0) - m * (m + 1.0)).sqrt() * w[1].conj() * w[0])
        .sum();
    let in_plane_angle = raising.arg();
    let out_of_plane = mean_m(&post, s) / s;
    Ok(SpinClockResult {
        omega_l,
        in_plane_angle,
        out_of_plane,
        tau_y: -in_plane_angle / omega_l,
        tau_z: out_of_plane / omega_l,
        channel,
        norm,
    })
}

/// Spin-1/2 clock with the field only on a probe region beyond the barrier,
/// post-selected on reflection.
pub fn far_side_field_effect(
    profile: &PotentialProfile,
    barrier_region: &Region,
    probe_region: &Region,
    energy: f64,
    omega_l: f64,
    units: UnitSystem,
) -> Result<SpinClockResult> {
    if probe_region.is_empty() || probe_region.x1 < barrier_region.x2 {
        return Err(Error::ProbeNotBeyondBarrier);
    }
    larmor_spin_half(profile, probe_region, energy, omega_l, Channel::Reflected, units)
}

/// Minimum number of pointer-momentum grid points.
pub const POINTER_GRID_MIN: usize = 2049;

/// Grid half-width in units of `hbar / sigma`: eight standard deviations of
/// `|Phi_0(P)|^2`.
pub const POINTER_HALF_WIDTH: f64 = 4.0;

/// Relative change of `dQ` allowed when the grid is doubled.
pub const POINTER_SELF_CHECK: f64 = 1e-8;

/// Moments of the post-selected pointer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointerOutcome {
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub sigma: f64,
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub g0: f64,
    /// Mean position shift; `g0 Re tau` in the weak limit.
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub dq: f64,
    /// Mean momentum shift; `g0 hbar Im tau / (2 sigma^2)` in the weak limit.
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub dp: f64,
    /// Post-selection probability.
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub norm: f64,
    pub channel: Channel,
    pub grid_points: usize,
}

struct PointerMoments {
    dq: f64,
    dp: f64,
    norm: f64,
}

#[allow(clippy::too_many_arguments)]
fn pointer_moments(
    split: &PotentialProfile,
    region: &Region,
    energy: f64,
    g0: f64,
    sigma: f64,
    channel: Channel,
    units: UnitSystem,
    points: usize,
) -> Result<PointerMoments> {
    let hbar = units.hbar;
    let half = POINTER_HALF_WIDTH * hbar / sigma;
    let dp = 2.0 * half / (points - 1) as f64;
    let grid: Vec<f64> = (0..points).map(|j| -half + j as f64 * dp).collect();
    let amps: Vec<C64> = grid
        .iter()
        .map(|&p| amplitude(&split.shifted_on(region, g0 * p), energy, units, channel))
        .collect::<Result<_>>()?;
    let weights: Vec<f64> = grid
        .iter()
        .zip(&amps)
        .map(|(p, a)| a.norm_sqr() * (-2.0 * p * p * sigma * sigma / (hbar * hbar)).exp())
        .collect();
    let base: f64 = grid.iter().map(|p| (-2.0 * p * p * sigma * sigma / (hbar * hbar)).exp()).sum();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::PostSelectedNormZero(total));
    }
    // phase slope by fourth-order differences of arg(a_{j+1} / a_{j-1})
    let mut slope_sum = 0.0;
    for j in 2..points - 2 {
        let near = (amps[j + 1] / amps[j - 1]).arg();
        let far = (amps[j + 2] / amps[j - 2]).arg();
        slope_sum += weights[j] * (8.0 * near - far) / (12.0 * dp);
    }
    let mut moment = 0.0;
    for j in 0..points / 2 {
        moment += grid[points - 1 - j] * (weights[points - 1 - j] - weights[j]);
    }
    Ok(PointerMoments { dq: -hbar * slope_sum / total, dp: moment / total, norm: total / base })
}

/// Gaussian von Neumann pointer, initial position profile
/// `exp(-Q^2 / 4 sigma^2)`, coupled with strength `g0` to the region
/// projector. The grid is refined once and the run fails if `dQ` moves by
/// more than [`POINTER_SELF_CHECK`] relative.
pub fn pointer_measurement(
    profile: &PotentialProfile,
    region: &Region,
    energy: f64,
    g0: f64,
    sigma: f64,
    channel: Channel,
    units: UnitSystem,
) -> Result<PointerOutcome> {
    check_channel(channel)?;
    if !(g0 >= 0.0 && g0.is_finite()) {
        return Err(Error::InvalidArgument(format!("g0 must be non-negative, got {g0}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    if g0 == 0.0 {
        let a = amplitude(profile, energy, units, channel)?;
        if a.norm_sqr() == 0.0 {
            return Err(Error::PostSelectedNormZero(0.0));
        }
        return Ok(PointerOutcome { sigma, g0, dq: 0.0, dp: 0.0, norm: a.norm_sqr(), channel, grid_points: 0 });
    }
    let split = profile.split_at_region(region);
    let coarse = pointer_moments(&split, region, energy, g0, sigma, channel, units, POINTER_GRID_MIN)?;
    let fine_points = 2 * POINTER_GRID_MIN - 1;
    let fine = pointer_moments(&split, region, energy, g0, sigma, channel, units, fine_points)?;
    let change = (fine.dq - coarse.dq).abs();
    if change > POINTER_SELF_CHECK * fine.dq.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::GridResolution(format!(
            "pointer dQ changed by {change:e} on grid doubling (dQ = {:e})",
            fine.dq
        )));
    }
    Ok(PointerOutcome { sigma, g0, dq: fine.dq, dp: fine.dp, norm: fine.norm, channel, grid_points: fine_points })
}
