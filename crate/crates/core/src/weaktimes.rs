//! Conditional traversal times as weak values of the region projector.
//!
//! For a region `[x1, x2]` and incident flux `hbar k / m`:
//!
//! ```text
//! tau_T = (m / hbar k) * int psi_t^* psi_i / t
//! tau_R = (m / hbar k) * int psi_r^* psi_i / r
//! tau_d = (m / hbar k) * int |psi_i|^2
//! ```
//!
//! The integrals are evaluated in closed form piece by piece; no quadrature
//! is involved on this path.
//!
//! Sign conventions: `Re tau_T = -hbar d(arg t)/dV` and
//! `Im tau_T = +hbar d(ln|t|)/dV` for a uniform rise `dV` of the potential on
//! the region. With these, an opaque rectangular barrier has `Re tau_T > 0`
//! and `Im tau_T < 0`, and the Larmor clock reads `(Re tau_T, -Im tau_T)` as
//! its in-plane and out-of-plane times.

use num_complex::Complex64 as C64;
use serde::{Serialize, Serializer};

use crate::error::UndefinedReason;
use crate::local::integrate_product;
use crate::oracle::richardson_derivative;
use crate::profile::{PotentialProfile, Region};
use crate::scattering::{rectangular_coefficients, solve_stationary, Incidence, ScatteringSolution};
use crate::special::{sinhc, sinhc_excess};
use crate::{Error, Result, UnitSystem};

/// `|r|` (or `|t|`) below which the corresponding channel time is undefined.
pub const VANISHING_AMPLITUDE: f64 = 1e-12;

/// Below this real `kappa d` the rectangular closed forms switch from the
/// `B, C` expressions to the centre-value form, which has no `1/kappa`
/// cancellation.
pub const CLOSED_FORM_MIN_KAPPA_D: f64 = 0.5;

/// Relative step for derivative-based times, in units of `max(E, V_max)`.
pub const DERIVATIVE_STEP: f64 = 1e-5;

/// A complex duration. The real part is the pointer displacement, the
/// imaginary part sets the back-action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexTime(pub C64);

impl ComplexTime {
    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    pub fn value(&self) -> C64 {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

impl Serialize for ComplexTime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Parts {
            #[serde(serialize_with = "crate::format::serialize_f64")]
            re: f64,
            #[serde(serialize_with = "crate::format::serialize_f64")]
            im: f64,
        }
        Parts { re: self.re(), im: self.im() }.serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeChannel {
    Transmitted,
    Reflected,
    Dwell,
}

impl TimeChannel {
    pub fn name(self) -> &'static str {
        match self {
            TimeChannel::Transmitted => "tau_T",
            TimeChannel::Reflected => "tau_R",
            TimeChannel::Dwell => "tau_d",
        }
    }
}

impl std::str::FromStr for TimeChannel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t" | "transmitted" => Ok(TimeChannel::Transmitted),
            "r" | "reflected" => Ok(TimeChannel::Reflected),
            "d" | "dwell" => Ok(TimeChannel::Dwell),
            other => Err(Error::InvalidArgument(format!("unknown time channel '{other}'"))),
        }
    }
}

/// `tau_T`, `tau_R`, `tau_d` with the channel weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelTimes {
    pub tau_t: Option<ComplexTime>,
    pub tau_r: Option<ComplexTime>,
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub tau_d: f64,
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub w_t: f64,
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub w_r: f64,
    pub tau_t_undefined: Option<UndefinedReason>,
    pub tau_r_undefined: Option<UndefinedReason>,
}

impl ChannelTimes {
    /// `w_T tau_T + w_R tau_R - tau_d`; an undefined time contributes
    /// nothing since its weight is zero.
    pub fn identity_residual(&self) -> C64 {
        let mut sum = C64::new(-self.tau_d, 0.0);
        if let Some(t) = self.tau_t {
            sum += self.w_t * t.0;
        }
        if let Some(r) = self.tau_r {
            sum += self.w_r * r.0;
        }
        sum
    }

    /// `w_T Im tau_T + w_R Im tau_R`.
    pub fn imaginary_balance(&self) -> f64 {
        self.tau_t.map_or(0.0, |t| self.w_t * t.im()) + self.tau_r.map_or(0.0, |r| self.w_r * r.im())
    }
}

fn assemble(flux: f64, t: C64, r: C64, prod_t: C64, prod_r: C64, dwell: f64) -> ChannelTimes {
    let (tau_t, tau_t_undefined) = if t.norm() > 0.0 {
        (Some(ComplexTime(flux * prod_t / t)), None)
    } else {
        (None, Some(UndefinedReason::TransmissionVanishes))
    };
    let (tau_r, tau_r_undefined) = if r.norm() > VANISHING_AMPLITUDE {
        (Some(ComplexTime(flux * prod_r / r)), None)
    } else {
        (None, Some(UndefinedReason::ReflectionVanishes))
    };
    ChannelTimes {
        tau_t,
        tau_r,
        tau_d: flux * dwell,
        w_t: t.norm_sqr(),
        w_r: r.norm_sqr(),
        tau_t_undefined,
        tau_r_undefined,
    }
}

/// Closed-form times for the centred rectangular barrier over the barrier
/// itself.
///
/// With `B`, `C` the inside amplitudes and `S = sinh(kappa d)/kappa`:
/// `tau_T ~ [(B^2 + C^2) d + 2BC S] / t`, `tau_R ~ [2BC d + (B^2 + C^2) S] / r`
/// and `tau_d ~ 2 Re(B^* C) d + (|B|^2 + |C|^2) S`. Near threshold and above
/// the barrier the equivalent centre-value form is used instead:
/// with `a = psi(0)`, `b = psi'(0)`, `tau_T ~ a^2 (d + S)/2 - b^2 d^3 T/2`
/// where `T = (sinhc(kappa d) - 1)/(kappa d)^2`.
pub fn conditional_times_rectangular(v0: f64, d: f64, energy: f64, units: UnitSystem) -> Result<ChannelTimes> {
    let rc = rectangular_coefficients(v0, d, energy, units)?;
    let flux = units.inverse_flux(rc.k);
    let kd = rc.kappa * d;
    let s = d * sinhc(kd);
    let (prod_t, prod_r, dwell) = match (rc.b, rc.c) {
        (Some(b), Some(c)) if rc.kappa.im == 0.0 && kd.re >= CLOSED_FORM_MIN_KAPPA_D => {
            let sq = b * b + c * c;
            let bc2 = 2.0 * b * c;
            (sq * d + bc2 * s, bc2 * d + sq * s, 2.0 * (b.conj() * c).re * d + (b.norm_sqr() + c.norm_sqr()) * s.re)
        }
        _ => {
            let a = rc.centre_value;
            let b = rc.centre_slope;
            let even = 0.5 * (d + s);
            let odd = 0.5 * d * d * d * sinhc_excess(kd);
            (a * a * even - b * b * odd, a * a * even + b * b * odd, a.norm_sqr() * even.re + b.norm_sqr() * odd.re)
        }
    };
    Ok(assemble(flux, rc.t, rc.r, prod_t, prod_r, dwell))
}

/// The three raw overlap integrals over `region`, without flux or amplitude
/// factors: `int phi psi_i`, `int psi_i^2`, `int |psi_i|^2`, where `phi` is
/// the unit right-incidence solution (`phi = conj(psi_t)`).
fn overlaps(solution: &ScatteringSolution, region: &Region) -> (C64, C64, f64) {
    let mut prod_t = C64::new(0.0, 0.0);
    let mut prod_r = C64::new(0.0, 0.0);
    let mut dwell = 0.0;
    for (slot, lo, hi) in solution.slots_in(region) {
        let psi = solution.local(Incidence::FromLeft, slot);
        let phi = solution.local(Incidence::FromRight, slot);
        prod_t += integrate_product(&phi, &psi, lo, hi);
        prod_r += integrate_product(&psi, &psi, lo, hi);
        dwell += integrate_product(&psi.conj(), &psi, lo, hi).re;
    }
    (prod_t, prod_r, dwell)
}

/// All three conditional times over `region`.
pub fn channel_times(solution: &ScatteringSolution, region: &Region) -> ChannelTimes {
    let (prod_t, prod_r, dwell) = overlaps(solution, region);
    assemble(solution.inverse_flux(), solution.t(), solution.r(), prod_t, prod_r, dwell)
}

/// Weak value of the projector onto `region`, post-selected on `channel`,
/// divided by the incident flux.
pub fn weak_value_time(solution: &ScatteringSolution, region: &Region, channel: TimeChannel) -> Result<ComplexTime> {
    let times = channel_times(solution, region);
    pick(&times, channel)
}

fn pick(times: &ChannelTimes, channel: TimeChannel) -> Result<ComplexTime> {
    match channel {
        TimeChannel::Transmitted => times.tau_t.ok_or(Error::UndefinedChannelTime {
            channel: "tau_T",
            reason: UndefinedReason::TransmissionVanishes,
        }),
        TimeChannel::Reflected => times.tau_r.ok_or(Error::UndefinedChannelTime {
            channel: "tau_R",
            reason: UndefinedReason::ReflectionVanishes,
        }),
        TimeChannel::Dwell => Ok(ComplexTime(C64::new(times.tau_d, 0.0))),
    }
}

/// Pointwise integrands of the three times at one position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DwellDensitySample {
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub x: f64,
    pub density_t: Option<ComplexTime>,
    pub density_r: Option<ComplexTime>,
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub density_d: f64,
}

pub fn dwell_density(solution: &ScatteringSolution, x: f64) -> DwellDensitySample {
    let flux = solution.inverse_flux();
    let psi = solution.incidence_value(Incidence::FromLeft, x);
    let phi = solution.incidence_value(Incidence::FromRight, x);
    let (t, r) = (solution.t(), solution.r());
    DwellDensitySample {
        x,
        density_t: (t.norm() > 0.0).then(|| ComplexTime(flux * phi * psi / t)),
        density_r: (r.norm() > VANISHING_AMPLITUDE).then(|| ComplexTime(flux * psi * psi / r)),
        density_d: flux * psi.norm_sqr(),
    }
}

/// Density of one channel at `x` (per unit length).
pub fn density(solution: &ScatteringSolution, channel: TimeChannel, x: f64) -> Result<C64> {
    let s = dwell_density(solution, x);
    let times = ChannelTimes {
        tau_t: s.density_t,
        tau_r: s.density_r,
        tau_d: s.density_d,
        w_t: 0.0,
        w_r: 0.0,
        tau_t_undefined: None,
        tau_r_undefined: None,
    };
    pick(&times, channel).map(|c| c.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" | "l" => Ok(Side::Left),
            "right" | "r" => Ok(Side::Right),
            other => Err(Error::InvalidArgument(format!("unknown side '{other}'"))),
        }
    }
}

/// Period-mean of a channel density outside the support, per unit length.
///
/// | side  | T            | R   | dwell          |
/// |-------|--------------|-----|----------------|
/// | left  | `t_rev / t`  | `2` | `1 + abs(r)^2` |
/// | right | `1`          | `0` | `abs(t)^2`     |
///
/// each times `m / (hbar k)`.
pub fn density_baseline(solution: &ScatteringSolution, channel: TimeChannel, side: Side) -> Result<C64> {
    let flux = solution.inverse_flux();
    let (t, r) = (solution.t(), solution.r());
    let base = match (side, channel) {
        (_, TimeChannel::Transmitted) if t.norm() == 0.0 => {
            return Err(Error::UndefinedChannelTime { channel: "tau_T", reason: UndefinedReason::TransmissionVanishes })
        }
        (_, TimeChannel::Reflected) if r.norm() <= VANISHING_AMPLITUDE => {
            return Err(Error::UndefinedChannelTime { channel: "tau_R", reason: UndefinedReason::ReflectionVanishes })
        }
        (Side::Left, TimeChannel::Transmitted) => solution.t_rev() / t,
        (Side::Left, TimeChannel::Reflected) => C64::new(2.0, 0.0),
        (Side::Left, TimeChannel::Dwell) => C64::new(1.0 + r.norm_sqr(), 0.0),
        (Side::Right, TimeChannel::Transmitted) => C64::new(1.0, 0.0),
        (Side::Right, TimeChannel::Reflected) => C64::new(0.0, 0.0),
        (Side::Right, TimeChannel::Dwell) => C64::new(t.norm_sqr(), 0.0),
    };
    Ok(flux * base)
}

/// Region covering `n_periods` density periods `pi / k` next to the support.
pub fn oscillation_region(solution: &ScatteringSolution, side: Side, n_periods: u32) -> Region {
    let (a, b) = solution.support().unwrap_or((0.0, 0.0));
    let len = n_periods as f64 * std::f64::consts::PI / solution.wavenumber();
    match side {
        Side::Left => Region { x1: a - len, x2: a },
        Side::Right => Region { x1: b, x2: b + len },
    }
}

/// Integral of `(density - baseline)` over `n_periods` whole periods on one
/// side of the support. Vanishes for every channel.
pub fn oscillation_budget(solution: &ScatteringSolution, channel: TimeChannel, side: Side, n_periods: u32) -> Result<C64> {
    if n_periods == 0 {
        return Err(Error::InvalidArgument("n_periods must be at least 1".into()));
    }
    let region = oscillation_region(solution, side, n_periods);
    let baseline = density_baseline(solution, channel, side)?;
    let total = weak_value_time(solution, &region, channel)?;
    Ok(total.0 - baseline * region.length())
}

/// Complex time from the response of `t` to a uniform potential rise on
/// `region`: `Re = -hbar d(arg t)/dV`, `Im = hbar d(ln|t|)/dV`, by central
/// differences with two-level Richardson extrapolation.
///
/// The region need not coincide with existing segment edges; the profile is
/// split at the region ends first.
pub fn complex_time_via_derivative(
    profile: &PotentialProfile,
    region: &Region,
    energy: f64,
    units: UnitSystem,
) -> Result<ComplexTime> {
    let base = solve_stationary(profile, energy, units)?;
    let t0 = base.t();
    if t0.norm() == 0.0 {
        return Err(Error::UndefinedChannelTime { channel: "tau_T", reason: UndefinedReason::TransmissionVanishes });
    }
    if region.is_empty() {
        return Ok(ComplexTime(C64::new(0.0, 0.0)));
    }
    let split = profile.split_at_region(region);
    let h = DERIVATIVE_STEP * energy.max(profile.max_potential());
    let ratio = |dv: f64| -> C64 {
        let shifted = split.shifted_on(region, dv);
        solve_stationary(&shifted, energy, units).map(|s| s.t() / t0).unwrap_or(C64::new(f64::NAN, 0.0))
    };
    let phase = richardson_derivative(|dv| ratio(dv).arg(), 0.0, h);
    let log_mod = richardson_derivative(|dv| ratio(dv).norm().ln(), 0.0, h);
    let value = C64::new(-units.hbar * phase.value, units.hbar * log_mod.value);
    if !value.is_finite() {
        return Err(Error::NonFinite("derivative time"));
    }
    Ok(ComplexTime(value))
}

/// Convention used for the phase-time reference length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupDelayReference {
    /// `hbar d/dE [arg t + k D]`, `D` the total support width: the delay
    /// measured against free flight across the support.
    FreeFlightAcrossSupport,
}

impl GroupDelayReference {
    pub fn formula(self) -> &'static str {
        match self {
            GroupDelayReference::FreeFlightAcrossSupport => "hbar d/dE [arg t + k D]",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupDelay {
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub value: f64,
    pub reference: GroupDelayReference,
}

pub fn group_delay(profile: &PotentialProfile, energy: f64, units: UnitSystem) -> Result<GroupDelay> {
    let base = solve_stationary(profile, energy, units)?;
    let (t0, k0) = (base.t(), base.wavenumber());
    let width = profile.width();
    let h = (DERIVATIVE_STEP * energy.max(profile.max_potential())).min(0.25 * energy);
    let phase = |e: f64| -> f64 {
        let e = energy + e;
        match solve_stationary(profile, e, units) {
            Ok(s) => (s.t() / t0).arg() + (units.wavenumber(e) - k0) * width,
            Err(_) => f64::NAN,
        }
    };
    let d = richardson_derivative(phase, 0.0, h);
    if !d.value.is_finite() {
        return Err(Error::NonFinite("group delay"));
    }
    Ok(GroupDelay { value: units.hbar * d.value, reference: GroupDelayReference::FreeFlightAcrossSupport })
}

/// Opaque-barrier reference values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpaqueLimits {
    /// `m k / (hbar kappa k0^2)` with `k0^2 = 2 m V0 / hbar^2`.
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub re_limit: f64,
    /// `m d / (hbar kappa)`.
    #[serde(serialize_with = "crate::format::serialize_f64")]
    pub im_limit: f64,
}

impl OpaqueLimits {
    pub fn modulus(&self) -> f64 {
        self.re_limit.hypot(self.im_limit)
    }
}

pub fn opaque_asymptotics(v0: f64, d: f64, energy: f64, units: UnitSystem) -> Result<OpaqueLimits> {
    units.validate()?;
    if !(energy > 0.0) {
        return Err(Error::NonPositiveEnergy(energy));
    }
    if energy >= v0 {
        return Err(Error::NotTunneling { energy, barrier: v0 });
    }
    let (m, hbar) = (units.mass, units.hbar);
    let k = units.wavenumber(energy);
    let kappa = units.kappa_sq(v0, energy).sqrt();
    let k0_sq = 2.0 * m * v0 / (hbar * hbar);
    Ok(OpaqueLimits { re_limit: m * k / (hbar * kappa * k0_sq), im_limit: m * d / (hbar * kappa) })
}
