//! Stationary scattering off a piecewise-constant potential.
//!
//! Every piece carries two local solutions. Opaque or oscillatory pieces
//! (`|kappa| w >= 1`) use exponentials anchored so each is at most one in
//! magnitude inside the piece; thin or near-threshold pieces use
//! `cosh(kappa y)` and `sinh(kappa y)/kappa`, which stay regular at
//! `kappa = 0`. Continuity of `psi` and `psi'` at all `n + 1` edges gives a
//! banded `(2n + 2)`-square system in the piece coefficients plus the two
//! outgoing amplitudes. One factorization serves both incidence directions.
//!
//! Plane waves use the absolute coordinate, `exp(i k x)`, so a barrier
//! centred on the origin reproduces the textbook phases.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::local::{Local, Wave, BASIS_SWITCH};
use crate::profile::{PotentialProfile, Region};
use crate::special::{kappa_from_sq, sinhc};
use crate::{Error, Result, UnitSystem};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Which of the three stationary states to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    /// `psi_i`: unit wave incident from the left, only outgoing waves on the right.
    Incident,
    /// `psi_t`: final transmitted state, only right-moving waves on the left.
    Transmitted,
    /// `psi_r = conj(psi_i)`: final reflected state.
    Reflected,
}

impl std::str::FromStr for Channel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "incident" => Ok(Channel::Incident),
            "t" | "transmitted" => Ok(Channel::Transmitted),
            "r" | "reflected" => Ok(Channel::Reflected),
            other => Err(Error::InvalidArgument(format!("unknown channel '{other}'"))),
        }
    }
}

/// Direction of the unit incident wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Incidence {
    FromLeft,
    FromRight,
}

/// Local basis chosen for a piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// `coef_plus * exp(kappa (x - x_right)) + coef_minus * exp(-kappa (x - x_left))`.
    Exponential,
    /// `coef_plus * cosh(kappa (x - x_left)) + coef_minus * sinh(kappa (x - x_left)) / kappa`.
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SegmentCoefficients {
    pub basis: Basis,
    pub coef_plus: C64,
    pub coef_minus: C64,
}

#[derive(Debug, Clone)]
struct Piece {
    x_left: f64,
    x_right: f64,
    potential: f64,
    kappa: C64,
    basis: Basis,
}

impl Piece {
    /// Values and derivatives at `x` of the two basis functions.
    fn basis_at(&self, x: f64) -> [(C64, C64); 2] {
        let kappa = self.kappa;
        match self.basis {
            Basis::Exponential => {
                let g = (kappa * (x - self.x_right)).exp();
                let d = (-kappa * (x - self.x_left)).exp();
                [(g, kappa * g), (d, -kappa * d)]
            }
            Basis::Regular => {
                let y = x - self.x_left;
                let z = kappa * y;
                let c = z.cosh();
                let s = y * sinhc(z);
                [(c, kappa * kappa * s), (s, c)]
            }
        }
    }

    fn local(&self, coefs: SegmentCoefficients) -> Local {
        match self.basis {
            Basis::Exponential => Local::Waves(vec![
                Wave { coef: coefs.coef_plus, rate: self.kappa, anchor: self.x_right },
                Wave { coef: coefs.coef_minus, rate: -self.kappa, anchor: self.x_left },
            ]),
            Basis::Regular => Local::Entire {
                x0: self.x_left,
                kappa: self.kappa,
                value: coefs.coef_plus,
                slope: coefs.coef_minus,
            },
        }
    }
}

/// Scattering state of one energy: amplitudes for both incidence
/// directions and the coefficients of every piece.
#[derive(Debug, Clone)]
pub struct ScatteringSolution {
    energy: f64,
    k: f64,
    units: UnitSystem,
    pieces: Vec<Piece>,
    t: C64,
    r: C64,
    t_rev: C64,
    r_rev: C64,
    from_left: Vec<SegmentCoefficients>,
    from_right: Vec<SegmentCoefficients>,
}

/// Solves the stationary problem at energy `energy` for both a unit wave
/// incident from the left and one incident from the right.
pub fn solve_stationary(profile: &PotentialProfile, energy: f64, units: UnitSystem) -> Result<ScatteringSolution> {
    units.validate()?;
    if !energy.is_finite() {
        return Err(Error::NonFinite("energy"));
    }
    if energy <= 0.0 {
        return Err(Error::NonPositiveEnergy(energy));
    }
    let k = units.wavenumber(energy);
    let pieces: Vec<Piece> = profile
        .segments()
        .iter()
        .map(|s| {
            let kappa = kappa_from_sq(units.kappa_sq(s.potential, energy));
            let basis = if kappa.norm() * s.width() < BASIS_SWITCH { Basis::Regular } else { Basis::Exponential };
            Piece { x_left: s.x_left, x_right: s.x_right, potential: s.potential, kappa, basis }
        })
        .collect();

    if pieces.is_empty() {
        return Ok(ScatteringSolution {
            energy,
            k,
            units,
            pieces,
            t: ONE,
            r: ZERO,
            t_rev: ONE,
            r_rev: ZERO,
            from_left: Vec::new(),
            from_right: Vec::new(),
        });
    }

    let n = pieces.len();
    let dim = 2 * n + 2;
    let mut matrix = vec![ZERO; dim * dim];
    let mut rhs_left = vec![ZERO; dim];
    let mut rhs_right = vec![ZERO; dim];
    let ik = C64::new(0.0, k);

    // Column layout: 0 = left outgoing exp(-ikx), 1 + 2j and 2 + 2j = piece j,
    // dim - 1 = right outgoing exp(+ikx).
    for edge in 0..=n {
        let x = if edge < n { pieces[edge].x_left } else { pieces[n - 1].x_right };
        let row_v = 2 * edge;
        let row_d = 2 * edge + 1;
        let mut scale = k;
        if edge > 0 {
            scale = scale.max(pieces[edge - 1].kappa.norm());
        }
        if edge < n {
            scale = scale.max(pieces[edge].kappa.norm());
        }
        let inv = 1.0 / scale;
        let mut put = |col: usize, (v, d): (C64, C64), sign: f64| {
            matrix[row_v * dim + col] += sign * v;
            matrix[row_d * dim + col] += sign * d * inv;
        };
        // left side of the edge: +, right side: -
        if edge == 0 {
            let w = (-ik * x).exp();
            put(0, (w, -ik * w), 1.0);
            let win = (ik * x).exp();
            rhs_left[row_v] -= win;
            rhs_left[row_d] -= ik * win * inv;
        } else {
            let p = &pieces[edge - 1];
            let [b0, b1] = p.basis_at(x);
            put(1 + 2 * (edge - 1), b0, 1.0);
            put(2 + 2 * (edge - 1), b1, 1.0);
        }
        if edge == n {
            let w = (ik * x).exp();
            put(dim - 1, (w, ik * w), -1.0);
            let win = (-ik * x).exp();
            rhs_right[row_v] += win;
            rhs_right[row_d] += -ik * win * inv;
        } else {
            let p = &pieces[edge];
            let [b0, b1] = p.basis_at(x);
            put(1 + 2 * edge, b0, -1.0);
            put(2 + 2 * edge, b1, -1.0);
        }
    }

    let lu = LuFactor::new(matrix, dim)?;
    let sol_l = lu.solve(rhs_left);
    let sol_r = lu.solve(rhs_right);
    let unpack = |sol: &[C64]| -> Vec<SegmentCoefficients> {
        pieces
            .iter()
            .enumerate()
            .map(|(j, p)| SegmentCoefficients { basis: p.basis, coef_plus: sol[1 + 2 * j], coef_minus: sol[2 + 2 * j] })
            .collect()
    };
    let from_left = unpack(&sol_l);
    let from_right = unpack(&sol_r);
    let solution = ScatteringSolution {
        energy,
        k,
        units,
        t: sol_l[dim - 1],
        r: sol_l[0],
        t_rev: sol_r[0],
        r_rev: sol_r[dim - 1],
        pieces,
        from_left,
        from_right,
    };
    if !(solution.t.is_finite() && solution.r.is_finite()) {
        return Err(Error::NonFinite("scattering amplitudes"));
    }
    Ok(solution)
}

impl ScatteringSolution {
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn wavenumber(&self) -> f64 {
        self.k
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    /// Transmission amplitude for incidence from the left.
    pub fn t(&self) -> C64 {
        self.t
    }

    pub fn r(&self) -> C64 {
        self.r
    }

    /// Transmission amplitude for incidence from the right.
    pub fn t_rev(&self) -> C64 {
        self.t_rev
    }

    pub fn r_rev(&self) -> C64 {
        self.r_rev
    }

    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }

    /// `m / (hbar k)`, the inverse incident flux.
    pub fn inverse_flux(&self) -> f64 {
        self.units.inverse_flux(self.k)
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        Some((self.pieces.first()?.x_left, self.pieces.last()?.x_right))
    }

    /// Segment edges `x_0 < x_1 < ... < x_n`.
    pub fn edges(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.pieces.iter().map(|p| p.x_left).collect();
        if let Some(p) = self.pieces.last() {
            e.push(p.x_right);
        }
        e
    }

    /// `(x_left, x_right, V)` of each piece.
    pub fn segments(&self) -> Vec<(f64, f64, f64)> {
        self.pieces.iter().map(|p| (p.x_left, p.x_right, p.potential)).collect()
    }

    pub fn segment_coefficients(&self, incidence: Incidence) -> &[SegmentCoefficients] {
        match incidence {
            Incidence::FromLeft => &self.from_left,
            Incidence::FromRight => &self.from_right,
        }
    }

    /// Local representation of the unit-incidence solution on interval
    /// `slot` (0 = left of support, `1..=n` = pieces, `n + 1` = right).
    pub(crate) fn local(&self, incidence: Incidence, slot: usize) -> Local {
        let n = self.pieces.len();
        let ik = C64::new(0.0, self.k);
        let plane = |coef: C64, rate: C64| Wave { coef, rate, anchor: 0.0 };
        match (incidence, slot) {
            (Incidence::FromLeft, 0) => Local::Waves(vec![plane(ONE, ik), plane(self.r, -ik)]),
            (Incidence::FromLeft, s) if s == n + 1 => Local::Waves(vec![plane(self.t, ik)]),
            (Incidence::FromRight, 0) => Local::Waves(vec![plane(self.t_rev, -ik)]),
            (Incidence::FromRight, s) if s == n + 1 => Local::Waves(vec![plane(ONE, -ik), plane(self.r_rev, ik)]),
            (inc, s) => self.pieces[s - 1].local(self.segment_coefficients(inc)[s - 1]),
        }
    }

    /// Intervals paired with their slot index; outer intervals are clipped
    /// to `region` so everything stays finite.
    pub(crate) fn slots_in(&self, region: &Region) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::new();
        let Some((a, b)) = self.support() else {
            if let Some((lo, hi)) = region.clip(f64::NEG_INFINITY, f64::INFINITY) {
                out.push((0, lo, hi));
            }
            return out;
        };
        if let Some((lo, hi)) = region.clip(f64::NEG_INFINITY, a) {
            out.push((0, lo, hi));
        }
        for (j, p) in self.pieces.iter().enumerate() {
            if let Some((lo, hi)) = region.clip(p.x_left, p.x_right) {
                out.push((j + 1, lo, hi));
            }
        }
        if let Some((lo, hi)) = region.clip(b, f64::INFINITY) {
            out.push((self.pieces.len() + 1, lo, hi));
        }
        out
    }

    fn slot_of(&self, x: f64) -> usize {
        match self.support() {
            None => 0,
            Some((a, _)) if x < a => 0,
            Some((_, b)) if x >= b => self.pieces.len() + 1,
            Some(_) => 1 + self.pieces.iter().position(|p| x < p.x_right).unwrap_or(self.pieces.len() - 1),
        }
    }

    /// Unit-incidence solution evaluated at `x`.
    pub fn incidence_value(&self, incidence: Incidence, x: f64) -> C64 {
        self.local(incidence, self.slot_of(x)).eval(x)
    }

    /// Largest relative jump of `psi` or `psi' / k` across any edge.
    pub fn edge_mismatch(&self, incidence: Incidence) -> f64 {
        let mut worst: f64 = 0.0;
        for (e, &x) in self.edges().iter().enumerate() {
            let left = self.local(incidence, e);
            let right = self.local(incidence, e + 1);
            let (vl, vr) = (left.eval(x), right.eval(x));
            let (dl, dr) = (left.eval_deriv(x), right.eval_deriv(x));
            let scale = vl.norm().max(vr.norm()).max(dl.norm() / self.k).max(dr.norm() / self.k);
            if scale > 0.0 {
                worst = worst.max((vl - vr).norm() / scale).max((dl - dr).norm() / (self.k * scale));
            }
        }
        worst
    }
}

/// Evaluates `psi_i`, `psi_t` or `psi_r` at `x`.
///
/// `psi_t` is the complex conjugate of the unit right-incidence solution.
/// For mirror-symmetric profiles it equals `conj(psi_i(-x))`.
pub fn wavefunction_at(solution: &ScatteringSolution, channel: Channel, x: f64) -> C64 {
    match channel {
        Channel::Incident => solution.incidence_value(Incidence::FromLeft, x),
        Channel::Transmitted => solution.incidence_value(Incidence::FromRight, x).conj(),
        Channel::Reflected => solution.incidence_value(Incidence::FromLeft, x).conj(),
    }
}

/// Closed-form solution of the centred rectangular barrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RectangularCoefficients {
    pub k: f64,
    /// `sqrt(2 m (V0 - E)) / hbar`, imaginary above the barrier.
    pub kappa: C64,
    /// Coefficient of `exp(-kappa x)` inside; `None` when `kappa = 0`.
    pub b: Option<C64>,
    /// Coefficient of `exp(+kappa x)` inside; `None` when `kappa = 0`.
    pub c: Option<C64>,
    pub t: C64,
    pub r: C64,
    /// `psi_i(0)` and `psi_i'(0)`, regular through the threshold.
    pub centre_value: C64,
    pub centre_slope: C64,
}

/// Below this `|kappa d|`, `B` and `C` are reported as absent and only the
/// centre data are meaningful.
pub const THRESHOLD_KAPPA_D: f64 = 1e-4;

pub fn rectangular_coefficients(v0: f64, d: f64, energy: f64, units: UnitSystem) -> Result<RectangularCoefficients> {
    units.validate()?;
    if !(v0 >= 0.0 && v0.is_finite()) {
        return Err(Error::InvalidArgument(format!("barrier height must be non-negative, got {v0}")));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::InvalidArgument(format!("barrier width must be positive, got {d}")));
    }
    if !(energy > 0.0) {
        return Err(Error::NonPositiveEnergy(energy));
    }
    let k = units.wavenumber(energy);
    let q = units.kappa_sq(v0, energy);
    let kappa = kappa_from_sq(q);
    let ik = C64::new(0.0, k);
    let kd = kappa * d;
    // t = exp(-ikd) / [cosh(kappa d) + i (kappa^2 - k^2) / (2k) d sinhc(kappa d)]
    let s = d * sinhc(kd);
    let denom = kd.cosh() + C64::new(0.0, (q - k * k) / (2.0 * k)) * s;
    let t = (-ik * d).exp() / denom;
    let k0_sq = q + k * k;
    let r = C64::new(0.0, -k0_sq / (2.0 * k)) * s * (-ik * d).exp() / denom;

    // back from x = d/2 to the centre
    let psi_r = t * (ik * 0.5 * d).exp();
    let dpsi_r = ik * psi_r;
    let half = kappa * (0.5 * d);
    let c_half = half.cosh();
    let s_half = 0.5 * d * sinhc(half);
    let centre_value = psi_r * c_half - dpsi_r * s_half;
    let centre_slope = -psi_r * q * s_half + dpsi_r * c_half;

    let (b, c) = if kd.norm() < THRESHOLD_KAPPA_D {
        (None, None)
    } else {
        // from the right edge: C e^{kappa d/2} = t e^{ikd/2} (kappa + ik) / (2 kappa)
        let e_plus = (kappa * 0.5 * d).exp();
        let e_minus = (-kappa * 0.5 * d).exp();
        let b = psi_r * e_plus * (kappa - ik) / (2.0 * kappa);
        let c = psi_r * e_minus * (kappa + ik) / (2.0 * kappa);
        (Some(b), Some(c))
    };
    Ok(RectangularCoefficients { k, kappa, b, c, t, r, centre_value, centre_slope })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseRelation {
    /// `arg r - arg t`, wrapped into `(-pi, pi]`.
    pub phase_difference: f64,
    /// True when the difference is `+-pi/2` within `1e-8`.
    pub quarter_turn: bool,
    /// Mirror symmetry of the profile.
    pub symmetric_profile: bool,
}

/// Phase offset between reflection and transmission.
pub fn phase_relation_check(solution: &ScatteringSolution) -> Result<PhaseRelation> {
    if solution.r.norm() <= 1e-13 {
        return Err(Error::UndefinedPhase);
    }
    let diff = (solution.r / solution.t).arg();
    let quarter_turn = (diff.abs() - std::f64::consts::FRAC_PI_2).abs() < 1e-8;
    let symmetric_profile = {
        let segs: Vec<_> = solution
            .segments()
            .into_iter()
            .map(|(a, b, v)| crate::profile::Segment::new(a, b, v))
            .collect();
        PotentialProfile::new(segs).map(|p| p.is_symmetric(1e-12)).unwrap_or(false)
    };
    Ok(PhaseRelation { phase_difference: diff, quarter_turn, symmetric_profile })
}

/// Dense LU factorization with partial pivoting.
struct LuFactor {
    lu: Vec<C64>,
    perm: Vec<usize>,
    n: usize,
}

impl LuFactor {
    fn new(mut a: Vec<C64>, n: usize) -> Result<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
                .unwrap();
            if a[pivot * n + col].norm() == 0.0 {
                return Err(Error::NonFinite("singular matching system"));
            }
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                }
                perm.swap(pivot, col);
            }
            let p = a[col * n + col];
            for row in col + 1..n {
                let f = a[row * n + col] / p;
                if f == ZERO {
                    continue;
                }
                a[row * n + col] = f;
                for c in col + 1..n {
                    let v = a[col * n + c];
                    a[row * n + c] -= f * v;
                }
            }
        }
        Ok(LuFactor { lu: a, perm, n })
    }

    fn solve(&self, b: Vec<C64>) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[i * n + j];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[i * n + j];
                x[i] = x[i] - u * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Segment;

    fn units() -> UnitSystem {
        UnitSystem::default()
    }

    #[test]
    fn free_space_is_transparent() {
        let s = solve_stationary(&PotentialProfile::free(), 0.7, units()).unwrap();
        assert_eq!(s.t(), ONE);
        assert_eq!(s.r(), ZERO);
        let k = s.wavenumber();
        for x in [-3.0, 0.0, 2.5] {
            let psi = wavefunction_at(&s, Channel::Incident, x);
            assert!((psi - C64::new(0.0, k * x).exp()).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_potential_segment_is_transparent() {
        let p = PotentialProfile::new(vec![Segment::new(-1.0, 2.0, 0.0)]).unwrap();
        let s = solve_stationary(&p, 0.4, units()).unwrap();
        assert!((s.t() - ONE).norm() < 1e-14);
        assert!(s.r().norm() < 1e-14);
    }

    #[test]
    fn rejects_non_positive_energy() {
        let p = PotentialProfile::rectangular(1.0, 1.0).unwrap();
        assert!(matches!(solve_stationary(&p, 0.0, units()), Err(Error::NonPositiveEnergy(_))));
        assert!(matches!(solve_stationary(&p, -1.0, units()), Err(Error::NonPositiveEnergy(_))));
    }

    #[test]
    fn closed_form_matches_solver() {
        for &(v0, d, e) in &[(1.0, 1.0, 0.5), (1.0, 10.0, 0.5), (2.0, 0.3, 2.0), (1.0, 1.0, 1.0), (1.0, 4.0, 3.0)] {
            let s = solve_stationary(&PotentialProfile::rectangular(v0, d).unwrap(), e, units()).unwrap();
            let c = rectangular_coefficients(v0, d, e, units()).unwrap();
            assert!((s.t() - c.t).norm() <= 1e-12 * c.t.norm(), "t at {v0},{d},{e}: {} vs {}", s.t(), c.t);
            assert!((s.r() - c.r).norm() <= 1e-12, "r at {v0},{d},{e}: {} vs {}", s.r(), c.r);
            assert!((wavefunction_at(&s, Channel::Incident, 0.0) - c.centre_value).norm() < 1e-12);
        }
    }

    #[test]
    fn opaque_ratio_b_over_c() {
        // kappa d = 20 with kappa = 1
        let c = rectangular_coefficients(1.0, 20.0, 0.5, units()).unwrap();
        let ratio = (c.b.unwrap() / c.c.unwrap()).norm();
        assert!((ratio / 20f64.exp() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn resonance_over_the_barrier() {
        // k2 d = pi with E - V0 = 1/2, k2 = 1
        let d = std::f64::consts::PI;
        let c = rectangular_coefficients(1.0, d, 1.5, units()).unwrap();
        assert!((c.t.norm() - 1.0).abs() < 1e-13);
        assert!(c.r.norm() < 1e-13);
        let s = solve_stationary(&PotentialProfile::rectangular(1.0, d).unwrap(), 1.5, units()).unwrap();
        assert!(s.r().norm() < 1e-13);
    }

    #[test]
    fn threshold_has_no_b_c_but_regular_centre() {
        let c = rectangular_coefficients(1.0, 1.0, 1.0, units()).unwrap();
        assert!(c.b.is_none() && c.c.is_none());
        assert!(c.centre_value.is_finite() && c.t.is_finite());
        let s = solve_stationary(&PotentialProfile::rectangular(1.0, 1.0).unwrap(), 1.0, units()).unwrap();
        assert!((s.t() - c.t).norm() < 1e-13);
    }

    #[test]
    fn phase_relation() {
        let s = solve_stationary(&PotentialProfile::rectangular(1.0, 2.0).unwrap(), 0.3, units()).unwrap();
        let rel = phase_relation_check(&s).unwrap();
        assert!(rel.quarter_turn && rel.symmetric_profile);
        let free = solve_stationary(&PotentialProfile::free(), 0.3, units()).unwrap();
        assert!(matches!(phase_relation_check(&free), Err(Error::UndefinedPhase)));
        let steps = PotentialProfile::new(vec![Segment::new(0.0, 1.0, 1.0), Segment::new(1.0, 2.5, 0.4)]).unwrap();
        let rel = phase_relation_check(&solve_stationary(&steps, 0.7, units()).unwrap()).unwrap();
        assert!(!rel.quarter_turn && !rel.symmetric_profile);
    }

    #[test]
    fn channel_parsing() {
        assert_eq!("T".parse::<Channel>().unwrap(), Channel::Transmitted);
        assert_eq!("reflected".parse::<Channel>().unwrap(), Channel::Reflected);
        assert!("x".parse::<Channel>().is_err());
    }
}
