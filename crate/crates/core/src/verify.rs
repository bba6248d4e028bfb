//! Seeded randomized verification of the whole library against its
//! invariants and the brute-force oracles.
//!
//! Each case draws a profile of 1 to 4 segments (widths in `[0.2, 3]`,
//! potentials in `[-0.5, 2]`), an energy in `[0.05, 3]` and a region that may
//! start or end outside the support. The same seed always yields the same
//! reports in the same order.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{integrate_schrodinger, max_grid_step, quadrature_weak_value, OracleReport};
use crate::profile::{PotentialProfile, Region, Segment};
use crate::scattering::solve_stationary;
use crate::weaktimes::{channel_times, complex_time_via_derivative, oscillation_budget, Side, TimeChannel};
use crate::{Result, UnitSystem};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const DEFAULT_CASES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub cases: usize,
    /// Replaces every tolerance when set.
    pub tolerance_override: Option<f64>,
    /// Multiplies every tolerance (after any override).
    pub tolerance_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: DEFAULT_SEED, cases: DEFAULT_CASES, tolerance_override: None, tolerance_scale: 1.0 }
    }
}

impl VerifyOptions {
    fn tol(&self, nominal: f64) -> f64 {
        self.tolerance_override.unwrap_or(nominal) * self.tolerance_scale
    }
}

/// Nominal tolerances of the suite.
pub mod tolerances {
    pub const UNITARITY: f64 = 1e-12;
    pub const RECIPROCITY: f64 = 1e-12;
    pub const ORACLE_AMPLITUDE: f64 = 1e-6;
    pub const IDENTITY: f64 = 1e-10;
    pub const QUADRATURE: f64 = 1e-8;
    pub const DERIVATIVE: f64 = 1e-6;
    pub const BUDGET: f64 = 1e-10;
}

/// One random test case.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub profile: PotentialProfile,
    pub energy: f64,
    pub region: Region,
}

pub fn random_case(rng: &mut impl Rng) -> Case {
    let n = rng.gen_range(1..=4);
    let mut x = rng.gen_range(-2.0..2.0);
    let mut segments = Vec::with_capacity(n);
    for _ in 0..n {
        let w = rng.gen_range(0.2..3.0);
        segments.push(Segment::new(x, x + w, rng.gen_range(-0.5..2.0)));
        x += w;
    }
    let profile = PotentialProfile::new(segments).expect("generated segments are contiguous");
    let energy = rng.gen_range(0.05..3.0);
    let (a, b) = profile.support().expect("non-empty profile");
    let x1 = rng.gen_range(a - 1.0..b + 1.0);
    let x2 = rng.gen_range(x1..b + 1.5);
    Case { profile, energy, region: Region { x1, x2 } }
}

/// Reports for one case, in a fixed order.
pub fn check_case(case: &Case, index: usize, opts: &VerifyOptions) -> Result<Vec<OracleReport>> {
    let units = UnitSystem::default();
    let name = |q: &str| format!("case{index}/{q}");
    let sol = solve_stationary(&case.profile, case.energy, units)?;
    let mut out = Vec::new();

    let (t, r) = (sol.t(), sol.r());
    out.push(OracleReport::absolute(name("unitarity"), t.norm_sqr() + r.norm_sqr(), 1.0, opts.tol(tolerances::UNITARITY)));
    out.push(OracleReport::absolute(name("reciprocity"), (t - sol.t_rev()).norm(), 0.0, opts.tol(tolerances::RECIPROCITY)));

    // a quarter of the largest admissible step keeps RK4 well inside 1e-6
    let h = 0.25 * max_grid_step(&case.profile, case.energy, units);
    let (t_rk, _) = integrate_schrodinger(&case.profile, case.energy, h, units)?;
    out.push(OracleReport::relative(name("abs_t_vs_rk4"), t.norm(), t_rk.norm(), opts.tol(tolerances::ORACLE_AMPLITUDE)));
    out.push(OracleReport::absolute(name("arg_t_vs_rk4"), (t / t_rk).arg(), 0.0, opts.tol(tolerances::ORACLE_AMPLITUDE)));

    let times = channel_times(&sol, &case.region);
    let scale = times.tau_d.abs().max(f64::MIN_POSITIVE);
    out.push(OracleReport::scaled(name("weighted_identity"), times.identity_residual().norm(), 0.0, scale, opts.tol(tolerances::IDENTITY)));
    out.push(OracleReport::scaled(name("imaginary_balance"), times.imaginary_balance(), 0.0, scale, opts.tol(tolerances::IDENTITY)));

    let quad_tol = 1e-3 * tolerances::QUADRATURE;
    let mut push_complex = |label: &str, primary: C64, oracle: C64, tol: f64| {
        let s = oracle.norm().max(f64::MIN_POSITIVE);
        out.push(OracleReport::scaled(name(&format!("{label}_re")), primary.re, oracle.re, s, tol));
        out.push(OracleReport::scaled(name(&format!("{label}_im")), primary.im, oracle.im, s, tol));
    };
    if let Some(tau_t) = times.tau_t {
        let q = quadrature_weak_value(&sol, &case.region, TimeChannel::Transmitted, quad_tol * tau_t.norm())?;
        push_complex("tau_T_vs_quadrature", tau_t.0, q.0, opts.tol(tolerances::QUADRATURE));
        let via = complex_time_via_derivative(&case.profile, &case.region, case.energy, units)?;
        push_complex("tau_T_vs_derivative", tau_t.0, via.0, opts.tol(tolerances::DERIVATIVE));
    }
    if let Some(tau_r) = times.tau_r {
        let q = quadrature_weak_value(&sol, &case.region, TimeChannel::Reflected, quad_tol * tau_r.norm())?;
        push_complex("tau_R_vs_quadrature", tau_r.0, q.0, opts.tol(tolerances::QUADRATURE));
    }
    let q = quadrature_weak_value(&sol, &case.region, TimeChannel::Dwell, quad_tol * scale)?;
    out.push(OracleReport::scaled(name("tau_d_vs_quadrature"), times.tau_d, q.re(), scale, opts.tol(tolerances::QUADRATURE)));

    for side in [Side::Left, Side::Right] {
        let budget = oscillation_budget(&sol, TimeChannel::Dwell, side, 3)?;
        let label = match side {
            Side::Left => "dwell_budget_left",
            Side::Right => "dwell_budget_right",
        };
        let baseline = 3.0 * std::f64::consts::PI / sol.wavenumber() * sol.inverse_flux();
        out.push(OracleReport::scaled(name(label), budget.norm(), 0.0, baseline, opts.tol(tolerances::BUDGET)));
    }
    Ok(out)
}

/// The first `count` cases drawn from `seed`.
pub fn generate_cases(seed: u64, count: usize) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_case(&mut rng)).collect()
}

/// Reports for one case; an evaluation error becomes a single failed entry
/// naming the error.
pub fn case_reports(case: &Case, index: usize, opts: &VerifyOptions) -> Vec<OracleReport> {
    check_case(case, index, opts).unwrap_or_else(|e| {
        vec![OracleReport {
            quantity: format!("case{index}/evaluation_error: {e}"),
            primary: f64::NAN,
            oracle: f64::NAN,
            abs_error: f64::NAN,
            rel_error: f64::NAN,
            tolerance: 0.0,
            relative: false,
            pass: false,
        }]
    })
}

/// Runs `opts.cases` seeded cases sequentially.
pub fn run_suite(opts: &VerifyOptions) -> Vec<OracleReport> {
    generate_cases(opts.seed, opts.cases)
        .iter()
        .enumerate()
        .flat_map(|(i, c)| case_reports(c, i, opts))
        .collect()
}
