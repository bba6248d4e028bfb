//! Worked examples for each public operation, checked against closed forms
//! or the independent oracles.

use std::f64::consts::{FRAC_PI_2, PI};

use barrierclock::clock::{
    coherent_spin_state, far_side_field_effect, larmor_spin_half, larmor_spin_s, pointer_measurement, squeezed_spin_state,
};
use barrierclock::oracle::{adaptive_integrate, integrate_schrodinger, quadrature_weak_value, richardson_derivative};
use barrierclock::scattering::{phase_relation_check, rectangular_coefficients, wavefunction_at, Incidence};
use barrierclock::weaktimes::{
    complex_time_via_derivative, conditional_times_rectangular, density, dwell_density, group_delay, oscillation_budget,
    opaque_asymptotics, weak_value_time, Side,
};
use barrierclock::{
    solve_stationary, Channel, Complex64, Error, PotentialProfile, Region, Segment, TimeChannel, UnitSystem,
};

fn units() -> UnitSystem {
    UnitSystem::default()
}

fn rect(v0: f64, d: f64) -> PotentialProfile {
    PotentialProfile::rectangular(v0, d).unwrap()
}

fn two_step() -> PotentialProfile {
    PotentialProfile::new(vec![Segment::new(-1.0, 0.2, 1.3), Segment::new(0.2, 1.5, 0.4)]).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn crel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn free_space_is_transparent() {
    let sol = solve_stationary(&PotentialProfile::free(), 0.8, units()).unwrap();
    assert_eq!(sol.t(), Complex64::new(1.0, 0.0));
    assert_eq!(sol.r(), Complex64::new(0.0, 0.0));
    let k = sol.wavenumber();
    for x in [-3.0, 0.0, 2.5] {
        let psi = wavefunction_at(&sol, Channel::Incident, x);
        assert!((psi - Complex64::new(0.0, k * x).exp()).norm() < 1e-15);
    }
    assert!(matches!(phase_relation_check(&sol), Err(Error::UndefinedPhase)));
}

#[test]
fn rectangular_barrier_matches_integrator() {
    let p = rect(1.0, 1.0);
    let sol = solve_stationary(&p, 0.5, units()).unwrap();
    assert!((sol.transmission() + sol.reflection() - 1.0).abs() < 1e-12);
    let (t_rk, r_rk) = integrate_schrodinger(&p, 0.5, 1e-3, units()).unwrap();
    assert!(crel(sol.t(), t_rk) < 1e-6);
    assert!(crel(sol.r(), r_rk) < 1e-6);
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(matches!(solve_stationary(&rect(1.0, 1.0), 0.0, units()), Err(Error::NonPositiveEnergy(_))));
    assert!(matches!(PotentialProfile::new(vec![Segment::new(1.0, 1.0, 2.0)]), Err(Error::DegenerateSegment { .. })));
    assert!(UnitSystem::new(0.0, 1.0).is_err());
    assert!(Region::new(2.0, 1.0).is_err());
}

#[test]
fn closed_form_coefficients() {
    let free = rectangular_coefficients(0.0, 2.0, 0.7, units()).unwrap();
    assert!((free.t - 1.0).norm() < 1e-14 && free.r.norm() < 1e-14);

    // k2 d = pi above the barrier
    let (v0, d) = (1.0, 2.0);
    let e = v0 + 0.5 * (PI / d).powi(2);
    let res = rectangular_coefficients(v0, d, e, units()).unwrap();
    assert!((res.t.norm() - 1.0).abs() < 1e-12 && res.r.norm() < 1e-12);

    // kappa d = 20
    let opaque = rectangular_coefficients(1.0, 20.0, 0.5, units()).unwrap();
    let ratio = (opaque.b.unwrap() / opaque.c.unwrap()).norm();
    assert!(rel(ratio, 20f64.exp()) < 1e-6);

    let sol = solve_stationary(&rect(1.0, 3.0), 0.4, units()).unwrap();
    let cf = rectangular_coefficients(1.0, 3.0, 0.4, units()).unwrap();
    assert!((sol.t() - cf.t).norm() < 1e-12 && (sol.r() - cf.r).norm() < 1e-12);
}

#[test]
fn final_states() {
    let sol = solve_stationary(&rect(1.2, 2.0), 0.6, units()).unwrap();
    for i in 0..41 {
        let x = -4.0 + 0.2 * i as f64;
        let psi_t = wavefunction_at(&sol, Channel::Transmitted, x);
        assert!((psi_t - wavefunction_at(&sol, Channel::Incident, -x).conj()).norm() < 1e-10);
        let psi_r = wavefunction_at(&sol, Channel::Reflected, x);
        assert!((psi_r - wavefunction_at(&sol, Channel::Incident, x).conj()).norm() < 1e-14);
    }

    // psi_t left of an asymmetric profile is a pure right-mover: psi' = i k psi
    let sol = solve_stationary(&two_step(), 0.9, units()).unwrap();
    let k = sol.wavenumber();
    let (x, h) = (-5.0, 1e-4);
    let f = |x| wavefunction_at(&sol, Channel::Transmitted, x);
    let slope = (f(x + h) - f(x - h)) / (2.0 * h);
    let left_mover = (f(x) - slope / Complex64::new(0.0, k)) / 2.0;
    assert!(left_mover.norm() < 1e-7);
}

#[test]
fn phase_relation() {
    for e in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let sol = solve_stationary(&rect(1.0, 1.5), e, units()).unwrap();
        let pr = phase_relation_check(&sol).unwrap();
        assert!((pr.phase_difference.abs() - FRAC_PI_2).abs() < 1e-8);
        assert!(pr.quarter_turn && pr.symmetric_profile);
    }
    let sol = solve_stationary(&two_step(), 0.6, units()).unwrap();
    let pr = phase_relation_check(&sol).unwrap();
    assert!(!pr.quarter_turn && !pr.symmetric_profile);
}

#[test]
fn free_traversal_times() {
    let ct = conditional_times_rectangular(0.0, 4.0, 0.5, units()).unwrap();
    // m d / hbar k with k = 1
    let free = 4.0;
    assert!(rel(ct.tau_t.unwrap().re(), free) < 1e-12 && ct.tau_t.unwrap().im().abs() < 1e-12);
    assert!(rel(ct.tau_d, free) < 1e-12);
    assert!(ct.tau_r.is_none() && ct.tau_r_undefined.is_some());
}

#[test]
fn opaque_barrier_times() {
    let ct = conditional_times_rectangular(1.0, 10.0, 0.5, units()).unwrap();
    let (tt, tr) = (ct.tau_t.unwrap(), ct.tau_r.unwrap());
    assert!(rel(tt.re(), ct.tau_d) < 1e-10);
    assert!(rel(tr.re(), ct.tau_d) < 1e-10);
    assert!(ct.identity_residual().norm() < 1e-10 * ct.tau_d);

    let sol = solve_stationary(&rect(1.0, 10.0), 0.5, units()).unwrap();
    let region = Region::new(-5.0, 5.0).unwrap();
    let q = quadrature_weak_value(&sol, &region, TimeChannel::Transmitted, 1e-12).unwrap();
    assert!(crel(q.value(), tt.value()) < 1e-8);
}

#[test]
fn weak_values_match_closed_form() {
    let sol = solve_stationary(&rect(1.0, 2.0), 0.3, units()).unwrap();
    let ct = conditional_times_rectangular(1.0, 2.0, 0.3, units()).unwrap();
    let region = Region::new(-1.0, 1.0).unwrap();
    let tt = weak_value_time(&sol, &region, TimeChannel::Transmitted).unwrap();
    let tr = weak_value_time(&sol, &region, TimeChannel::Reflected).unwrap();
    let td = weak_value_time(&sol, &region, TimeChannel::Dwell).unwrap();
    assert!(crel(tt.value(), ct.tau_t.unwrap().value()) < 1e-12);
    assert!(crel(tr.value(), ct.tau_r.unwrap().value()) < 1e-12);
    assert!(rel(td.re(), ct.tau_d) < 1e-12 && td.im() == 0.0);

    let empty = Region::new(0.3, 0.3).unwrap();
    assert_eq!(weak_value_time(&sol, &empty, TimeChannel::Transmitted).unwrap().value(), Complex64::new(0.0, 0.0));

    let beyond = Region::new(1.0, 4.0).unwrap();
    let td = weak_value_time(&sol, &beyond, TimeChannel::Dwell).unwrap();
    let expect = sol.inverse_flux() * sol.transmission() * 3.0;
    assert!(rel(td.re(), expect) < 1e-12);
}

#[test]
fn far_side_densities() {
    let sol = solve_stationary(&rect(1.0, 2.0), 0.4, units()).unwrap();
    let k = sol.wavenumber();
    let inv = sol.inverse_flux();

    // Re density_R beyond the barrier is A sin(2kx + phi); solve the
    // linear least-squares problem in the sin/cos basis
    let (mut ss, mut sc, mut cc, mut ys, mut yc) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..200 {
        let x = 1.0 + 0.037 * i as f64;
        let y = density(&sol, TimeChannel::Reflected, x).unwrap().re;
        let (s, c) = (2.0 * k * x).sin_cos();
        ss += s * s;
        sc += s * c;
        cc += c * c;
        ys += y * s;
        yc += y * c;
    }
    let det = ss * cc - sc * sc;
    let a_cos_phi = (ys * cc - yc * sc) / det;
    let a_sin_phi = (yc * ss - ys * sc) / det;
    // the fitted amplitude may carry either sign, so compare modulo pi
    let mut dphi = (a_sin_phi.atan2(a_cos_phi) - sol.t().arg()).rem_euclid(PI);
    if dphi > FRAC_PI_2 {
        dphi -= PI;
    }
    assert!(dphi.abs() < 1e-6, "phase offset {dphi}");

    let sample = dwell_density(&sol, 3.3);
    assert!(rel(sample.density_d, inv * sol.transmission()) < 1e-12);

    // mean of density_T over whole periods on the right is m / hbar k
    let right = Region::new(1.0, 1.0 + 4.0 * PI / k).unwrap();
    let total = weak_value_time(&sol, &right, TimeChannel::Transmitted).unwrap();
    assert!(rel(total.re(), inv * right.length()) < 1e-10 && total.im().abs() < 1e-10 * inv * right.length());

    for channel in [TimeChannel::Transmitted, TimeChannel::Reflected, TimeChannel::Dwell] {
        for side in [Side::Left, Side::Right] {
            for n in [1, 7] {
                let budget = oscillation_budget(&sol, channel, side, n).unwrap();
                assert!(budget.norm() < 1e-10 * inv * n as f64 * PI / k, "{channel:?} {side:?} {n}");
            }
        }
    }
}

#[test]
fn derivative_method_agrees_with_overlap() {
    let ct = conditional_times_rectangular(1.0, 2.0, 0.3, units()).unwrap();
    let region = Region::new(-1.0, 1.0).unwrap();
    let via = complex_time_via_derivative(&rect(1.0, 2.0), &region, 0.3, units()).unwrap();
    assert!(crel(via.value(), ct.tau_t.unwrap().value()) < 1e-6);

    let p = two_step();
    let sol = solve_stationary(&p, 0.7, units()).unwrap();
    let region = Region::new(-1.0, 1.5).unwrap();
    let via = complex_time_via_derivative(&p, &region, 0.7, units()).unwrap();
    let overlap = weak_value_time(&sol, &region, TimeChannel::Transmitted).unwrap();
    assert!(crel(via.value(), overlap.value()) < 1e-6);

    let free = PotentialProfile::new(vec![Segment::new(-1.5, 1.5, 0.0)]).unwrap();
    let region = Region::new(-1.5, 1.5).unwrap();
    let via = complex_time_via_derivative(&free, &region, 0.5, units()).unwrap();
    assert!(rel(via.re(), 3.0) < 1e-6 && via.im().abs() < 1e-6);
}

#[test]
fn group_delay_examples() {
    let free = PotentialProfile::new(vec![Segment::new(-1.0, 1.0, 0.0)]).unwrap();
    let g = group_delay(&free, 0.5, units()).unwrap();
    assert!(rel(g.value, 2.0) < 1e-6);

    // Hartman saturation: kappa d = 12 and 24 at E = V0 / 2
    let g12 = group_delay(&rect(1.0, 12.0), 0.5, units()).unwrap().value;
    let g24 = group_delay(&rect(1.0, 24.0), 0.5, units()).unwrap().value;
    assert!(rel(g24, g12) < 1e-2);

    // well above the barrier the phase delay tracks the dwell time
    let ct = conditional_times_rectangular(1.0, 12.0, 2.0, units()).unwrap();
    let g = group_delay(&rect(1.0, 12.0), 2.0, units()).unwrap().value;
    assert!(rel(g, ct.tau_d) < 0.1);
}

#[test]
fn opaque_limits() {
    let lim = opaque_asymptotics(1.0, 20.0, 0.5, units()).unwrap();
    assert!(rel(lim.re_limit, 0.5) < 1e-14);
    assert!(rel(lim.im_limit, 20.0) < 1e-14);
    let ct = conditional_times_rectangular(1.0, 20.0, 0.5, units()).unwrap();
    let tt = ct.tau_t.unwrap();
    assert!(rel(tt.im().abs(), lim.im_limit) < 0.02);
    assert!(rel(tt.norm(), lim.modulus()) < 0.02);
    assert!(matches!(opaque_asymptotics(1.0, 20.0, 1.5, units()), Err(Error::NotTunneling { .. })));
}

#[test]
fn integrator_examples() {
    let (t, r) = integrate_schrodinger(&PotentialProfile::free(), 0.6, 1e-2, units()).unwrap();
    assert!((t - 1.0).norm() < 1e-8 && r.norm() < 1e-8);

    // kappa d = 15
    let (p, e) = (rect(1.0, 15.0), 0.5);
    let sol = solve_stationary(&p, e, units()).unwrap();
    let (t, _) = integrate_schrodinger(&p, e, 1e-3, units()).unwrap();
    assert!(rel(t.norm(), sol.t().norm()) < 1e-5);
}

#[test]
fn quadrature_examples() {
    let p = PotentialProfile::new(vec![Segment::new(-1.0, 0.0, 1.5), Segment::new(0.0, 2.0, 0.3)]).unwrap();
    let sol = solve_stationary(&p, 0.8, units()).unwrap();
    let straddle = Region::new(-0.5, 1.0).unwrap();
    for channel in [TimeChannel::Transmitted, TimeChannel::Reflected, TimeChannel::Dwell] {
        let q = quadrature_weak_value(&sol, &straddle, channel, 1e-13).unwrap();
        let a = weak_value_time(&sol, &straddle, channel).unwrap();
        assert!(crel(q.value(), a.value()) < 1e-8, "{channel:?}");
    }
    let empty = Region::new(0.5, 0.5).unwrap();
    let q = quadrature_weak_value(&sol, &empty, TimeChannel::Dwell, 1e-12).unwrap();
    assert_eq!(q.value(), Complex64::new(0.0, 0.0));

    let v = adaptive_integrate(|x| Complex64::new(x.cos(), 0.0), &[0.0, FRAC_PI_2], 1e-14).unwrap();
    assert!((v.re - 1.0).abs() < 1e-13);
}

#[test]
fn richardson_examples() {
    let d = richardson_derivative(|x| x * x, 3.0, 1e-3);
    assert!((d.value - 6.0).abs() < 1e-10);

    let (v0, width, e) = (1.0, 2.0, 0.3);
    let tau = conditional_times_rectangular(v0, width, e, units()).unwrap().tau_t.unwrap();
    let t_of = |v: f64| solve_stationary(&rect(v, width), e, units()).unwrap().t();
    let h = 1e-5 * v0;
    let phase = richardson_derivative(|v| t_of(v).arg(), v0, h);
    let log_mod = richardson_derivative(|v| t_of(v).norm().ln(), v0, h);
    assert!(rel(-phase.value, tau.re()) < 1e-6);
    assert!(rel(log_mod.value, tau.im()) < 1e-6);
}

#[test]
fn spin_states() {
    let half = coherent_spin_state(0.5).unwrap();
    for a in half.amplitudes() {
        assert!((a - Complex64::new(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
    }
    let big = coherent_spin_state(20.0).unwrap();
    assert!((big.width_sz() - 10f64.sqrt()).abs() < 1e-6);
    assert_eq!(big.mean_sz(), 0.0);
    let sq = squeezed_spin_state(20.0, 0.5).unwrap();
    assert!(rel(sq.width_sz(), 0.5) < 0.02);
}

#[test]
fn larmor_clock_weak_limit() {
    let p = rect(1.0, 5.0);
    let region = Region::new(-2.5, 2.5).unwrap();
    let e = 0.5;
    let tau = conditional_times_rectangular(1.0, 5.0, e, units()).unwrap().tau_t.unwrap();

    let zero = larmor_spin_half(&p, &region, e, 0.0, Channel::Transmitted, units()).unwrap();
    assert_eq!((zero.in_plane_angle, zero.out_of_plane), (0.0, 0.0));
    let sol = solve_stationary(&p, e, units()).unwrap();
    assert_eq!(zero.norm, sol.transmission());

    let half = larmor_spin_half(&p, &region, e, 1e-4, Channel::Transmitted, units()).unwrap();
    assert!(rel(half.tau_y, tau.re()) < 1e-4);
    assert!(rel(-half.tau_z, tau.im()) < 1e-4);

    let state = coherent_spin_state(5.0).unwrap();
    let five = larmor_spin_s(&p, &region, e, 1e-5, &state, Channel::Transmitted, units()).unwrap();
    assert!(rel(five.tau_y, half.tau_y) < 1e-3);
    assert!(rel(five.tau_z, half.tau_z) < 1e-3);

    let pointer = pointer_measurement(&p, &region, e, 1e-6, 1.0, Channel::Transmitted, units()).unwrap();
    assert!(rel(pointer.dq / 1e-6, tau.re()) < 1e-4);
    assert!(rel(pointer.dp * 2.0 / 1e-6, tau.im()) < 1e-3);
}

#[test]
fn clock_error_convergence_is_quadratic() {
    let p = rect(1.0, 3.0);
    let region = Region::new(-1.5, 1.5).unwrap();
    let tau = conditional_times_rectangular(1.0, 3.0, 0.5, units()).unwrap().tau_t.unwrap();
    let omegas = [1e-3, 2e-3, 4e-3, 8e-3];
    let pts: Vec<(f64, f64)> = omegas
        .iter()
        .map(|&w| {
            let res = larmor_spin_half(&p, &region, 0.5, w, Channel::Transmitted, units()).unwrap();
            (w.ln(), (res.tau_y - tau.re()).abs().ln())
        })
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
}

#[test]
fn far_side_probe() {
    let p = rect(1.0, 8.0);
    let barrier = Region::new(-4.0, 4.0).unwrap();
    let e = 0.5;
    let sol = solve_stationary(&p, e, units()).unwrap();
    let k = sol.wavenumber();
    let probe = Region::new(4.0, 4.0 + PI / (2.0 * k)).unwrap();
    let res = far_side_field_effect(&p, &barrier, &probe, e, 1e-4, units()).unwrap();
    let weak = weak_value_time(&sol, &probe, TimeChannel::Reflected).unwrap();
    assert!(res.tau_y.abs() > 0.0);
    assert!(rel(res.tau_y, weak.re()) < 1e-3);

    let zero = far_side_field_effect(&p, &barrier, &probe, e, 0.0, units()).unwrap();
    assert_eq!(zero.tau_y, 0.0);
    let inside = Region::new(3.0, 5.0).unwrap();
    assert!(matches!(far_side_field_effect(&p, &barrier, &inside, e, 1e-4, units()), Err(Error::ProbeNotBeyondBarrier)));
}

#[test]
fn reciprocity_of_right_incidence() {
    let sol = solve_stationary(&two_step(), 0.45, units()).unwrap();
    assert!((sol.t() - sol.t_rev()).norm() < 1e-12);
    assert!(sol.edge_mismatch(Incidence::FromLeft) < 1e-10);
    assert!(sol.edge_mismatch(Incidence::FromRight) < 1e-10);
}
