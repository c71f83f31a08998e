use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::equilibrium::EQUILIBRIUM_TOLERANCE;
use super::*;
use crate::relhamiltonian::{
    ConstantInternal, CorrectionPotential, HamiltonianForm, HarmonicInternal, PotentialSpec, SupportPotential,
};

fn clock(g: f64, c: f64, alpha: f64, h_rel: f64) -> HamiltonianSpec<f64> {
    let potential = if alpha == 0.0 {
        PotentialSpec::none()
    } else {
        PotentialSpec::harmonic(alpha)
    };
    HamiltonianSpec::new(vec![1.0], g, c, ConstantInternal(h_rel), potential).unwrap()
}

fn cm(x: f64, p: f64) -> PhaseState<f64> {
    PhaseState::at_origin_of_internal(x, p, 1)
}

fn three_body(g: f64, c: f64, correction: CorrectionPotential<f64>) -> HamiltonianSpec<f64> {
    let masses = vec![1.0, 2.0, 0.5];
    HamiltonianSpec::new(
        masses.clone(),
        g,
        c,
        HarmonicInternal::new(masses, 1.3, 0.2),
        PotentialSpec::split(SupportPotential::Harmonic { alpha: 2.0 }, correction),
    )
    .unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, masses: &[f64]) -> PhaseState<f64> {
    let n = masses.len();
    PhaseState::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect(),
        (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect(),
        masses,
    )
    .unwrap()
}

#[test]
fn free_particle_velocity() {
    let spec = HamiltonianSpec::new(vec![2.0], 0.0, 1e8, ConstantInternal(0.0), PotentialSpec::none()).unwrap();
    let d = hamilton_rhs(&spec, &cm(0.3, 0.8)).unwrap();
    assert!((d.x_dot - 0.4).abs() < 1e-12);
    assert_eq!(d.p_dot, 0.0);
}

#[test]
fn analytic_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let corrections = [
        CorrectionPotential::Zero,
        CorrectionPotential::CounterCoupling { lambda: 0.4 },
        CorrectionPotential::MomentumSquared { weight: 0.3 },
    ];
    for correction in corrections {
        for form in [HamiltonianForm::Expanded, HamiltonianForm::Bracket] {
            let spec = three_body(1.0, 2.0, correction.clone()).with_form(form);
            assert!(spec.has_analytic_gradient());
            for _ in 0..20 {
                let s = random_state(&mut rng, spec.masses());
                let a = hamilton_rhs(&spec, &s).unwrap().to_flat();
                let n = hamilton_rhs_numeric(&spec, &s).unwrap().to_flat();
                let scale = n.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                for (x, y) in a.iter().zip(&n) {
                    assert!((x - y).abs() <= 1e-6 * scale, "{form:?}: {x} vs {y}");
                }
            }
        }
    }
}

#[test]
fn non_finite_gradient_is_an_error() {
    let spec = HamiltonianSpec::new(
        vec![1.0],
        1.0,
        1.0,
        ConstantInternal(0.0),
        PotentialSpec::split(SupportPotential::custom(|x: f64| x.ln()), CorrectionPotential::Zero),
    )
    .unwrap();
    assert!(hamilton_rhs(&spec, &cm(-1.0, 0.0)).is_err());
}

#[test]
fn zero_field_rest_state_is_fixed() {
    let spec = clock(0.0, 1.0, 0.0, 0.3);
    let traj = integrate(&spec, &cm(0.0, 0.0), 0.1, 100).unwrap();
    assert!(traj.states.iter().all(|s| s.x() == 0.0 && s.p() == 0.0));
}

#[test]
fn harmonic_period() {
    // Large c removes the P⁴/c² correction to the oscillator.
    let spec = clock(0.0, 1e8, 1.0, 0.0);
    let dt = 1e-3;
    let traj = integrate(&spec, &cm(1.0, 0.0), dt, 70_000).unwrap();
    let xs: Vec<f64> = traj.positions().collect();
    let mut crossings = Vec::new();
    for k in 1..xs.len() {
        if xs[k - 1] > 0.0 && xs[k] <= 0.0 {
            let frac = xs[k - 1] / (xs[k - 1] - xs[k]);
            crossings.push(traj.times[k - 1] + frac * dt);
        }
    }
    assert!(crossings.len() >= 11);
    let period = (crossings[10] - crossings[0]) / 10.0;
    assert!((period - std::f64::consts::TAU).abs() < 1e-6, "period {period}");
}

#[test]
fn long_run_energy_conservation() {
    let spec = clock(1.0, 10.0, 1.0, 0.2);
    let traj = integrate(&spec, &cm(0.3, 0.2), 0.005, 100_000).unwrap();
    assert!(traj.max_relative_energy_error() < 1e-9);
    // Bounded, not secular: the second half is no worse than the first.
    let e0 = traj.energies[0];
    let worst = |e: &[f64]| e.iter().fold(0.0f64, |m, v| m.max((v - e0).abs()));
    let half = traj.len() / 2;
    assert!(worst(&traj.energies[half..]) < 1.5 * worst(&traj.energies[..half]));
}

fn excess_energy_error(spec: &HamiltonianSpec<f64>, s0: &PhaseState<f64>, dt: f64, total: f64) -> f64 {
    let steps = (total / dt).round() as usize;
    let traj = integrate(spec, s0, dt, steps).unwrap();
    let rest = spec.rest_energy();
    let e0 = traj.energies[0] - rest;
    traj.energies.iter().fold(0.0f64, |m, e| m.max((e - rest - e0).abs()))
}

#[test]
fn energy_error_is_second_order() {
    let spec = three_body(0.2, 1.0, CorrectionPotential::Zero);
    let s0 = PhaseState::new(0.3, 0.2, vec![0.1, -0.05, 0.0], vec![0.05, 0.0, -0.05], spec.masses()).unwrap();
    let coarse = excess_energy_error(&spec, &s0, 0.02, 20.0);
    let fine = excess_energy_error(&spec, &s0, 0.01, 20.0);
    let ratio = coarse / fine;
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn forward_then_backward_returns_to_start() {
    let spec = three_body(1.0, 1.5, CorrectionPotential::MomentumSquared { weight: 0.2 });
    let s0 = PhaseState::new(0.4, -0.3, vec![0.2, -0.1, 0.0], vec![0.1, 0.0, -0.1], spec.masses()).unwrap();
    let stepper = ImplicitMidpoint::default();
    let mut s = s0.clone();
    for _ in 0..200 {
        s = stepper.step(&spec, &s, 0.01).unwrap();
    }
    for _ in 0..200 {
        s = stepper.step(&spec, &s, -0.01).unwrap();
    }
    let diff = s0
        .to_flat()
        .iter()
        .zip(s.to_flat())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(diff < 1e-10, "diff {diff}");
}

#[test]
fn non_convergent_step_reports_step_index() {
    let spec = clock(0.0, 1e8, 1.0, 0.0);
    match integrate(&spec, &cm(1.0, 0.0), 10.0, 5) {
        Err(Error::Integration { step, iterations, .. }) => {
            assert_eq!(step, 0);
            assert!(iterations <= 50);
        }
        other => panic!("expected integration error, got {other:?}"),
    }
}

#[test]
fn invalid_run_arguments() {
    let spec = clock(1.0, 1.0, 1.0, 0.0);
    assert!(matches!(integrate(&spec, &cm(0.0, 0.0), 0.0, 10), Err(Error::Precondition(_))));
    assert!(matches!(integrate(&spec, &cm(0.0, 0.0), 0.1, 0), Err(Error::Precondition(_))));
}

#[test]
fn trajectory_csv() {
    let spec = three_body(1.0, 1.0, CorrectionPotential::Zero);
    let s0 = PhaseState::new(0.1, 0.0, vec![0.0; 3], vec![0.0; 3], spec.masses()).unwrap();
    let traj = integrate(&spec, &s0, 0.1, 3).unwrap();
    let mut out = Vec::new();
    traj.write_csv(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,X,P,rho_1,rho_2,rho_3,pi_1,pi_2,pi_3,H");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 10));
    let x1: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(x1, traj.states[1].x());
    assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
}

#[test]
fn equilibrium_without_internal_energy() {
    let r = find_equilibrium(&clock(1.0, 1.0, 1.0, 0.0)).unwrap();
    assert!((r.state.x() + 1.0).abs() < 1e-10);
    assert!(r.state.p().abs() < 1e-12);
    assert_eq!(r.closed_form_x, Some(-1.0));
    assert!(r.residual < EQUILIBRIUM_TOLERANCE);
    let rhs = hamilton_rhs(&clock(1.0, 1.0, 1.0, 0.0), &r.state).unwrap();
    assert!(rhs.max_norm() < 1e-10);
}

/// Brute-force scan for the sign change of ∂H/∂X along P = 0.
fn scanned_root(spec: &HamiltonianSpec<f64>) -> f64 {
    let slope = |x: f64| -hamilton_rhs(spec, &cm(x, 0.0)).unwrap().p_dot;
    let (mut lo, mut hi) = (-10.0, 10.0);
    assert!(slope(lo) < 0.0 && slope(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn equilibrium_with_internal_energy() {
    for form in [HamiltonianForm::Expanded, HamiltonianForm::Bracket] {
        let spec = clock(1.0, 1.0, 1.0, 0.2).with_form(form);
        let r = find_equilibrium(&spec).unwrap();
        let closed = r.closed_form_x.unwrap();
        assert!((closed + 1.2).abs() < 1e-15);
        assert!((r.state.x() - closed).abs() < 1e-9, "{form:?}: {}", r.state.x());
        assert!((r.state.x() - scanned_root(&spec)).abs() < 1e-9);
        assert!(r.residual < EQUILIBRIUM_TOLERANCE);
    }
}

#[test]
fn equilibrium_without_gravity() {
    let r = find_equilibrium(&clock(0.0, 1.0, 1.0, 0.5)).unwrap();
    assert_eq!(r.state.x(), 0.0);
    assert_eq!(r.state.p(), 0.0);
}

#[test]
fn equilibrium_of_composite() {
    let spec = three_body(1.0, 2.0, CorrectionPotential::Zero);
    let r = find_equilibrium(&spec).unwrap();
    let expected = -(3.5 + 0.2 / 4.0) / 2.0;
    assert!((r.closed_form_x.unwrap() - expected).abs() < 1e-15);
    assert!((r.state.x() - expected).abs() < 1e-9);
}

#[test]
fn equilibrium_needs_restoring_force() {
    let spec = clock(1.0, 1.0, 0.0, 0.0);
    assert!(matches!(find_equilibrium(&spec), Err(Error::Solver { .. })));
}

#[test]
fn unchanged_schedule_keeps_equilibrium() {
    let spec = clock(1.0, 1.0, 1.0, 0.2);
    let eq = find_equilibrium(&spec).unwrap();
    let traj = drift_under_internal_change(&spec, |_| 1.0, &eq.state, 20.0, 0.01).unwrap();
    let worst = traj.positions().fold(0.0f64, |m, x| m.max((x - eq.state.x()).abs()));
    assert!(worst < 1e-9, "moved by {worst}");
}

fn drift_shift(c: f64) -> (f64, f64) {
    let spec = clock(1.0, c, 1.0, 0.2);
    let eq = find_equilibrium(&spec).unwrap();
    let schedule = StepSchedule {
        before: 1.0,
        after: 2.0,
        at: 1.0,
    };
    let traj = drift_under_internal_change(&spec, |t| schedule.value(t), &eq.state, 201.0, 0.01).unwrap();
    let average = post_change_average(&traj, 1.0).unwrap();
    let expected = expected_drift_shift(&spec, &eq.state, 1.0, 2.0).unwrap();
    (average - eq.state.x(), expected)
}

#[test]
fn doubling_internal_energy_lowers_equilibrium() {
    let (shift, expected) = drift_shift(3.0);
    assert!((expected + 0.2 / 9.0).abs() < 1e-15);
    assert!((shift - expected).abs() < 0.1 * expected.abs(), "shift {shift}");
}

#[test]
fn drift_scales_as_inverse_square_of_c() {
    let (slow, _) = drift_shift(3.0);
    let (fast, _) = drift_shift(30.0);
    let ratio = slow / fast;
    assert!((ratio - 100.0).abs() < 10.0, "ratio {ratio}");
}

/// With c = 1 and H_rel = 0.2 the stationary point X = −1.2 lies below the
/// horizon at −c²/g = −1, where the P² coefficient of H is negative. The
/// point is a saddle and the post-change motion runs away.
#[test]
fn stationary_point_below_horizon_is_unstable() {
    let spec = clock(1.0, 1.0, 1.0, 0.2);
    let eq = find_equilibrium(&spec).unwrap();
    assert!(eq.state.x() < -spec.c() * spec.c() / spec.g());
    let schedule = StepSchedule {
        before: 1.0,
        after: 2.0,
        at: 1.0,
    };
    match drift_under_internal_change(&spec, |t| schedule.value(t), &eq.state, 50.0, 0.01) {
        Err(Error::Integration { .. }) => {}
        Ok(traj) => assert!(traj.positions().any(|x| (x + 1.4).abs() > 10.0)),
        Err(other) => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn drift_requires_equilibrium_start() {
    let spec = clock(1.0, 1.0, 1.0, 0.2);
    assert!(matches!(
        drift_under_internal_change(&spec, |_| 1.0, &cm(0.0, 0.0), 1.0, 0.01),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn step_schedule_values() {
    let s = StepSchedule {
        before: 1.0,
        after: 3.0,
        at: 2.0,
    };
    assert_eq!(s.value(1.999), 1.0);
    assert_eq!(s.value(2.0), 3.0);
    assert_eq!(StepSchedule::constant(0.5).value(-4.0), 0.5);
}

#[test]
fn energy_changes_only_while_schedule_changes() {
    let spec = clock(1.0, 3.0, 1.0, 0.2);
    let s0 = cm(-1.0, 0.1);
    let traj = ImplicitMidpoint::default()
        .run(&spec, &s0, 0.01, 400, |t| if t < 2.0 { 1.0 } else { 1.5 })
        .unwrap();
    let before = &traj.energies[..=199];
    let after = &traj.energies[201..];
    let spread = |e: &[f64]| {
        let (lo, hi) = e.iter().fold((f64::MAX, f64::MIN), |(l, h), v| (l.min(*v), h.max(*v)));
        hi - lo
    };
    assert!(spread(before) < 1e-6);
    assert!(spread(after) < 1e-6);
    assert!((traj.energies[201] - traj.energies[199]).abs() > 1e-2);
}
