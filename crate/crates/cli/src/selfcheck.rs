//! End-to-end invariant suite behind `rindler-lab selfcheck`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rindler_lab_core::dynamics::{
    drift_under_internal_change, expected_drift_shift, find_equilibrium, integrate, post_change_average,
    ImplicitMidpoint, StepSchedule,
};
use rindler_lab_core::frames::{minkowski_to_rindler, rindler_to_minkowski, shift_rindler, FrameSpec};
use rindler_lab_core::quantum_visibility::{visibility, visibility_oracle, InterferometerConfig, InternalSpectrum};
use rindler_lab_core::redshift::run_redshift_experiment;
use rindler_lab_core::relhamiltonian::{
    check_expansion_consistency, clock_rest_hamiltonian, external_potential, internal_hamiltonian,
    total_hamiltonian_eq1_excess, ClockOptions, ConstantInternal, CorrectionPotential, HamiltonianSpec,
    HarmonicInternal, PhaseState, PotentialSpec, SupportPotential,
};

use crate::scenario::{random_frame_events, shifted_consistency_error, ShiftFn, FRAMES_TOLERANCE};
use crate::CliError;

#[derive(Debug, Clone, Copy)]
pub struct SelfcheckOptions {
    pub shift: ShiftFn,
    pub seed: u64,
}

impl Default for SelfcheckOptions {
    fn default() -> Self {
        Self {
            shift: shift_rindler,
            seed: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn(&SelfcheckOptions) -> Result<(bool, String), CliError>;

const CHECKS: [(&str, Check); 8] = [
    ("shifted-frame consistency", frames),
    ("redshift first-order law", redshift),
    ("expansion c^-4 decay", expansion),
    ("equilibrium closed form", equilibrium),
    ("drift under internal change", drift),
    ("symplectic integration", symplectic),
    ("visibility and oracle", visibility_checks),
    ("clock-at-rest reduction", clock_at_rest),
];

pub fn run_selfcheck(options: &SelfcheckOptions) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(index, (name, check))| {
            let start = Instant::now();
            let (passed, detail) = check(options).unwrap_or_else(|e| (false, e.to_string()));
            CheckOutcome {
                id: index + 1,
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

pub fn render_table(outcomes: &[CheckOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!(
            "[{}] {:>2} {:<30} {:>7.3}s  {}\n",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.seconds,
            o.detail
        ));
    }
    out
}

fn frames(options: &SelfcheckOptions) -> Result<(bool, String), CliError> {
    let mut worst_shift = 0.0f64;
    let mut worst_round_trip = 0.0f64;
    for (e, f) in random_frame_events(options.seed, 1000) {
        worst_shift = worst_shift.max(shifted_consistency_error(&e, &f, options.shift)?);
        let reference = FrameSpec::unshifted(f.g(), f.c())?;
        let back = minkowski_to_rindler(&rindler_to_minkowski(&e, &reference)?, &reference)?;
        let scale = e.x.abs().max(reference.horizon_distance());
        worst_round_trip = worst_round_trip
            .max((back.x - e.x).abs() / scale)
            .max((back.t - e.t).abs() * f.g() / f.c());
    }
    Ok((
        worst_shift <= FRAMES_TOLERANCE && worst_round_trip <= FRAMES_TOLERANCE,
        format!("max composition error {worst_shift:.2e}, round trip {worst_round_trip:.2e}"),
    ))
}

fn redshift(_: &SelfcheckOptions) -> Result<(bool, String), CliError> {
    let mut ok = true;
    let mut worst_exp = 0.0f64;
    for beta in [1e-1f64, 1e-2, 1e-3] {
        let r = run_redshift_experiment(1.0, beta, 1.0, 1.0)?;
        ok &= (r.doppler_factor - (1.0 + beta)).abs() <= 2.0 * beta * beta;
        let rel = (r.doppler_factor - r.detector_proper_time.exp()).abs() / r.doppler_factor;
        worst_exp = worst_exp.max(rel);
    }
    Ok((ok && worst_exp <= 1e-10, format!("exp(g tau/c) agreement {worst_exp:.2e}")))
}

fn expansion(options: &SelfcheckOptions) -> Result<(bool, String), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let speeds = [10.0, 20.0, 40.0, 80.0];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..100 {
        let mass = rng.gen_range(0.5..2.0);
        let g = rng.gen_range(0.5..2.0);
        let h_rel = rng.gen_range(0.1..1.0);
        let x = rng.gen_range(-1.0..1.0);
        let p = rng.gen_range(0.5..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let spec = HamiltonianSpec::new(vec![mass], g, speeds[0], ConstantInternal(h_rel), PotentialSpec::none())?;
        let report = check_expansion_consistency(&spec, &PhaseState::at_origin_of_internal(x, p, 1), &speeds)?;
        let exponent = report
            .fitted_exponent
            .ok_or_else(|| CliError::Numeric("forms agree exactly; no decay to fit".into()))?;
        lo = lo.min(exponent);
        hi = hi.max(exponent);
    }
    Ok((
        (lo + 4.0).abs() <= 0.2 && (hi + 4.0).abs() <= 0.2,
        format!("fitted exponents in [{lo:.3}, {hi:.3}]"),
    ))
}

fn clock(g: f64, c: f64, alpha: f64, h_rel: f64) -> Result<HamiltonianSpec<f64>, CliError> {
    Ok(HamiltonianSpec::new(
        vec![1.0],
        g,
        c,
        ConstantInternal(h_rel),
        PotentialSpec::harmonic(alpha),
    )?)
}

fn equilibrium(_: &SelfcheckOptions) -> Result<(bool, String), CliError> {
    let mut worst = 0.0f64;
    let mut ok = true;
    for c in [1.0, 2.0, 10.0] {
        for alpha in [0.5, 1.0, 2.0] {
            for h_rel in [0.0, 0.2, 1.0] {
                let r = find_equilibrium(&clock(1.0, c, alpha, h_rel)?)?;
                let closed = -(1.0 + h_rel / (c * c)) / alpha;
                let delta = (r.state.x() - closed).abs();
                worst = worst.max(delta * c.powi(4));
                ok &= delta <= 10.0 / c.powi(4) && r.residual < 1e-10;
            }
        }
    }
    Ok((ok, format!("max |dX|*c^4 = {worst:.2e}")))
}

fn drift(_: &SelfcheckOptions) -> Result<(bool, String), CliError> {
    let spec = clock(1.0, 3.0, 1.0, 0.2)?;
    let eq = find_equilibrium(&spec)?;

    let steady = drift_under_internal_change(&spec, |_| 1.0, &eq.state, 100.0, 0.01)?;
    let wander = steady.positions().fold(0.0f64, |m, x| m.max((x - eq.state.x()).abs()));

    let schedule = StepSchedule {
        before: 1.0,
        after: 2.0,
        at: 1.0,
    };
    let traj = drift_under_internal_change(&spec, |t| schedule.value(t), &eq.state, 201.0, 0.01)?;
    let shift = post_change_average(&traj, 1.0)? - eq.state.x();
    let expected = expected_drift_shift(&spec, &eq.state, 1.0, 2.0)?;
    let relative = (shift - expected).abs() / expected.abs();
    Ok((
        wander < 1e-8 && relative < 0.1,
        format!("shift {shift:.5} vs {expected:.5} ({:.1}%), steady wander {wander:.1e}", 100.0 * relative),
    ))
}

fn max_excess_error(spec: &HamiltonianSpec<f64>, s0: &PhaseState<f64>, dt: f64, total: f64) -> Result<f64, CliError> {
    let traj = integrate(spec, s0, dt, (total / dt).round() as usize)?;
    let rest = spec.rest_energy();
    let e0 = traj.energies[0] - rest;
    Ok(traj.energies.iter().fold(0.0f64, |m, e| m.max((e - rest - e0).abs())))
}

fn three_body(g: f64, c: f64) -> Result<HamiltonianSpec<f64>, CliError> {
    let masses = vec![1.0, 2.0, 0.5];
    Ok(HamiltonianSpec::new(
        masses.clone(),
        g,
        c,
        HarmonicInternal::new(masses, 1.3, 0.2),
        PotentialSpec::split(
            SupportPotential::Harmonic { alpha: 2.0 },
            CorrectionPotential::MomentumSquared { weight: 0.2 },
        ),
    )?)
}

fn symplectic(_: &SelfcheckOptions) -> Result<(bool, String), CliError> {
    let spec = clock(1.0, 10.0, 1.0, 0.2)?;
    let traj = integrate(&spec, &PhaseState::at_origin_of_internal(0.3, 0.2, 1), 0.005, 100_000)?;
    let bound = traj.max_relative_energy_error();
    let e0 = traj.energies[0];
    let worst = |e: &[f64]| e.iter().fold(0.0f64, |m, v| m.max((v - e0).abs()));
    let half = traj.len() / 2;
    let secular_ratio = worst(&traj.energies[half..]) / worst(&traj.energies[..half]);

    let composite = three_body(0.2, 1.0)?;
    let s0 = PhaseState::new(0.3, 0.2, vec![0.1, -0.05, 0.0], vec![0.05, 0.0, -0.05], composite.masses())?;
    let halving = max_excess_error(&composite, &s0, 0.02, 20.0)? / max_excess_error(&composite, &s0, 0.01, 20.0)?;

    let stepper = ImplicitMidpoint::default();
    let mut s = s0.clone();
    for _ in 0..500 {
        s = stepper.step(&composite, &s, 0.01)?;
    }
    for _ in 0..500 {
        s = stepper.step(&composite, &s, -0.01)?;
    }
    let round_trip = s0
        .to_flat()
        .iter()
        .zip(s.to_flat())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));

    Ok((
        bound < 1e-8 && secular_ratio < 1.5 && (3.5..4.5).contains(&halving) && round_trip < 1e-10,
        format!(
            "rel energy error {bound:.1e}, late/early {secular_ratio:.2}, halving ratio {halving:.2}, round trip {round_trip:.1e}"
        ),
    ))
}

fn random_spectrum(rng: &mut ChaCha8Rng) -> Result<InternalSpectrum<f64>, CliError> {
    let d = rng.gen_range(1..=64);
    let weights: Vec<f64> = (0..d).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = weights.iter().sum();
    Ok(InternalSpectrum::new(
        weights.iter().map(|w| (rng.gen_range(0.0..5.0), w / total)).collect(),
    )?)
}

fn visibility_checks(options: &SelfcheckOptions) -> Result<(bool, String), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut worst = 0.0f64;
    let mut exact = true;
    for _ in 0..100 {
        let spectrum = random_spectrum(&mut rng)?;
        let setup = InterferometerConfig {
            x_upper: rng.gen_range(0.1..2.0),
            x_lower: rng.gen_range(-2.0..0.0),
            duration: rng.gen_range(0.1..5.0),
            g: rng.gen_range(0.0..2.0),
            c: 1.0,
            hbar: 1.0,
            counter_coupling: rng.gen_range(-1.0..2.0),
        }
        .validated()?;
        worst = worst.max((visibility(&setup, &spectrum) - visibility_oracle(&setup, &spectrum)?).abs());
        exact &= visibility(&setup.with_g(0.0), &spectrum) == 1.0;
        exact &= visibility(&setup.with_counter_coupling(1.0), &spectrum) == 1.0;
    }
    let two_level = InternalSpectrum::new(vec![(0.0, 0.5), (1.0, 0.5)])?;
    let quarter = InterferometerConfig {
        x_upper: 1.0,
        x_lower: 0.0,
        duration: std::f64::consts::PI,
        g: 1.0,
        c: 1.0,
        hbar: 1.0,
        counter_coupling: 0.0,
    };
    let dark = visibility(&quarter, &two_level);
    Ok((
        worst <= 1e-12 && exact && dark < 1e-15,
        format!("oracle gap {worst:.1e}, V at pi/2 point {dark:.1e}"),
    ))
}

fn clock_at_rest(options: &SelfcheckOptions) -> Result<(bool, String), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let masses = vec![1.0, 1.5];
    let mut ok = true;
    for correction in [
        CorrectionPotential::Zero,
        CorrectionPotential::MomentumSquared { weight: 0.3 },
    ] {
        let spec = HamiltonianSpec::new(
            masses.clone(),
            1.0,
            1.0,
            HarmonicInternal::new(masses.clone(), 1.0, 0.1),
            PotentialSpec::split(SupportPotential::Harmonic { alpha: 1.0 }, correction.clone()),
        )?;
        for _ in 0..50 {
            let s = PhaseState::new(
                0.0,
                0.0,
                vec![rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)],
                vec![rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)],
                &masses,
            )?;
            let h_rel = internal_hamiltonian(&spec, &s)?;
            ok &= total_hamiltonian_eq1_excess(&spec, &s)? == h_rel + external_potential(&spec, &s)?;
            if matches!(correction, CorrectionPotential::Zero) {
                ok &= clock_rest_hamiltonian(&spec, &s, ClockOptions::default())? == h_rel;
            }
        }
    }
    Ok((ok, "exact equality on 100 internal states".into()))
}
