//! The same pipelines instantiated at f32 and f64 must agree to f32 precision.

use rindler_lab_core::dynamics::{find_equilibrium, integrate};
use rindler_lab_core::frames::{minkowski_to_rindler, rindler_to_minkowski, shift_rindler, RindlerEvent};
use rindler_lab_core::quantum_visibility::{visibility, InterferometerConfig, InternalSpectrum};
use rindler_lab_core::redshift::{clock_comparison_rate, run_redshift_experiment};
use rindler_lab_core::relhamiltonian::{ConstantInternal, HamiltonianSpec, PotentialSpec};
use rindler_lab_core::units::UnitSystem;
use rindler_lab_core::{FrameSpecF32, FrameSpecF64, Real};

const F32_AGREEMENT: f64 = 1e-5;

fn close(a: f32, b: f64) -> bool {
    (a as f64 - b).abs() <= F32_AGREEMENT * b.abs().max(1.0)
}

fn round_trip<T: Real>(g: T, b: T, t: T, x: T) -> (T, T) {
    let f = rindler_lab_core::frames::FrameSpec::new(g, b, T::one()).unwrap();
    let shifted = shift_rindler(&RindlerEvent::new(t, x), &f).unwrap();
    let m = rindler_to_minkowski(&shifted, &f.shifted_reference()).unwrap();
    let back = minkowski_to_rindler(&m, &f.shifted_reference()).unwrap();
    (back.t, back.x)
}

#[test]
fn frames_agree_across_precisions() {
    let (t32, x32) = round_trip(1.0f32, 0.25, 0.7, 0.3);
    let (t64, x64) = round_trip(1.0f64, 0.25, 0.7, 0.3);
    assert!(close(t32, t64) && close(x32, x64));
}

#[test]
fn redshift_agrees_across_precisions() {
    let r32 = run_redshift_experiment(1.0f32, 0.1, 1.0, 1.0).unwrap();
    let r64 = run_redshift_experiment(1.0f64, 0.1, 1.0, 1.0).unwrap();
    assert!(close(r32.doppler_factor, r64.doppler_factor));
    let rate32 = clock_comparison_rate(&FrameSpecF32::new(1.0, 0.5, 1.0).unwrap()).unwrap();
    let rate64 = clock_comparison_rate(&FrameSpecF64::new(1.0, 0.5, 1.0).unwrap()).unwrap();
    assert!(close(rate32, rate64));
}

fn clock<T: Real>() -> HamiltonianSpec<T> {
    HamiltonianSpec::new(
        vec![T::one()],
        T::one(),
        T::lit(3.0),
        ConstantInternal(T::lit(0.2)),
        PotentialSpec::harmonic(T::one()),
    )
    .unwrap()
}

#[test]
fn equilibrium_agrees_across_precisions() {
    let e32 = find_equilibrium(&clock::<f32>()).unwrap();
    let e64 = find_equilibrium(&clock::<f64>()).unwrap();
    assert!(close(e32.state.x(), e64.state.x()));
}

#[test]
fn short_integration_agrees_across_precisions() {
    let s32 = rindler_lab_core::PhaseStateF32::at_origin_of_internal(0.3, 0.2, 1);
    let s64 = rindler_lab_core::PhaseStateF64::at_origin_of_internal(0.3, 0.2, 1);
    let t32 = integrate(&clock::<f32>(), &s32, 0.01, 100).unwrap();
    let t64 = integrate(&clock::<f64>(), &s64, 0.01, 100).unwrap();
    let (a, b) = (t32.last().unwrap(), t64.last().unwrap());
    assert!((a.x() as f64 - b.x()).abs() < 1e-4);
    assert!((a.p() as f64 - b.p()).abs() < 1e-4);
}

#[test]
fn visibility_agrees_across_precisions() {
    let v32 = visibility(
        &InterferometerConfig::<f32>::new(1.0, 0.0, 1.0, 1.0, UnitSystem::Geometric).unwrap(),
        &InternalSpectrum::<f32>::harmonic(1.0, 0.5, 8).unwrap(),
    );
    let v64 = visibility(
        &InterferometerConfig::<f64>::new(1.0, 0.0, 1.0, 1.0, UnitSystem::Geometric).unwrap(),
        &InternalSpectrum::<f64>::harmonic(1.0, 0.5, 8).unwrap(),
    );
    assert!(close(v32, v64));
}
