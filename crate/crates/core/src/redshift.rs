//! Photon exchange between two clocks held at different heights, described
//! from the inertial frame that is momentarily at rest with both at t = 0.
//!
//! The upper clock at x = b emits a photon at t = 0. It travels on a null
//! line to the detector, which starts at x = 0 and is uniformly accelerated
//! with proper acceleration g along X(T) = (c²/g)(√(1 + (gT/c)²) − 1). The
//! detector measures E = −η(p, v) with its four-velocity v at absorption.

use crate::frames::{minkowski_inner, observer_four_velocity, FourVector, FrameSpec, MinkowskiEvent};
use crate::numerics::bracketed_root;
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Direction::Up => T::one(),
            Direction::Down => -T::one(),
        }
    }
}

/// Null four-momentum (E/c, ±E/c) of a photon of energy `energy`.
pub fn photon_four_momentum<T: Real>(energy: T, direction: Direction, c: T) -> Result<FourVector<T>> {
    if !(energy > T::zero()) || !energy.is_finite() {
        return Err(Error::Domain(format!("photon energy must be positive, got {energy}")));
    }
    if !(c > T::zero()) {
        return Err(Error::Domain(format!("light speed must be positive, got {c}")));
    }
    let component = energy / c;
    Ok(FourVector::new(component, direction.sign::<T>() * component))
}

/// Energy −η(p, v) of a photon `p` measured by an observer with
/// four-velocity `v`, which must be timelike and future-pointing.
pub fn measured_energy<T: Real>(p: &FourVector<T>, v: &FourVector<T>) -> Result<T> {
    if !v.is_timelike() || !(v.t > T::zero()) {
        return Err(Error::Domain(format!(
            "observer four-velocity ({}, {}) is not future timelike",
            v.t, v.x
        )));
    }
    Ok(-minkowski_inner(p, v))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RedshiftResult<T> {
    /// Absorption event in the common inertial frame.
    pub absorption_event: MinkowskiEvent<T>,
    pub detector_proper_time: T,
    pub emitted_energy: T,
    pub measured_energy: T,
    /// (1 + g·b/c²)·E_emitted
    pub first_order_energy: T,
    /// measured / emitted
    pub doppler_factor: T,
}

const MAX_BRACKET_WIDENINGS: usize = 200;

/// Emission at height `b` (either sign, above the horizon), absorption by the
/// accelerated detector starting at the origin.
fn exchange_photon<T: Real>(frame: &FrameSpec<T>, b: T, emitted: T) -> Result<RedshiftResult<T>> {
    let (g, c) = (frame.g(), frame.c());
    let horizon = frame.horizon_distance();
    if !(b + horizon > T::zero()) {
        return Err(Error::Domain(format!("emitter at b = {b} is beyond the horizon")));
    }
    let direction = if b > T::zero() { Direction::Down } else { Direction::Up };
    let p = photon_four_momentum(emitted, direction, c)?;

    // X(T) written as (cT)²/(L + √(L² + (cT)²)) to stay accurate for small T.
    let detector_height = |time: T| {
        let ct = c * time;
        ct * ct / (horizon + (horizon * horizon + ct * ct).sqrt())
    };
    let gap = |time: T| b + direction.sign::<T>() * c * time - detector_height(time);

    let mut hi = T::lit(2.0) * b.abs() / c;
    let mut widenings = 0;
    while gap(hi).signum() == gap(T::zero()).signum() {
        widenings += 1;
        if widenings > MAX_BRACKET_WIDENINGS || !hi.is_finite() {
            return Err(Error::Experiment(format!(
                "photon from b = {b} does not reach the detector within T = {hi}"
            )));
        }
        hi = hi * T::lit(2.0);
    }
    let absorption_time = bracketed_root(gap, T::zero(), hi, T::lit(1e-13), 500)?;
    let absorption_event = MinkowskiEvent::new(absorption_time, detector_height(absorption_time));

    let tau = c / g * (g * absorption_time / c).asinh();
    let v = observer_four_velocity(frame, tau);
    let measured = measured_energy(&p, &v)?;
    Ok(RedshiftResult {
        absorption_event,
        detector_proper_time: tau,
        emitted_energy: emitted,
        measured_energy: measured,
        first_order_energy: (T::one() + g * b / (c * c)) * emitted,
        doppler_factor: measured / emitted,
    })
}

/// Emits a photon of energy `emitted` downward from height `b > 0` and
/// reports the energy the accelerated detector measures, next to the
/// first-order time-dilation value (1 + g·b/c²)·E.
pub fn run_redshift_experiment<T: Real>(g: T, b: T, emitted: T, c: T) -> Result<RedshiftResult<T>> {
    if !(b > T::zero()) {
        return Err(Error::Domain(format!("emitter height must be positive, got {b}")));
    }
    if !(emitted > T::zero()) {
        return Err(Error::Domain(format!("photon energy must be positive, got {emitted}")));
    }
    let frame = FrameSpec::unshifted(g, c)?;
    exchange_photon(&frame, b, emitted)
}

/// Tick-rate ratio of a clock at height `f.b()` relative to one at the
/// reference observer, as read off by photon exchange. Agrees with
/// [`FrameSpec::proper_time_rate`] to first order in g·b/c².
///
/// A single clock held at rest has no position coupling in its Hamiltonian;
/// the rate difference comes entirely from comparing the two observers'
/// proper times.
pub fn clock_comparison_rate<T: Real>(f: &FrameSpec<T>) -> Result<T> {
    if f.b() == T::zero() {
        return Ok(T::one());
    }
    let reference = FrameSpec::unshifted(f.g(), f.c())?;
    Ok(exchange_photon(&reference, f.b(), T::one())?.doppler_factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn photon_momenta() {
        let p = photon_four_momentum(1.0, Direction::Down, 1.0).unwrap();
        assert_eq!(p, FourVector::new(1.0, -1.0));
        assert_eq!(p.norm_sqr(), 0.0);
        assert_eq!(
            photon_four_momentum(2.0, Direction::Up, 1.0).unwrap(),
            FourVector::new(2.0, 2.0)
        );
        assert!(photon_four_momentum(0.0, Direction::Up, 1.0).is_err());
        assert!(photon_four_momentum(-1.0, Direction::Up, 1.0).is_err());
    }

    #[test]
    fn rest_observer_sees_emitted_energy() {
        let p = photon_four_momentum(3.5, Direction::Down, 2.0).unwrap();
        let v = FourVector::new(2.0, 0.0);
        assert_eq!(measured_energy(&p, &v).unwrap(), 3.5);
    }

    #[test]
    fn moving_observer_sees_doppler_factor() {
        let u = 2f64.ln();
        let p = FourVector::new(1.0, -1.0);
        let v = FourVector::new(u.cosh(), u.sinh());
        assert_relative_eq!(measured_energy(&p, &v).unwrap(), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn spacelike_observer_is_rejected() {
        let p = FourVector::new(1.0, -1.0);
        assert!(measured_energy(&p, &FourVector::new(0.5, 1.0)).is_err());
        assert!(measured_energy(&p, &FourVector::new(-1.0, 0.0)).is_err());
    }

    #[test]
    fn common_boost_leaves_measurement_unchanged() {
        let p = FourVector::new(1.3, -1.3);
        let v = FourVector::new(1.2f64.cosh(), 1.2f64.sinh());
        let before = measured_energy(&p, &v).unwrap();
        for rapidity in [-1.5, -0.3, 0.4, 2.0] {
            let after = measured_energy(&p.boost(rapidity), &v.boost(rapidity)).unwrap();
            assert!((after - before).abs() <= 1e-12 * before);
        }
    }

    /// Absorption time from squaring b − cT = L(√(1 + (cT/L)²) − 1).
    fn absorption_time_oracle(g: f64, b: f64, c: f64) -> f64 {
        let l = c * c / g;
        b * (b + 2.0 * l) / (2.0 * (b + l)) / c
    }

    #[test]
    fn absorption_event_matches_closed_form() {
        for &(g, b, c) in &[(1.0, 0.1, 1.0), (2.0, 0.3, 1.0), (9.8, 100.0, 3e3)] {
            let r = run_redshift_experiment(g, b, 1.0, c).unwrap();
            assert_relative_eq!(r.absorption_event.t, absorption_time_oracle(g, b, c), max_relative = 1e-12);
            // The event lies on the photon's null line.
            assert!((r.absorption_event.x - (b - c * r.absorption_event.t)).abs() <= 1e-12 * b);
        }
    }

    #[test]
    fn small_offset_gives_unit_factor() {
        let r = run_redshift_experiment(1.0f64, 1e-9, 1.0, 1.0).unwrap();
        assert!((r.doppler_factor - 1.0).abs() < 1e-8);
    }

    #[test]
    fn first_order_law() {
        let r = run_redshift_experiment(1.0f64, 0.1, 1.0, 1.0).unwrap();
        let beta: f64 = 0.1;
        assert!((r.measured_energy - r.first_order_energy).abs() <= 2.0 * beta * beta);
        assert_relative_eq!(
            r.doppler_factor,
            (r.detector_proper_time).exp(),
            max_relative = 1e-10
        );
        assert!(r.measured_energy > r.emitted_energy);
    }

    #[test]
    fn large_light_speed_limit() {
        let gb: f64 = 1.0;
        let c = 1e3f64.sqrt() * gb.sqrt();
        let r = run_redshift_experiment(1.0, gb, 1.0, c).unwrap();
        let extracted = (r.doppler_factor - 1.0) * c * c / gb;
        assert!((extracted - 1.0).abs() < 1e-2);
    }

    #[test]
    fn invalid_experiments() {
        assert!(run_redshift_experiment(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(run_redshift_experiment(1.0, 0.1, 0.0, 1.0).is_err());
        assert!(run_redshift_experiment(0.0, 0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn clock_rates() {
        let same = FrameSpec::new(1.0, 0.0, 1.0).unwrap();
        assert_eq!(clock_comparison_rate(&same).unwrap(), 1.0);
        let f = FrameSpec::new(1.0, 0.5, 1.0).unwrap();
        assert_relative_eq!(clock_comparison_rate(&f).unwrap(), 1.5, max_relative = 1e-12);
        let below = FrameSpec::new(1.0, -0.3, 1.0).unwrap();
        assert_relative_eq!(clock_comparison_rate(&below).unwrap(), 0.7, max_relative = 1e-12);
    }
}
