use super::{hamilton_rhs, ImplicitMidpoint, Trajectory};
use crate::relhamiltonian::{internal_hamiltonian, HamiltonianSpec, PhaseState};
use crate::{Error, Real, Result};

/// Residual above which the starting state is not accepted as an equilibrium.
const START_TOLERANCE: f64 = 1e-8;

/// Internal-energy scaling that jumps from `before` to `after` at time `at`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSchedule<T> {
    pub before: T,
    pub after: T,
    pub at: T,
}

impl<T: Real> StepSchedule<T> {
    pub fn constant(value: T) -> Self {
        Self {
            before: value,
            after: value,
            at: T::zero(),
        }
    }

    pub fn value(&self, t: T) -> T {
        if t < self.at {
            self.before
        } else {
            self.after
        }
    }
}

/// Integrates from an equilibrium of `spec` while H_rel is replaced by
/// `schedule(t)·H_rel`.
///
/// `s0` must be stationary for the unscaled Hamiltonian (residual below 1e-8).
pub fn drift_under_internal_change<T: Real, S: Fn(T) -> T>(
    spec: &HamiltonianSpec<T>,
    schedule: S,
    s0: &PhaseState<T>,
    horizon: T,
    dt: T,
) -> Result<Trajectory<T>> {
    if !(horizon > T::zero()) {
        return Err(Error::Precondition(format!("horizon must be positive, got {horizon}")));
    }
    if !(dt > T::zero()) {
        return Err(Error::Precondition(format!("time step must be positive, got {dt}")));
    }
    let residual = hamilton_rhs(spec, s0)?.max_norm();
    if !(residual <= T::lit(START_TOLERANCE)) {
        return Err(Error::Precondition(format!(
            "start state is not an equilibrium (residual {residual:e})"
        )));
    }
    let steps = (horizon / dt).ceil().to_usize().unwrap_or(0).max(1);
    ImplicitMidpoint::default().run(spec, s0, dt, steps, schedule)
}

/// Mean c.m. height over the last half of the part of `trajectory` after
/// `change_time`; skips the transient right after the change.
pub fn post_change_average<T: Real>(trajectory: &Trajectory<T>, change_time: T) -> Result<T> {
    let after: Vec<(T, T)> = trajectory
        .times
        .iter()
        .zip(trajectory.positions())
        .filter(|(t, _)| **t >= change_time)
        .map(|(t, x)| (*t, x))
        .collect();
    let (Some(first), Some(last)) = (after.first(), after.last()) else {
        return Err(Error::Precondition("no samples after the change time".into()));
    };
    let window_start = first.0 + T::lit(0.5) * (last.0 - first.0);
    let window: Vec<T> = after
        .iter()
        .filter(|(t, _)| *t >= window_start)
        .map(|(_, x)| *x)
        .collect();
    if window.is_empty() {
        return Err(Error::Precondition("averaging window is empty".into()));
    }
    Ok(window.iter().copied().sum::<T>() / T::lit(window.len() as f64))
}

/// Equilibrium shift −g·ΔH_rel/(α c²) when the internal energy of `s`
/// is scaled from `before` to `after` under harmonic support α.
pub fn expected_drift_shift<T: Real>(
    spec: &HamiltonianSpec<T>,
    s: &PhaseState<T>,
    before: T,
    after: T,
) -> Result<T> {
    let alpha = spec.potential().newtonian.harmonic_stiffness().ok_or_else(|| {
        Error::Configuration("closed-form drift needs a harmonic support".into())
    })?;
    let h_rel = internal_hamiltonian(spec, s)?;
    let c2 = spec.c() * spec.c();
    Ok(-spec.g() * (after - before) * h_rel / (alpha * c2))
}
