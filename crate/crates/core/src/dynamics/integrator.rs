use super::{flow, Trajectory};
use crate::numerics::max_abs;
use crate::relhamiltonian::{Coords, HamiltonianSpec, PhaseState};
use crate::{Error, Real, Result};

/// Implicit midpoint rule, z' = z + dt·f((z + z')/2), solved by fixed-point
/// iteration. Symplectic and symmetric for any Hamiltonian, including the
/// non-separable ones produced by the 1/c² couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImplicitMidpoint<T> {
    /// Stop when the update is below `tolerance·(1 + |z|∞)`.
    pub tolerance: T,
    pub max_iterations: usize,
}

impl<T: Real> Default for ImplicitMidpoint<T> {
    fn default() -> Self {
        Self {
            tolerance: T::lit(1e-12),
            max_iterations: 50,
        }
    }
}

impl<T: Real> ImplicitMidpoint<T> {
    /// One step of signed size `dt` with the internal energy scaled by `scale`.
    /// On failure returns (iterations, last update).
    pub(crate) fn step_flat(
        &self,
        spec: &HamiltonianSpec<T>,
        z0: &[T],
        dt: T,
        scale: T,
    ) -> std::result::Result<Vec<T>, (usize, T)> {
        let half = T::lit(0.5);
        let f0 = flow(spec, z0, scale);
        let mut next: Vec<T> = z0.iter().zip(&f0).map(|(z, f)| *z + dt * *f).collect();
        let mut mid = vec![T::zero(); z0.len()];
        let mut update = T::infinity();
        for _ in 0..self.max_iterations {
            for ((m, a), b) in mid.iter_mut().zip(z0).zip(&next) {
                *m = half * (*a + *b);
            }
            let f = flow(spec, &mid, scale);
            update = T::zero();
            for ((n, z), fi) in next.iter_mut().zip(z0).zip(&f) {
                let candidate = *z + dt * *fi;
                update = update.max((candidate - *n).abs());
                *n = candidate;
            }
            if !update.is_finite() {
                break;
            }
            if update <= self.tolerance * (T::one() + max_abs(&next)) {
                return Ok(next);
            }
        }
        Err((self.max_iterations, update))
    }

    /// One step from `s` of signed size `dt`; negative `dt` integrates backwards.
    pub fn step(&self, spec: &HamiltonianSpec<T>, s: &PhaseState<T>, dt: T) -> Result<PhaseState<T>> {
        spec.energy_excess(s)?;
        let z = self
            .step_flat(spec, &s.to_flat(), dt, T::one())
            .map_err(|(iterations, last)| Error::Integration {
                step: 0,
                iterations,
                last_update: last.to_f64_lossy(),
            })?;
        PhaseState::from_flat(&z)
    }

    /// Integrates `steps` steps of size `dt` from time zero, with the internal
    /// energy scaled by `schedule(t)` evaluated at each step's midpoint time.
    pub fn run<S: Fn(T) -> T>(
        &self,
        spec: &HamiltonianSpec<T>,
        s0: &PhaseState<T>,
        dt: T,
        steps: usize,
        schedule: S,
    ) -> Result<Trajectory<T>> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::Precondition(format!("time step must be positive, got {dt}")));
        }
        if steps == 0 {
            return Err(Error::Precondition("at least one step is required".into()));
        }
        spec.energy_excess(s0)?;
        let rest = spec.rest_energy();
        let energy = |z: &[T], t: T| rest + spec.energy_excess_at(&Coords::from_flat(z), schedule(t));

        let mut times = Vec::with_capacity(steps + 1);
        let mut states = Vec::with_capacity(steps + 1);
        let mut energies = Vec::with_capacity(steps + 1);
        let mut z = s0.to_flat();
        times.push(T::zero());
        states.push(s0.clone());
        energies.push(energy(&z, T::zero()));
        let half = T::lit(0.5);
        for step in 0..steps {
            let t = T::lit(step as f64) * dt;
            let scale = schedule(t + half * dt);
            z = self
                .step_flat(spec, &z, dt, scale)
                .map_err(|(iterations, last)| Error::Integration {
                    step,
                    iterations,
                    last_update: last.to_f64_lossy(),
                })?;
            let t_next = T::lit((step + 1) as f64) * dt;
            times.push(t_next);
            states.push(PhaseState::from_flat(&z)?);
            energies.push(energy(&z, t_next));
        }
        Ok(Trajectory {
            times,
            states,
            energies,
        })
    }
}

/// `steps` implicit-midpoint steps of size `dt` with the default tolerance
/// (1e-12) and iteration cap (50).
pub fn integrate<T: Real>(
    spec: &HamiltonianSpec<T>,
    s0: &PhaseState<T>,
    dt: T,
    steps: usize,
) -> Result<Trajectory<T>> {
    ImplicitMidpoint::default().run(spec, s0, dt, steps, |_| T::one())
}
