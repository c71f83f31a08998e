//! Hamilton's equations for a [`HamiltonianSpec`], implicit-midpoint
//! integration, equilibrium finding and the drift experiment.

mod drift;
mod equilibrium;
mod integrator;

use std::io::{self, Write};

pub use drift::{drift_under_internal_change, expected_drift_shift, post_change_average, StepSchedule};
pub use equilibrium::{find_equilibrium, find_equilibrium_with_internal, EquilibriumResult};
pub use integrator::{integrate, ImplicitMidpoint};

use crate::numerics::max_abs;
use crate::relhamiltonian::{Gradient, HamiltonianSpec, PhaseState};
use crate::{Error, Real, Result};

/// Time derivative of a phase-space point, laid out like [`PhaseState`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDerivative<T> {
    pub x_dot: T,
    pub p_dot: T,
    pub rho_dot: Vec<T>,
    pub pi_dot: Vec<T>,
}

impl<T: Real> PhaseDerivative<T> {
    fn from_gradient(g: Gradient<T>) -> Self {
        Self {
            x_dot: g.dp,
            p_dot: -g.dx,
            rho_dot: g.dpi,
            pi_dot: g.drho.into_iter().map(|d| -d).collect(),
        }
    }

    pub fn max_norm(&self) -> T {
        self.x_dot
            .abs()
            .max(self.p_dot.abs())
            .max(max_abs(&self.rho_dot))
            .max(max_abs(&self.pi_dot))
    }

    pub fn to_flat(&self) -> Vec<T> {
        let mut flat = vec![self.x_dot, self.p_dot];
        flat.extend_from_slice(&self.rho_dot);
        flat.extend_from_slice(&self.pi_dot);
        flat
    }

    fn check_finite(self) -> Result<Self> {
        if self.to_flat().iter().all(|v| v.is_finite()) {
            Ok(self)
        } else {
            Err(Error::Evaluation(format!("non-finite gradient: {self:?}")))
        }
    }
}

/// (∂H/∂P, −∂H/∂X, ∂H/∂π_j, −∂H/∂ρ_j) of the spec's active Hamiltonian form.
/// Closed-form gradients are used for built-in ingredients, central
/// differences otherwise.
pub fn hamilton_rhs<T: Real>(spec: &HamiltonianSpec<T>, s: &PhaseState<T>) -> Result<PhaseDerivative<T>> {
    spec.energy_excess(s)?;
    let grad = spec.gradient_at(&s.to_flat(), T::one());
    PhaseDerivative::from_gradient(grad).check_finite()
}

/// Same as [`hamilton_rhs`] but always by finite differences.
pub fn hamilton_rhs_numeric<T: Real>(
    spec: &HamiltonianSpec<T>,
    s: &PhaseState<T>,
) -> Result<PhaseDerivative<T>> {
    spec.energy_excess(s)?;
    let grad = spec.numeric_gradient_at(&s.to_flat(), T::one());
    PhaseDerivative::from_gradient(grad).check_finite()
}

pub(crate) fn flow<T: Real>(spec: &HamiltonianSpec<T>, flat: &[T], scale: T) -> Vec<T> {
    let g = spec.gradient_at(flat, scale);
    let mut out = Vec::with_capacity(flat.len());
    out.push(g.dp);
    out.push(-g.dx);
    out.extend(g.dpi);
    out.extend(g.drho.into_iter().map(|d| -d));
    out
}

/// Sampled solution of Hamilton's equations.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<PhaseState<T>>,
    /// Total energy (including Mc²) of the Hamiltonian in force at each time.
    pub energies: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&PhaseState<T>> {
        self.states.last()
    }

    pub fn positions(&self) -> impl Iterator<Item = T> + '_ {
        self.states.iter().map(|s| s.x())
    }

    /// Largest |E(t) − E(0)| / |E(0)|.
    pub fn max_relative_energy_error(&self) -> T {
        let Some(&e0) = self.energies.first() else {
            return T::zero();
        };
        self.energies
            .iter()
            .fold(T::zero(), |acc, e| acc.max((*e - e0).abs() / e0.abs()))
    }

    /// CSV with columns `t, X, P, rho_1.., pi_1.., H`, every number written
    /// with 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let n = self.states.first().map_or(0, |s| s.len_internal());
        let mut header = vec!["t".to_string(), "X".into(), "P".into()];
        header.extend((1..=n).map(|j| format!("rho_{j}")));
        header.extend((1..=n).map(|j| format!("pi_{j}")));
        header.push("H".into());
        writeln!(out, "{}", header.join(","))?;
        for ((t, s), e) in self.times.iter().zip(&self.states).zip(&self.energies) {
            let mut row = vec![fmt17(*t), fmt17(s.x()), fmt17(s.p())];
            row.extend(s.rel_pos().iter().map(|v| fmt17(*v)));
            row.extend(s.rel_mom().iter().map(|v| fmt17(*v)));
            row.push(fmt17(*e));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt17<T: Real>(value: T) -> String {
    format!("{:.16e}", value.to_f64_lossy())
}

#[cfg(test)]
mod tests;
