//! Taylor coefficients of the external potential in the c.m. height,
//! U_j = ∂ʲU_ext/∂Xʲ at X = 0, as functions of the remaining variables.

use super::{Coords, HamiltonianSpec};
use crate::numerics;
use crate::{Error, Real, Result};

/// U_j(ρ, π, P) for a fixed order j.
#[derive(Clone, Debug)]
pub struct TaylorCoefficient<T: Real> {
    order: usize,
    spec: HamiltonianSpec<T>,
}

impl<T: Real> TaylorCoefficient<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Value of U_j at the given internal state and c.m. momentum. Order 0 is
    /// a plain evaluation; higher orders use Richardson-extrapolated central
    /// differences and fail on potentials that are not smooth at X = 0.
    pub fn evaluate(&self, rho: &[T], pi: &[T], p: T) -> Result<T> {
        if rho.len() != self.spec.masses().len() || pi.len() != rho.len() {
            return Err(Error::Precondition(format!(
                "internal state of length {}/{} for {} masses",
                rho.len(),
                pi.len(),
                self.spec.masses().len()
            )));
        }
        let h_rel = self.spec.internal().energy(rho, pi);
        let potential = |x: T| {
            let co = Coords { x, p, rho, pi };
            self.spec.external_potential_at(&co, h_rel)
        };
        numerics::derivative(&potential, T::zero(), self.order).map(|d| d.value)
    }
}

/// Coefficients U_0 … U_k of the expansion
/// U_ext = U_0 + U_1·X + U_2·X²/2! + …
pub fn taylor_potential_coefficients<T: Real>(
    spec: &HamiltonianSpec<T>,
    k: usize,
) -> Vec<TaylorCoefficient<T>> {
    (0..=k)
        .map(|order| TaylorCoefficient {
            order,
            spec: spec.clone(),
        })
        .collect()
}
