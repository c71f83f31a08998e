use super::hamilton_rhs;
use crate::relhamiltonian::{CorrectionPotential, HamiltonianSpec, PhaseState};
use crate::{Error, Real, Result};

/// Residual below which a state counts as stationary.
pub const EQUILIBRIUM_TOLERANCE: f64 = 1e-10;

const MAX_NEWTON_STEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumResult<T> {
    pub state: PhaseState<T>,
    /// Max-norm of Hamilton's right-hand side at `state`.
    pub residual: T,
    /// −(Mg + g·H_rel/c²)/α when the support is harmonic without correction.
    pub closed_form_x: Option<T>,
    pub iterations: usize,
}

/// Stationary c.m. state (Ẋ = Ṗ = 0) with the internal pairs at the ground
/// state of the internal Hamiltonian.
pub fn find_equilibrium<T: Real>(spec: &HamiltonianSpec<T>) -> Result<EquilibriumResult<T>> {
    let n = spec.masses().len();
    let (rho, pi) = spec.internal().ground_state(n).ok_or_else(|| {
        Error::Configuration(
            "internal Hamiltonian has no known ground state; supply the internal state".into(),
        )
    })?;
    find_equilibrium_with_internal(spec, rho, pi)
}

/// Newton iteration on (∂H/∂X, ∂H/∂P) = 0 with the internal pairs held at
/// the supplied values.
pub fn find_equilibrium_with_internal<T: Real>(
    spec: &HamiltonianSpec<T>,
    rho: Vec<T>,
    pi: Vec<T>,
) -> Result<EquilibriumResult<T>> {
    let base = PhaseState::new(T::zero(), T::zero(), rho, pi, spec.masses())?;
    let h_rel = crate::relhamiltonian::internal_hamiltonian(spec, &base)?;

    let stationarity = |x: T, p: T| -> Result<(T, T)> {
        let d = hamilton_rhs(spec, &base.with_cm(x, p))?;
        // (∂H/∂X, ∂H/∂P)
        Ok((-d.p_dot, d.x_dot))
    };

    let (mut x, mut p) = (T::zero(), T::zero());
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    for k in 0..MAX_NEWTON_STEPS {
        iterations = k;
        let (fx, fp) = stationarity(x, p)?;
        let norm = fx.abs().max(fp.abs());
        history.push(norm.to_f64_lossy());
        if norm <= T::lit(1e-13) {
            converged = true;
            break;
        }
        // Jacobian by central differences of the gradient.
        let hx = T::lit(1e-6) * T::one().max(x.abs());
        let hp = T::lit(1e-6) * T::one().max(p.abs());
        let two = T::lit(2.0);
        let (fx_xp, fp_xp) = stationarity(x + hx, p)?;
        let (fx_xm, fp_xm) = stationarity(x - hx, p)?;
        let (fx_pp, fp_pp) = stationarity(x, p + hp)?;
        let (fx_pm, fp_pm) = stationarity(x, p - hp)?;
        let j11 = (fx_xp - fx_xm) / (two * hx);
        let j21 = (fp_xp - fp_xm) / (two * hx);
        let j12 = (fx_pp - fx_pm) / (two * hp);
        let j22 = (fp_pp - fp_pm) / (two * hp);
        let det = j11 * j22 - j12 * j21;
        if !(det.abs() > T::epsilon() * (j11.abs() * j22.abs() + j12.abs() * j21.abs())) || !det.is_finite() {
            return Err(Error::Solver {
                iterations: k,
                history,
            });
        }
        let dx = (j22 * fx - j12 * fp) / det;
        let dp = (j11 * fp - j21 * fx) / det;
        x = x - dx;
        p = p - dp;
        if dx.abs().max(dp.abs()) <= T::lit(1e-15) * (T::one() + x.abs() + p.abs()) {
            converged = true;
            iterations = k + 1;
            break;
        }
    }
    if !converged {
        return Err(Error::Solver {
            iterations: MAX_NEWTON_STEPS,
            history,
        });
    }

    let state = base.with_cm(x, p);
    let residual = hamilton_rhs(spec, &state)?.max_norm();
    if !(residual < T::lit(EQUILIBRIUM_TOLERANCE)) {
        history.push(residual.to_f64_lossy());
        return Err(Error::Solver { iterations, history });
    }

    let closed_form_x = match (
        spec.potential().newtonian.harmonic_stiffness(),
        &spec.potential().correction,
    ) {
        (Some(alpha), CorrectionPotential::Zero) => {
            let c2 = spec.c() * spec.c();
            Some(-(spec.total_mass() * spec.g() + spec.g() * h_rel / c2) / alpha)
        }
        _ => None,
    };

    Ok(EquilibriumResult {
        state,
        residual,
        closed_form_x,
        iterations,
    })
}
