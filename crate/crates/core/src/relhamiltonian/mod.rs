//! Hamiltonian of a composite system of total rest mass M held in a
//! homogeneous gravitational field g, to first order in 1/c².
//!
//! Two forms are provided:
//!
//! - the expanded form
//!   `H = H_cm + (1 − P²/(2M²c²) + gX/c²)·H_rel + U_ext`, and
//! - the bracket form `H = H_mink·(1 + gX/c²) + U_ext` with
//!   `H_mink = √(P²c² + (Mc² + H_rel)²)`.
//!
//! Rest-energy convention: the square-root argument carries `Mc² + H_rel`, so
//! the expanded form's c.m. part is the 1/c² expansion of the bracket form,
//!
//! `H_cm = Mc² + P²/(2M) − P⁴/(8M³c²) + MgX + gXP²/(2Mc²)`.
//!
//! Every energy has an `*_excess` twin with Mc² removed. The excess forms are
//! evaluated without subtracting large numbers and are what the consistency
//! checks compare.

mod internal;
mod potential;
mod taylor;

use std::sync::Arc;

pub use internal::{ConstantInternal, HarmonicInternal, InternalFn, InternalHamiltonian};
pub use potential::{
    split_per_particle, ChiFn, CorrectionFn, CorrectionPotential, PerParticlePotential, PhaseFn,
    PotentialSpec, ScalarFn, SplitPotential, SupportPotential,
};
pub use taylor::{taylor_potential_coefficients, TaylorCoefficient};

use crate::numerics;
use crate::{Error, Real, Result};

/// Canonical state: c.m. height `x` and momentum `p` plus N relative pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState<T> {
    x: T,
    p: T,
    rel_pos: Vec<T>,
    rel_mom: Vec<T>,
}

impl<T: Real> PhaseState<T> {
    /// Builds a state and projects out the constraint modes, so that
    /// Σ m_j ρ_j = 0 and Σ π_j = 0.
    pub fn new(x: T, p: T, rel_pos: Vec<T>, rel_mom: Vec<T>, masses: &[T]) -> Result<Self> {
        if rel_pos.len() != rel_mom.len() {
            return Err(Error::Precondition(format!(
                "{} relative positions but {} relative momenta",
                rel_pos.len(),
                rel_mom.len()
            )));
        }
        if rel_pos.len() != masses.len() {
            return Err(Error::Precondition(format!(
                "{} relative pairs for {} masses",
                rel_pos.len(),
                masses.len()
            )));
        }
        let mut state = Self {
            x,
            p,
            rel_pos,
            rel_mom,
        };
        state.project_constraints(masses);
        Ok(state)
    }

    /// c.m. state with the internal pairs at zero.
    pub fn at_origin_of_internal(x: T, p: T, n: usize) -> Self {
        Self {
            x,
            p,
            rel_pos: vec![T::zero(); n],
            rel_mom: vec![T::zero(); n],
        }
    }

    /// State without the constraint projection; used for states produced by
    /// the flow, which preserves the constraints by itself.
    pub(crate) fn from_parts(x: T, p: T, rel_pos: Vec<T>, rel_mom: Vec<T>) -> Self {
        Self {
            x,
            p,
            rel_pos,
            rel_mom,
        }
    }

    fn project_constraints(&mut self, masses: &[T]) {
        let n = self.rel_pos.len();
        if n == 0 {
            return;
        }
        let total: T = masses.iter().copied().sum();
        let weighted: T = masses.iter().zip(&self.rel_pos).map(|(m, r)| *m * *r).sum();
        let shift = weighted / total;
        self.rel_pos.iter_mut().for_each(|r| *r = *r - shift);
        let mean = self.rel_mom.iter().copied().sum::<T>() / T::lit(n as f64);
        self.rel_mom.iter_mut().for_each(|p| *p = *p - mean);
    }

    pub fn x(&self) -> T {
        self.x
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn rel_pos(&self) -> &[T] {
        &self.rel_pos
    }

    pub fn rel_mom(&self) -> &[T] {
        &self.rel_mom
    }

    pub fn len_internal(&self) -> usize {
        self.rel_pos.len()
    }

    pub fn with_cm(&self, x: T, p: T) -> Self {
        Self {
            x,
            p,
            ..self.clone()
        }
    }

    /// `[x, p, ρ_1..ρ_N, π_1..π_N]`
    pub fn to_flat(&self) -> Vec<T> {
        let mut flat = Vec::with_capacity(2 + 2 * self.rel_pos.len());
        flat.push(self.x);
        flat.push(self.p);
        flat.extend_from_slice(&self.rel_pos);
        flat.extend_from_slice(&self.rel_mom);
        flat
    }

    pub fn from_flat(flat: &[T]) -> Result<Self> {
        if flat.len() < 2 || !flat.len().is_multiple_of(2) {
            return Err(Error::Precondition(format!(
                "flat state of length {} is not [x, p, ρ.., π..]",
                flat.len()
            )));
        }
        let n = (flat.len() - 2) / 2;
        Ok(Self::from_parts(
            flat[0],
            flat[1],
            flat[2..2 + n].to_vec(),
            flat[2 + n..].to_vec(),
        ))
    }

    pub(crate) fn coords(&self) -> Coords<'_, T> {
        Coords {
            x: self.x,
            p: self.p,
            rho: &self.rel_pos,
            pi: &self.rel_mom,
        }
    }
}

/// Borrowed view of a phase-space point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Coords<'a, T> {
    pub x: T,
    pub p: T,
    pub rho: &'a [T],
    pub pi: &'a [T],
}

impl<'a, T: Real> Coords<'a, T> {
    pub fn from_flat(flat: &'a [T]) -> Self {
        let n = (flat.len() - 2) / 2;
        Coords {
            x: flat[0],
            p: flat[1],
            rho: &flat[2..2 + n],
            pi: &flat[2 + n..],
        }
    }
}

/// Which Hamiltonian the dynamics evolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HamiltonianForm {
    /// `H_cm + (1 − P²/(2M²c²) + gX/c²)·H_rel + U_ext`
    #[default]
    Expanded,
    /// `√(P²c² + (Mc² + H_rel)²)·(1 + gX/c²) + U_ext`
    Bracket,
}

/// Partial derivatives of a Hamiltonian at a phase-space point.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient<T> {
    pub dx: T,
    pub dp: T,
    pub drho: Vec<T>,
    pub dpi: Vec<T>,
}

/// Masses, field, light speed, internal Hamiltonian and supporting potential.
#[derive(Clone)]
pub struct HamiltonianSpec<T: Real> {
    masses: Vec<T>,
    g: T,
    c: T,
    internal: Arc<dyn InternalHamiltonian<T>>,
    potential: PotentialSpec<T>,
    split: Option<SplitPotential<T>>,
    form: HamiltonianForm,
}

impl<T: Real> std::fmt::Debug for HamiltonianSpec<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HamiltonianSpec")
            .field("masses", &self.masses)
            .field("g", &self.g)
            .field("c", &self.c)
            .field("potential", &self.potential)
            .field("form", &self.form)
            .finish()
    }
}

impl<T: Real> HamiltonianSpec<T> {
    pub fn new<H>(
        masses: Vec<T>,
        g: T,
        c: T,
        internal: H,
        potential: PotentialSpec<T>,
    ) -> Result<Self>
    where
        H: InternalHamiltonian<T> + 'static,
    {
        Self::with_shared_internal(masses, g, c, Arc::new(internal), potential)
    }

    pub fn with_shared_internal(
        masses: Vec<T>,
        g: T,
        c: T,
        internal: Arc<dyn InternalHamiltonian<T>>,
        mut potential: PotentialSpec<T>,
    ) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::Configuration("at least one constituent mass is required".into()));
        }
        if masses.iter().any(|m| !(*m > T::zero()) || !m.is_finite()) {
            return Err(Error::Configuration(format!("masses must be positive: {masses:?}")));
        }
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::Configuration(format!("light speed must be positive, got {c}")));
        }
        if !g.is_finite() {
            return Err(Error::Configuration(format!("field strength must be finite, got {g}")));
        }
        if let Some(n) = internal.particle_count() {
            if n != masses.len() {
                return Err(Error::Configuration(format!(
                    "internal Hamiltonian built for {n} constituents, spec has {}",
                    masses.len()
                )));
            }
        }
        let user_split = potential.has_split_form();
        let split = potential.resolve(&masses)?;
        let spec = Self {
            masses,
            g,
            c,
            internal,
            potential,
            split,
            form: HamiltonianForm::Expanded,
        };
        if user_split && spec.split.is_some() {
            spec.check_potential_forms_agree()?;
        }
        Ok(spec)
    }

    /// Compares the given split potential against the one derived from the
    /// per-particle form at a handful of c.m. states.
    fn check_potential_forms_agree(&self) -> Result<()> {
        let Some(split) = &self.split else {
            return Ok(());
        };
        let n = self.masses.len();
        let zeros = vec![T::zero(); n];
        let c2 = self.c * self.c;
        for &x in &[-1.0, -0.25, 0.0, 0.5, 1.0] {
            for &p in &[0.0, 0.3, -0.7] {
                let co = Coords {
                    x: T::lit(x),
                    p: T::lit(p),
                    rho: &zeros,
                    pi: &zeros,
                };
                let h_rel = self.internal.energy(&zeros, &zeros);
                let given = self.external_potential_at(&co, h_rel);
                let derived = (split.newtonian)(co.x) + (split.correction)(co.x, co.p, &zeros, &zeros) / c2;
                let tol = T::lit(1e-8) * T::one().max(given.abs()).max(derived.abs());
                if !((given - derived).abs() <= tol) {
                    return Err(Error::Configuration(format!(
                        "split and per-particle potentials disagree at X = {x}, P = {p}: {given} vs {derived}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn total_mass(&self) -> T {
        self.masses.iter().copied().sum()
    }

    pub fn g(&self) -> T {
        self.g
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn form(&self) -> HamiltonianForm {
        self.form
    }

    pub fn potential(&self) -> &PotentialSpec<T> {
        &self.potential
    }

    pub fn internal(&self) -> &Arc<dyn InternalHamiltonian<T>> {
        &self.internal
    }

    /// The split derived from the per-particle form, if one was given.
    pub fn derived_split(&self) -> Option<&SplitPotential<T>> {
        self.split.as_ref()
    }

    pub fn rest_energy(&self) -> T {
        self.total_mass() * self.c * self.c
    }

    pub fn with_form(mut self, form: HamiltonianForm) -> Self {
        self.form = form;
        self
    }

    pub fn with_c(&self, c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::Configuration(format!("light speed must be positive, got {c}")));
        }
        Ok(Self { c, ..self.clone() })
    }

    pub fn with_g(&self, g: T) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::Configuration(format!("field strength must be finite, got {g}")));
        }
        Ok(Self { g, ..self.clone() })
    }

    pub fn with_potential(&self, potential: PotentialSpec<T>) -> Result<Self> {
        Self::with_shared_internal(
            self.masses.clone(),
            self.g,
            self.c,
            self.internal.clone(),
            potential,
        )
        .map(|s| s.with_form(self.form))
    }

    pub fn with_internal<H: InternalHamiltonian<T> + 'static>(&self, internal: H) -> Result<Self> {
        Self::new(
            self.masses.clone(),
            self.g,
            self.c,
            internal,
            self.potential.clone(),
        )
        .map(|s| s.with_form(self.form))
    }

    pub(crate) fn check_state(&self, s: &PhaseState<T>) -> Result<()> {
        if s.len_internal() != self.masses.len() {
            return Err(Error::Precondition(format!(
                "state has {} relative pairs, spec has {} masses",
                s.len_internal(),
                self.masses.len()
            )));
        }
        Ok(())
    }

    pub(crate) fn internal_at(&self, co: &Coords<'_, T>, scale: T) -> T {
        scale * self.internal.energy(co.rho, co.pi)
    }

    /// U¹ at a point, given the (scaled) internal energy there.
    fn correction_at(&self, co: &Coords<'_, T>, h_rel: T) -> T {
        match &self.potential.correction {
            CorrectionPotential::Zero => T::zero(),
            CorrectionPotential::CounterCoupling { lambda } => -*lambda * self.g * co.x * h_rel,
            CorrectionPotential::MomentumSquared { weight } => {
                let total = self.total_mass();
                *weight
                    * self
                        .masses
                        .iter()
                        .zip(co.pi)
                        .map(|(&m, &pj)| {
                            let q = m * co.p / total + pj;
                            q * q
                        })
                        .sum::<T>()
            }
            CorrectionPotential::Custom(f) => f(co.x, co.p, co.rho, co.pi),
        }
    }

    pub(crate) fn external_potential_at(&self, co: &Coords<'_, T>, h_rel: T) -> T {
        self.potential.newtonian.value(co.x) + self.correction_at(co, h_rel) / (self.c * self.c)
    }

    /// c.m. part of the expanded form without Mc².
    fn cm_excess(&self, x: T, p: T) -> T {
        let m = self.total_mass();
        let c2 = self.c * self.c;
        let p2 = p * p;
        let two = T::lit(2.0);
        p2 / (two * m) - p2 * p2 / (T::lit(8.0) * m * m * m * c2)
            + m * self.g * x
            + self.g * x * p2 / (two * m * c2)
    }

    pub(crate) fn expanded_excess_at(&self, co: &Coords<'_, T>, scale: T) -> T {
        let m = self.total_mass();
        let c2 = self.c * self.c;
        let h_rel = self.internal_at(co, scale);
        let factor = T::one() - co.p * co.p / (T::lit(2.0) * m * m * c2) + self.g * co.x / c2;
        self.cm_excess(co.x, co.p) + factor * h_rel + self.external_potential_at(co, h_rel)
    }

    /// √(P²c² + (Mc² + H)²) − Mc² without cancellation. Exactly H at P = 0.
    fn kinetic_excess(&self, p: T, h_rel: T) -> T {
        if p == T::zero() {
            return h_rel;
        }
        let c2 = self.c * self.c;
        let rest = self.total_mass() * c2;
        let full = (p * p * c2 + (rest + h_rel) * (rest + h_rel)).sqrt();
        (p * p * c2 + h_rel * (T::lit(2.0) * rest + h_rel)) / (full + rest)
    }

    pub(crate) fn bracket_excess_at(&self, co: &Coords<'_, T>, scale: T) -> T {
        let h_rel = self.internal_at(co, scale);
        let kinetic = self.kinetic_excess(co.p, h_rel);
        let lift = self.g * co.x / (self.c * self.c);
        kinetic * (T::one() + lift) + self.total_mass() * self.g * co.x
            + self.external_potential_at(co, h_rel)
    }

    pub(crate) fn energy_excess_at(&self, co: &Coords<'_, T>, scale: T) -> T {
        match self.form {
            HamiltonianForm::Expanded => self.expanded_excess_at(co, scale),
            HamiltonianForm::Bracket => self.bracket_excess_at(co, scale),
        }
    }

    /// Energy of the active form with Mc² removed.
    pub fn energy_excess(&self, s: &PhaseState<T>) -> Result<T> {
        self.check_state(s)?;
        finite(self.energy_excess_at(&s.coords(), T::one()), "Hamiltonian")
    }

    /// Energy of the active form.
    pub fn energy(&self, s: &PhaseState<T>) -> Result<T> {
        Ok(self.rest_energy() + self.energy_excess(s)?)
    }

    /// Closed-form gradient of the active form, when every ingredient has one.
    pub(crate) fn analytic_gradient_at(&self, co: &Coords<'_, T>, scale: T) -> Option<Gradient<T>> {
        let d_support = self.potential.newtonian.derivative(co.x)?;
        let (raw_rho, raw_pi) = self.internal.gradient(co.rho, co.pi)?;
        let h_rel = self.internal_at(co, scale);
        let h_rho: Vec<T> = raw_rho.into_iter().map(|d| scale * d).collect();
        let h_pi: Vec<T> = raw_pi.into_iter().map(|d| scale * d).collect();
        let c2 = self.c * self.c;
        let m = self.total_mass();
        let n = co.rho.len();

        // U¹ gradient, divided by c² below.
        let (u1_x, u1_p, u1_rho, u1_pi) = match &self.potential.correction {
            CorrectionPotential::Zero => (T::zero(), T::zero(), vec![T::zero(); n], vec![T::zero(); n]),
            CorrectionPotential::CounterCoupling { lambda } => {
                let k = -*lambda * self.g;
                (
                    k * h_rel,
                    T::zero(),
                    h_rho.iter().map(|d| k * co.x * *d).collect(),
                    h_pi.iter().map(|d| k * co.x * *d).collect(),
                )
            }
            CorrectionPotential::MomentumSquared { weight } => {
                let two = T::lit(2.0);
                let q: Vec<T> = self
                    .masses
                    .iter()
                    .zip(co.pi)
                    .map(|(&mj, &pj)| mj * co.p / m + pj)
                    .collect();
                let dp = self
                    .masses
                    .iter()
                    .zip(&q)
                    .map(|(&mj, &qj)| two * *weight * qj * mj / m)
                    .sum();
                (
                    T::zero(),
                    dp,
                    vec![T::zero(); n],
                    q.iter().map(|qj| two * *weight * *qj).collect(),
                )
            }
            CorrectionPotential::Custom(_) => return None,
        };

        let two = T::lit(2.0);
        let (dx, dp, internal_factor) = match self.form {
            HamiltonianForm::Expanded => {
                let p = co.p;
                let dx = m * self.g + self.g * p * p / (two * m * c2) + self.g * h_rel / c2;
                let dp = p / m - p * p * p / (two * m * m * m * c2) + self.g * co.x * p / (m * c2)
                    - p * h_rel / (m * m * c2);
                let factor = T::one() - p * p / (two * m * m * c2) + self.g * co.x / c2;
                (dx, dp, factor)
            }
            HamiltonianForm::Bracket => {
                let rest = m * c2;
                let kinetic = self.kinetic_excess(co.p, h_rel);
                let full = rest + kinetic;
                let lift = T::one() + self.g * co.x / c2;
                let dx = self.g * full / c2;
                let dp = lift * co.p * c2 / full;
                let factor = lift * (rest + h_rel) / full;
                (dx, dp, factor)
            }
        };
        Some(Gradient {
            dx: dx + d_support + u1_x / c2,
            dp: dp + u1_p / c2,
            drho: h_rho
                .iter()
                .zip(&u1_rho)
                .map(|(d, u)| internal_factor * *d + *u / c2)
                .collect(),
            dpi: h_pi
                .iter()
                .zip(&u1_pi)
                .map(|(d, u)| internal_factor * *d + *u / c2)
                .collect(),
        })
    }

    /// Gradient of the active form by Richardson-extrapolated central
    /// differences.
    pub(crate) fn numeric_gradient_at(&self, flat: &[T], scale: T) -> Gradient<T> {
        let mut work = flat.to_vec();
        let mut partial = |i: usize| {
            let base = flat[i];
            let h = numerics::default_step(base, 1);
            let mut eval = |delta: T| {
                work[i] = base + delta;
                let e = self.energy_excess_at(&Coords::from_flat(&work), scale);
                work[i] = base;
                e
            };
            let two = T::lit(2.0);
            let coarse = (eval(h) - eval(-h)) / (two * h);
            let fine = (eval(h / two) - eval(-h / two)) / h;
            (T::lit(4.0) * fine - coarse) / T::lit(3.0)
        };
        let n = (flat.len() - 2) / 2;
        let dx = partial(0);
        let dp = partial(1);
        let drho = (0..n).map(|j| partial(2 + j)).collect();
        let dpi = (0..n).map(|j| partial(2 + n + j)).collect();
        Gradient { dx, dp, drho, dpi }
    }

    pub(crate) fn gradient_at(&self, flat: &[T], scale: T) -> Gradient<T> {
        self.analytic_gradient_at(&Coords::from_flat(flat), scale)
            .unwrap_or_else(|| self.numeric_gradient_at(flat, scale))
    }

    pub fn has_analytic_gradient(&self) -> bool {
        let n = self.masses.len();
        let zeros = vec![T::zero(); n];
        let co = Coords {
            x: T::zero(),
            p: T::zero(),
            rho: &zeros,
            pi: &zeros,
        };
        self.analytic_gradient_at(&co, T::one()).is_some()
    }
}

fn finite<T: Real>(value: T, what: &str) -> Result<T> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation(format!("{what} evaluated to {value}")))
    }
}

/// H_rel(ρ, π).
pub fn internal_hamiltonian<T: Real>(spec: &HamiltonianSpec<T>, s: &PhaseState<T>) -> Result<T> {
    spec.check_state(s)?;
    finite(spec.internal.energy(s.rel_pos(), s.rel_mom()), "internal Hamiltonian")
}

/// U_ext = U⁰(X) + U¹(X, P, ρ, π)/c².
pub fn external_potential<T: Real>(spec: &HamiltonianSpec<T>, s: &PhaseState<T>) -> Result<T> {
    spec.check_state(s)?;
    let co = s.coords();
    let h_rel = spec.internal_at(&co, T::one());
    finite(spec.external_potential_at(&co, h_rel), "external potential")
}

/// Expanded form including the rest energy Mc².
pub fn total_hamiltonian_eq1<T: Real>(spec: &HamiltonianSpec<T>, s: &PhaseState<T>) -> Result<T> {
    Ok(spec.rest_energy() + total_hamiltonian_eq1_excess(spec, s)?)
}

/// Expanded form without Mc². At X = 0, P = 0 this is exactly H_rel + U_ext.
pub fn total_hamiltonian_eq1_excess<T: Real>(
    spec: &HamiltonianSpec<T>,
    s: &PhaseState<T>,
) -> Result<T> {
    spec.check_state(s)?;
    finite(spec.expanded_excess_at(&s.coords(), T::one()), "expanded Hamiltonian")
}

/// √(P²c² + (Mc² + H_rel)²).
pub fn minkowski_cm_hamiltonian<T: Real>(
    spec: &HamiltonianSpec<T>,
    s: &PhaseState<T>,
) -> Result<T> {
    spec.check_state(s)?;
    let h_rel = spec.internal_at(&s.coords(), T::one());
    finite(
        spec.rest_energy() + spec.kinetic_excess(s.p(), h_rel),
        "Minkowski c.m. Hamiltonian",
    )
}

/// Bracket form H_mink + (g/2c²)·{X, H_mink} + U_ext, with the symmetrized
/// product evaluated classically: H_mink·(1 + gX/c²) + U_ext.
pub fn rindler_hamiltonian_bracket<T: Real>(
    spec: &HamiltonianSpec<T>,
    s: &PhaseState<T>,
) -> Result<T> {
    Ok(spec.rest_energy() + rindler_hamiltonian_bracket_excess(spec, s)?)
}

pub fn rindler_hamiltonian_bracket_excess<T: Real>(
    spec: &HamiltonianSpec<T>,
    s: &PhaseState<T>,
) -> Result<T> {
    spec.check_state(s)?;
    finite(spec.bracket_excess_at(&s.coords(), T::one()), "bracket Hamiltonian")
}

/// Difference between the two forms across a sweep of light speeds.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport<T> {
    pub light_speeds: Vec<T>,
    pub differences: Vec<T>,
    /// Fitted power of c in the decay of the difference; `None` when the
    /// forms agree exactly at every light speed.
    pub fitted_exponent: Option<T>,
    pub passed: bool,
}

/// Largest fitted exponent accepted as c⁻⁴ decay.
pub const EXPANSION_EXPONENT_LIMIT: f64 = -4.0 + 0.2;

/// |expanded − bracket| at each light speed and its log-log slope. Passes
/// when the slope is at most −4 + 0.2, or when the forms agree exactly.
pub fn check_expansion_consistency<T: Real>(
    spec: &HamiltonianSpec<T>,
    s: &PhaseState<T>,
    light_speeds: &[T],
) -> Result<ExpansionReport<T>> {
    if light_speeds.len() < 2 {
        return Err(Error::Fit("a light-speed sweep needs at least two points".into()));
    }
    let mut differences = Vec::with_capacity(light_speeds.len());
    for &c in light_speeds {
        let at_c = spec.with_c(c)?;
        let expanded = total_hamiltonian_eq1_excess(&at_c, s)?;
        let bracket = rindler_hamiltonian_bracket_excess(&at_c, s)?;
        differences.push((expanded - bracket).abs());
    }
    if differences.iter().all(|d| *d == T::zero()) {
        return Ok(ExpansionReport {
            light_speeds: light_speeds.to_vec(),
            differences,
            fitted_exponent: None,
            passed: true,
        });
    }
    if differences.iter().any(|d| *d == T::zero()) {
        return Err(Error::Fit(format!(
            "difference vanishes at some light speeds only: {differences:?}"
        )));
    }
    let exponent = numerics::loglog_slope(light_speeds, &differences)?;
    Ok(ExpansionReport {
        light_speeds: light_speeds.to_vec(),
        differences,
        fitted_exponent: Some(exponent),
        passed: exponent <= T::lit(EXPANSION_EXPONENT_LIMIT),
    })
}

/// Options for [`clock_rest_hamiltonian`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClockOptions {
    /// Accept X = 0 with constant P ≠ 0; the energy is then the bracket form
    /// at X = 0, which still has no position coupling.
    pub allow_momentum: bool,
    /// Add Mc² to the result.
    pub include_rest_energy: bool,
}

/// Hamiltonian of a clock held at rest by its observer: H_rel + U₀, where U₀
/// is the external potential at X = 0.
pub fn clock_rest_hamiltonian<T: Real>(
    spec: &HamiltonianSpec<T>,
    s: &PhaseState<T>,
    options: ClockOptions,
) -> Result<T> {
    spec.check_state(s)?;
    if s.x() != T::zero() {
        return Err(Error::Precondition(format!(
            "clock must sit at the observer (X = 0), got X = {}",
            s.x()
        )));
    }
    if s.p() != T::zero() && !options.allow_momentum {
        return Err(Error::Precondition(format!(
            "clock must be at rest (P = 0), got P = {}",
            s.p()
        )));
    }
    let u0 = taylor_potential_coefficients(spec, 0)[0].evaluate(s.rel_pos(), s.rel_mom(), s.p())?;
    let h_rel = internal_hamiltonian(spec, s)?;
    let internal = spec.kinetic_excess(s.p(), h_rel);
    let value = internal + u0;
    let value = if options.include_rest_energy {
        spec.rest_energy() + value
    } else {
        value
    };
    finite(value, "clock Hamiltonian")
}

/// Splits the per-particle potential of `spec` into U⁰(R) and U¹(R, P, ρ, π).
pub fn split_external_potential<T: Real>(spec: &HamiltonianSpec<T>) -> Result<SplitPotential<T>> {
    let per_particle = spec.potential.per_particle.as_ref().ok_or_else(|| {
        Error::Configuration("split requires a per-particle potential".into())
    })?;
    split_per_particle(per_particle, &spec.masses)
}
