//! External (supporting) potentials and their split into a Newtonian c.m.
//! part and a 1/c² correction:
//!
//! U_ext = U⁰(R) + U¹(R, P, ρ, π)/c².

use std::fmt;
use std::sync::Arc;

use crate::numerics;
use crate::{Error, Real, Result};

pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
/// `(R, P, ρ, π) -> U¹`
pub type CorrectionFn<T> = Arc<dyn Fn(T, T, &[T], &[T]) -> T + Send + Sync>;
/// `(x, p) -> W`, the coefficient of 1/c² in a per-particle potential.
pub type PhaseFn<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;
/// `(P, ρ, π) -> χ_j`, the 1/c² correction to a particle position.
pub type ChiFn<T> = Arc<dyn Fn(T, &[T], &[T]) -> T + Send + Sync>;

/// Newtonian part U⁰(R) of the supporting potential.
#[derive(Clone)]
pub enum SupportPotential<T> {
    Zero,
    /// αX²/2
    Harmonic { alpha: T },
    /// slope·X; `slope = −Mg` is the counter-gravity potential.
    Linear { slope: T },
    /// coefficient·X^exponent, exponent ≥ 0.
    PowerLaw { coefficient: T, exponent: u32 },
    Custom(ScalarFn<T>),
}

impl<T: Real> SupportPotential<T> {
    pub fn custom<F: Fn(T) -> T + Send + Sync + 'static>(f: F) -> Self {
        SupportPotential::Custom(Arc::new(f))
    }

    pub fn value(&self, x: T) -> T {
        match self {
            SupportPotential::Zero => T::zero(),
            SupportPotential::Harmonic { alpha } => T::lit(0.5) * *alpha * x * x,
            SupportPotential::Linear { slope } => *slope * x,
            SupportPotential::PowerLaw {
                coefficient,
                exponent,
            } => *coefficient * x.powi(*exponent as i32),
            SupportPotential::Custom(f) => f(x),
        }
    }

    /// dU⁰/dX in closed form, `None` for custom potentials.
    pub fn derivative(&self, x: T) -> Option<T> {
        match self {
            SupportPotential::Zero => Some(T::zero()),
            SupportPotential::Harmonic { alpha } => Some(*alpha * x),
            SupportPotential::Linear { slope } => Some(*slope),
            SupportPotential::PowerLaw {
                coefficient,
                exponent,
            } => Some(match exponent {
                0 => T::zero(),
                n => *coefficient * T::lit(*n as f64) * x.powi(*n as i32 - 1),
            }),
            SupportPotential::Custom(_) => None,
        }
    }

    /// Stiffness α for the harmonic form.
    pub fn harmonic_stiffness(&self) -> Option<T> {
        match self {
            SupportPotential::Harmonic { alpha } => Some(*alpha),
            _ => None,
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for SupportPotential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportPotential::Zero => write!(f, "Zero"),
            SupportPotential::Harmonic { alpha } => write!(f, "Harmonic {{ alpha: {alpha:?} }}"),
            SupportPotential::Linear { slope } => write!(f, "Linear {{ slope: {slope:?} }}"),
            SupportPotential::PowerLaw {
                coefficient,
                exponent,
            } => write!(
                f,
                "PowerLaw {{ coefficient: {coefficient:?}, exponent: {exponent} }}"
            ),
            SupportPotential::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Relativistic part U¹(R, P, ρ, π), entering as U¹/c².
#[derive(Clone)]
pub enum CorrectionPotential<T> {
    Zero,
    /// U¹ = −λ·g·X·H_rel: counteracts (λ = 1 cancels) the gravitational
    /// coupling g·X·H_rel/c².
    CounterCoupling { lambda: T },
    /// U¹ = w·Σ_j (m_j P/M + π_j)², the c.m.-frame form of a per-particle
    /// p²·w/c² term.
    MomentumSquared { weight: T },
    Custom(CorrectionFn<T>),
}

impl<T: Real> CorrectionPotential<T> {
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(T, T, &[T], &[T]) -> T + Send + Sync + 'static,
    {
        CorrectionPotential::Custom(Arc::new(f))
    }
}

impl<T: fmt::Debug> fmt::Debug for CorrectionPotential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorrectionPotential::Zero => write!(f, "Zero"),
            CorrectionPotential::CounterCoupling { lambda } => {
                write!(f, "CounterCoupling {{ lambda: {lambda:?} }}")
            }
            CorrectionPotential::MomentumSquared { weight } => {
                write!(f, "MomentumSquared {{ weight: {weight:?} }}")
            }
            CorrectionPotential::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// U_ext = Σ_j [V(x_j) + W(x_j, p_j)/c²] written per constituent, with
/// x_j = R + ρ_j + χ_j(P, ρ, π)/c² and p_j = m_j P/M + π_j.
///
/// The 1/c² momentum correction Π_j is not represented: W already carries the
/// momentum dependence at that order. χ_j are injection points and default
/// to zero.
#[derive(Clone)]
pub struct PerParticlePotential<T> {
    pub leading: ScalarFn<T>,
    pub relativistic: Option<PhaseFn<T>>,
    pub chi: Vec<ChiFn<T>>,
}

impl<T: Real> PerParticlePotential<T> {
    pub fn new<F: Fn(T) -> T + Send + Sync + 'static>(leading: F) -> Self {
        Self {
            leading: Arc::new(leading),
            relativistic: None,
            chi: Vec::new(),
        }
    }

    pub fn with_relativistic<F: Fn(T, T) -> T + Send + Sync + 'static>(mut self, w: F) -> Self {
        self.relativistic = Some(Arc::new(w));
        self
    }

    pub fn with_chi(mut self, chi: Vec<ChiFn<T>>) -> Self {
        self.chi = chi;
        self
    }

    fn chi_value(&self, j: usize, p: T, rho: &[T], pi: &[T]) -> T {
        self.chi.get(j).map_or(T::zero(), |chi| chi(p, rho, pi))
    }

    /// Direct per-particle sum, no expansion in 1/c².
    pub fn evaluate(&self, masses: &[T], c: T, x: T, p: T, rho: &[T], pi: &[T]) -> T {
        let total: T = masses.iter().copied().sum();
        let c2 = c * c;
        masses
            .iter()
            .enumerate()
            .map(|(j, &m)| {
                let xj = x + rho[j] + self.chi_value(j, p, rho, pi) / c2;
                let pj = m * p / total + pi[j];
                let w = self.relativistic.as_ref().map_or(T::zero(), |w| w(xj, pj));
                (self.leading)(xj) + w / c2
            })
            .sum()
    }
}

impl<T> fmt::Debug for PerParticlePotential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PerParticlePotential")
            .field("relativistic", &self.relativistic.is_some())
            .field("chi", &self.chi.len())
            .finish()
    }
}

/// Result of [`split_per_particle`].
#[derive(Clone)]
pub struct SplitPotential<T> {
    /// U⁰(R) = Σ_j V(R), relative positions neglected over the system volume.
    pub newtonian: ScalarFn<T>,
    /// U¹(R, P, ρ, π) = Σ_j V′(R)·χ_j + Σ_j W(R, m_j P/M + π_j).
    pub correction: CorrectionFn<T>,
    leading: ScalarFn<T>,
}

impl<T: Real> SplitPotential<T> {
    /// Size of the neglected ρ-dependence of the Newtonian part,
    /// Σ_j V(R + ρ_j) − Σ_j V(R).
    pub fn volume_residual(&self, x: T, rho: &[T]) -> T {
        let exact: T = rho.iter().map(|&r| (self.leading)(x + r)).sum();
        exact - (self.newtonian)(x)
    }
}

impl<T> fmt::Debug for SplitPotential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SplitPotential { .. }")
    }
}

/// Expands a per-particle potential to first order in 1/c² around the c.m.
pub fn split_per_particle<T: Real>(
    per_particle: &PerParticlePotential<T>,
    masses: &[T],
) -> Result<SplitPotential<T>> {
    if masses.is_empty() {
        return Err(Error::Configuration("no constituents to split over".into()));
    }
    if !per_particle.chi.is_empty() && per_particle.chi.len() != masses.len() {
        return Err(Error::Configuration(format!(
            "{} position corrections for {} constituents",
            per_particle.chi.len(),
            masses.len()
        )));
    }
    let count = T::lit(masses.len() as f64);
    let leading = per_particle.leading.clone();
    let newtonian: ScalarFn<T> = {
        let leading = leading.clone();
        Arc::new(move |x| count * leading(x))
    };

    let masses: Vec<T> = masses.to_vec();
    let total: T = masses.iter().copied().sum();
    let chi = per_particle.chi.clone();
    let relativistic = per_particle.relativistic.clone();
    let slope_source = leading.clone();
    let correction: CorrectionFn<T> = Arc::new(move |x, p, rho, pi| {
        let mut acc = T::zero();
        if !chi.is_empty() {
            let slope = numerics::derivative(&|y| slope_source(y), x, 1)
                .map(|d| d.value)
                .unwrap_or_else(|_| T::nan());
            acc = acc + chi.iter().map(|chi_j| slope * chi_j(p, rho, pi)).sum::<T>();
        }
        if let Some(w) = &relativistic {
            acc = acc
                + masses
                    .iter()
                    .zip(pi)
                    .map(|(&m, &pj)| w(x, m * p / total + pj))
                    .sum::<T>();
        }
        acc
    });

    Ok(SplitPotential {
        newtonian,
        correction,
        leading,
    })
}

/// Supporting potential of a Hamiltonian: the split form, a per-particle form,
/// or both (in which case they must agree through [`split_per_particle`]).
#[derive(Clone, Debug)]
pub struct PotentialSpec<T> {
    pub newtonian: SupportPotential<T>,
    pub correction: CorrectionPotential<T>,
    pub per_particle: Option<PerParticlePotential<T>>,
    split_given: bool,
}

impl<T: Real> PotentialSpec<T> {
    pub fn none() -> Self {
        Self::split(SupportPotential::Zero, CorrectionPotential::Zero)
    }

    pub fn split(newtonian: SupportPotential<T>, correction: CorrectionPotential<T>) -> Self {
        Self {
            newtonian,
            correction,
            per_particle: None,
            split_given: true,
        }
    }

    /// U = αX²/2 with no relativistic correction.
    pub fn harmonic(alpha: T) -> Self {
        Self::split(SupportPotential::Harmonic { alpha }, CorrectionPotential::Zero)
    }

    /// Per-particle form only; the split is derived when the Hamiltonian is built.
    pub fn per_particle(per_particle: PerParticlePotential<T>) -> Self {
        Self {
            newtonian: SupportPotential::Zero,
            correction: CorrectionPotential::Zero,
            per_particle: Some(per_particle),
            split_given: false,
        }
    }

    /// Both forms; they are cross-checked when the Hamiltonian is built.
    pub fn with_per_particle(mut self, per_particle: PerParticlePotential<T>) -> Self {
        self.per_particle = Some(per_particle);
        self
    }

    pub fn has_split_form(&self) -> bool {
        self.split_given
    }

    /// Fills the split form from the per-particle form when only the latter
    /// was given; returns the derived split when one was computed.
    pub(crate) fn resolve(&mut self, masses: &[T]) -> Result<Option<SplitPotential<T>>> {
        match (&self.per_particle, self.split_given) {
            (None, true) => Ok(None),
            (None, false) => Err(Error::Configuration(
                "potential needs a split or a per-particle form".into(),
            )),
            (Some(pp), _) => {
                let split = split_per_particle(pp, masses)?;
                if !self.split_given {
                    self.newtonian = SupportPotential::Custom(split.newtonian.clone());
                    self.correction = CorrectionPotential::Custom(split.correction.clone());
                    self.split_given = true;
                }
                Ok(Some(split))
            }
        }
    }
}

impl<T: Real> Default for PotentialSpec<T> {
    fn default() -> Self {
        Self::none()
    }
}
