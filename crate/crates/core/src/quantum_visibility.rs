//! Two-path superposition of a composite clock held static at two heights.
//!
//! Each branch accumulates the internal phase E_n·(1 + (1 − λ)·g·x/c²)·T/ħ,
//! so the relative phase between branches depends on the level n. Tracing
//! out the internal state leaves the path coherence
//! V = |Σ_n p_n exp(i·(1 − λ)·g·Δx·E_n·T/(ħc²))|.

use num_complex::Complex;

use crate::units::UnitSystem;
use crate::{Error, Real, Result};

/// Largest level count accepted by [`visibility_oracle`].
pub const ORACLE_MAX_LEVELS: usize = 64;

const PROBABILITY_SUM_TOLERANCE: f64 = 1e-12;

/// Internal energy levels with occupation probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct InternalSpectrum<T> {
    energies: Vec<T>,
    probabilities: Vec<T>,
}

impl<T: Real> InternalSpectrum<T> {
    /// Validates Σp = 1 (to 1e-12), p ≥ 0 and finite energies.
    pub fn new(levels: Vec<(T, T)>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Configuration("spectrum needs at least one level".into()));
        }
        let (energies, probabilities): (Vec<T>, Vec<T>) = levels.into_iter().unzip();
        if let Some(e) = energies.iter().find(|e| !e.is_finite()) {
            return Err(Error::Configuration(format!("non-finite level energy {e}")));
        }
        if let Some(p) = probabilities.iter().find(|p| !(**p >= T::zero()) || !p.is_finite()) {
            return Err(Error::Configuration(format!("invalid occupation probability {p}")));
        }
        let total: T = probabilities.iter().copied().sum();
        if !((total - T::one()).abs() <= T::lit(PROBABILITY_SUM_TOLERANCE).max(T::epsilon() * T::lit(4.0))) {
            return Err(Error::Configuration(format!(
                "occupation probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self {
            energies,
            probabilities,
        })
    }

    /// `d` equally spaced levels E_n = spacing·n with p_n ∝ ratio^n.
    pub fn harmonic(spacing: T, ratio: T, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Configuration("spectrum needs at least one level".into()));
        }
        if !(ratio > T::zero() && ratio < T::one()) {
            return Err(Error::Configuration(format!("occupation ratio must lie in (0, 1), got {ratio}")));
        }
        let weights: Vec<T> = (0..d).map(|n| ratio.powi(n as i32)).collect();
        let norm: T = weights.iter().copied().sum();
        Self::new(
            weights
                .into_iter()
                .enumerate()
                .map(|(n, w)| (spacing * T::lit(n as f64), w / norm))
                .collect(),
        )
    }

    /// Harmonic levels with geometric occupation, truncated once the
    /// discarded tail ratio^d falls below 1e-9, then renormalized.
    pub fn geometric(spacing: T, ratio: T) -> Result<Self> {
        if !(ratio > T::zero() && ratio < T::one()) {
            return Err(Error::Configuration(format!("occupation ratio must lie in (0, 1), got {ratio}")));
        }
        let d = (1e-9f64.ln() / ratio.to_f64_lossy().ln()).floor() as usize + 1;
        Self::harmonic(spacing, ratio, d)
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    /// All energies shifted by `offset`.
    pub fn shifted(&self, offset: T) -> Self {
        Self {
            energies: self.energies.iter().map(|e| *e + offset).collect(),
            probabilities: self.probabilities.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerConfig<T> {
    pub x_upper: T,
    pub x_lower: T,
    /// Hold time in frame time.
    pub duration: T,
    pub g: T,
    pub c: T,
    pub hbar: T,
    /// λ in the counter-term −λ·g·X·H_rel/c².
    pub counter_coupling: T,
}

impl<T: Real> InterferometerConfig<T> {
    pub fn new(x_upper: T, x_lower: T, duration: T, g: T, units: UnitSystem) -> Result<Self> {
        Self {
            x_upper,
            x_lower,
            duration,
            g,
            c: T::lit(units.speed_of_light()),
            hbar: T::lit(units.hbar()),
            counter_coupling: T::zero(),
        }
        .validated()
    }

    pub fn with_counter_coupling(mut self, lambda: T) -> Self {
        self.counter_coupling = lambda;
        self
    }

    pub fn with_g(mut self, g: T) -> Self {
        self.g = g;
        self
    }

    /// Checks x_upper ≠ x_lower, duration > 0, c > 0, ħ > 0 and finiteness.
    pub fn validated(self) -> Result<Self> {
        let all = [
            self.x_upper,
            self.x_lower,
            self.duration,
            self.g,
            self.c,
            self.hbar,
            self.counter_coupling,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Configuration(format!("non-finite interferometer parameter in {self:?}")));
        }
        if self.x_upper == self.x_lower {
            return Err(Error::Configuration("the two branch heights coincide".into()));
        }
        if !(self.duration > T::zero()) {
            return Err(Error::Configuration(format!("hold time must be positive, got {}", self.duration)));
        }
        if !(self.c > T::zero()) || !(self.hbar > T::zero()) {
            return Err(Error::Configuration("c and hbar must be positive".into()));
        }
        Ok(self)
    }

    pub fn separation(&self) -> T {
        self.x_upper - self.x_lower
    }

    fn coupling(&self) -> T {
        (T::one() - self.counter_coupling) * self.g / (self.c * self.c)
    }
}

/// Internal phase E·(1 + (1 − λ)·g·x/c²)·T/ħ accumulated on a branch held at `x`.
pub fn branch_phase<T: Real>(config: &InterferometerConfig<T>, energy: T, x: T) -> T {
    energy * (T::one() + config.coupling() * x) * config.duration / config.hbar
}

/// Path coherence after tracing out the internal state. Phases are taken
/// relative to the first level, which leaves V unchanged and makes the
/// inertial, fully cancelled and single-level cases exactly 1.
pub fn visibility<T: Real>(config: &InterferometerConfig<T>, spectrum: &InternalSpectrum<T>) -> T {
    let rate = config.coupling() * config.separation() * config.duration / config.hbar;
    let reference = spectrum.energies[0];
    let sum: Complex<T> = spectrum
        .energies
        .iter()
        .zip(&spectrum.probabilities)
        .map(|(e, p)| Complex::from_polar(*p, rate * (*e - reference)))
        .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z);
    let total: T = spectrum.probabilities.iter().copied().sum();
    (sum.norm() / total).min(T::one())
}

type Matrix<T> = Vec<Vec<Complex<T>>>;

fn matmul<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = a.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![vec![zero; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == zero {
                continue;
            }
            for j in 0..n {
                out[i][j] = out[i][j] + aik * b[k][j];
            }
        }
    }
    out
}

fn adjoint<T: Real>(a: &Matrix<T>) -> Matrix<T> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

/// Density-matrix evaluation of the same quantity: builds
/// |+⟩⟨+| ⊗ Σ p_n |n⟩⟨n|, applies the branch-conditioned unitary, traces out
/// the internal levels and returns 2|ρ_ul| of the path state.
///
/// Evolution is written relative to the common free evolution exp(−i·H_rel·T/ħ),
/// which acts identically on both branches and drops out of the reduced state.
pub fn visibility_oracle<T: Real>(config: &InterferometerConfig<T>, spectrum: &InternalSpectrum<T>) -> Result<T> {
    let d = spectrum.len();
    if d > ORACLE_MAX_LEVELS {
        return Err(Error::Configuration(format!(
            "oracle supports at most {ORACLE_MAX_LEVELS} levels, got {d}"
        )));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let half = T::lit(0.5);
    let dim = 2 * d;

    // Joint index (branch, level) -> branch·d + level; branch 0 is the upper path.
    let mut rho: Matrix<T> = vec![vec![zero; dim]; dim];
    for a in 0..2 {
        for b in 0..2 {
            for n in 0..d {
                rho[a * d + n][b * d + n] = Complex::new(half * spectrum.probabilities[n], T::zero());
            }
        }
    }

    let mut u: Matrix<T> = vec![vec![zero; dim]; dim];
    for (branch, x) in [config.x_upper, config.x_lower].into_iter().enumerate() {
        for n in 0..d {
            let interaction = branch_phase(config, spectrum.energies[n], x)
                - branch_phase(config, spectrum.energies[n], T::zero());
            u[branch * d + n][branch * d + n] = Complex::from_polar(T::one(), -interaction);
        }
    }

    let evolved = matmul(&matmul(&u, &rho), &adjoint(&u));
    let coherence = (0..d).fold(zero, |acc, n| acc + evolved[n][d + n]);
    Ok(T::lit(2.0) * coherence.norm())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameDependenceReport<T> {
    /// Visibility seen by the supported observer (g as configured).
    pub supported: T,
    /// Visibility in the freely falling description (g = 0).
    pub free_fall: T,
    /// free_fall − supported
    pub difference: T,
}

pub fn frame_dependence_report<T: Real>(
    config: &InterferometerConfig<T>,
    spectrum: &InternalSpectrum<T>,
) -> FrameDependenceReport<T> {
    let supported = visibility(config, spectrum);
    let free_fall = visibility(&config.with_g(T::zero()), spectrum);
    FrameDependenceReport {
        supported,
        free_fall,
        difference: free_fall - supported,
    }
}
