//! Internal (relative-coordinate) Hamiltonians H_rel(ρ, π).

use crate::Real;

/// An internal Hamiltonian of the composite system.
///
/// Implementations must be finite on finite inputs. Closed-form gradients are
/// optional; without them the dynamics falls back to central differences.
pub trait InternalHamiltonian<T: Real>: Send + Sync {
    fn energy(&self, rho: &[T], pi: &[T]) -> T;

    /// (∂H_rel/∂ρ_j, ∂H_rel/∂π_j).
    fn gradient(&self, _rho: &[T], _pi: &[T]) -> Option<(Vec<T>, Vec<T>)> {
        None
    }

    /// Minimum-energy configuration for `n` relative pairs.
    fn ground_state(&self, _n: usize) -> Option<(Vec<T>, Vec<T>)> {
        None
    }

    /// Number of relative pairs the model is built for, if fixed.
    fn particle_count(&self) -> Option<usize> {
        None
    }
}

/// Mass-weighted harmonic tether of every constituent to the c.m., plus a
/// constant offset:
///
/// H_rel = offset + Σ_j [π_j²/(2 m_j) + m_j ω² ρ_j²/2].
///
/// Mass weighting keeps Σ π_j = 0 and Σ m_j ρ_j = 0 invariant under the flow.
/// The offset plays the role of an internal (e.g. zero-point or excitation)
/// energy that survives at the minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicInternal<T> {
    masses: Vec<T>,
    omega: T,
    offset: T,
}

impl<T: Real> HarmonicInternal<T> {
    pub fn new(masses: Vec<T>, omega: T, offset: T) -> Self {
        Self {
            masses,
            omega,
            offset,
        }
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn offset(&self) -> T {
        self.offset
    }
}

impl<T: Real> InternalHamiltonian<T> for HarmonicInternal<T> {
    fn energy(&self, rho: &[T], pi: &[T]) -> T {
        let half = T::lit(0.5);
        let w2 = self.omega * self.omega;
        self.masses
            .iter()
            .zip(rho.iter().zip(pi))
            .fold(self.offset, |acc, (&m, (&r, &p))| {
                acc + half * p * p / m + half * m * w2 * r * r
            })
    }

    fn gradient(&self, rho: &[T], pi: &[T]) -> Option<(Vec<T>, Vec<T>)> {
        let w2 = self.omega * self.omega;
        let d_rho = self.masses.iter().zip(rho).map(|(&m, &r)| m * w2 * r).collect();
        let d_pi = self.masses.iter().zip(pi).map(|(&m, &p)| p / m).collect();
        Some((d_rho, d_pi))
    }

    fn ground_state(&self, n: usize) -> Option<(Vec<T>, Vec<T>)> {
        Some((vec![T::zero(); n], vec![T::zero(); n]))
    }

    fn particle_count(&self) -> Option<usize> {
        Some(self.masses.len())
    }
}

/// A structureless internal energy: H_rel is the same constant everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantInternal<T>(pub T);

impl<T: Real> InternalHamiltonian<T> for ConstantInternal<T> {
    fn energy(&self, _rho: &[T], _pi: &[T]) -> T {
        self.0
    }

    fn gradient(&self, rho: &[T], pi: &[T]) -> Option<(Vec<T>, Vec<T>)> {
        Some((vec![T::zero(); rho.len()], vec![T::zero(); pi.len()]))
    }

    fn ground_state(&self, n: usize) -> Option<(Vec<T>, Vec<T>)> {
        Some((vec![T::zero(); n], vec![T::zero(); n]))
    }
}

/// Wraps a closure `(ρ, π) -> H_rel`.
#[derive(Clone)]
pub struct InternalFn<F>(pub F);

impl<T, F> InternalHamiltonian<T> for InternalFn<F>
where
    T: Real,
    F: Fn(&[T], &[T]) -> T + Send + Sync,
{
    fn energy(&self, rho: &[T], pi: &[T]) -> T {
        (self.0)(rho, pi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_minimum_is_offset() {
        let h = HarmonicInternal::new(vec![1.0, 1.0], 1.0, 0.0);
        assert_eq!(h.energy(&[0.0, 0.0], &[0.0, 0.0]), 0.0);
        let h = HarmonicInternal::new(vec![1.0, 1.0], 1.0, 0.25);
        assert_eq!(h.energy(&[0.0, 0.0], &[0.0, 0.0]), 0.25);
    }

    #[test]
    fn two_unit_masses_separated_by_point_two() {
        let h = HarmonicInternal::new(vec![1.0, 1.0], 1.0, 0.0);
        let e: f64 = h.energy(&[0.1, -0.1], &[0.0, 0.0]);
        assert!((e - 0.01).abs() < 1e-16);
    }

    #[test]
    fn decoupled_subsystems_add() {
        let a = HarmonicInternal::new(vec![1.0, 2.0], 0.7, 0.1);
        let b = HarmonicInternal::new(vec![0.5], 1.3, 0.2);
        let union = InternalFn(|rho: &[f64], pi: &[f64]| {
            a.energy(&rho[..2], &pi[..2]) + b.energy(&rho[2..], &pi[2..])
        });
        let rho = [0.3, -0.15, 0.4];
        let pi = [0.2, -0.1, 0.05];
        let direct = a.energy(&rho[..2], &pi[..2]) + b.energy(&rho[2..], &pi[2..]);
        assert_eq!(union.energy(&rho, &pi), direct);
    }

    #[test]
    fn gradient_matches_differences() {
        let h = HarmonicInternal::new(vec![0.7, 1.3], 1.1, 0.0);
        let rho = [0.2, -0.3];
        let pi = [0.5, -0.4];
        let (gr, gp) = h.gradient(&rho, &pi).unwrap();
        let step = 1e-6;
        for j in 0..2 {
            let mut up = rho;
            let mut dn = rho;
            up[j] += step;
            dn[j] -= step;
            let fd: f64 = (h.energy(&up, &pi) - h.energy(&dn, &pi)) / (2.0 * step);
            assert!((fd - gr[j]).abs() < 1e-8);
            let mut up = pi;
            let mut dn = pi;
            up[j] += step;
            dn[j] -= step;
            let fd: f64 = (h.energy(&rho, &up) - h.energy(&rho, &dn)) / (2.0 * step);
            assert!((fd - gp[j]).abs() < 1e-8);
        }
    }
}
