//! Minkowski and Rindler frames in 1+1 dimensions (time and the vertical axis).
//!
//! A [`FrameSpec`] describes a stationary observer with proper acceleration
//! `g` sitting at height `b` above the reference Rindler observer. The
//! synchronization epoch of all frames is fixed at zero: every observer is
//! instantaneously at rest with the reference Minkowski frame at `t' = 0`.
//!
//! Events strictly beyond the horizon (`x + c²/g ≤ 0`) are rejected with
//! [`Error::Domain`]; nothing is clamped.

use crate::{Error, Real, Result};

/// A (time, space) pair in 1+1 dimensions with signature (-, +).
///
/// The time component carries length units (time × c).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourVector<T> {
    pub t: T,
    pub x: T,
}

impl<T: Real> FourVector<T> {
    pub fn new(t: T, x: T) -> Self {
        Self { t, x }
    }

    /// Minkowski contraction η(self, other).
    pub fn inner(&self, other: &Self) -> T {
        minkowski_inner(self, other)
    }

    pub fn norm_sqr(&self) -> T {
        self.inner(self)
    }

    pub fn is_timelike(&self) -> bool {
        self.norm_sqr() < T::zero()
    }

    /// Active boost by rapidity `rapidity` along +x.
    pub fn boost(&self, rapidity: T) -> Self {
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        Self {
            t: ch * self.t + sh * self.x,
            x: sh * self.t + ch * self.x,
        }
    }
}

impl<T: Real> std::ops::Mul<T> for FourVector<T> {
    type Output = Self;

    fn mul(self, rhs: T) -> Self {
        Self::new(self.t * rhs, self.x * rhs)
    }
}

/// −a.t·b.t + a.x·b.x
pub fn minkowski_inner<T: Real>(a: &FourVector<T>, b: &FourVector<T>) -> T {
    -a.t * b.t + a.x * b.x
}

/// Event in a Rindler frame: frame time `t` and height `x`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RindlerEvent<T> {
    pub t: T,
    pub x: T,
}

impl<T> RindlerEvent<T> {
    pub fn new(t: T, x: T) -> Self {
        Self { t, x }
    }
}

/// Event in a Minkowski frame: coordinate time `t` and height `x`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MinkowskiEvent<T> {
    pub t: T,
    pub x: T,
}

impl<T> MinkowskiEvent<T> {
    pub fn new(t: T, x: T) -> Self {
        Self { t, x }
    }
}

/// Stationary observer: proper acceleration of the reference observer `g`,
/// height offset `b` and light speed `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSpec<T> {
    g: T,
    b: T,
    c: T,
}

impl<T: Real> FrameSpec<T> {
    /// Requires `g > 0`, `c > 0` and `1 + g·b/c² > 0`.
    pub fn new(g: T, b: T, c: T) -> Result<Self> {
        if !(g > T::zero()) || !g.is_finite() {
            return Err(Error::Domain(format!("proper acceleration must be positive, got {g}")));
        }
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::Domain(format!("light speed must be positive, got {c}")));
        }
        if !b.is_finite() {
            return Err(Error::Domain(format!("offset must be finite, got {b}")));
        }
        let spec = Self { g, b, c };
        if !(spec.proper_time_rate() > T::zero()) {
            return Err(Error::Domain(format!(
                "offset b = {b} places the observer at or below the horizon (c²/g = {})",
                spec.horizon_distance()
            )));
        }
        Ok(spec)
    }

    /// Reference (unshifted) Rindler observer.
    pub fn unshifted(g: T, c: T) -> Result<Self> {
        Self::new(g, T::zero(), c)
    }

    pub fn g(&self) -> T {
        self.g
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn c(&self) -> T {
        self.c
    }

    /// c²/g, the distance from the reference observer down to the horizon.
    pub fn horizon_distance(&self) -> T {
        self.c * self.c / self.g
    }

    /// 1 + g·b/c², the rate dτ̃/dt' of the shifted observer's clock.
    pub fn proper_time_rate(&self) -> T {
        T::one() + self.g * self.b / (self.c * self.c)
    }

    /// g/(1 + g·b/c²), the proper acceleration felt by the shifted observer.
    pub fn effective_acceleration(&self) -> T {
        self.g / self.proper_time_rate()
    }

    /// The frame of the shifted observer viewed as its own reference Rindler
    /// frame (acceleration g̃, zero offset).
    pub fn shifted_reference(&self) -> Self {
        Self {
            g: self.effective_acceleration(),
            b: T::zero(),
            c: self.c,
        }
    }

    fn require_unshifted(&self, op: &str) -> Result<()> {
        if self.b != T::zero() {
            return Err(Error::Precondition(format!(
                "{op} expects an unshifted frame (b = 0), got b = {}",
                self.b
            )));
        }
        Ok(())
    }
}

/// See [`FrameSpec::effective_acceleration`].
pub fn effective_acceleration<T: Real>(f: &FrameSpec<T>) -> T {
    f.effective_acceleration()
}

/// See [`FrameSpec::proper_time_rate`].
pub fn proper_time_rate<T: Real>(f: &FrameSpec<T>) -> T {
    f.proper_time_rate()
}

/// Rindler coordinates of the reference observer to Minkowski coordinates of
/// the inertial observer momentarily at rest with it at `t' = 0`:
///
/// cT = (x' + c²/g)·sinh(g t'/c), X = (x' + c²/g)·cosh(g t'/c) − c²/g.
pub fn rindler_to_minkowski<T: Real>(
    e: &RindlerEvent<T>,
    f: &FrameSpec<T>,
) -> Result<MinkowskiEvent<T>> {
    f.require_unshifted("rindler_to_minkowski")?;
    let horizon = f.horizon_distance();
    let lever = e.x + horizon;
    if !(lever > T::zero()) {
        return Err(Error::Domain(format!(
            "Rindler event at x = {} lies on or beyond the horizon at {}",
            e.x, -horizon
        )));
    }
    let rapidity = f.g * e.t / f.c;
    // lever·cosh(u) − L written as x + 2·lever·sinh²(u/2) to avoid cancellation.
    let half = (rapidity / T::lit(2.0)).sinh();
    Ok(MinkowskiEvent {
        t: lever * rapidity.sinh() / f.c,
        x: e.x + T::lit(2.0) * lever * half * half,
    })
}

/// Inverse of [`rindler_to_minkowski`]; the event must lie inside the right
/// Rindler wedge, `X + c²/g > |cT|`.
pub fn minkowski_to_rindler<T: Real>(
    e: &MinkowskiEvent<T>,
    f: &FrameSpec<T>,
) -> Result<RindlerEvent<T>> {
    f.require_unshifted("minkowski_to_rindler")?;
    let horizon = f.horizon_distance();
    let lever = e.x + horizon;
    let ct = f.c * e.t;
    if !(lever > ct.abs()) {
        return Err(Error::Domain(format!(
            "Minkowski event (T = {}, X = {}) lies outside the Rindler wedge",
            e.t, e.x
        )));
    }
    // (X + c²/g)² − (cT)² factored to avoid cancellation near the wedge edge.
    let radius = ((lever - ct) * (lever + ct)).sqrt();
    Ok(RindlerEvent {
        t: f.c / f.g * (ct / lever).atanh(),
        // radius − c²/g = X − (cT)²/(radius + X + c²/g)
        x: e.x - ct * ct / (radius + lever),
    })
}

/// Reference Rindler coordinates to the coordinates of the observer shifted
/// by `b`: x̃' = x' − b, t̃' = (1 + g·b/c²)·t'.
pub fn shift_rindler<T: Real>(e: &RindlerEvent<T>, f: &FrameSpec<T>) -> Result<RindlerEvent<T>> {
    if !(e.x + f.horizon_distance() > T::zero()) {
        return Err(Error::Domain(format!(
            "Rindler event at x = {} lies on or beyond the horizon",
            e.x
        )));
    }
    Ok(RindlerEvent {
        t: f.proper_time_rate() * e.t,
        x: e.x - f.b,
    })
}

/// Four-velocity (c·cosh(g̃τ/c), c·sinh(g̃τ/c)) of the observer described by
/// `f` at its proper time `tau`, in the Minkowski frame it is momentarily at
/// rest in at τ = 0. For the reference observer g̃ = g.
pub fn observer_four_velocity<T: Real>(f: &FrameSpec<T>, tau: T) -> FourVector<T> {
    let rapidity = f.effective_acceleration() * tau / f.c;
    FourVector {
        t: f.c * rapidity.cosh(),
        x: f.c * rapidity.sinh(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> FrameSpec<f64> {
        FrameSpec::unshifted(1.0, 1.0).unwrap()
    }

    #[test]
    fn origin_maps_to_itself() {
        let m = rindler_to_minkowski(&RindlerEvent::new(0.0, 0.37), &unit()).unwrap();
        assert_eq!(m, MinkowskiEvent::new(0.0, 0.37));
        let r = minkowski_to_rindler(&MinkowskiEvent::new(0.0, 0.37), &unit()).unwrap();
        assert_eq!(r.t, 0.0);
        assert_relative_eq!(r.x, 0.37, max_relative = 1e-15);
    }

    #[test]
    fn unit_rapidity_event() {
        let m = rindler_to_minkowski(&RindlerEvent::new(1f64.asinh(), 0.0), &unit()).unwrap();
        assert_relative_eq!(m.t, 1.0, max_relative = 1e-15);
        assert_relative_eq!(m.x, 0.414_213_562_373_095_1, max_relative = 1e-14);
        let back = minkowski_to_rindler(&MinkowskiEvent::new(1.0, 2f64.sqrt() - 1.0), &unit()).unwrap();
        assert_relative_eq!(back.t, 1f64.asinh(), max_relative = 1e-14);
        assert!(back.x.abs() < 1e-15);
    }

    #[test]
    fn horizon_and_wedge_are_hard_errors() {
        let f = unit();
        assert!(matches!(
            rindler_to_minkowski(&RindlerEvent::new(0.0, -1.0), &f),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            minkowski_to_rindler(&MinkowskiEvent::new(0.5, -0.5), &f),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            minkowski_to_rindler(&MinkowskiEvent::new(2.0, 0.0), &f),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn shifted_frame_is_rejected_by_reference_maps() {
        let f = FrameSpec::new(1.0, 0.5, 1.0).unwrap();
        assert!(matches!(
            rindler_to_minkowski(&RindlerEvent::new(0.0, 0.0), &f),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn frame_below_horizon_is_invalid() {
        assert!(FrameSpec::new(1.0, -1.0, 1.0).is_err());
        assert!(FrameSpec::new(0.0, 0.0, 1.0).is_err());
        assert!(FrameSpec::new(1.0, 0.0, -1.0).is_err());
        assert!(FrameSpec::new(1.0, -0.5, 1.0).is_ok());
    }

    #[test]
    fn shift_examples() {
        let f = FrameSpec::new(1.0, 0.5, 1.0).unwrap();
        let s = shift_rindler(&RindlerEvent::new(2.0, 0.7), &f).unwrap();
        assert_relative_eq!(s.t, 3.0, max_relative = 1e-15);
        assert_relative_eq!(s.x, 0.2, max_relative = 1e-14);
        let e = RindlerEvent::new(1.3, -0.2);
        assert_eq!(shift_rindler(&e, &unit()).unwrap(), e);
    }

    #[test]
    fn acceleration_and_rate() {
        let f = FrameSpec::new(1.0, 0.5, 1.0).unwrap();
        assert_relative_eq!(f.effective_acceleration(), 2.0 / 3.0, max_relative = 1e-15);
        assert_eq!(f.proper_time_rate(), 1.5);
        assert_eq!(unit().effective_acceleration(), 1.0);
        assert_eq!(unit().proper_time_rate(), 1.0);
        let higher = FrameSpec::new(1.0, 0.6, 1.0).unwrap();
        assert!(higher.effective_acceleration() < f.effective_acceleration());
    }

    #[test]
    fn four_velocity() {
        assert_eq!(observer_four_velocity(&unit(), 0.0), FourVector::new(1.0, 0.0));
        let v = observer_four_velocity(&unit(), 1f64.asinh());
        assert_relative_eq!(v.t, 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(v.x, 1.0, max_relative = 1e-15);
        for tau in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            let v = observer_four_velocity(&unit(), tau);
            assert!((v.norm_sqr() + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inner_products() {
        let p = FourVector::new(1.0, -1.0);
        assert_eq!(minkowski_inner(&p, &p), 0.0);
        let u = FourVector::new(1.0, 0.0);
        assert_eq!(minkowski_inner(&u, &u), -1.0);
        let a = FourVector::new(0.3, 1.7);
        let b = FourVector::new(-2.1, 0.4);
        assert_eq!(minkowski_inner(&a, &b), minkowski_inner(&b, &a));
    }

    #[test]
    fn single_precision_instantiation() {
        let f = FrameSpec::<f32>::unshifted(1.0, 1.0).unwrap();
        let m = rindler_to_minkowski(&RindlerEvent::new(0.5f32, 0.1), &f).unwrap();
        let r = minkowski_to_rindler(&m, &f).unwrap();
        assert!((r.t - 0.5).abs() < 1e-5 && (r.x - 0.1).abs() < 1e-5);
    }
}
