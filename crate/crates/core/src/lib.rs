//! Numerical laboratory for 1/c²-corrected Hamiltonian mechanics of composite
//! systems seen from accelerated (Rindler) and free-fall (Minkowski) frames.
//!
//! The crate is generic over the scalar type through [`Real`]; the `*F64`
//! aliases below are the concrete instantiations used by the CLI and tests.
//!
//! Modules:
//! - [`frames`]: Rindler/Minkowski coordinate maps, shifted observers, four-vectors.
//! - [`relhamiltonian`]: the composite-system Hamiltonian in its expanded and
//!   bracket forms, external-potential Taylor coefficients and the c.m./internal split.
//! - [`dynamics`]: Hamilton's equations, implicit-midpoint integration,
//!   equilibrium finding and the drift-under-internal-change experiment.
//! - [`redshift`]: photon exchange between two stationary clocks.
//! - [`quantum_visibility`]: dephasing of a two-path superposition of a clock.

// `!(a > b)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub mod dynamics;
pub mod error;
pub mod frames;
pub mod numerics;
pub mod quantum_visibility;
pub mod redshift;
pub mod relhamiltonian;
pub mod units;

pub use error::{Error, Result};

/// Scalar type the whole crate is generic over: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type FourVectorF64 = frames::FourVector<f64>;
pub type FrameSpecF64 = frames::FrameSpec<f64>;
pub type RindlerEventF64 = frames::RindlerEvent<f64>;
pub type MinkowskiEventF64 = frames::MinkowskiEvent<f64>;
pub type PhaseStateF64 = relhamiltonian::PhaseState<f64>;
pub type HamiltonianSpecF64 = relhamiltonian::HamiltonianSpec<f64>;
pub type PotentialSpecF64 = relhamiltonian::PotentialSpec<f64>;
pub type TrajectoryF64 = dynamics::Trajectory<f64>;
pub type RedshiftResultF64 = redshift::RedshiftResult<f64>;
pub type InternalSpectrumF64 = quantum_visibility::InternalSpectrum<f64>;
pub type InterferometerConfigF64 = quantum_visibility::InterferometerConfig<f64>;

pub type FourVectorF32 = frames::FourVector<f32>;
pub type FrameSpecF32 = frames::FrameSpec<f32>;
pub type RindlerEventF32 = frames::RindlerEvent<f32>;
pub type MinkowskiEventF32 = frames::MinkowskiEvent<f32>;
pub type PhaseStateF32 = relhamiltonian::PhaseState<f32>;
pub type HamiltonianSpecF32 = relhamiltonian::HamiltonianSpec<f32>;
pub type PotentialSpecF32 = relhamiltonian::PotentialSpec<f32>;
pub type TrajectoryF32 = dynamics::Trajectory<f32>;
pub type RedshiftResultF32 = redshift::RedshiftResult<f32>;
pub type InternalSpectrumF32 = quantum_visibility::InternalSpectrum<f32>;
pub type InterferometerConfigF32 = quantum_visibility::InterferometerConfig<f32>;
