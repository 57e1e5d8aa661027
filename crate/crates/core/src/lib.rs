//! Instantaneous power of three-phase quantities read as the motion of a
//! particle along a space curve.
//!
//! Voltages and currents are 3-vectors. Their Frenet invariants, geometric
//! frequencies and the power multivector `W^ = (p + Q) + (L' + R)` follow
//! from the curve jets.
//!
//! The math modules are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64` (`d` suffix) or `f32` (`f` suffix).

pub mod analysis;
pub mod circuits;
pub mod frenet;
pub mod mechanics;
pub mod relative;
pub mod scalar;
pub mod signals;
pub mod vecalg;

pub use scalar::Real;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Frenet(#[from] frenet::FrenetError),
    #[error(transparent)]
    Mechanics(#[from] mechanics::MechanicsError),
    #[error(transparent)]
    Relative(#[from] relative::RelativeError),
    #[error(transparent)]
    Circuit(#[from] circuits::CircuitError),
    #[error(transparent)]
    Signal(#[from] signals::SignalError),
}

pub type Vec3d = vecalg::Vec3<f64>;
pub type Vec3f = vecalg::Vec3<f32>;
pub type Mat3d = vecalg::Mat3<f64>;
pub type Mat3f = vecalg::Mat3<f32>;
pub type Multivectord = vecalg::Multivector<f64>;
pub type Multivectorf = vecalg::Multivector<f32>;
pub type CurveJetd = frenet::CurveJet<f64>;
pub type CurveJetf = frenet::CurveJet<f32>;
pub type FrenetApparatusd = frenet::FrenetApparatus<f64>;
pub type ParticleStated = mechanics::ParticleState<f64>;
pub type ElementParamsd = circuits::ElementParams<f64>;
