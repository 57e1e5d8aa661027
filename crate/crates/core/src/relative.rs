//! Relative coordinates on the moving Frenet frame.
//!
//! `xi = F r`, `nu = F u`, `alpha = F u'`, where `F` has rows `T, N, B` of the
//! velocity curve. The Darboux vector in these coordinates is
//! `(omega_tau, 0, omega_kappa)`.

use thiserror::Error;

use crate::frenet::{Degeneracy, FrenetApparatus};
use crate::mechanics::{MomentumMultivector, ParticleState};
use crate::scalar::Real;
use crate::vecalg::Vec3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RelativeError {
    #[error("frame is degenerate ({0:?})")]
    DegenerateFrame(Degeneracy),
    #[error("relative position is zero")]
    ZeroRadius,
}

type Result<T> = std::result::Result<T, RelativeError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeState<S> {
    pub mass: S,
    /// `F r`
    pub xi: Vec3<S>,
    /// `xi'`, supplied or analytic.
    pub xi_prime: Vec3<S>,
    /// `F u`
    pub nu: Vec3<S>,
    /// `xi' + omega_d x xi`, the second route to `nu`.
    pub nu_via_xi: Vec3<S>,
    /// `F u'`
    pub alpha: Vec3<S>,
    /// Relative momentum `m nu`.
    pub pi: Vec3<S>,
    /// Relative angular momentum `m xi x nu`.
    pub lambda: Vec3<S>,
    /// `(xi x xi') / |xi|^2`
    pub omega_xi: Vec3<S>,
    /// Projection of `xi` on the Darboux axis, scaled by `|xi|^-2`.
    pub nu_d: Vec3<S>,
    /// Darboux vector in frame coordinates.
    pub omega_d: Vec3<S>,
}

impl<S: Real> RelativeState<S> {
    pub fn inertia(&self) -> S {
        self.mass * self.xi.norm_sq()
    }

    /// `omega_xi + omega_d - nu_d`, the orbital angular velocity in frame
    /// coordinates.
    pub fn orbital_velocity(&self) -> Vec3<S> {
        self.omega_xi + self.omega_d - self.nu_d
    }

    /// `I (omega_xi + omega_d - nu_d)`.
    pub fn lambda_from_frequencies(&self) -> Vec3<S> {
        self.orbital_velocity() * self.inertia()
    }
}

/// Transforms a particle state into the Frenet frame.
///
/// With `xi_prime = None` the derivative is taken analytically as
/// `F' r + F u`, `F' = -Omega_d F`. Passing a finite-difference estimate
/// makes `nu_via_xi` an independent check of `nu`.
pub fn to_frenet<S: Real>(
    frame: &FrenetApparatus<S>,
    state: &ParticleState<S>,
    xi_prime: Option<Vec3<S>>,
) -> Result<RelativeState<S>> {
    if let Some(d) = frame.degenerate {
        return Err(RelativeError::DegenerateFrame(d));
    }
    let f = frame.frame_matrix();
    let xi = f.mul_vec(state.r);
    let n2 = xi.norm_sq();
    if !(n2 > S::min_positive_value()) {
        return Err(RelativeError::ZeroRadius);
    }
    let nu = f.mul_vec(state.u);
    let xi_prime =
        xi_prime.unwrap_or_else(|| frame.frame_derivative().mul_vec(state.r) + nu);
    let omega_d = frame.darboux_local();
    Ok(RelativeState {
        mass: state.mass,
        xi,
        xi_prime,
        nu,
        nu_via_xi: xi_prime + omega_d.cross(xi),
        alpha: f.mul_vec(state.a),
        pi: nu * state.mass,
        lambda: xi.cross(nu) * state.mass,
        omega_xi: xi.cross(xi_prime) / n2,
        nu_d: xi * (omega_d.dot(xi) / n2),
        omega_d,
    })
}

/// Relative acceleration rebuilt from the frame motion:
///
/// `alpha = xi'' + 2 w x xi' + w' x xi + (xi . w) w - |w|^2 xi`
pub fn alpha_expansion<S: Real>(
    xi: Vec3<S>,
    xi_prime: Vec3<S>,
    xi_second: Vec3<S>,
    omega_d: Vec3<S>,
    omega_d_rate: Vec3<S>,
) -> Vec3<S> {
    xi_second
        + omega_d.cross(xi_prime) * S::two()
        + omega_d_rate.cross(xi)
        + omega_d * xi.dot(omega_d)
        - xi * omega_d.norm_sq()
}

/// `F omega_r - (omega_xi + omega_d - nu_d)`.
pub fn orbital_identity_residual<S: Real>(
    rel: &RelativeState<S>,
    frame: &FrenetApparatus<S>,
    mom: &MomentumMultivector<S>,
) -> Vec3<S> {
    frame.frame_matrix().mul_vec(mom.omega_r) - rel.orbital_velocity()
}

/// `T = I (|omega_xi + omega_d - nu_d|^2 + rho_r^2) / 2`.
pub fn kinetic_energy_relative<S: Real>(
    rel: &RelativeState<S>,
    frame: &FrenetApparatus<S>,
    inertia: S,
    rho_r: S,
) -> S {
    let w = rel.omega_xi + frame.darboux_local() - rel.nu_d;
    S::half() * inertia * (w.norm_sq() + rho_r * rho_r)
}

/// Expanded form `I (|w|^2 - |nu_d|^2 + 2 w . omega_xi) / 2 + m |xi'|^2 / 2`.
pub fn kinetic_energy_expanded<S: Real>(rel: &RelativeState<S>) -> S {
    let w = rel.omega_d;
    S::half() * rel.inertia() * (w.norm_sq() - rel.nu_d.norm_sq() + S::two() * w.dot(rel.omega_xi))
        + S::half() * rel.mass * rel.xi_prime.norm_sq()
}
