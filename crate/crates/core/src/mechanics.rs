//! Point-particle mechanics: geometric frequency, momentum, energy and power
//! multivectors, the apparent-force split of the acceleration, and the
//! discrete inertia operator.
//!
//! Everything here is written for a generic particle with mass `m`, position
//! `r`, velocity `u = r'`, acceleration `a = u'` and jerk `j = u''`. The
//! [`circuits`](crate::circuits) module maps flux/voltage/current and
//! charge/current/voltage onto these slots.

use thiserror::Error;

use crate::frenet::{CurveJet, Degeneracy, FrenetApparatus};
use crate::scalar::Real;
use crate::vecalg::{Multivector, Vec3};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MechanicsError {
    #[error("vector magnitude is zero; geometric frequency undefined")]
    ZeroMagnitude,
    #[error("position magnitude is zero; orbital quantities undefined")]
    ZeroRadius,
    #[error("inertia system has no bodies")]
    EmptySystem,
    #[error("mass must be positive and finite")]
    NonPositiveMass,
    #[error("frame is degenerate ({0:?})")]
    DegenerateFrame(Degeneracy),
}

type Result<T> = std::result::Result<T, MechanicsError>;

fn nonzero<S: Real>(a: Vec3<S>) -> bool {
    let n2 = a.norm_sq();
    n2 > S::min_positive_value() && n2.is_finite()
}

/// Generalized particle state: mass, position and three time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleState<S> {
    pub mass: S,
    pub r: Vec3<S>,
    pub u: Vec3<S>,
    pub a: Vec3<S>,
    pub j: Vec3<S>,
}

impl<S: Real> ParticleState<S> {
    pub fn new(mass: S, r: Vec3<S>, u: Vec3<S>, a: Vec3<S>, j: Vec3<S>) -> Result<Self> {
        if !(mass > S::zero() && mass.is_finite()) {
            return Err(MechanicsError::NonPositiveMass);
        }
        Ok(Self { mass, r, u, a, j })
    }

    /// Reads position and derivatives from a curve jet.
    pub fn from_jet(mass: S, jet: &CurveJet<S>) -> Result<Self> {
        Self::new(mass, jet.x, jet.d1, jet.d2, jet.d3)
    }

    /// Newtonian force `m a`.
    pub fn force(&self) -> Vec3<S> {
        self.a * self.mass
    }

    /// Newtonian yank `m j`.
    pub fn yank(&self) -> Vec3<S> {
        self.j * self.mass
    }

    /// `T = m |u|^2 / 2`.
    pub fn kinetic_energy(&self) -> S {
        S::half() * self.mass * self.u.norm_sq()
    }

    /// `I = m |r|^2`.
    pub fn moment_of_inertia(&self) -> S {
        self.mass * self.r.norm_sq()
    }
}

/// `rho + omega` of a vector `a` and its derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricFrequency<S> {
    /// `(a . a') / |a|^2`
    pub rho: S,
    /// `(a x a') / |a|^2`
    pub omega: Vec3<S>,
}

impl<S: Real> GeometricFrequency<S> {
    pub fn as_multivector(&self) -> Multivector<S> {
        Multivector::new(self.rho, self.omega)
    }

    /// Reconstructs the derivative: `a' = rho a + omega x a`.
    pub fn apply(&self, a: Vec3<S>) -> Vec3<S> {
        a * self.rho + self.omega.cross(a)
    }
}

impl<S: Real> From<GeometricFrequency<S>> for Multivector<S> {
    fn from(g: GeometricFrequency<S>) -> Self {
        g.as_multivector()
    }
}

pub fn geometric_frequency<S: Real>(a: Vec3<S>, a_prime: Vec3<S>) -> Result<GeometricFrequency<S>> {
    if !nonzero(a) {
        return Err(MechanicsError::ZeroMagnitude);
    }
    let n2 = a.norm_sq();
    Ok(GeometricFrequency {
        rho: a.dot(a_prime) / n2,
        omega: a.cross(a_prime) / n2,
    })
}

/// Momentum density and angular momentum, `L^ = l + L = I (rho_r + omega_r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumMultivector<S> {
    /// Momentum density `m r . u`.
    pub ell: S,
    /// Angular momentum `m r x u`.
    pub angular: Vec3<S>,
    /// Moment of inertia `m |r|^2`.
    pub inertia: S,
    /// Radial speed `(r . u) / |r|^2`.
    pub rho_r: S,
    /// Orbital angular velocity `(r x u) / |r|^2`.
    pub omega_r: Vec3<S>,
}

impl<S: Real> MomentumMultivector<S> {
    pub fn as_multivector(&self) -> Multivector<S> {
        Multivector::new(self.ell, self.angular)
    }

    /// `Omega_r = rho_r + omega_r`.
    pub fn orbital_frequency(&self) -> Multivector<S> {
        Multivector::new(self.rho_r, self.omega_r)
    }

    /// `|L^|^2 / (2 I)`, which equals the kinetic energy.
    pub fn kinetic_energy(&self) -> S {
        S::half() * self.as_multivector().norm_sq() / self.inertia
    }
}

pub fn momentum_multivector<S: Real>(state: &ParticleState<S>) -> Result<MomentumMultivector<S>> {
    let ParticleState { mass, r, u, .. } = *state;
    if !nonzero(r) {
        return Err(MechanicsError::ZeroRadius);
    }
    let r2 = r.norm_sq();
    Ok(MomentumMultivector {
        ell: mass * r.dot(u),
        angular: r.cross(u) * mass,
        inertia: mass * r2,
        rho_r: r.dot(u) / r2,
        omega_r: r.cross(u) / r2,
    })
}

/// `E^ = L^' = (2T - U) + N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyMultivector<S> {
    pub scalar_part: S,
    /// Torque `r x f`.
    pub torque: Vec3<S>,
    pub kinetic: S,
    /// `U = -f . r`
    pub potential: S,
    /// `T - U`
    pub lagrangian: S,
}

impl<S: Real> EnergyMultivector<S> {
    pub fn as_multivector(&self) -> Multivector<S> {
        Multivector::new(self.scalar_part, self.torque)
    }
}

pub fn energy_multivector<S: Real>(state: &ParticleState<S>, f: Vec3<S>) -> EnergyMultivector<S> {
    let kinetic = state.kinetic_energy();
    let potential = -f.dot(state.r);
    EnergyMultivector {
        scalar_part: S::two() * kinetic - potential,
        torque: state.r.cross(f),
        kinetic,
        potential,
        lagrangian: kinetic - potential,
    }
}

/// `W^ = S^ + R^` with `S^ = p + Q` and `R^ = L' + R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerMultivector<S> {
    /// Instantaneous active power `u . f`.
    pub p: S,
    /// Instantaneous reactive power `u x f`.
    pub q: Vec3<S>,
    /// Rate of change of the Lagrangian.
    pub lagrangian_rate: S,
    /// Rotatum residual `r x f'`.
    pub rotatum_residual: Vec3<S>,
    pub s_hat: Multivector<S>,
    pub r_hat: Multivector<S>,
}

impl<S: Real> PowerMultivector<S> {
    pub fn w_hat(&self) -> Multivector<S> {
        self.s_hat + self.r_hat
    }
}

/// Splits the power multivector of a particle driven by force `f`.
///
/// The Lagrangian rate is recovered as `l'' - p` with
/// `l'' = m (3 u . u' + r . u'')`, so `f'` enters only the rotatum residual.
pub fn power_decomposition<S: Real>(
    state: &ParticleState<S>,
    f: Vec3<S>,
    f_prime: Vec3<S>,
) -> PowerMultivector<S> {
    let ParticleState { mass, r, u, a, j } = *state;
    let p = u.dot(f);
    let q = u.cross(f);
    let ell_second = mass * (S::lit(3.0) * u.dot(a) + r.dot(j));
    let lagrangian_rate = ell_second - p;
    let rotatum_residual = r.cross(f_prime);
    PowerMultivector {
        p,
        q,
        lagrangian_rate,
        rotatum_residual,
        s_hat: Multivector::new(p, q),
        r_hat: Multivector::new(lagrangian_rate, rotatum_residual),
    }
}

/// `(l'', L'') = m (3 u . u' + r . u'', u x u' + r x u'')`, the second
/// derivative of the momentum multivector.
pub fn momentum_second_derivative<S: Real>(state: &ParticleState<S>) -> Multivector<S> {
    let ParticleState { mass, r, u, a, j } = *state;
    Multivector::new(
        mass * (S::lit(3.0) * u.dot(a) + r.dot(j)),
        (u.cross(a) + r.cross(j)) * mass,
    )
}

/// `S^ - 2T Omega_u`, where `S^` is built from `f = m u'` directly.
pub fn main_result_check<S: Real>(state: &ParticleState<S>) -> Result<Multivector<S>> {
    let omega_u = geometric_frequency(state.u, state.a)?;
    let f = state.force();
    let s_hat = Multivector::new(state.u.dot(f), state.u.cross(f));
    let predicted = omega_u.as_multivector() * (S::two() * state.kinetic_energy());
    Ok(s_hat - predicted)
}

/// Closed form of `R^` from the Frenet invariants of the velocity curve:
///
/// `R^ = I (alpha_u - omega_kappa^2) Omega_r - I omega_kappa omega_tau N Omega_r
///       + I (omega_kappa' + 2 omega_kappa rho_u) B Omega_r + 2p`
///
/// The products are geometric products. The trailing `2p = 4 T rho_u` is the
/// part of the Lagrangian rate not carried by `r . f'`; without it only the
/// vector part would match `(L', R)` away from `p = 0`.
///
/// `frenet` must be built from the same jet as `state`. Curvature-degenerate
/// frames are accepted: their `N`, `B` are zero and the bending terms drop.
pub fn residual_closed_form<S: Real>(
    state: &ParticleState<S>,
    frenet: &FrenetApparatus<S>,
) -> Result<Multivector<S>> {
    if frenet.degenerate == Some(Degeneracy::Speed) {
        return Err(MechanicsError::DegenerateFrame(Degeneracy::Speed));
    }
    let mom = momentum_multivector(state)?;
    let big_i = mom.inertia;
    let omega_r = mom.orbital_frequency();
    let (k, tau) = (frenet.omega_kappa, frenet.omega_tau);

    let radial = omega_r * (big_i * (frenet.alpha_u - k * k));
    let torsion = (frenet.normal.to_multivector() * omega_r) * (big_i * k * tau);
    let bending = (frenet.binormal.to_multivector() * omega_r)
        * (big_i * (frenet.omega_kappa_rate + S::two() * k * frenet.rho_u));
    let two_p = Multivector::scalar(S::lit(4.0) * state.kinetic_energy() * frenet.rho_u);

    Ok(radial - torsion + bending + two_p)
}

/// Relative, Coriolis, Euler and centrifugal parts of the acceleration as
/// seen from the frame co-rotating with `omega_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoriolisDecomposition<S> {
    /// `alpha_r r`
    pub relative: Vec3<S>,
    /// `2 omega_r x u_par`
    pub coriolis: Vec3<S>,
    /// `omega_r' x r`
    pub euler: Vec3<S>,
    /// `omega_r x (omega_r x r)`
    pub centrifugal: Vec3<S>,
    /// `|r|'' / |r|`
    pub alpha_r: S,
    /// `alpha_r / rho_r`; `None` when `rho_r = 0`.
    pub beta_r: Option<S>,
    /// `rho_r r`
    pub u_par: Vec3<S>,
}

impl<S: Real> CoriolisDecomposition<S> {
    pub fn sum(&self) -> Vec3<S> {
        self.relative + self.coriolis + self.euler + self.centrifugal
    }

    /// Multiplies every vector component by `k` (a mass, `C` or `L`).
    pub fn scaled(&self, k: S) -> Self {
        Self {
            relative: self.relative * k,
            coriolis: self.coriolis * k,
            euler: self.euler * k,
            centrifugal: self.centrifugal * k,
            ..*self
        }
    }

    pub fn components(&self) -> [Vec3<S>; 4] {
        [self.relative, self.coriolis, self.euler, self.centrifugal]
    }
}

/// Applies Coriolis' theorem to `u'`, taking `omega_r'` analytically from the
/// state: `omega_r' = (r x u') / |r|^2 - 2 rho_r omega_r`.
///
/// The relative term is `alpha_r r`, which stays regular when `rho_r = 0`.
pub fn coriolis_decomposition<S: Real>(state: &ParticleState<S>) -> Result<CoriolisDecomposition<S>> {
    let ParticleState { r, u, a, .. } = *state;
    if !nonzero(r) {
        return Err(MechanicsError::ZeroRadius);
    }
    let r2 = r.norm_sq();
    let rho_r = r.dot(u) / r2;
    let omega_r = r.cross(u) / r2;
    let rho_r_rate = (u.norm_sq() + r.dot(a)) / r2 - S::two() * rho_r * rho_r;
    let alpha_r = rho_r_rate + rho_r * rho_r;
    let omega_r_rate = r.cross(a) / r2 - omega_r * (S::two() * rho_r);
    let u_par = r * rho_r;
    Ok(CoriolisDecomposition {
        relative: r * alpha_r,
        coriolis: omega_r.cross(u_par) * S::two(),
        euler: omega_r_rate.cross(r),
        centrifugal: omega_r.cross(omega_r.cross(r)),
        alpha_r,
        beta_r: (rho_r != S::zero()).then(|| alpha_r / rho_r),
        u_par,
    })
}

/// A discrete set of point masses acting as an inertia operator.
#[derive(Debug, Clone, PartialEq)]
pub struct InertiaSystem<S> {
    bodies: Vec<(S, Vec3<S>)>,
}

impl<S: Real> InertiaSystem<S> {
    pub fn new(bodies: Vec<(S, Vec3<S>)>) -> Result<Self> {
        if bodies.is_empty() {
            return Err(MechanicsError::EmptySystem);
        }
        if bodies.iter().any(|(m, _)| !(*m > S::zero() && m.is_finite())) {
            return Err(MechanicsError::NonPositiveMass);
        }
        Ok(Self { bodies })
    }

    pub fn bodies(&self) -> &[(S, Vec3<S>)] {
        &self.bodies
    }

    /// `I(omega) = sum_h m_h r_h x (omega x r_h)`.
    pub fn apply(&self, omega: Vec3<S>) -> Vec3<S> {
        self.bodies
            .iter()
            .map(|&(m, r)| r.cross(omega.cross(r)) * m)
            .sum()
    }

    /// `L = I(omega)`.
    pub fn angular_momentum(&self, omega: Vec3<S>) -> Vec3<S> {
        self.apply(omega)
    }

    /// `T = omega . I(omega) / 2`.
    pub fn kinetic_energy(&self, omega: Vec3<S>) -> S {
        S::half() * omega.dot(self.apply(omega))
    }
}
