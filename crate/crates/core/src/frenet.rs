//! Frenet apparatus of a sampled space curve.
//!
//! All quantities are taken with respect to time, not arc length: the
//! azimuthal and torsional frequencies are curvature and torsion scaled by
//! the speed `|u|`, so they carry units of rad/s.

use thiserror::Error;

use crate::scalar::Real;
use crate::vecalg::{Mat3, Vec3};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrenetError {
    #[error("speed below degeneracy threshold at t = {t}")]
    DegenerateSpeed { t: f64 },
    #[error("Frenet frame undefined at sample {index}")]
    DegenerateFrame { index: usize },
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
}

/// Curve sample with its first three time derivatives.
///
/// For the electrical domain `x` is the flux and `d1` the voltage; for the
/// magnetic domain `x` is the charge and `d1` the current.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurveJet<S> {
    pub t: S,
    pub x: Vec3<S>,
    pub d1: Vec3<S>,
    pub d2: Vec3<S>,
    pub d3: Vec3<S>,
}

impl<S: Real> CurveJet<S> {
    pub fn new(t: S, x: Vec3<S>, d1: Vec3<S>, d2: Vec3<S>, d3: Vec3<S>) -> Self {
        Self { t, x, d1, d2, d3 }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite()
            && self.x.is_finite()
            && self.d1.is_finite()
            && self.d2.is_finite()
            && self.d3.is_finite()
    }

    /// Multiplies every component of the jet by `k` (e.g. `q = C v`).
    pub fn scaled(&self, k: S) -> Self {
        Self::new(self.t, self.x * k, self.d1 * k, self.d2 * k, self.d3 * k)
    }

    /// Component-wise sum of two jets sampled at the same instant.
    pub fn plus(&self, other: &Self) -> Self {
        Self::new(
            self.t,
            self.x + other.x,
            self.d1 + other.d1,
            self.d2 + other.d2,
            self.d3 + other.d3,
        )
    }
}

/// Why a frame could not be built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// `|u|` vanished: no tangent.
    Speed,
    /// `u x u'` vanished: tangent defined, normal and binormal are not.
    Curvature,
}

/// Degeneracy thresholds.
///
/// The speed test is `|u| <= eps_speed * speed_scale`, where `speed_scale`
/// is typically the RMS of `|u|` over the series. A jet is curvature
/// degenerate when `|u x u'| <= eps_curv * |u|^2` (turning rate below
/// `eps_curv` rad/s) or when the sine of the angle between `u` and `u'` is
/// below `eps_curv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds<S> {
    pub eps_speed: S,
    pub eps_curv: S,
    pub speed_scale: S,
}

impl<S: Real> Default for Thresholds<S> {
    fn default() -> Self {
        Self {
            eps_speed: S::lit(1e-9),
            eps_curv: S::lit(1e-9),
            speed_scale: S::zero(),
        }
    }
}

impl<S: Real> Thresholds<S> {
    /// Default thresholds with the speed scale set to the RMS of `|d1|`.
    pub fn for_series(jets: &[CurveJet<S>]) -> Self {
        Self::default().with_scale_from(jets)
    }

    pub fn with_scale_from(mut self, jets: &[CurveJet<S>]) -> Self {
        if !jets.is_empty() {
            let n = S::from_usize(jets.len()).unwrap();
            let ms = jets.iter().fold(S::zero(), |a, j| a + j.d1.norm_sq()) / n;
            self.speed_scale = ms.sqrt();
        }
        self
    }
}

/// Frame, frequencies and Darboux vector of a curve at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetApparatus<S> {
    pub t: S,
    pub tangent: Vec3<S>,
    pub normal: Vec3<S>,
    pub binormal: Vec3<S>,
    /// `|u x u'| / |u|^2`
    pub omega_kappa: S,
    /// `u . (u' x u'') / (omega_kappa^2 |u|^3)`, zero on straight segments
    pub omega_tau: S,
    /// `(u . u') / |u|^2`
    pub rho_u: S,
    /// `(u x u') / |u|^2 = omega_kappa B`
    pub omega_u: Vec3<S>,
    /// `omega_tau T + omega_kappa B`
    pub darboux: Vec3<S>,
    /// `|u|`, the arc-length rate
    pub speed: S,
    /// Time derivative of `omega_kappa`, from the jet.
    pub omega_kappa_rate: S,
    /// `|u|'' / |u|`
    pub alpha_u: S,
    pub degenerate: Option<Degeneracy>,
}

impl<S: Real> FrenetApparatus<S> {
    pub fn is_degenerate(&self) -> bool {
        self.degenerate.is_some()
    }

    /// `F = [T, N, B]^T`: rows are the frame vectors.
    pub fn frame_matrix(&self) -> Mat3<S> {
        Mat3::from_rows(self.tangent, self.normal, self.binormal)
    }

    /// Darboux vector in Frenet coordinates, `(omega_tau, 0, omega_kappa)`.
    pub fn darboux_local(&self) -> Vec3<S> {
        Vec3::new(self.omega_tau, S::zero(), self.omega_kappa)
    }

    /// Time derivative of the local Darboux vector. `omega_tau_rate` needs
    /// the fourth derivative of the curve, so callers supply it.
    pub fn darboux_local_rate(&self, omega_tau_rate: S) -> Vec3<S> {
        Vec3::new(omega_tau_rate, S::zero(), self.omega_kappa_rate)
    }

    /// Skew rate matrix `Omega_d = F (F')^T = -F' F^T`.
    pub fn rate_matrix(&self) -> Mat3<S> {
        let z = S::zero();
        let (k, t) = (self.omega_kappa, self.omega_tau);
        Mat3::from_rows(
            Vec3::new(z, -k, z),
            Vec3::new(k, z, -t),
            Vec3::new(z, t, z),
        )
    }

    /// `F'` from the Frenet-Serret equations, `F' = -Omega_d F`.
    pub fn frame_derivative(&self) -> Mat3<S> {
        -(self.rate_matrix() * self.frame_matrix())
    }

    pub fn require_regular(&self, index: usize) -> Result<&Self, FrenetError> {
        if self.is_degenerate() {
            Err(FrenetError::DegenerateFrame { index })
        } else {
            Ok(self)
        }
    }
}

/// Builds the Frenet apparatus of the curve whose velocity is `jet.d1`.
///
/// Degenerate jets are flagged rather than rejected; a speed-degenerate jet
/// comes back with a zero frame and zero frequencies.
pub fn frenet_apparatus<S: Real>(jet: &CurveJet<S>, th: &Thresholds<S>) -> FrenetApparatus<S> {
    let zero = S::zero();
    let (u, du, ddu) = (jet.d1, jet.d2, jet.d3);
    let speed = u.norm();
    let z3 = Vec3::zero();

    if speed <= th.eps_speed * th.speed_scale || speed == zero {
        return FrenetApparatus {
            t: jet.t,
            tangent: z3,
            normal: z3,
            binormal: z3,
            omega_kappa: zero,
            omega_tau: zero,
            rho_u: zero,
            omega_u: z3,
            darboux: z3,
            speed,
            omega_kappa_rate: zero,
            alpha_u: zero,
            degenerate: Some(Degeneracy::Speed),
        };
    }

    let u2 = speed * speed;
    let tangent = u / speed;
    let rho_u = u.dot(du) / u2;
    let alpha_u = (du.norm_sq() + u.dot(ddu)) / u2 - rho_u * rho_u;
    let c = u.cross(du);
    let c_norm = c.norm();
    let omega_kappa = c_norm / u2;
    let omega_u = c / u2;

    let curvature_degenerate =
        c_norm == zero || omega_kappa <= th.eps_curv || c_norm <= th.eps_curv * speed * du.norm();
    if curvature_degenerate {
        return FrenetApparatus {
            t: jet.t,
            tangent,
            normal: z3,
            binormal: z3,
            omega_kappa,
            omega_tau: zero,
            rho_u,
            omega_u,
            darboux: z3,
            speed,
            omega_kappa_rate: zero,
            alpha_u,
            degenerate: Some(Degeneracy::Curvature),
        };
    }

    let binormal = c / c_norm;
    let normal = binormal.cross(tangent);
    let omega_tau = u.dot(du.cross(ddu)) * speed / (c_norm * c_norm);
    // d|u x u'|/dt = (u x u').(u x u'') / |u x u'|
    let c_norm_rate = c.dot(u.cross(ddu)) / c_norm;
    let omega_kappa_rate = c_norm_rate / u2 - S::two() * omega_kappa * rho_u;
    let darboux = tangent * omega_tau + binormal * omega_kappa;

    FrenetApparatus {
        t: jet.t,
        tangent,
        normal,
        binormal,
        omega_kappa,
        omega_tau,
        rho_u,
        omega_u,
        darboux,
        speed,
        omega_kappa_rate,
        alpha_u,
        degenerate: None,
    }
}

/// Apparatus for every jet of a series.
///
/// Degenerate samples keep their flag but inherit the last valid
/// `(T, N, B)` so that plotted frames stay continuous.
pub fn apparatus_series<S: Real>(jets: &[CurveJet<S>], th: &Thresholds<S>) -> Vec<FrenetApparatus<S>> {
    let mut last: Option<(Vec3<S>, Vec3<S>, Vec3<S>)> = None;
    jets.iter()
        .map(|j| {
            let mut fa = frenet_apparatus(j, th);
            match (fa.degenerate, last) {
                (None, _) => last = Some((fa.tangent, fa.normal, fa.binormal)),
                (Some(_), Some((t, n, b))) => {
                    fa.tangent = t;
                    fa.normal = n;
                    fa.binormal = b;
                }
                (Some(_), None) => {}
            }
            fa
        })
        .collect()
}

/// Compares the observed frame rotation `-F' F^T` (central differences on a
/// uniform grid) against the skew rate matrix built from `omega_kappa` and
/// `omega_tau`. Returns one residual matrix per interior sample.
pub fn frame_rotation_rate<S: Real>(
    frames: &[FrenetApparatus<S>],
    dt: S,
) -> Result<Vec<Mat3<S>>, FrenetError> {
    if frames.len() < 3 {
        return Err(FrenetError::InsufficientSamples {
            needed: 3,
            got: frames.len(),
        });
    }
    if let Some(index) = frames.iter().position(|f| f.is_degenerate()) {
        return Err(FrenetError::DegenerateFrame { index });
    }
    let two_dt = S::two() * dt;
    Ok(frames
        .windows(3)
        .map(|w| {
            let f_rate = (w[2].frame_matrix() - w[0].frame_matrix()) * (S::one() / two_dt);
            let observed = -(f_rate * w[1].frame_matrix().transpose());
            observed - w[1].rate_matrix()
        })
        .collect())
}
