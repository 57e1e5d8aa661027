//! Electrical and magnetic readings of the particle mechanics.
//!
//! | domain     | position | velocity | force |
//! |------------|----------|----------|-------|
//! | electrical | flux     | voltage  | current (capacitor, mass `C`) |
//! | magnetic   | charge   | current  | voltage (inductor, mass `L`)  |

use thiserror::Error;

use crate::frenet::CurveJet;
use crate::mechanics::{
    coriolis_decomposition, geometric_frequency, power_decomposition, CoriolisDecomposition,
    GeometricFrequency, MechanicsError, ParticleState,
};
use crate::scalar::Real;
use crate::vecalg::{Multivector, Vec3};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("parameter `{0}` must be finite and non-negative")]
    NegativeParameter(&'static str),
    #[error("parameter `{0}` must be positive for this element")]
    MissingElement(&'static str),
    #[error(transparent)]
    Mechanics(#[from] MechanicsError),
}

type Result<T> = std::result::Result<T, CircuitError>;

/// Per-phase element values. Unused elements are left at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementParams<S> {
    pub capacitance: S,
    pub conductance: S,
    pub inductance: S,
    pub resistance: S,
}

impl<S: Real> Default for ElementParams<S> {
    fn default() -> Self {
        Self {
            capacitance: S::zero(),
            conductance: S::zero(),
            inductance: S::zero(),
            resistance: S::zero(),
        }
    }
}

impl<S: Real> ElementParams<S> {
    pub fn capacitor(c: S) -> Self {
        Self { capacitance: c, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("C", self.capacitance),
            ("G", self.conductance),
            ("L", self.inductance),
            ("R", self.resistance),
        ] {
            if !(v >= S::zero() && v.is_finite()) {
                return Err(CircuitError::NegativeParameter(name));
            }
        }
        Ok(())
    }

    fn require_capacitance(&self) -> Result<S> {
        self.validate()?;
        if self.capacitance > S::zero() {
            Ok(self.capacitance)
        } else {
            Err(CircuitError::MissingElement("C"))
        }
    }

    fn require_inductance(&self) -> Result<S> {
        self.validate()?;
        if self.inductance > S::zero() {
            Ok(self.inductance)
        } else {
            Err(CircuitError::MissingElement("L"))
        }
    }
}

/// Flux, voltage and its derivatives, and the current driving the node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectricalState<S> {
    pub phi: Vec3<S>,
    pub v: Vec3<S>,
    pub v_prime: Vec3<S>,
    pub v_second: Vec3<S>,
    pub i: Vec3<S>,
    pub i_prime: Vec3<S>,
}

impl<S: Real> ElectricalState<S> {
    /// Capacitor current `i = C v'` from a flux jet `(phi, v, v', v'')`.
    pub fn capacitive(flux: &CurveJet<S>, capacitance: S) -> Self {
        Self {
            phi: flux.x,
            v: flux.d1,
            v_prime: flux.d2,
            v_second: flux.d3,
            i: flux.d2 * capacitance,
            i_prime: flux.d3 * capacitance,
        }
    }

    pub fn with_current(self, i: Vec3<S>, i_prime: Vec3<S>) -> Self {
        Self { i, i_prime, ..self }
    }
}

/// Charge, current and its derivatives, and the voltage across the branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagneticState<S> {
    pub q: Vec3<S>,
    pub i: Vec3<S>,
    pub i_prime: Vec3<S>,
    pub i_second: Vec3<S>,
    pub v: Vec3<S>,
    pub v_prime: Vec3<S>,
}

impl<S: Real> MagneticState<S> {
    /// Inductor voltage `v = L i'` from a charge jet `(q, i, i', i'')`.
    pub fn inductive(charge: &CurveJet<S>, inductance: S) -> Self {
        Self {
            q: charge.x,
            i: charge.d1,
            i_prime: charge.d2,
            i_second: charge.d3,
            v: charge.d2 * inductance,
            v_prime: charge.d3 * inductance,
        }
    }

    pub fn with_voltage(self, v: Vec3<S>, v_prime: Vec3<S>) -> Self {
        Self { v, v_prime, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainPowerReport<S> {
    pub p: S,
    pub q: Vec3<S>,
    /// Torque analogue `position x force`.
    pub torque: Vec3<S>,
    /// `position x force'`
    pub rotatum_residual: Vec3<S>,
    pub lagrangian_rate: S,
    pub momentum: Multivector<S>,
    pub energy: Multivector<S>,
    pub power: Multivector<S>,
    pub kinetic: S,
    pub potential: S,
    pub inertia: S,
    /// Geometric frequency of the velocity; `None` when it vanishes.
    pub velocity_frequency: Option<GeometricFrequency<S>>,
}

impl<S: Real> DomainPowerReport<S> {
    pub fn s_hat(&self) -> Multivector<S> {
        Multivector::new(self.p, self.q)
    }

    pub fn r_hat(&self) -> Multivector<S> {
        Multivector::new(self.lagrangian_rate, self.rotatum_residual)
    }

    /// `2T Omega_velocity + R^`, the closed form of `W^` when the force is
    /// the element's own inertial force.
    pub fn power_via_frequency(&self) -> Option<Multivector<S>> {
        self.velocity_frequency
            .map(|g| g.as_multivector() * (S::two() * self.kinetic) + self.r_hat())
    }
}

fn domain_report<S: Real>(state: &ParticleState<S>, force: Vec3<S>, force_rate: Vec3<S>) -> DomainPowerReport<S> {
    let ParticleState { mass, r, u, a, .. } = *state;
    let pw = power_decomposition(state, force, force_rate);
    let kinetic = state.kinetic_energy();
    let potential = -force.dot(r);
    let torque = r.cross(force);
    DomainPowerReport {
        p: pw.p,
        q: pw.q,
        torque,
        rotatum_residual: pw.rotatum_residual,
        lagrangian_rate: pw.lagrangian_rate,
        momentum: Multivector::new(mass * r.dot(u), r.cross(u) * mass),
        energy: Multivector::new(S::two() * kinetic - potential, torque),
        power: pw.w_hat(),
        kinetic,
        potential,
        inertia: mass * r.norm_sq(),
        velocity_frequency: geometric_frequency(u, a).ok(),
    }
}

/// `p = v . i`, `Q = v x i`, `N = phi x i`, `R = phi x i'`.
pub fn capacitor_report<S: Real>(state: &ElectricalState<S>, params: &ElementParams<S>) -> Result<DomainPowerReport<S>> {
    let c = params.require_capacitance()?;
    let particle = ParticleState::new(c, state.phi, state.v, state.v_prime, state.v_second)?;
    Ok(domain_report(&particle, state.i, state.i_prime))
}

/// `p = i . v`, `Q = i x v`, `N = q x v`, `R = q x v'`.
pub fn inductor_report<S: Real>(state: &MagneticState<S>, params: &ElementParams<S>) -> Result<DomainPowerReport<S>> {
    let l = params.require_inductance()?;
    let particle = ParticleState::new(l, state.q, state.i, state.i_prime, state.i_second)?;
    Ok(domain_report(&particle, state.v, state.v_prime))
}

/// Relative, Coriolis, Euler and centrifugal parts of the capacitor current.
pub fn current_apparent_components<S: Real>(
    flux: &CurveJet<S>,
    params: &ElementParams<S>,
) -> Result<CoriolisDecomposition<S>> {
    let c = params.require_capacitance()?;
    let particle = ParticleState::from_jet(c, flux)?;
    Ok(coriolis_decomposition(&particle)?.scaled(c))
}

/// Relative, Coriolis, Euler and centrifugal parts of the inductor voltage.
pub fn voltage_apparent_components<S: Real>(
    charge: &CurveJet<S>,
    params: &ElementParams<S>,
) -> Result<CoriolisDecomposition<S>> {
    let l = params.require_inductance()?;
    let particle = ParticleState::from_jet(l, charge)?;
    Ok(coriolis_decomposition(&particle)?.scaled(l))
}

/// Conservative part of a node current: `i - G v`.
pub fn electrical_lossy_force<S: Real>(state: &ElectricalState<S>, params: &ElementParams<S>) -> Vec3<S> {
    state.i - state.v * params.conductance
}

/// Conservative part of a branch voltage: `v - R i`.
pub fn magnetic_lossy_force<S: Real>(state: &MagneticState<S>, params: &ElementParams<S>) -> Vec3<S> {
    state.v - state.i * params.resistance
}

/// Series R-L branch feeding a parallel C-G node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RlgcReport<S> {
    pub capacitor: DomainPowerReport<S>,
    pub inductor: DomainPowerReport<S>,
    /// Capacitor current `C v'`.
    pub i_c: Vec3<S>,
    /// Branch current `i_C + G v`.
    pub i: Vec3<S>,
    /// Inductor voltage `L i'`.
    pub v_l: Vec3<S>,
    /// Branch voltage `v_L + R i`.
    pub v_rl: Vec3<S>,
    /// `G |v|^2 + R |i|^2`
    pub p_total: S,
    /// Dissipation summed element by element from the lossy forces.
    pub p_dissipated: S,
    /// Rate of stored energy, `v . i_C + i . v_L`.
    pub p_storage: S,
    /// `v x i_C + i x v_RL`
    pub q_total: Vec3<S>,
}

/// Builds the charge jet of the series branch, `q = C v + G phi`.
pub fn branch_charge_jet<S: Real>(flux: &CurveJet<S>, voltage: &CurveJet<S>, params: &ElementParams<S>) -> CurveJet<S> {
    voltage.scaled(params.capacitance).plus(&flux.scaled(params.conductance))
}

/// Evaluates the composite circuit at one sample.
///
/// `flux` is `(phi, v, v', v'')` and `voltage` is `(v, v', v'', v''')` at
/// the C-G node; the inductor needs the third derivative of `v`.
pub fn rlgc_circuit_report<S: Real>(
    flux: &CurveJet<S>,
    voltage: &CurveJet<S>,
    params: &ElementParams<S>,
) -> Result<RlgcReport<S>> {
    params.validate()?;
    let (g, r) = (params.conductance, params.resistance);

    let cap_state = ElectricalState::capacitive(flux, params.require_capacitance()?);
    let capacitor = capacitor_report(&cap_state, params)?;
    let charge = branch_charge_jet(flux, voltage, params);
    let ind_state = MagneticState::inductive(&charge, params.require_inductance()?);
    let inductor = inductor_report(&ind_state, params)?;

    let v = cap_state.v;
    let i_c = cap_state.i;
    let i = ind_state.i;
    let v_l = ind_state.v;
    let v_rl = v_l + i * r;

    let node = cap_state.with_current(i, ind_state.i_prime);
    let branch = ind_state.with_voltage(v_rl, ind_state.v_prime + ind_state.i_prime * r);
    let p_g = v.dot(i - electrical_lossy_force(&node, params));
    let p_r = i.dot(v_rl - magnetic_lossy_force(&branch, params));

    Ok(RlgcReport {
        capacitor,
        inductor,
        i_c,
        i,
        v_l,
        v_rl,
        p_total: g * v.norm_sq() + r * i.norm_sq(),
        p_dissipated: p_g + p_r,
        p_storage: v.dot(i_c) + i.dot(v_l),
        q_total: v.cross(i_c) + i.cross(v_rl),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    type V = Vec3<f64>;

    const C: f64 = 10e-6;
    const W: f64 = 100.0 * PI;
    const AMP: f64 = 20e3;

    fn phases() -> [f64; 3] {
        [0.0, -2.0 * PI / 3.0, 2.0 * PI / 3.0]
    }

    // v = AMP cos(W t + p), phi its zero-mean primitive
    fn balanced_flux(t: f64) -> CurveJet<f64> {
        let ph = phases();
        let c = |k: usize, s: f64| ph.map(|p| s * (W * t + p + k as f64 * PI / 2.0).cos());
        CurveJet::new(
            t,
            V::from_array(c(3, AMP / W)),
            V::from_array(c(0, AMP)),
            V::from_array(c(1, AMP * W)),
            V::from_array(c(2, AMP * W * W)),
        )
    }

    fn balanced_voltage(t: f64) -> CurveJet<f64> {
        let ph = phases();
        let c = |k: usize, s: f64| ph.map(|p| s * (W * t + p + k as f64 * PI / 2.0).cos());
        CurveJet::new(
            t,
            V::from_array(c(0, AMP)),
            V::from_array(c(1, AMP * W)),
            V::from_array(c(2, AMP * W * W)),
            V::from_array(c(3, AMP * W * W * W)),
        )
    }

    #[test]
    fn balanced_capacitor_reactive_power() {
        let params = ElementParams::capacitor(C);
        // oracle: |Q| = C w |v|^2 along (1,1,1)/sqrt3 with |v|^2 = 1.5 V^2
        let q_comp = C * W * 1.5 * AMP * AMP / 3f64.sqrt();
        for k in 0..50 {
            let st = ElectricalState::capacitive(&balanced_flux(k as f64 * 4e-4), C);
            let rep = capacitor_report(&st, &params).unwrap();
            assert!(rep.p.abs() < 1e-6 * rep.q.norm());
            for c in rep.q.to_array() {
                assert!((c - q_comp).abs() < 1e-9 * q_comp);
            }
            assert!((q_comp / 1e6 - 1.088).abs() < 5e-3 * 1.088);
        }
    }

    #[test]
    fn balanced_current_is_centrifugal() {
        let params = ElementParams::capacitor(C);
        let d = current_apparent_components(&balanced_flux(3.7e-3), &params).unwrap();
        let cf = d.centrifugal.norm();
        for other in [d.relative, d.coriolis, d.euler] {
            assert!(other.norm() <= 1e-9 * cf);
        }
        let i = balanced_flux(3.7e-3).d2 * C;
        assert!((d.sum() - i).norm() <= 1e-10 * i.norm());
    }

    #[test]
    fn orthogonal_current_has_no_active_power() {
        let st = ElectricalState {
            phi: V::e3(),
            v: V::new(3.0, 0.0, 0.0),
            v_prime: V::new(0.0, 7.0, 0.0),
            v_second: V::zero(),
            i: V::new(0.0, 7.0 * C, 0.0),
            i_prime: V::zero(),
        };
        let rep = capacitor_report(&st, &ElementParams::capacitor(C)).unwrap();
        assert_eq!(rep.p, 0.0);
    }

    #[test]
    fn zero_current_inductor_keeps_only_potential() {
        let st = MagneticState {
            q: V::new(1e-3, 2e-3, -1e-3),
            i: V::zero(),
            i_prime: V::zero(),
            i_second: V::zero(),
            v: V::new(5.0, 2.0, 1.0),
            v_prime: V::zero(),
        };
        let params = ElementParams { inductance: 0.02, ..Default::default() };
        let rep = inductor_report(&st, &params).unwrap();
        assert_eq!(rep.p, 0.0);
        assert_eq!(rep.q, V::zero());
        assert_eq!(rep.kinetic, 0.0);
        assert!(rep.potential != 0.0);
        assert!(rep.velocity_frequency.is_none());
    }

    #[test]
    fn constant_charge_has_no_voltage_components() {
        let jet = CurveJet::new(0.0, V::new(1.0, 2.0, 3.0), V::zero(), V::zero(), V::zero());
        let params = ElementParams { inductance: 0.02, ..Default::default() };
        let d = voltage_apparent_components(&jet, &params).unwrap();
        for c in d.components() {
            assert_eq!(c, V::zero());
        }
    }

    #[test]
    fn lossless_limits() {
        let st = ElectricalState::capacitive(&balanced_flux(1e-3), C);
        assert_eq!(electrical_lossy_force(&st, &ElementParams::capacitor(C)), st.i);
        let params = ElementParams { capacitance: C, inductance: 0.02, ..Default::default() };
        let rep = rlgc_circuit_report(&balanced_flux(1e-3), &balanced_voltage(1e-3), &params).unwrap();
        assert_eq!(rep.p_total, 0.0);
    }

    #[test]
    fn resistor_path_has_no_reactive_part() {
        let i = V::new(3.0, -1.0, 2.0);
        let r = 8.0;
        let st = MagneticState {
            q: V::e1(),
            i,
            i_prime: V::zero(),
            i_second: V::zero(),
            v: i * r,
            v_prime: V::zero(),
        };
        let params = ElementParams { resistance: r, ..Default::default() };
        let drop = st.v - magnetic_lossy_force(&st, &params);
        assert_eq!(i.cross(drop), V::zero());
        assert!((i.dot(drop) - r * i.norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn rlgc_dissipation_matches_total() {
        let params = ElementParams { capacitance: C, conductance: 0.01, inductance: 0.02, resistance: 8.0 };
        for k in 0..40 {
            let t = k as f64 * 5e-4;
            let rep = rlgc_circuit_report(&balanced_flux(t), &balanced_voltage(t), &params).unwrap();
            assert!((rep.p_total - rep.p_dissipated).abs() <= 1e-10 * rep.p_total);
            // G and R terms never reach Q
            let expect = rep.capacitor.q + rep.inductor.q;
            assert!((rep.q_total - expect).norm() <= 1e-9 * rep.q_total.norm());
        }
    }

    #[test]
    fn invalid_params_rejected() {
        let p = ElementParams { capacitance: -1.0, ..Default::default() };
        assert_eq!(p.validate(), Err(CircuitError::NegativeParameter("C")));
        let st = ElectricalState::capacitive(&balanced_flux(0.0), C);
        assert_eq!(
            capacitor_report(&st, &ElementParams::default()),
            Err(CircuitError::MissingElement("C"))
        );
    }

    fn v3() -> impl Strategy<Value = V> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y, z)| V::new(x, y, z))
    }

    proptest! {
        #[test]
        fn reactive_sign_antisymmetry(v in v3(), i in v3(), phi in v3()) {
            let e = ElectricalState { phi, v, v_prime: V::zero(), v_second: V::zero(), i, i_prime: V::zero() };
            let m = MagneticState { q: phi, i, i_prime: V::zero(), i_second: V::zero(), v, v_prime: V::zero() };
            let qe = capacitor_report(&e, &ElementParams::capacitor(1.0)).unwrap().q;
            let qm = inductor_report(&m, &ElementParams { inductance: 1.0, ..Default::default() }).unwrap().q;
            prop_assert_eq!(qe, -qm);
        }

        #[test]
        fn reports_satisfy_main_result(phi in v3(), v in v3(), vp in v3(), vpp in v3()) {
            prop_assume!(v.norm() > 0.05);
            let jet = CurveJet::new(0.0, phi, v, vp, vpp);
            let rep = capacitor_report(&ElectricalState::capacitive(&jet, C), &ElementParams::capacitor(C)).unwrap();
            let closed = rep.power_via_frequency().unwrap();
            prop_assert!((closed - rep.power).norm() <= 1e-10 * rep.power.norm().max(1e-300));
        }
    }
}
