//! Per-sample evaluation of a flux jet: power split, Frenet invariants,
//! apparent current components and the identity residuals.

use crate::circuits::{capacitor_report, current_apparent_components, DomainPowerReport, ElectricalState, ElementParams};
use crate::frenet::{frenet_apparatus, CurveJet, FrenetApparatus, Thresholds};
use crate::mechanics::{
    main_result_check, momentum_multivector, residual_closed_form, CoriolisDecomposition, ParticleState,
};
use crate::relative::{kinetic_energy_relative, orbital_identity_residual, to_frenet};
use crate::scalar::Real;
use crate::Error;

/// Relative residuals of the identities, each normalised by the size of
/// the quantity being checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals<S> {
    /// `S^` against `2T Omega_v`.
    pub main_result: S,
    /// `R^` against its Frenet closed form.
    pub closed_form: S,
    /// Four apparent components against `C v'`.
    pub component_closure: S,
    /// `F omega_r` against `omega_xi + omega_d - nu_d`.
    pub orbital: S,
    /// Relative-frame kinetic energy against `C |v|^2 / 2`.
    pub kinetic: S,
    /// `m xi x nu` against `I (omega_xi + omega_d - nu_d)`.
    pub relative_momentum: S,
}

impl<S: Real> IdentityResiduals<S> {
    pub const NAMES: [&'static str; 6] = [
        "main_result",
        "closed_form",
        "component_closure",
        "orbital",
        "kinetic",
        "relative_momentum",
    ];

    /// Pass thresholds, in the order of [`Self::NAMES`].
    pub fn thresholds() -> [S; 6] {
        [1e-10, 1e-8, 1e-10, 1e-9, 1e-10, 1e-10].map(S::lit)
    }

    pub fn values(&self) -> [S; 6] {
        [
            self.main_result,
            self.closed_form,
            self.component_closure,
            self.orbital,
            self.kinetic,
            self.relative_momentum,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleAnalysis<S> {
    pub t: S,
    pub power: DomainPowerReport<S>,
    pub frenet: FrenetApparatus<S>,
    /// Capacitor current split; `None` when the flux vanishes.
    pub components: Option<CoriolisDecomposition<S>>,
    /// `None` on degenerate frames or zero flux.
    pub residuals: Option<IdentityResiduals<S>>,
}

fn ratio<S: Real>(num: S, den: S) -> S {
    if den > S::zero() {
        num / den
    } else {
        num
    }
}

/// Evaluates one flux jet `(phi, v, v', v'')` across a capacitor.
pub fn analyze_sample<S: Real>(
    flux: &CurveJet<S>,
    params: &ElementParams<S>,
    thresholds: &Thresholds<S>,
) -> Result<SampleAnalysis<S>, Error> {
    let c = params.capacitance;
    let state = ElectricalState::capacitive(flux, c);
    let power = capacitor_report(&state, params)?;
    let frenet = frenet_apparatus(flux, thresholds);
    let components = current_apparent_components(flux, params).ok();
    let particle = ParticleState::from_jet(c, flux)?;

    let residuals = match (frenet.degenerate, components) {
        (None, Some(parts)) => Some(residuals(&particle, &frenet, &parts)?),
        _ => None,
    };
    Ok(SampleAnalysis { t: flux.t, power, frenet, components, residuals })
}

fn residuals<S: Real>(
    particle: &ParticleState<S>,
    frenet: &FrenetApparatus<S>,
    parts: &CoriolisDecomposition<S>,
) -> Result<IdentityResiduals<S>, Error> {
    let ParticleState { mass, r, u, a, j } = *particle;
    let force = particle.force();

    let main = main_result_check(particle)?;
    let main_result = ratio(main.norm(), u.norm() * force.norm());

    let direct = crate::mechanics::power_decomposition(particle, force, particle.yank()).r_hat;
    let closed = residual_closed_form(particle, frenet)?;
    let scale = mass * r.norm() * (j.norm() + u.norm() * a.norm() / r.norm());
    let closed_form = ratio((closed - direct).norm(), scale);

    let component_closure = ratio((parts.sum() - force).norm(), force.norm());

    let mom = momentum_multivector(particle)?;
    let rel = to_frenet(frenet, particle, None)?;
    let orbit_scale = mom.omega_r.norm().max(frenet.darboux.norm());
    let orbital = ratio(orbital_identity_residual(&rel, frenet, &mom).norm(), orbit_scale);

    let t = particle.kinetic_energy();
    let kinetic = ratio((kinetic_energy_relative(&rel, frenet, mom.inertia, mom.rho_r) - t).abs(), t);
    let relative_momentum = ratio((rel.lambda - rel.lambda_from_frequencies()).norm(), rel.lambda.norm());

    Ok(IdentityResiduals {
        main_result,
        closed_form,
        component_closure,
        orbital,
        kinetic,
        relative_momentum,
    })
}
