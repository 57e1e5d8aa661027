use std::io::Write;

use geopower::analysis::{analyze_sample, IdentityResiduals};
use geopower::circuits::rlgc_circuit_report;
use geopower::frenet::{Degeneracy, Thresholds};
use geopower::mechanics::ParticleState;
use geopower::relative::to_frenet;
use geopower::{CurveJetd, ElementParamsd, Vec3d};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{OutputGroup, Scale};
use crate::CliError;

#[derive(Debug, Clone)]
pub struct Row {
    pub t: f64,
    pub p: f64,
    pub q: Vec3d,
    pub lagrangian_rate: f64,
    pub rotatum_residual: Vec3d,
    pub omega_kappa: f64,
    pub omega_tau: f64,
    pub rho: f64,
    pub kinetic: f64,
    pub components: Option<[Vec3d; 4]>,
    pub omega_xi: Option<Vec3d>,
    pub nu_d: Option<Vec3d>,
    pub circuit: Option<(f64, Vec3d)>,
    pub degenerate: Option<Degeneracy>,
    pub residuals: Option<IdentityResiduals<f64>>,
}

pub const COMPONENT_NAMES: [&str; 4] = ["relative", "coriolis", "euler", "centrifugal"];

/// Evaluates every sample in parallel; rows come back in time order.
pub fn compute_rows(
    flux: &[CurveJetd],
    voltage: Option<&[CurveJetd]>,
    element: &ElementParamsd,
    thresholds: &Thresholds<f64>,
) -> Result<Vec<Row>, CliError> {
    let circuit = element.inductance > 0.0;
    flux.par_iter()
        .enumerate()
        .map(|(k, jet)| {
            let a = analyze_sample(jet, element, thresholds).map_err(|e| CliError::Analysis(e.to_string()))?;
            let rel = ParticleState::from_jet(element.capacitance, jet)
                .ok()
                .and_then(|s| to_frenet(&a.frenet, &s, None).ok());
            let circuit = match (circuit, voltage) {
                (true, Some(volts)) => {
                    let rep = rlgc_circuit_report(jet, &volts[k], element).map_err(|e| CliError::Analysis(e.to_string()))?;
                    Some((rep.p_total, rep.q_total))
                }
                _ => None,
            };
            Ok(Row {
                t: a.t,
                p: a.power.p,
                q: a.power.q,
                lagrangian_rate: a.power.lagrangian_rate,
                rotatum_residual: a.power.rotatum_residual,
                omega_kappa: a.frenet.omega_kappa,
                omega_tau: a.frenet.omega_tau,
                rho: a.frenet.rho_u,
                kinetic: a.power.kinetic,
                components: a.components.map(|c| c.components()),
                omega_xi: rel.map(|r| r.omega_xi),
                nu_d: rel.map(|r| r.nu_d),
                circuit,
                degenerate: a.frenet.degenerate,
                residuals: a.residuals,
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Summary {
    pub samples: usize,
    pub degenerate_speed: usize,
    pub degenerate_curvature: usize,
    /// Max residual per identity over the samples where it was evaluated.
    pub identities: Vec<(&'static str, f64, f64)>,
}

impl Summary {
    pub fn from_rows(rows: &[Row]) -> Self {
        let count = |d| rows.iter().filter(|r| r.degenerate == Some(d)).count();
        let mut worst = [0.0f64; 6];
        for r in rows.iter().filter_map(|r| r.residuals.as_ref()) {
            for (w, v) in worst.iter_mut().zip(r.values()) {
                *w = w.max(v);
            }
        }
        let limits = IdentityResiduals::<f64>::thresholds();
        let identities = IdentityResiduals::<f64>::NAMES
            .iter()
            .zip(worst)
            .zip(limits)
            .map(|((n, w), l)| (*n, w, l))
            .collect();
        Summary {
            samples: rows.len(),
            degenerate_speed: count(Degeneracy::Speed),
            degenerate_curvature: count(Degeneracy::Curvature),
            identities,
        }
    }

    pub fn identities_pass(&self) -> bool {
        self.identities.iter().all(|(_, w, l)| w <= l)
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.8e}")
}

/// Rounds to the nine significant digits used in the text output.
fn sig9(x: f64) -> Value {
    if x.is_finite() {
        json!(fmt(x).parse::<f64>().unwrap_or(x))
    } else {
        Value::Null
    }
}

fn vec_or_nan(v: Option<Vec3d>) -> [f64; 3] {
    v.map_or([f64::NAN; 3], |v| v.to_array())
}

fn columns(row: &Row, groups: &[OutputGroup], scale: f64) -> Vec<(String, f64)> {
    let mut cols = vec![("t".to_string(), row.t)];
    let has = |g| groups.contains(&g);
    let push3 = |cols: &mut Vec<(String, f64)>, prefix: &str, sep: &str, v: [f64; 3]| {
        for (axis, x) in ["x", "y", "z"].iter().zip(v) {
            cols.push((format!("{prefix}{sep}{axis}"), x));
        }
    };
    if has(OutputGroup::Power) {
        cols.push(("p".into(), row.p / scale));
        push3(&mut cols, "Q", "", (row.q / scale).to_array());
        cols.push(("lagrangian_rate".into(), row.lagrangian_rate / scale));
        push3(&mut cols, "R", "", (row.rotatum_residual / scale).to_array());
    }
    if has(OutputGroup::Frenet) {
        cols.push(("omega_kappa".into(), row.omega_kappa));
        cols.push(("omega_tau".into(), row.omega_tau));
        cols.push(("rho".into(), row.rho));
    }
    if has(OutputGroup::Power) {
        cols.push(("T_kinetic".into(), row.kinetic));
    }
    if has(OutputGroup::Coriolis) {
        for (k, name) in COMPONENT_NAMES.iter().enumerate() {
            push3(&mut cols, name, "_", vec_or_nan(row.components.map(|c| c[k])));
        }
    }
    if has(OutputGroup::Relative) {
        push3(&mut cols, "omega_xi", "_", vec_or_nan(row.omega_xi));
        push3(&mut cols, "nu_d", "_", vec_or_nan(row.nu_d));
    }
    if has(OutputGroup::Power) {
        if let Some((p, q)) = row.circuit {
            cols.push(("p_total".into(), p / scale));
            push3(&mut cols, "Q_total", "_", (q / scale).to_array());
        }
    }
    cols
}

pub fn write_csv<W: Write>(
    out: &mut W,
    rows: &[Row],
    summary: &Summary,
    groups: &[OutputGroup],
    scale: Scale,
) -> std::io::Result<()> {
    let div = scale.divisor();
    if let Some(first) = rows.first() {
        let header: Vec<String> = columns(first, groups, div).into_iter().map(|(n, _)| n).collect();
        writeln!(out, "{}", header.join(","))?;
    }
    for row in rows {
        let vals: Vec<String> = columns(row, groups, div).into_iter().map(|(_, v)| fmt(v)).collect();
        writeln!(out, "{}", vals.join(","))?;
    }
    writeln!(
        out,
        "# samples={} degenerate_speed={} degenerate_curvature={}",
        summary.samples, summary.degenerate_speed, summary.degenerate_curvature
    )?;
    if groups.contains(&OutputGroup::Identities) {
        for (name, worst, limit) in &summary.identities {
            let verdict = if worst <= limit { "PASS" } else { "FAIL" };
            writeln!(out, "# identity {name} max={} threshold={} {verdict}", fmt(*worst), fmt(*limit))?;
        }
    }
    Ok(())
}

pub fn write_json<W: Write>(
    out: &mut W,
    rows: &[Row],
    summary: &Summary,
    groups: &[OutputGroup],
    scale: Scale,
) -> std::io::Result<()> {
    let div = scale.divisor();
    let has = |g| groups.contains(&g);
    let v3 = |v: [f64; 3]| Value::Array(v.into_iter().map(sig9).collect());
    let items: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut obj = Map::new();
            obj.insert("t".into(), sig9(r.t));
            if has(OutputGroup::Power) {
                let mut power = json!({
                    "p": sig9(r.p / div),
                    "Q": v3((r.q / div).to_array()),
                    "lagrangian_rate": sig9(r.lagrangian_rate / div),
                    "R": v3((r.rotatum_residual / div).to_array()),
                    "T_kinetic": sig9(r.kinetic),
                });
                if let Some((p, q)) = r.circuit {
                    power["p_total"] = sig9(p / div);
                    power["Q_total"] = v3((q / div).to_array());
                }
                obj.insert("power".into(), power);
            }
            if has(OutputGroup::Frenet) {
                obj.insert(
                    "frenet".into(),
                    json!({
                        "omega_kappa": sig9(r.omega_kappa),
                        "omega_tau": sig9(r.omega_tau),
                        "rho": sig9(r.rho),
                    }),
                );
            }
            if has(OutputGroup::Coriolis) {
                let mut parts = Map::new();
                for (k, name) in COMPONENT_NAMES.iter().enumerate() {
                    parts.insert((*name).into(), v3(vec_or_nan(r.components.map(|c| c[k]))));
                }
                obj.insert("coriolis".into(), Value::Object(parts));
            }
            if has(OutputGroup::Relative) {
                obj.insert(
                    "relative".into(),
                    json!({ "omega_xi": v3(vec_or_nan(r.omega_xi)), "nu_d": v3(vec_or_nan(r.nu_d)) }),
                );
            }
            Value::Object(obj)
        })
        .collect();

    let mut summary_obj = json!({
        "samples": summary.samples,
        "degenerate_speed": summary.degenerate_speed,
        "degenerate_curvature": summary.degenerate_curvature,
    });
    if has(OutputGroup::Identities) {
        let ids: Map<String, Value> = summary
            .identities
            .iter()
            .map(|(n, w, l)| ((*n).to_string(), json!({ "max": sig9(*w), "threshold": l, "pass": w <= l })))
            .collect();
        summary_obj["identities"] = Value::Object(ids);
    }
    let doc = json!({ "rows": items, "summary": summary_obj });
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}
