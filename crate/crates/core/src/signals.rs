//! Three-phase test waveforms with exact jets, flux primitives, CSV
//! interchange and finite-difference jet estimation.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use thiserror::Error;

use crate::frenet::CurveJet;
use crate::vecalg::Vec3;

type V3 = Vec3<f64>;
type Jet = CurveJet<f64>;

/// Phase offsets of a positive-sequence set.
pub const BALANCED_PHASES: [f64; 3] = [0.0, -2.0 * PI / 3.0, 2.0 * PI / 3.0];
/// Offsets used by the unbalanced set; phase c sits at `1.6 pi / 3`.
pub const UNBALANCED_PHASES: [f64; 3] = [0.0, -2.0 * PI / 3.0, 1.6 * PI / 3.0];

pub const DEFAULT_DECAY: f64 = 0.3;
pub const DEFAULT_MOD_FREQ: f64 = 0.1 * PI;
pub const DEFAULT_DEPTH: f64 = 0.04;
const SWING_COS: f64 = 1.66;
const SWING_SIN: f64 = 1.59;

/// Fewest rows the 7-point third-derivative stencils can work with.
pub const MIN_CSV_ROWS: usize = 9;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("CSV scenarios can only be read as a whole series")]
    CsvVariantRequiresSeries,
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("missing required value `{0}`")]
    MissingKey(&'static str),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: time step {found:e} s deviates from {expected:e} s by more than 1 ppm")]
    NonUniformTimestep { line: u64, expected: f64, found: f64 },
    #[error("need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
}

type Result<T> = std::result::Result<T, SignalError>;

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Balanced {
        amplitude: f64,
        omega: f64,
    },
    Unbalanced {
        amplitudes: [f64; 3],
        phases: [f64; 3],
        omega: f64,
    },
    /// Balanced fundamental plus `fraction` of harmonic `order` with the
    /// same phase offsets.
    Harmonic {
        amplitude: f64,
        omega: f64,
        order: u32,
        fraction: f64,
    },
    /// Balanced set with angle
    /// `omega t - depth omega e^(-decay t) (1.66 cos(mod t) + 1.59 sin(mod t))`.
    NonStationary {
        amplitude: f64,
        omega: f64,
        decay: f64,
        mod_freq: f64,
        depth: f64,
    },
    FromCsv {
        path: PathBuf,
        dt: Option<f64>,
    },
}

struct Tone {
    amplitudes: [f64; 3],
    multiple: f64,
    offsets: [f64; 3],
}

impl Scenario {
    pub fn balanced(amplitude: f64, omega: f64) -> Self {
        Scenario::Balanced { amplitude, omega }
    }

    pub fn unbalanced(amplitudes: [f64; 3], omega: f64) -> Self {
        Scenario::Unbalanced { amplitudes, phases: UNBALANCED_PHASES, omega }
    }

    pub fn harmonic(amplitude: f64, omega: f64, order: u32, fraction: f64) -> Self {
        Scenario::Harmonic { amplitude, omega, order, fraction }
    }

    pub fn non_stationary(amplitude: f64, omega: f64) -> Self {
        Scenario::NonStationary {
            amplitude,
            omega,
            decay: DEFAULT_DECAY,
            mod_freq: DEFAULT_MOD_FREQ,
            depth: DEFAULT_DEPTH,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(SignalError::InvalidScenario(m.to_string()));
        let positive = |x: f64| x > 0.0 && x.is_finite();
        match *self {
            Scenario::Balanced { amplitude, omega } => {
                if !positive(amplitude) {
                    return bad("amplitude must be positive");
                }
                if !positive(omega) {
                    return bad("angular frequency must be positive");
                }
            }
            Scenario::Unbalanced { amplitudes, phases, omega } => {
                if !amplitudes.iter().all(|&a| positive(a)) {
                    return bad("phase amplitudes must be positive");
                }
                if !phases.iter().all(|p| p.is_finite()) {
                    return bad("phase angles must be finite");
                }
                if !positive(omega) {
                    return bad("angular frequency must be positive");
                }
            }
            Scenario::Harmonic { amplitude, omega, order, fraction } => {
                if !positive(amplitude) || !positive(omega) {
                    return bad("amplitude and angular frequency must be positive");
                }
                if order < 2 {
                    return bad("harmonic order must be at least 2");
                }
                if !(0.0..1.0).contains(&fraction) {
                    return bad("harmonic fraction must be in [0, 1)");
                }
            }
            Scenario::NonStationary { amplitude, omega, decay, mod_freq, depth } => {
                if !positive(amplitude) || !positive(omega) {
                    return bad("amplitude and angular frequency must be positive");
                }
                if !(decay >= 0.0 && mod_freq.is_finite() && depth >= 0.0 && depth.is_finite()) {
                    return bad("decay and depth must be non-negative");
                }
            }
            Scenario::FromCsv { dt, .. } => {
                if dt.is_some_and(|d| !positive(d)) {
                    return bad("dt must be positive");
                }
            }
        }
        Ok(())
    }

    /// Nominal angular frequency, if the scenario has one.
    pub fn omega(&self) -> Option<f64> {
        match *self {
            Scenario::Balanced { omega, .. }
            | Scenario::Unbalanced { omega, .. }
            | Scenario::Harmonic { omega, .. }
            | Scenario::NonStationary { omega, .. } => Some(omega),
            Scenario::FromCsv { .. } => None,
        }
    }

    fn tones(&self) -> Result<Vec<Tone>> {
        Ok(match *self {
            Scenario::Balanced { amplitude, .. } | Scenario::NonStationary { amplitude, .. } => {
                vec![Tone { amplitudes: [amplitude; 3], multiple: 1.0, offsets: BALANCED_PHASES }]
            }
            Scenario::Unbalanced { amplitudes, phases, .. } => {
                vec![Tone { amplitudes, multiple: 1.0, offsets: phases }]
            }
            Scenario::Harmonic { amplitude, order, fraction, .. } => vec![
                Tone { amplitudes: [amplitude; 3], multiple: 1.0, offsets: BALANCED_PHASES },
                Tone {
                    amplitudes: [amplitude * fraction; 3],
                    multiple: order as f64,
                    offsets: BALANCED_PHASES,
                },
            ],
            Scenario::FromCsv { .. } => return Err(SignalError::CsvVariantRequiresSeries),
        })
    }

    /// `theta` and its first three derivatives.
    fn angle_jet(&self, t: f64) -> Result<[f64; 4]> {
        match *self {
            Scenario::NonStationary { omega, decay, mod_freq, depth, .. } => {
                // e^(-decay t)(a cos + b sin) = Re((a - ib) e^(z t)), z = -decay + i mod
                let z = Complex64::new(-decay, mod_freq);
                let mut term = Complex64::new(SWING_COS, -SWING_SIN) * (z * t).exp();
                let mut g = [0.0; 4];
                for gk in g.iter_mut() {
                    *gk = term.re;
                    term *= z;
                }
                let k = depth * omega;
                Ok([omega * t - k * g[0], omega - k * g[1], -k * g[2], -k * g[3]])
            }
            Scenario::FromCsv { .. } => Err(SignalError::CsvVariantRequiresSeries),
            _ => {
                let omega = self.omega().unwrap_or_default();
                Ok([omega * t, omega, 0.0, 0.0])
            }
        }
    }

    /// `theta'(t)`, the instantaneous angular frequency of the fundamental.
    pub fn instantaneous_frequency(&self, t: f64) -> Result<f64> {
        Ok(self.angle_jet(t)?[1])
    }
}

fn cos_jet(psi: [f64; 4]) -> [f64; 4] {
    let (s, c) = psi[0].sin_cos();
    let [_, p1, p2, p3] = psi;
    [
        c,
        -s * p1,
        -c * p1 * p1 - s * p2,
        s * p1 * p1 * p1 - 3.0 * c * p1 * p2 - s * p3,
    ]
}

/// Voltage and its first three derivatives at `t`, as a jet `(v, v', v'', v''')`.
pub fn sample_voltage(s: &Scenario, t: f64) -> Result<Jet> {
    let theta = s.angle_jet(t)?;
    let mut out = [[0.0; 3]; 4];
    for tone in s.tones()? {
        for ph in 0..3 {
            let n = tone.multiple;
            let psi = [n * theta[0] + tone.offsets[ph], n * theta[1], n * theta[2], n * theta[3]];
            for (k, c) in cos_jet(psi).into_iter().enumerate() {
                out[k][ph] += tone.amplitudes[ph] * c;
            }
        }
    }
    let [v, d1, d2, d3] = out.map(V3::from_array);
    Ok(CurveJet::new(t, v, d1, d2, d3))
}

fn voltage_value(s: &Scenario, t: f64) -> Result<V3> {
    Ok(sample_voltage(s, t)?.x)
}

// 5-point Gauss-Legendre on [-1, 1]
const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

fn gauss_legendre(s: &Scenario, a: f64, b: f64) -> Result<V3> {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = V3::zero();
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        acc += voltage_value(s, mid + half * x)? * w;
    }
    Ok(acc * half)
}

const MAX_PANEL: f64 = 1e-3;

/// Flux at time zero for the non-stationary set: the zero-mean primitive
/// evaluated with the initial frequency.
fn initial_flux(s: &Scenario) -> Result<V3> {
    let theta = s.angle_jet(0.0)?;
    let tones = s.tones()?;
    let mut phi = [0.0; 3];
    for tone in tones {
        for ph in 0..3 {
            phi[ph] += tone.amplitudes[ph] / (tone.multiple * theta[1])
                * (tone.multiple * theta[0] + tone.offsets[ph]).sin();
        }
    }
    Ok(V3::from_array(phi))
}

fn flux_value(s: &Scenario, t: f64) -> Result<V3> {
    match *s {
        Scenario::NonStationary { .. } => {
            let mut phi = initial_flux(s)?;
            let panels = (t.abs() / MAX_PANEL).ceil().max(1.0) as usize;
            let h = t / panels as f64;
            for k in 0..panels {
                phi += gauss_legendre(s, k as f64 * h, (k + 1) as f64 * h)?;
            }
            Ok(phi)
        }
        _ => {
            let omega = s.omega().ok_or(SignalError::CsvVariantRequiresSeries)?;
            let mut phi = [0.0; 3];
            for tone in s.tones()? {
                let w = tone.multiple * omega;
                for ph in 0..3 {
                    phi[ph] += tone.amplitudes[ph] / w * (w * t + tone.offsets[ph]).sin();
                }
            }
            Ok(V3::from_array(phi))
        }
    }
}

fn flux_jet_from(phi: V3, v: &Jet) -> Jet {
    CurveJet::new(v.t, phi, v.x, v.d1, v.d2)
}

/// Flux jet `(phi, v, v', v'')` at `t`.
pub fn sample_flux(s: &Scenario, t: f64) -> Result<Jet> {
    let v = sample_voltage(s, t)?;
    Ok(flux_jet_from(flux_value(s, t)?, &v))
}

/// Uniformly sampled jets.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSeries {
    pub dt: f64,
    pub jets: Vec<Jet>,
}

impl SampledSeries {
    pub fn len(&self) -> usize {
        self.jets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jets.is_empty()
    }

    pub fn values(&self) -> Vec<V3> {
        self.jets.iter().map(|j| j.x).collect()
    }
}

fn sample_times(t_start: f64, t_end: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SignalError::InvalidScenario("dt must be positive".into()));
    }
    if !(t_end >= t_start && t_start.is_finite() && t_end.is_finite()) {
        return Err(SignalError::InvalidScenario("end time precedes start time".into()));
    }
    let n = ((t_end - t_start) / dt).round() as usize + 1;
    Ok((0..n).map(|k| t_start + k as f64 * dt).collect())
}

/// Voltage jets `(v, v', v'', v''')` on `[t_start, t_end]`.
pub fn voltage_series(s: &Scenario, t_start: f64, t_end: f64, dt: f64) -> Result<SampledSeries> {
    s.validate()?;
    let jets = sample_times(t_start, t_end, dt)?
        .into_iter()
        .map(|t| sample_voltage(s, t))
        .collect::<Result<_>>()?;
    Ok(SampledSeries { dt, jets })
}

/// Flux jets `(phi, v, v', v'')` on `[t_start, t_end]`.
///
/// The non-stationary flux is accumulated step by step with 5-point
/// Gauss-Legendre quadrature; the others use the closed-form primitive.
pub fn flux_series(s: &Scenario, t_start: f64, t_end: f64, dt: f64) -> Result<SampledSeries> {
    let volts = voltage_series(s, t_start, t_end, dt)?;
    let jets = match s {
        Scenario::NonStationary { .. } => {
            let mut phi = flux_value(s, t_start)?;
            let mut out = Vec::with_capacity(volts.len());
            let mut prev_t = t_start;
            for v in &volts.jets {
                if v.t != prev_t {
                    phi += gauss_legendre(s, prev_t, v.t)?;
                    prev_t = v.t;
                }
                out.push(flux_jet_from(phi, v));
            }
            out
        }
        _ => volts
            .jets
            .iter()
            .map(|v| Ok(flux_jet_from(flux_value(s, v.t)?, v)))
            .collect::<Result<_>>()?,
    };
    Ok(SampledSeries { dt, jets })
}

/// Finite-difference weights for derivatives `0..=max_order` at `x0` over
/// the nodes `xs` (Fornberg's recursion). Indexed `[order][node]`.
pub fn fd_weights(x0: f64, xs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Fourth-order derivative `order` (1..=3) at sample `k`: central where the
/// window fits, one-sided with `order + 4` nodes near the ends.
fn derivative_at(values: &[V3], k: usize, order: usize, dt: f64) -> V3 {
    let n = values.len();
    let half = if order == 3 { 3 } else { 2 };
    let (start, width) = if k >= half && k + half < n {
        (k - half, 2 * half + 1)
    } else {
        let width = order + 4;
        let start = if k < half { 0 } else { n - width };
        (start, width)
    };
    let xs: Vec<f64> = (start..start + width).map(|i| i as f64).collect();
    let w = &fd_weights(k as f64, &xs, order)[order];
    let sum: V3 = (0..width).map(|i| values[start + i] * w[i]).sum();
    sum / dt.powi(order as i32)
}

/// Jets of a uniformly sampled vector signal, derivatives by fourth-order
/// finite differences.
pub fn estimate_jets(times: &[f64], values: &[V3], dt: f64) -> Result<Vec<Jet>> {
    if values.len() < MIN_CSV_ROWS {
        return Err(SignalError::TooShort { needed: MIN_CSV_ROWS, got: values.len() });
    }
    Ok((0..values.len())
        .map(|k| {
            CurveJet::new(
                times[k],
                values[k],
                derivative_at(values, k, 1, dt),
                derivative_at(values, k, 2, dt),
                derivative_at(values, k, 3, dt),
            )
        })
        .collect())
}

/// A waveform read from CSV: voltage jets and optional phase currents.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvWaveform {
    pub series: SampledSeries,
    pub currents: Option<Vec<V3>>,
}

const BASE_HEADER: [&str; 4] = ["t", "a", "b", "c"];
const CURRENT_HEADER: [&str; 3] = ["ia", "ib", "ic"];

/// Reads `t,a,b,c[,ia,ib,ic]` and estimates voltage jets.
///
/// Timestamps must be uniform to 1 ppm; if `dt_hint` is given the step
/// must also match it to 1 ppm.
pub fn ingest_csv(path: &Path, dt_hint: Option<f64>) -> Result<CsvWaveform> {
    let file = std::fs::File::open(path).map_err(|source| SignalError::Io { path: path.to_path_buf(), source })?;
    read_csv(file, dt_hint)
}

pub fn read_csv<R: std::io::Read>(reader: R, dt_hint: Option<f64>) -> Result<CsvWaveform> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| SignalError::Parse { line: 1, message: e.to_string() })?
        .clone();
    let names: Vec<&str> = header.iter().collect();
    let with_currents = if names == BASE_HEADER {
        false
    } else if names.len() == 7 && names[..4] == BASE_HEADER && names[4..] == CURRENT_HEADER {
        true
    } else {
        return Err(SignalError::Parse {
            line: 1,
            message: format!("expected header `t,a,b,c` or `t,a,b,c,ia,ib,ic`, found `{}`", names.join(",")),
        });
    };

    let mut times = Vec::new();
    let mut volts = Vec::new();
    let mut amps = Vec::new();
    let mut lines = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| SignalError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<f64> {
            let raw = rec.get(i).unwrap_or_default();
            raw.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| SignalError::Parse {
                    line,
                    message: format!("column `{}`: cannot parse `{raw}` as a finite number", header.get(i).unwrap_or("?")),
                })
        };
        times.push(field(0)?);
        volts.push(V3::new(field(1)?, field(2)?, field(3)?));
        if with_currents {
            amps.push(V3::new(field(4)?, field(5)?, field(6)?));
        }
        lines.push(line);
    }
    if times.len() < MIN_CSV_ROWS {
        return Err(SignalError::TooShort { needed: MIN_CSV_ROWS, got: times.len() });
    }

    let dt = dt_hint.unwrap_or(times[1] - times[0]);
    if !(dt > 0.0) {
        return Err(SignalError::Parse { line: lines[1], message: "timestamps must increase".into() });
    }
    for k in 1..times.len() {
        let step = times[k] - times[k - 1];
        if (step - dt).abs() > 1e-6 * dt {
            return Err(SignalError::NonUniformTimestep { line: lines[k], expected: dt, found: step });
        }
    }

    let jets = estimate_jets(&times, &volts, dt)?;
    Ok(CsvWaveform {
        series: SampledSeries { dt, jets },
        currents: with_currents.then_some(amps),
    })
}

/// Integrates a voltage series into flux jets `(phi, v, v', v'')`.
///
/// Steps use the corrected trapezoid rule `h/2 (v0 + v1) + h^2/12 (v0' - v1')`
/// and the record mean is removed so the primitive is zero-mean.
pub fn integrate_series(volts: &SampledSeries) -> SampledSeries {
    let h = volts.dt;
    let n = volts.len();
    let mut phi = Vec::with_capacity(n);
    let mut acc = V3::zero();
    for k in 0..n {
        if k > 0 {
            let (a, b) = (&volts.jets[k - 1], &volts.jets[k]);
            acc += (a.x + b.x) * (0.5 * h) + (a.d1 - b.d1) * (h * h / 12.0);
        }
        phi.push(acc);
    }
    if n > 1 {
        let span = h * (n - 1) as f64;
        let area: V3 = phi.windows(2).map(|w| (w[0] + w[1]) * (0.5 * h)).sum();
        let mean = area / span;
        for p in &mut phi {
            *p -= mean;
        }
    }
    let jets = volts.jets.iter().zip(phi).map(|(v, p)| flux_jet_from(p, v)).collect();
    SampledSeries { dt: h, jets }
}

/// Writes `t,a,b,c` rows with shortest round-trip float formatting.
pub fn write_waveform_csv<W: Write>(out: W, series: &SampledSeries) -> std::io::Result<()> {
    let mut w = std::io::BufWriter::new(out);
    writeln!(w, "t,a,b,c")?;
    for j in &series.jets {
        writeln!(w, "{},{},{},{}", j.t, j.x.x, j.x.y, j.x.z)?;
    }
    w.flush()
}

pub fn write_waveform_file(path: &Path, series: &SampledSeries) -> Result<()> {
    let io_err = |source| SignalError::Io { path: path.to_path_buf(), source };
    let file = std::fs::File::create(path).map_err(io_err)?;
    write_waveform_csv(file, series).map_err(io_err)
}

/// Keys understood by [`Scenario::from_settings`].
pub const SCENARIO_KEYS: [&str; 13] = [
    "scenario",
    "V",
    "Va",
    "Vb",
    "Vc",
    "f",
    "harmonic_order",
    "harmonic_frac",
    "decay",
    "mod_freq",
    "depth",
    "from_csv",
    "csv_dt",
];

/// Parses `name = value` lines; blank lines and `#` comments are skipped.
/// Keys outside `allowed` are errors.
pub fn parse_key_values(text: &str, allowed: &[&str]) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or_default().trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| SignalError::Config {
            line,
            message: format!("expected `name=value`, found `{body}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !allowed.contains(&key) {
            return Err(SignalError::Config { line, message: format!("unknown key `{key}`") });
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(SignalError::Config { line, message: format!("duplicate key `{key}`") });
        }
    }
    Ok(map)
}

/// Parses a scenario config file restricted to [`SCENARIO_KEYS`].
pub fn parse_scenario_config(text: &str) -> Result<Scenario> {
    Scenario::from_settings(&parse_key_values(text, &SCENARIO_KEYS)?)
}

impl Scenario {
    /// Builds a scenario from string settings. Frequencies are in hertz
    /// (`f`, default 50); `mod_freq` is in rad/s.
    pub fn from_settings(map: &BTreeMap<String, String>) -> Result<Self> {
        let num = |key: &'static str| -> Result<Option<f64>> {
            map.get(key)
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| SignalError::InvalidScenario(format!("`{key}` is not a number: `{s}`")))
                })
                .transpose()
        };
        let req = |key: &'static str| num(key)?.ok_or(SignalError::MissingKey(key));

        let kind = map.get("scenario").map(String::as_str).unwrap_or(if map.contains_key("from_csv") {
            "csv"
        } else {
            "balanced"
        });
        let omega = 2.0 * PI * num("f")?.unwrap_or(50.0);
        let scenario = match kind {
            "balanced" => Scenario::balanced(req("V")?, omega),
            "unbalanced" => {
                let base = num("V")?;
                let pick = |key: &'static str| num(key)?.or(base).ok_or(SignalError::MissingKey(key));
                Scenario::unbalanced([pick("Va")?, pick("Vb")?, pick("Vc")?], omega)
            }
            "harmonic" => {
                let order = match map.get("harmonic_order") {
                    Some(s) => s.parse::<u32>().map_err(|_| {
                        SignalError::InvalidScenario(format!("`harmonic_order` is not a whole number: `{s}`"))
                    })?,
                    None => 5,
                };
                Scenario::harmonic(req("V")?, omega, order, num("harmonic_frac")?.unwrap_or(0.05))
            }
            "nonstationary" | "non-stationary" => Scenario::NonStationary {
                amplitude: req("V")?,
                omega,
                decay: num("decay")?.unwrap_or(DEFAULT_DECAY),
                mod_freq: num("mod_freq")?.unwrap_or(DEFAULT_MOD_FREQ),
                depth: num("depth")?.unwrap_or(DEFAULT_DEPTH),
            },
            "csv" => Scenario::FromCsv {
                path: map.get("from_csv").map(PathBuf::from).ok_or(SignalError::MissingKey("from_csv"))?,
                dt: num("csv_dt")?,
            },
            other => return Err(SignalError::InvalidScenario(format!("unknown scenario `{other}`"))),
        };
        scenario.validate()?;
        Ok(scenario)
    }
}
