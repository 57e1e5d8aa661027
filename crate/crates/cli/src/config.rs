use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use geopower::signals::{parse_key_values, Scenario, SignalError, SCENARIO_KEYS};
use geopower::ElementParamsd;

use crate::CliError;

const RUN_KEYS: [&str; 6] = ["C", "G", "L", "R", "dur", "dt"];

/// Waveform selection shared by both subcommands.
#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// balanced, unbalanced, harmonic or nonstationary
    #[arg(long)]
    pub scenario: Option<String>,
    /// Read the voltage waveform from a `t,a,b,c` CSV file
    #[arg(long = "from-csv", value_name = "PATH")]
    pub from_csv: Option<PathBuf>,
    /// Phase amplitude in volts
    #[arg(long = "V", value_name = "VOLTS")]
    pub amplitude: Option<f64>,
    #[arg(long = "Va", value_name = "VOLTS")]
    pub amplitude_a: Option<f64>,
    #[arg(long = "Vb", value_name = "VOLTS")]
    pub amplitude_b: Option<f64>,
    #[arg(long = "Vc", value_name = "VOLTS")]
    pub amplitude_c: Option<f64>,
    /// Fundamental frequency in Hz
    #[arg(long = "f", value_name = "HZ")]
    pub frequency: Option<f64>,
    #[arg(long = "harmonic-order")]
    pub harmonic_order: Option<u32>,
    #[arg(long = "harmonic-frac")]
    pub harmonic_frac: Option<f64>,
    /// Duration in seconds
    #[arg(long)]
    pub dur: Option<f64>,
    /// Sampling step in seconds
    #[arg(long)]
    pub dt: Option<f64>,
    /// `name=value` file; command-line flags take precedence
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ElementArgs {
    /// Capacitance per phase, farad
    #[arg(long = "C")]
    pub capacitance: Option<f64>,
    /// Conductance per phase, siemens
    #[arg(long = "G")]
    pub conductance: Option<f64>,
    /// Inductance per phase, henry
    #[arg(long = "L")]
    pub inductance: Option<f64>,
    /// Resistance per phase, ohm
    #[arg(long = "R")]
    pub resistance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum OutputGroup {
    Power,
    Frenet,
    Coriolis,
    Relative,
    Identities,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Unit,
    Mega,
}

impl Scale {
    pub fn divisor(self) -> f64 {
        match self {
            Scale::Unit => 1.0,
            Scale::Mega => 1e6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub element: ElementParamsd,
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
}

pub const DEFAULT_DT: f64 = 5e-5;
pub const DEFAULT_DUR: f64 = 0.04;
pub const DEFAULT_C: f64 = 10e-6;

fn num(map: &BTreeMap<String, String>, key: &'static str) -> Result<Option<f64>, CliError> {
    map.get(key)
        .map(|s| s.parse::<f64>().map_err(|_| CliError::Config(format!("--{key}: not a number: `{s}`"))))
        .transpose()
}

/// Merges the config file (if any) with flags and validates the result.
pub fn resolve(args: &ScenarioArgs, element: Option<&ElementArgs>) -> Result<RunConfig, CliError> {
    let mut map = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let allowed: Vec<&str> = SCENARIO_KEYS.iter().chain(RUN_KEYS.iter()).copied().collect();
            parse_key_values(&text, &allowed).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => BTreeMap::new(),
    };

    let mut set = |key: &str, value: Option<String>| {
        if let Some(v) = value {
            map.insert(key.to_string(), v);
        }
    };
    set("scenario", args.scenario.clone());
    set("from_csv", args.from_csv.as_ref().map(|p| p.display().to_string()));
    set("V", args.amplitude.map(|x| x.to_string()));
    set("Va", args.amplitude_a.map(|x| x.to_string()));
    set("Vb", args.amplitude_b.map(|x| x.to_string()));
    set("Vc", args.amplitude_c.map(|x| x.to_string()));
    set("f", args.frequency.map(|x| x.to_string()));
    set("harmonic_order", args.harmonic_order.map(|x| x.to_string()));
    set("harmonic_frac", args.harmonic_frac.map(|x| x.to_string()));
    set("dur", args.dur.map(|x| x.to_string()));
    set("dt", args.dt.map(|x| x.to_string()));
    if let Some(e) = element {
        set("C", e.capacitance.map(|x| x.to_string()));
        set("G", e.conductance.map(|x| x.to_string()));
        set("L", e.inductance.map(|x| x.to_string()));
        set("R", e.resistance.map(|x| x.to_string()));
    }
    if map.contains_key("from_csv") && map.contains_key("dt") && !map.contains_key("csv_dt") {
        let dt = map["dt"].clone();
        map.insert("csv_dt".into(), dt);
    }

    let scenario_map: BTreeMap<String, String> = map
        .iter()
        .filter(|(k, _)| SCENARIO_KEYS.contains(&k.as_str()))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let scenario = Scenario::from_settings(&scenario_map).map_err(|e| match e {
        SignalError::MissingKey(key) => CliError::Config(format!("missing required flag --{key}")),
        other => CliError::Config(other.to_string()),
    })?;

    let dt = num(&map, "dt")?.unwrap_or(DEFAULT_DT);
    let dur = num(&map, "dur")?.unwrap_or(DEFAULT_DUR);
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CliError::Config("--dt must be positive".into()));
    }
    if !(dur > 0.0 && dur.is_finite()) {
        return Err(CliError::Config("--dur must be positive".into()));
    }
    let element = ElementParamsd {
        capacitance: num(&map, "C")?.unwrap_or(DEFAULT_C),
        conductance: num(&map, "G")?.unwrap_or(0.0),
        inductance: num(&map, "L")?.unwrap_or(0.0),
        resistance: num(&map, "R")?.unwrap_or(0.0),
    };
    element.validate().map_err(|e| CliError::Config(e.to_string()))?;
    if element.capacitance <= 0.0 {
        return Err(CliError::Config("--C must be positive".into()));
    }
    if element.inductance == 0.0 && element.resistance > 0.0 {
        return Err(CliError::Config("--R needs a series inductor (--L)".into()));
    }

    Ok(RunConfig { scenario, element, t_start: 0.0, t_end: dur, dt })
}
