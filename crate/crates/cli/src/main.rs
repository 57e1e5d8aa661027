//! `geopower` command-line tool.
//!
//! Exit codes: 0 ok, 1 identity check failed, 2 configuration error,
//! 3 input/output error.

mod config;
mod report;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use geopower::frenet::Thresholds;
use geopower::signals::{
    flux_series, ingest_csv, integrate_series, voltage_series, write_waveform_csv, Scenario, SignalError,
};
use geopower::CurveJetd;

use config::{resolve, ElementArgs, Format, OutputGroup, RunConfig, Scale, ScenarioArgs};
use report::{compute_rows, write_csv, write_json, Summary};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Analysis(String),
    IdentitiesFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::IdentitiesFailed => 1,
            CliError::Config(_) | CliError::Analysis(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Analysis(m) => write!(f, "analysis error: {m}"),
            CliError::IdentitiesFailed => write!(f, "identity check failed"),
        }
    }
}

impl From<SignalError> for CliError {
    fn from(e: SignalError) -> Self {
        match e {
            SignalError::Io { .. }
            | SignalError::Parse { .. }
            | SignalError::NonUniformTimestep { .. }
            | SignalError::TooShort { .. } => CliError::Io(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "geopower", version, about = "Instantaneous power of three-phase waveforms from curve geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a sampled voltage waveform as `t,a,b,c` CSV
    Generate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Output file (standard output if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate power, Frenet invariants and current components per sample
    Analyze {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "power,frenet,coriolis")]
        outputs: Vec<OutputGroup>,
        /// `mega` divides power columns by 1e6
        #[arg(long, value_enum, default_value = "unit")]
        scale: Scale,
    },
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

/// Maps a write failure; a closed stdout pipe (e.g. `| head`) ends quietly.
fn written(result: std::io::Result<()>, path: Option<&Path>) -> Result<(), CliError> {
    match result {
        Err(e) if path.is_none() && e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(CliError::Io(format!(
            "{}: {e}",
            path.map_or("<stdout>".into(), |p| p.display().to_string())
        ))),
        Ok(()) => Ok(()),
    }
}

fn generate(args: &ScenarioArgs, out: Option<&Path>) -> Result<(), CliError> {
    let cfg = resolve(args, None)?;
    if matches!(cfg.scenario, Scenario::FromCsv { .. }) {
        return Err(CliError::Config("generate needs a synthetic --scenario, not --from-csv".into()));
    }
    let series = voltage_series(&cfg.scenario, cfg.t_start, cfg.t_end, cfg.dt)?;
    let mut w = open_out(out)?;
    written(write_waveform_csv(&mut w, &series).and_then(|()| w.flush()), out)
}

/// Flux jets and, when available, voltage jets with a third derivative.
fn load_series(cfg: &RunConfig) -> Result<(Vec<CurveJetd>, Vec<CurveJetd>), CliError> {
    match &cfg.scenario {
        Scenario::FromCsv { path, dt } => {
            let wave = ingest_csv(path, *dt)?;
            let flux = integrate_series(&wave.series).jets;
            Ok((flux, wave.series.jets))
        }
        s => Ok((
            flux_series(s, cfg.t_start, cfg.t_end, cfg.dt)?.jets,
            voltage_series(s, cfg.t_start, cfg.t_end, cfg.dt)?.jets,
        )),
    }
}

fn thresholds(flux: &[CurveJetd]) -> Result<Thresholds<f64>, CliError> {
    let mut th = Thresholds::for_series(flux);
    if let Ok(raw) = std::env::var("GEOPOWER_EPS") {
        let eps: f64 = raw
            .trim()
            .parse()
            .ok()
            .filter(|e: &f64| *e >= 0.0 && e.is_finite())
            .ok_or_else(|| CliError::Config(format!("GEOPOWER_EPS: not a non-negative number: `{raw}`")))?;
        th.eps_speed = eps;
        th.eps_curv = eps;
    }
    Ok(th)
}

fn analyze(
    args: &ScenarioArgs,
    element: &ElementArgs,
    out: Option<&Path>,
    format: Format,
    outputs: &[OutputGroup],
    scale: Scale,
) -> Result<(), CliError> {
    let cfg = resolve(args, Some(element))?;
    let mut groups = outputs.to_vec();
    groups.sort();
    groups.dedup();
    if groups.is_empty() {
        return Err(CliError::Config("--outputs must name at least one group".into()));
    }

    let (flux, volts) = load_series(&cfg)?;
    let th = thresholds(&flux)?;
    let rows = compute_rows(&flux, Some(&volts), &cfg.element, &th)?;
    let summary = Summary::from_rows(&rows);

    let mut w = open_out(out)?;
    let result = match format {
        Format::Csv => write_csv(&mut w, &rows, &summary, &groups, scale),
        Format::Json => write_json(&mut w, &rows, &summary, &groups, scale),
    };
    written(result.and_then(|()| w.flush()), out)?;

    if summary.degenerate_speed + summary.degenerate_curvature > 0 {
        eprintln!(
            "note: {} speed-degenerate and {} curvature-degenerate samples skipped in identity checks",
            summary.degenerate_speed, summary.degenerate_curvature
        );
    }
    if groups.contains(&OutputGroup::Identities) {
        for (name, worst, limit) in &summary.identities {
            eprintln!("identity {name:<18} max {worst:.3e}  threshold {limit:.0e}");
        }
        if !summary.identities_pass() {
            return Err(CliError::IdentitiesFailed);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate { scenario, out } => generate(scenario, out.as_deref()),
        Command::Analyze { scenario, element, out, format, outputs, scale } => {
            analyze(scenario, element, out.as_deref(), *format, outputs, *scale)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("geopower: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
