//! `phaseland` command-line front end.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "phaseland",
    version,
    about = "Triangular RF phase-shift landing sensor toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Phase shifts while the landing point circles the drone.
    Sweep(SweepArgs),
    /// Non-ambiguity cone radius per azimuth and height.
    Cone(ConeArgs),
    /// Fit a calibration polynomial to measured samples.
    Fit(FitArgs),
    /// Classify three centered voltages and print the maneuver trace.
    Decide(DecideArgs),
    /// Closed-loop landing simulation.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Carrier frequency in GHz [default: 2.45 for sweep/cone, 2.46 otherwise].
    #[arg(long, value_parser = positive)]
    freq_ghz: Option<f64>,
    /// Receiver triangle side in cm.
    #[arg(long, default_value_t = 7.0, value_parser = positive)]
    spacing_cm: f64,
    /// Propagation speed in m/s.
    #[arg(long, default_value_t = phaseland::geometry::SPEED_OF_LIGHT, value_parser = positive)]
    wave_speed: f64,
    /// Calibration profile: `table2`, `table2-d12|d23|d31` or a profile file.
    /// Repeat to replace individual pairs.
    #[arg(long)]
    profile: Vec<String>,
    /// Output file [default: stdout].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Horizontal distance to the landing point in cm.
    #[arg(long, default_value_t = 10.0, value_parser = positive)]
    r_cm: f64,
    /// Drone height in cm.
    #[arg(long, default_value_t = 100.0, value_parser = positive)]
    z_cm: f64,
    /// Number of azimuth samples over [-180, 180] deg.
    #[arg(long, default_value_t = 361)]
    n: usize,
}

#[derive(Debug, Args)]
struct ConeArgs {
    #[command(flatten)]
    common: Common,
    /// Phase limit in degrees.
    #[arg(long, default_value_t = 90.0, value_parser = positive)]
    theta_limit: f64,
    /// Heights in cm, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1000", value_parser = positive)]
    z_cm: Vec<f64>,
    /// Azimuths per height.
    #[arg(long, default_value_t = 360)]
    n_az: usize,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    common: Common,
    /// Samples CSV with header `theta_deg,voltage_v,power_dbm`.
    samples: PathBuf,
    /// Polynomial degree.
    #[arg(long, default_value_t = 5)]
    degree: usize,
    /// Detector pair the samples belong to.
    #[arg(long, default_value = "d12")]
    pair: phaseland::Pair,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct DecideArgs {
    #[command(flatten)]
    guidance: GuidanceArgs,
    #[arg(value_parser = finite)]
    v12: f64,
    #[arg(value_parser = finite)]
    v23: f64,
    #[arg(value_parser = finite)]
    v31: f64,
}

#[derive(Debug, Args)]
struct GuidanceArgs {
    /// Hold when every centered voltage is at or below this (V).
    #[arg(long, default_value_t = 0.02, value_parser = positive)]
    hold_v: f64,
    /// Rotation step in degrees.
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    rd_deg: f64,
    /// Translation step in cm.
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    md_cm: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DetectorKind {
    Calibrated,
    IdealSine,
    Triangular,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    guidance: GuidanceArgs,
    /// Start position in cm.
    #[arg(long, default_value_t = 0.0, value_parser = finite)]
    start_x_cm: f64,
    #[arg(long, default_value_t = 0.0, value_parser = finite)]
    start_y_cm: f64,
    #[arg(long, default_value_t = 300.0, value_parser = positive)]
    start_z_cm: f64,
    /// Start heading, clockwise from world +Y.
    #[arg(long, default_value_t = 0.0, value_parser = finite)]
    heading_deg: f64,
    /// Landing point distance from the world origin in cm.
    #[arg(long, default_value_t = 100.0, value_parser = non_negative)]
    landing_r_cm: f64,
    /// Landing point azimuth, clockwise from world +Y.
    #[arg(long, default_value_t = -35.0, value_parser = finite)]
    landing_phi_deg: f64,
    /// Height lost per tracking or hold cycle in cm.
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    descent_cm: f64,
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    min_height_cm: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = DetectorKind::Calibrated)]
    detector: DetectorKind,
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("'{s}' must be positive"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("'{s}' must not be negative"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(CliError::USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => commands::sweep(a),
        Command::Cone(a) => commands::cone(a),
        Command::Fit(a) => commands::fit(a),
        Command::Decide(a) => commands::decide(a),
        Command::Simulate(a) => commands::simulate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("phaseland: {e}");
            ExitCode::from(e.code())
        }
    }
}
