use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use phaseland::detector::{
    fit_calibration, parse_measurements, parse_profile, prototype, render_profile,
};
use phaseland::geometry::{azimuth_sweep, cone_profile, write_cone_csv, write_sweep_csv};
use phaseland::guidance::trace_line;
use phaseland::simulator::{simulate_landing, write_trajectory_csv};
use phaseland::{
    CalibrationSet, DetectorModel, DroneState, Error, GuidanceConfig, IdealDetector,
    ReceiverGeometry, RfConfig, Sensor, SimConfig, TriangularDetector, Vector3, VoltageTriple,
};

use crate::error::CliError;
use crate::{
    Common, ConeArgs, DecideArgs, DetectorKind, FitArgs, GuidanceArgs, SimulateArgs, SweepArgs,
};

const SWEEP_FREQ_GHZ: f64 = 2.45;
const PROTOTYPE_FREQ_GHZ: f64 = 2.46;

fn rf(common: &Common, default_ghz: f64) -> Result<RfConfig, CliError> {
    let ghz = common.freq_ghz.unwrap_or(default_ghz);
    Ok(RfConfig::new(ghz * 1e9, common.wave_speed)?)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Re-labels a parse failure with the file it came from.
fn in_file(path: &Path, e: Error) -> CliError {
    match e {
        Error::Parse { .. } => CliError::Io(format!("{}: {e}", path.display())),
        other => CliError::Core(other),
    }
}

fn profiles(specs: &[String]) -> Result<CalibrationSet, CliError> {
    let mut set = CalibrationSet::prototype();
    for spec in specs {
        if spec == "table2" {
            set = CalibrationSet::prototype();
        } else if let Some(poly) = prototype::builtin(spec) {
            set.set(poly);
        } else {
            let path = PathBuf::from(spec);
            if !path.exists() {
                return Err(CliError::Usage(format!(
                    "profile '{spec}' is neither a built-in name nor a file"
                )));
            }
            let poly = parse_profile(&read(&path)?).map_err(|e| in_file(&path, e))?;
            set.set(poly);
        }
    }
    Ok(set)
}

fn guidance(args: &GuidanceArgs) -> Result<GuidanceConfig, CliError> {
    Ok(GuidanceConfig::new(args.hold_v, args.rd_deg, args.md_cm)?)
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let geom = ReceiverGeometry::new(args.common.spacing_cm)?;
    let rf = rf(&args.common, SWEEP_FREQ_GHZ)?;
    let rows = azimuth_sweep(args.r_cm, args.z_cm, &geom, &rf, args.n)?;
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &rows).expect("writing to memory");
    emit(args.common.out.as_deref(), &buf)
}

pub fn cone(args: ConeArgs) -> Result<(), CliError> {
    if args.theta_limit >= 180.0 {
        return Err(CliError::Usage(format!(
            "--theta-limit must be below 180 deg, got {}",
            args.theta_limit
        )));
    }
    let geom = ReceiverGeometry::new(args.common.spacing_cm)?;
    let rf = rf(&args.common, SWEEP_FREQ_GHZ)?;
    let rows = cone_profile(&args.z_cm, args.theta_limit, &geom, &rf, args.n_az)?;
    let mut buf = Vec::new();
    write_cone_csv(&mut buf, &rows).expect("writing to memory");
    emit(args.common.out.as_deref(), &buf)
}

pub fn fit(args: FitArgs) -> Result<(), CliError> {
    let file = fs::File::open(&args.samples).map_err(|e| CliError::io(&args.samples, e))?;
    let samples =
        parse_measurements(io::BufReader::new(file)).map_err(|e| in_file(&args.samples, e))?;
    if samples.is_empty() {
        return Err(CliError::Io(format!(
            "{}: no samples",
            args.samples.display()
        )));
    }
    let freq_hz = args.common.freq_ghz.unwrap_or(PROTOTYPE_FREQ_GHZ) * 1e9;
    let poly = fit_calibration(&samples, args.degree, args.pair, freq_hz)?;
    emit(args.common.out.as_deref(), render_profile(&poly).as_bytes())?;
    eprintln!(
        "{}: degree {} fit over {} samples, max_err = {:.6} deg",
        args.pair,
        args.degree,
        samples.len(),
        poly.max_err_deg()
    );
    Ok(())
}

pub fn decide(args: DecideArgs) -> Result<(), CliError> {
    let v = VoltageTriple::try_new(args.v12, args.v23, args.v31)?;
    println!("{}", trace_line(&v, &guidance(&args.guidance)?));
    Ok(())
}

pub fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    let detector = match args.detector {
        DetectorKind::Calibrated => DetectorModel::Calibrated(profiles(&args.common.profile)?),
        DetectorKind::IdealSine => DetectorModel::IdealSine(IdealDetector::default()),
        DetectorKind::Triangular => DetectorModel::Triangular(TriangularDetector::default()),
    };
    let sensor = Sensor::new(
        ReceiverGeometry::new(args.common.spacing_cm)?,
        rf(&args.common, PROTOTYPE_FREQ_GHZ)?,
        detector,
    );
    let start = DroneState::new(
        Vector3::new(args.start_x_cm, args.start_y_cm, args.start_z_cm),
        args.heading_deg,
    )?;
    let (s, c) = args.landing_phi_deg.to_radians().sin_cos();
    let landing = Vector3::new(args.landing_r_cm * s, args.landing_r_cm * c, 0.0);
    let scfg = SimConfig::new(args.descent_cm, args.min_height_cm, args.max_iter)?;
    let gcfg = guidance(&args.guidance)?;

    let (run, failure) = match simulate_landing(start, landing, &sensor, &gcfg, &scfg) {
        Ok(run) => (run, None),
        Err(aborted) => {
            let aborted = *aborted;
            (aborted.run, Some(aborted.cause))
        }
    };
    let mut buf = Vec::new();
    write_trajectory_csv(&mut buf, &run.records).expect("writing to memory");
    emit(args.common.out.as_deref(), &buf)?;

    if let Some(cause) = failure {
        return Err(CliError::Core(cause));
    }
    match run.first_hold_record() {
        Some(hold) if run.converged() => eprintln!(
            "converged: hold at iteration {} (z = {:.1} cm), touchdown after {} iterations, {:.2} cm from the landing point",
            hold.iteration,
            hold.state.position.z,
            run.records.len(),
            run.horizontal_error()
        ),
        _ => eprintln!(
            "not converged after {} iterations{}",
            run.records.len(),
            if run.hit_iteration_limit { " (iteration limit)" } else { "" }
        ),
    }
    Ok(())
}
