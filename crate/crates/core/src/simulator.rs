//! Closed-loop landing simulation.
//!
//! World frame: `z` is the height above the landing plane, heading is the
//! azimuth of the body +Y axis measured clockwise from world +Y. Each cycle
//! senses the three centered voltages, asks [`guidance::decide`] for
//! maneuvers, applies them in order and descends one step unless the cycle
//! was a pure sector-escape yaw.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::detector::{
    ideal_sine_voltage, CalibrationSet, IdealDetector, TriangularDetector, CALIBRATED_RANGE_DEG,
};
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::geometry::{
    phase_solution, wrap_deg, Pair, PhaseSolution, ReceiverGeometry, RfConfig, Vector3,
};
use crate::guidance::{
    self, classify_sector, maneuver_tokens, GuidanceConfig, Maneuver, ManeuverKind, SectorId,
    VoltageTriple,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroneState {
    pub position: Vector3,
    pub heading_deg: f64,
}

impl DroneState {
    pub fn new(position: Vector3, heading_deg: f64) -> Result<Self> {
        position.ensure_finite("drone position")?;
        ensure_finite("heading", heading_deg)?;
        ensure_positive("drone height", position.z)?;
        Ok(Self {
            position,
            heading_deg: wrap_deg(heading_deg),
        })
    }

    /// Landing point expressed in the body frame.
    pub fn body_frame(&self, landing: Vector3) -> Vector3 {
        let d = landing - self.position;
        let (s, c) = self.heading_deg.to_radians().sin_cos();
        Vector3::new(d.x * c - d.y * s, d.x * s + d.y * c, d.z)
    }

    /// Horizontal distance to `landing`.
    pub fn horizontal_distance(&self, landing: Vector3) -> f64 {
        (self.position.x - landing.x).hypot(self.position.y - landing.y)
    }
}

/// How phase shifts become centered voltages.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq)]
pub enum DetectorModel {
    Calibrated(CalibrationSet),
    IdealSine(IdealDetector),
    Triangular(TriangularDetector),
}

impl DetectorModel {
    pub fn range_deg(&self) -> f64 {
        match self {
            DetectorModel::Calibrated(_) => CALIBRATED_RANGE_DEG,
            DetectorModel::IdealSine(_) => IdealDetector::RANGE_DEG,
            DetectorModel::Triangular(_) => TriangularDetector::RANGE_DEG,
        }
    }

    /// Centered voltage for a (wrapped) phase shift on `pair`.
    pub fn centered_voltage(&self, pair: Pair, theta_deg: f64) -> Result<f64> {
        let limit = self.range_deg();
        if !theta_deg.is_finite() || theta_deg.abs() > limit {
            return Err(Error::Ambiguity {
                pair,
                theta_deg,
                limit_deg: limit,
            });
        }
        Ok(match self {
            DetectorModel::Calibrated(set) => {
                let poly = set.get(pair);
                poly.centered_voltage(poly.voltage_from_phase(theta_deg)?)
            }
            DetectorModel::IdealSine(det) => ideal_sine_voltage(theta_deg, det),
            DetectorModel::Triangular(det) => det.centered_voltage(theta_deg),
        })
    }
}

impl Default for DetectorModel {
    fn default() -> Self {
        DetectorModel::Calibrated(CalibrationSet::prototype())
    }
}

/// The full sensing chain: receiver geometry, carrier and detectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Sensor {
    pub geometry: ReceiverGeometry,
    pub rf: RfConfig,
    pub detector: DetectorModel,
}

impl Sensor {
    pub fn new(geometry: ReceiverGeometry, rf: RfConfig, detector: DetectorModel) -> Self {
        Self {
            geometry,
            rf,
            detector,
        }
    }

    /// 7 cm triangle at 2.46 GHz with the built-in calibrations.
    pub fn prototype() -> Self {
        Self {
            geometry: ReceiverGeometry::new(7.0).expect("valid spacing"),
            rf: RfConfig::from_ghz(2.46).expect("valid frequency"),
            detector: DetectorModel::default(),
        }
    }

    pub fn phases(&self, state: &DroneState, landing: Vector3) -> Result<PhaseSolution> {
        let body = state.body_frame(landing);
        if body.z >= 0.0 {
            return Err(Error::invalid(format!(
                "landing point must lie below the drone (body z = {})",
                body.z
            )));
        }
        phase_solution(&self.geometry, body, &self.rf)
    }

    pub fn sense(&self, state: &DroneState, landing: Vector3) -> Result<VoltageTriple> {
        let sol = self.phases(state, landing)?;
        let mut v = [0.0; 3];
        for pair in Pair::ALL {
            let theta = wrap_deg(sol.phase(pair));
            v[pair.index()] = self.detector.centered_voltage(pair, theta)?;
        }
        Ok(VoltageTriple::from_array(v))
    }
}

impl Default for Sensor {
    fn default() -> Self {
        Self::prototype()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// cm descended after each tracking or hold cycle.
    pub descent_step_cm: f64,
    /// Touchdown height in cm.
    pub min_height_cm: f64,
    pub max_iterations: usize,
}

impl SimConfig {
    pub fn new(descent_step_cm: f64, min_height_cm: f64, max_iterations: usize) -> Result<Self> {
        ensure_positive("descent step", descent_step_cm)?;
        ensure_positive("minimum height", min_height_cm)?;
        if max_iterations == 0 {
            return Err(Error::invalid("max iterations must be positive"));
        }
        Ok(Self {
            descent_step_cm,
            min_height_cm,
            max_iterations,
        })
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            descent_step_cm: 1.0,
            min_height_cm: 1.0,
            max_iterations: 100_000,
        }
    }
}

/// One sense/decide/act cycle. `state` is the pose at sensing time.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub iteration: usize,
    pub state: DroneState,
    pub voltages: VoltageTriple,
    pub sector: SectorId,
    pub maneuvers: Vec<Maneuver>,
}

impl TrajectoryRecord {
    pub fn is_hold(&self) -> bool {
        self.maneuvers.first().map(|m| m.kind()) == Some(ManeuverKind::Hold)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandingRun {
    pub records: Vec<TrajectoryRecord>,
    pub final_state: DroneState,
    pub landing: Vector3,
    /// Index into `records` of the first hold.
    pub first_hold: Option<usize>,
    pub hit_iteration_limit: bool,
}

impl LandingRun {
    /// A hold was reached and the drone descended to touchdown height.
    pub fn converged(&self) -> bool {
        self.first_hold.is_some() && !self.hit_iteration_limit
    }

    pub fn first_hold_record(&self) -> Option<&TrajectoryRecord> {
        self.first_hold.map(|k| &self.records[k])
    }

    pub fn horizontal_error(&self) -> f64 {
        self.final_state.horizontal_distance(self.landing)
    }
}

/// A run cut short by an error; `run` holds the log up to the failure.
#[derive(Debug, Clone, PartialEq)]
pub struct Aborted {
    pub run: LandingRun,
    pub cause: Error,
}

impl fmt::Display for Aborted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "landing aborted after {} iterations: {}",
            self.run.records.len(),
            self.cause
        )
    }
}

impl std::error::Error for Aborted {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.cause)
    }
}

pub fn apply_maneuver(state: &DroneState, m: &Maneuver) -> DroneState {
    let mut next = *state;
    let amount = m.magnitude().unwrap_or(0.0);
    match m.kind() {
        ManeuverKind::YawLeft | ManeuverKind::RotateLeft => next.heading_deg -= amount,
        ManeuverKind::YawRight | ManeuverKind::RotateRight => next.heading_deg += amount,
        ManeuverKind::Forward | ManeuverKind::Backward => {
            let sign = if m.kind() == ManeuverKind::Forward {
                1.0
            } else {
                -1.0
            };
            let (s, c) = state.heading_deg.to_radians().sin_cos();
            next.position.x += sign * amount * s;
            next.position.y += sign * amount * c;
        }
        ManeuverKind::Hold => {}
    }
    next.heading_deg = wrap_deg(next.heading_deg);
    next
}

/// Runs the landing loop from `start` until touchdown or the iteration
/// limit.
///
/// An escape yaw that undoes the previous cycle's escape yaw would leave the
/// drone oscillating on a sector edge; in that case the cycle also applies
/// the sector-1 tracking maneuvers for the same voltages and descends.
pub fn simulate_landing(
    start: DroneState,
    landing: Vector3,
    sensor: &Sensor,
    gcfg: &GuidanceConfig,
    scfg: &SimConfig,
) -> std::result::Result<LandingRun, Box<Aborted>> {
    let mut run = LandingRun {
        records: Vec::new(),
        final_state: start,
        landing,
        first_hold: None,
        hit_iteration_limit: false,
    };
    let abort = |run: LandingRun, cause: Error| Err(Box::new(Aborted { run, cause }));
    if let Err(e) = landing.ensure_finite("landing point") {
        return abort(run, e);
    }
    if let Err(e) = DroneState::new(start.position, start.heading_deg) {
        return abort(run, e);
    }

    let mut state = start;
    let mut last_escape: Option<ManeuverKind> = None;
    let mut iteration = 0;
    while state.position.z > scfg.min_height_cm {
        if iteration >= scfg.max_iterations {
            run.hit_iteration_limit = true;
            break;
        }
        let voltages = match sensor.sense(&state, landing) {
            Ok(v) => v,
            Err(e) => {
                run.final_state = state;
                return abort(run, e);
            }
        };
        let mut maneuvers = guidance::decide(&voltages, gcfg);
        let escape = maneuvers[0].kind().is_escape().then(|| maneuvers[0].kind());
        if let (Some(now), Some(before)) = (escape, last_escape) {
            if now != before {
                maneuvers.extend(guidance::tracking_maneuvers(&voltages, gcfg));
            }
        }
        last_escape = escape;

        let record = TrajectoryRecord {
            iteration,
            state,
            voltages,
            sector: classify_sector(&voltages),
            maneuvers,
        };
        if record.is_hold() && run.first_hold.is_none() {
            run.first_hold = Some(run.records.len());
        }
        for m in &record.maneuvers {
            state = apply_maneuver(&state, m);
        }
        let pure_escape = escape.is_some() && record.maneuvers.len() == 1;
        if !pure_escape {
            state.position.z = (state.position.z - scfg.descent_step_cm).max(scfg.min_height_cm);
        }
        run.records.push(record);
        iteration += 1;
    }
    run.final_state = state;
    Ok(run)
}

/// Runs independent landings in parallel; results keep the input order.
pub fn simulate_batch(
    cases: &[(DroneState, Vector3)],
    sensor: &Sensor,
    gcfg: &GuidanceConfig,
    scfg: &SimConfig,
) -> Vec<std::result::Result<LandingRun, Box<Aborted>>> {
    cases
        .par_iter()
        .map(|(start, landing)| simulate_landing(*start, *landing, sensor, gcfg, scfg))
        .collect()
}

pub const TRAJECTORY_HEADER: &str = "iter,x_cm,y_cm,z_cm,heading_deg,v12,v23,v31,sector,maneuvers";

pub fn write_trajectory_csv<W: Write>(mut w: W, records: &[TrajectoryRecord]) -> io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for r in records {
        let p = r.state.position;
        writeln!(
            w,
            "{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{},{}",
            r.iteration,
            p.x,
            p.y,
            p.z,
            r.state.heading_deg,
            r.voltages.v12,
            r.voltages.v23,
            r.voltages.v31,
            r.sector,
            maneuver_tokens(&r.maneuvers)
        )?;
    }
    Ok(())
}

/// Drone at `(0, y, z)` with heading 0 above a landing point at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransectRow {
    pub y_cm: f64,
    pub phase_deg: [f64; 3],
    /// Centered voltage per pair, `None` where the phase is ambiguous.
    pub voltage_v: [Option<f64>; 3],
}

/// Samples `n` drone positions evenly over `[-y_range, y_range]` on the Y axis.
pub fn worst_case_transect(
    z_cm: f64,
    y_range_cm: f64,
    sensor: &Sensor,
    n: usize,
) -> Result<Vec<TransectRow>> {
    ensure_positive("drone height", z_cm)?;
    ensure_positive("transect half-width", y_range_cm)?;
    if n < 2 {
        return Err(Error::invalid(format!(
            "transect needs at least 2 samples, got {n}"
        )));
    }
    (0..n)
        .map(|k| {
            let y = -y_range_cm + 2.0 * y_range_cm * k as f64 / (n - 1) as f64;
            let state = DroneState::new(Vector3::new(0.0, y, z_cm), 0.0)?;
            let sol = sensor.phases(&state, Vector3::ZERO)?;
            let mut voltage_v = [None; 3];
            for pair in Pair::ALL {
                voltage_v[pair.index()] = sensor
                    .detector
                    .centered_voltage(pair, wrap_deg(sol.phase(pair)))
                    .ok();
            }
            Ok(TransectRow {
                y_cm: y,
                phase_deg: sol.phase_deg,
                voltage_v,
            })
        })
        .collect()
}

/// Largest vertical distance between `(x, y)` samples and the straight
/// line through the first and last sample.
pub fn endpoint_line_deviation(points: &[(f64, f64)]) -> f64 {
    let (Some(&(x0, y0)), Some(&(x1, y1))) = (points.first(), points.last()) else {
        return 0.0;
    };
    if x1 == x0 {
        return 0.0;
    }
    let slope = (y1 - y0) / (x1 - x0);
    points
        .iter()
        .map(|&(x, y)| (y - (y0 + slope * (x - x0))).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{nonambiguous_range, LandingScenario};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn polar(r: f64, phi_deg: f64) -> Vector3 {
        let (s, c) = phi_deg.to_radians().sin_cos();
        Vector3::new(r * s, r * c, 0.0)
    }

    fn start(z: f64) -> DroneState {
        DroneState::new(Vector3::new(0.0, 0.0, z), 0.0).unwrap()
    }

    #[test]
    fn body_frame_matches_cylindrical_convention() {
        let s = start(300.0);
        let b = s.body_frame(polar(100.0, -35.0));
        let expect = LandingScenario::new(100.0, -35.0, 300.0)
            .unwrap()
            .landing_point();
        assert_abs_diff_eq!(b.x, expect.x, epsilon = 1e-12);
        assert_abs_diff_eq!(b.y, expect.y, epsilon = 1e-12);
        assert_abs_diff_eq!(b.z, expect.z, epsilon = 1e-12);

        // after turning 60 deg left the point sits at +25 deg
        let turned = DroneState::new(s.position, -60.0).unwrap();
        let b = turned.body_frame(polar(100.0, -35.0));
        assert_abs_diff_eq!(b.x.atan2(b.y).to_degrees(), 25.0, epsilon = 1e-9);
    }

    #[test]
    fn senses_first_snapshot() {
        let v = Sensor::prototype()
            .sense(&start(300.0), polar(100.0, -35.0))
            .unwrap();
        assert_abs_diff_eq!(v.v12, 0.72, epsilon = 0.05);
        assert_abs_diff_eq!(v.v23, 0.53, epsilon = 0.05);
        assert_abs_diff_eq!(v.v31, -1.08, epsilon = 0.05);
    }

    #[test]
    fn nadir_reads_within_calibration_error() {
        let sensor = Sensor::prototype();
        let v = sensor.sense(&start(300.0), Vector3::ZERO).unwrap();
        let DetectorModel::Calibrated(set) = &sensor.detector else {
            unreachable!()
        };
        for (pair, got) in Pair::ALL.iter().zip(v.to_array()) {
            let p = set.get(*pair);
            let lo = p.voltage_from_phase(-p.max_err_deg()).unwrap() - p.v_ref();
            let hi = p.voltage_from_phase(p.max_err_deg()).unwrap() - p.v_ref();
            assert!(lo <= got && got <= hi, "{pair}: {got}");
        }
    }

    #[test]
    fn outside_cone_is_ambiguous() {
        let sensor = Sensor::prototype();
        let r = nonambiguous_range(300.0, -35.0, 80.0, &sensor.geometry, &sensor.rf).unwrap();
        let err = sensor
            .sense(&start(300.0), polar(r + 5.0, -35.0))
            .unwrap_err();
        assert!(matches!(err, Error::Ambiguity { .. }));
    }

    #[test]
    fn ideal_and_triangular_models() {
        let g = ReceiverGeometry::new(7.0).unwrap();
        let rf = RfConfig::from_ghz(2.46).unwrap();
        let s = start(300.0);
        let l = polar(100.0, -35.0);
        let sol = Sensor::prototype().phases(&s, l).unwrap();
        let ideal = Sensor::new(g, rf, DetectorModel::IdealSine(IdealDetector::default()));
        let v = ideal.sense(&s, l).unwrap();
        assert_abs_diff_eq!(v.v12, sol.th12().to_radians().sin(), epsilon = 1e-12);
        let tri = Sensor::new(
            g,
            rf,
            DetectorModel::Triangular(TriangularDetector::default()),
        );
        let v = tri.sense(&s, l).unwrap();
        assert_abs_diff_eq!(v.v31, sol.th31() * 0.010, epsilon = 1e-12);
    }

    #[test]
    fn maneuvers_move_the_drone() {
        let s = start(300.0);
        let yaw = Maneuver::new(ManeuverKind::YawLeft, 60.0).unwrap();
        assert_eq!(apply_maneuver(&s, &yaw).heading_deg, -60.0);
        let fwd = Maneuver::new(ManeuverKind::Forward, 1.0).unwrap();
        let moved = apply_maneuver(&s, &fwd);
        assert_abs_diff_eq!(moved.position.y, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(moved.position.x, 0.0, epsilon = 1e-12);
        let east = DroneState::new(s.position, 90.0).unwrap();
        let back = apply_maneuver(&east, &Maneuver::new(ManeuverKind::Backward, 2.0).unwrap());
        assert_abs_diff_eq!(back.position.x, -2.0, epsilon = 1e-12);
        assert_eq!(apply_maneuver(&s, &Maneuver::HOLD), s);
        let wrapped = apply_maneuver(
            &DroneState::new(s.position, 170.0).unwrap(),
            &Maneuver::new(ManeuverKind::YawRight, 60.0).unwrap(),
        );
        assert_abs_diff_eq!(wrapped.heading_deg, -130.0, epsilon = 1e-12);
    }

    #[test]
    fn first_snapshot_scenario_converges() {
        let run = simulate_landing(
            start(300.0),
            polar(100.0, -35.0),
            &Sensor::prototype(),
            &GuidanceConfig::default(),
            &SimConfig::default(),
        )
        .unwrap();
        assert_eq!(maneuver_tokens(&run.records[0].maneuvers), "YAWL60");
        assert!(run.converged());
        assert!(run.first_hold_record().unwrap().voltages.max_abs() < 0.02);
        assert!(run.horizontal_error() <= 2.0);
        assert!(run.final_state.position.z <= 1.0);
    }

    #[test]
    fn nadir_start_descends_vertically() {
        let run = simulate_landing(
            start(50.0),
            Vector3::ZERO,
            &Sensor::prototype(),
            &GuidanceConfig::default(),
            &SimConfig::default(),
        )
        .unwrap();
        assert!(run.converged());
        assert_eq!(run.first_hold, Some(0));
        assert_eq!(run.records.len(), 49);
        assert!(run.records.iter().all(|r| r.is_hold()));
        assert_eq!(run.final_state.position.x, 0.0);
        assert_eq!(run.final_state.position.y, 0.0);
    }

    #[test]
    fn ambiguity_aborts_with_partial_log() {
        let sensor = Sensor::prototype();
        let r = nonambiguous_range(300.0, 0.0, 80.0, &sensor.geometry, &sensor.rf).unwrap();
        let err = simulate_landing(
            start(300.0),
            polar(r + 20.0, 0.0),
            &sensor,
            &GuidanceConfig::default(),
            &SimConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err.cause, Error::Ambiguity { .. }));
        assert!(err.run.records.is_empty());
    }

    #[test]
    fn iteration_limit_is_flagged() {
        let run = simulate_landing(
            start(300.0),
            polar(100.0, -35.0),
            &Sensor::prototype(),
            &GuidanceConfig::default(),
            &SimConfig::new(1.0, 1.0, 10).unwrap(),
        )
        .unwrap();
        assert!(run.hit_iteration_limit);
        assert!(!run.converged());
        assert_eq!(run.records.len(), 10);
    }

    #[test]
    fn runs_are_deterministic() {
        let go = || {
            let run = simulate_landing(
                start(400.0),
                polar(120.0, 140.0),
                &Sensor::prototype(),
                &GuidanceConfig::default(),
                &SimConfig::default(),
            )
            .unwrap();
            let mut buf = Vec::new();
            write_trajectory_csv(&mut buf, &run.records).unwrap();
            buf
        };
        assert_eq!(go(), go());
    }

    #[test]
    fn trajectory_csv_layout() {
        let run = simulate_landing(
            start(3.0),
            Vector3::ZERO,
            &Sensor::prototype(),
            &GuidanceConfig::default(),
            &SimConfig::default(),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &run.records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], TRAJECTORY_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,0.000000,0.000000,3.000000,0.000000,"));
        assert!(lines[1].ends_with(",HOLD"));
    }

    #[test]
    fn transect_is_symmetric_with_zero_th12() {
        let rows = worst_case_transect(1000.0, 600.0, &Sensor::prototype(), 121).unwrap();
        let mid = &rows[60];
        assert_abs_diff_eq!(mid.y_cm, 0.0, epsilon = 1e-9);
        assert!(mid.phase_deg.iter().all(|p| p.abs() < 1e-9));
        for row in &rows {
            assert!(row.phase_deg[0].abs() < 1e-9);
            assert_abs_diff_eq!(row.phase_deg[1], -row.phase_deg[2], epsilon = 1e-9);
        }
        assert!(rows[0].voltage_v[1].is_none());
        assert!(mid.voltage_v.iter().all(Option::is_some));
    }

    #[test]
    fn endpoint_deviation_of_a_line_is_zero() {
        let pts: Vec<_> = (0..10).map(|k| (k as f64, 3.0 * k as f64 - 1.0)).collect();
        assert_abs_diff_eq!(endpoint_line_deviation(&pts), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            endpoint_line_deviation(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]),
            1.0
        );
        assert_eq!(endpoint_line_deviation(&[]), 0.0);
    }

    proptest! {
        #[test]
        fn heading_stays_wrapped(
            heading in -180.0f64..180.0,
            kinds in proptest::collection::vec(0usize..7, 1..40),
        ) {
            let all = [
                ManeuverKind::YawLeft, ManeuverKind::YawRight, ManeuverKind::RotateLeft,
                ManeuverKind::RotateRight, ManeuverKind::Forward, ManeuverKind::Backward,
                ManeuverKind::Hold,
            ];
            let mut s = DroneState::new(Vector3::new(0.0, 0.0, 10.0), heading).unwrap();
            for k in kinds {
                let m = if all[k] == ManeuverKind::Hold {
                    Maneuver::HOLD
                } else {
                    Maneuver::new(all[k], 60.0).unwrap()
                };
                s = apply_maneuver(&s, &m);
                prop_assert!(s.heading_deg > -180.0 && s.heading_deg <= 180.0);
            }
        }
    }
}
