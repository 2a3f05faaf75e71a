//! Simulation and validation toolkit for a triangular three-input RF
//! phase-shift landing sensor.
//!
//! A beacon at the landing point radiates a single tone. The drone carries
//! three receiver inputs on an equilateral triangle and three phase
//! detectors, one per input pair. The modules here cover the full chain:
//!
//! * [`geometry`]: exact near-field path differences and phase shifts,
//!   azimuth sweeps and the non-ambiguity cone.
//! * [`detector`]: ideal sine, triangular and calibrated polynomial
//!   detector models, forward/inverse conversion and least-squares fitting.
//! * [`guidance`]: sector classification and the maneuver decision rule.
//! * [`simulator`]: the closed sense/decide/act landing loop and the
//!   worst-case transect.

pub mod detector;
pub mod error;
pub mod geometry;
pub mod guidance;
pub mod simulator;

pub use detector::{
    CalibrationPolynomial, CalibrationSet, IdealDetector, MeasurementSample, TriangularDetector,
};
pub use error::{Error, Result};
pub use geometry::{LandingScenario, Pair, PhaseSolution, ReceiverGeometry, RfConfig, Vector3};
pub use guidance::{GuidanceConfig, Maneuver, ManeuverKind, SectorId, VoltageTriple};
pub use simulator::{DetectorModel, DroneState, LandingRun, Sensor, SimConfig, TrajectoryRecord};
