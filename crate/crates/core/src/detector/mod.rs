//! Phase detector transfer models.
//!
//! Three models are provided:
//!
//! * [`IdealDetector`]: multiplier plus quadrature shifter, `k_d * sin(theta)`,
//!   non-ambiguous over +/-90 deg.
//! * [`TriangularDetector`]: the nominal AD8302 characteristic,
//!   `K_d * (180 - |theta|)` with `K_d` in mV/deg.
//! * [`CalibrationPolynomial`]: a measured detector modelled by a low-order
//!   polynomial from output voltage to phase, valid over +/-80 deg.

mod calibration;
mod fit;
mod io;
pub mod prototype;

pub use calibration::{CalibrationPolynomial, CalibrationSet, CALIBRATED_RANGE_DEG, GUARD_BAND_V};
pub use fit::{fit_calibration, MAX_DEGREE};
pub use io::{parse_measurements, parse_profile, render_profile};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::geometry::wrap_deg;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealDetector {
    /// Output amplitude in volts.
    pub k_d: f64,
}

impl IdealDetector {
    pub const RANGE_DEG: f64 = 90.0;

    pub fn new(k_d: f64) -> Result<Self> {
        ensure_positive("ideal detector gain", k_d)?;
        Ok(Self { k_d })
    }
}

impl Default for IdealDetector {
    fn default() -> Self {
        Self { k_d: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangularDetector {
    /// Slope in mV per degree.
    pub k_d_mv_per_deg: f64,
}

impl TriangularDetector {
    pub const RANGE_DEG: f64 = 90.0;

    pub fn new(k_d_mv_per_deg: f64) -> Result<Self> {
        ensure_positive("triangular detector slope", k_d_mv_per_deg)?;
        Ok(Self { k_d_mv_per_deg })
    }

    /// Signed output for a detector fed through a 90 deg hybrid: the
    /// characteristic evaluated at `theta - 90`, re-referenced so that zero
    /// phase reads zero volts. Equal to `K_d * theta` over +/-90 deg.
    pub fn centered_voltage(&self, theta_deg: f64) -> f64 {
        ad8302_voltage(theta_deg - 90.0, self) - ad8302_voltage(-90.0, self)
    }
}

impl Default for TriangularDetector {
    fn default() -> Self {
        Self {
            k_d_mv_per_deg: 10.0,
        }
    }
}

/// `k_d * sin(theta)`, theta wrapped into (-180, 180].
pub fn ideal_sine_voltage(theta_deg: f64, det: &IdealDetector) -> f64 {
    det.k_d * wrap_deg(theta_deg).to_radians().sin()
}

/// Nominal AD8302 phase output in volts: `K_d * (180 - |theta|)`.
pub fn ad8302_voltage(theta_deg: f64, det: &TriangularDetector) -> f64 {
    det.k_d_mv_per_deg * (180.0 - wrap_deg(theta_deg).abs()) / 1000.0
}

/// One calibration measurement: nominal phase applied and the voltage read.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSample {
    pub theta_deg: f64,
    pub voltage_v: f64,
    /// Input amplitude, carried as metadata only.
    pub power_dbm: f64,
}

impl MeasurementSample {
    pub fn new(theta_deg: f64, voltage_v: f64, power_dbm: f64) -> Result<Self> {
        ensure_finite("sample phase", theta_deg)?;
        ensure_finite("sample voltage", voltage_v)?;
        if voltage_v < 0.0 {
            return Err(Error::invalid(format!(
                "sample voltage must be >= 0, got {voltage_v}"
            )));
        }
        Ok(Self {
            theta_deg,
            voltage_v,
            power_dbm,
        })
    }
}
