use thiserror::Error;

use crate::geometry::Pair;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate geometry: landing point coincides with receiver input P{input}")]
    DegenerateGeometry { input: usize },

    #[error(
        "no non-ambiguity boundary below {ceiling_cm} cm (z = {z_cm} cm, azimuth {phi_deg} deg)"
    )]
    RangeUnbounded {
        z_cm: f64,
        phi_deg: f64,
        ceiling_cm: f64,
    },

    #[error("voltage {voltage} V outside the calibrated interval [{lo}, {hi}] V of {pair}")]
    OutOfRange {
        pair: Pair,
        voltage: f64,
        lo: f64,
        hi: f64,
    },

    #[error("phase shift {theta_deg:.3} deg on {pair} exceeds the non-ambiguous range of +/-{limit_deg} deg")]
    Ambiguity {
        pair: Pair,
        theta_deg: f64,
        limit_deg: f64,
    },

    #[error("calibration fit failed: {0}")]
    FitFailure(String),

    #[error("calibration rejected: {0}")]
    CalibrationRejected(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

/// Rejects NaN and infinities.
pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(format!(
            "{name} must be finite, got {value}"
        )))
    }
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<f64> {
    ensure_finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(format!(
            "{name} must be positive, got {value}"
        )))
    }
}
