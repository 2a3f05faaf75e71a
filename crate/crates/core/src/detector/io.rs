//! Text formats: calibration profiles (TOML key/value) and measurement CSV.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Pair;

use super::{CalibrationPolynomial, MeasurementSample};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileRecord {
    pair_id: Pair,
    a0: f64,
    a1: f64,
    a2: f64,
    a3: f64,
    a4: f64,
    a5: f64,
    v_ref: f64,
    v_lo: f64,
    v_hi: f64,
    max_err_deg: f64,
    frequency_hz: f64,
}

pub fn render_profile(poly: &CalibrationPolynomial) -> String {
    let c = poly.coeffs();
    let record = ProfileRecord {
        pair_id: poly.pair(),
        a0: c[0],
        a1: c[1],
        a2: c[2],
        a3: c[3],
        a4: c[4],
        a5: c[5],
        v_ref: poly.v_ref(),
        v_lo: poly.v_lo(),
        v_hi: poly.v_hi(),
        max_err_deg: poly.max_err_deg(),
        frequency_hz: poly.frequency_hz(),
    };
    toml::to_string(&record).expect("profile record serializes")
}

/// Parses and validates a calibration profile.
pub fn parse_profile(text: &str) -> Result<CalibrationPolynomial> {
    let record: ProfileRecord = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() as u64 + 1)
            .unwrap_or(0);
        Error::Parse {
            line,
            message: e.message().to_string(),
        }
    })?;
    CalibrationPolynomial::new(
        record.pair_id,
        [
            record.a0, record.a1, record.a2, record.a3, record.a4, record.a5,
        ],
        record.v_ref,
        record.v_lo,
        record.v_hi,
        record.max_err_deg,
        record.frequency_hz,
    )
}

#[derive(Debug, Deserialize)]
struct SampleRow {
    theta_deg: f64,
    voltage_v: f64,
    power_dbm: f64,
}

const MEASUREMENT_HEADER: [&str; 3] = ["theta_deg", "voltage_v", "power_dbm"];

/// Reads `theta_deg,voltage_v,power_dbm` rows. Errors carry the 1-based line.
pub fn parse_measurements<R: Read>(reader: R) -> Result<Vec<MeasurementSample>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if header.iter().collect::<Vec<_>>() != MEASUREMENT_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header '{}', found '{}'",
                MEASUREMENT_HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let header = header.clone();
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row: SampleRow = record
            .deserialize(Some(&header))
            .map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        let sample =
            MeasurementSample::new(row.theta_deg, row.voltage_v, row.power_dbm).map_err(|e| {
                Error::Parse {
                    line,
                    message: e.to_string(),
                }
            })?;
        out.push(sample);
    }
    Ok(out)
}
