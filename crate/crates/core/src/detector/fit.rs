use crate::error::{Error, Result};
use crate::geometry::Pair;

use super::calibration::{horner, CalibrationPolynomial, CALIBRATED_RANGE_DEG};
use super::MeasurementSample;

/// Highest polynomial degree a calibration can carry.
pub const MAX_DEGREE: usize = 5;

/// Relative pivot below which the scaled normal matrix is treated as singular.
const PIVOT_FLOOR: f64 = 1e-12;

/// Least-squares calibration polynomial mapping voltage to phase.
///
/// The validity interval spans the sample voltages, `max_err_deg` is the
/// largest absolute residual and `v_ref` the zero crossing of the fitted
/// polynomial.
pub fn fit_calibration(
    samples: &[MeasurementSample],
    degree: usize,
    pair: Pair,
    frequency_hz: f64,
) -> Result<CalibrationPolynomial> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::invalid(format!(
            "fit degree must be in 1..={MAX_DEGREE}, got {degree}"
        )));
    }
    let unknowns = degree + 1;
    if samples.len() < unknowns {
        return Err(Error::FitFailure(format!(
            "{} samples cannot determine a degree-{degree} polynomial",
            samples.len()
        )));
    }
    for s in samples {
        if !s.voltage_v.is_finite() || !s.theta_deg.is_finite() || s.voltage_v < 0.0 {
            return Err(Error::invalid(format!("unusable sample {s:?}")));
        }
        if s.theta_deg.abs() > CALIBRATED_RANGE_DEG + 1e-6 {
            return Err(Error::invalid(format!(
                "sample at {} deg lies outside +/-{CALIBRATED_RANGE_DEG} deg",
                s.theta_deg
            )));
        }
    }
    let mut voltages: Vec<f64> = samples.iter().map(|s| s.voltage_v).collect();
    voltages.sort_by(f64::total_cmp);
    voltages.dedup();
    if voltages.len() < unknowns {
        return Err(Error::FitFailure(format!(
            "rank-deficient: {} distinct voltages for a degree-{degree} polynomial",
            voltages.len()
        )));
    }

    let xs: Vec<f64> = samples.iter().map(|s| s.voltage_v).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.theta_deg).collect();
    let solved = least_squares(&xs, &ys, degree)?;

    let mut coeffs = [0.0; 6];
    coeffs[..unknowns].copy_from_slice(&solved);
    let max_err_deg = samples
        .iter()
        .map(|s| (horner(&coeffs, s.voltage_v) - s.theta_deg).abs())
        .fold(0.0, f64::max);
    let v_lo = voltages[0];
    let v_hi = voltages[voltages.len() - 1];
    let v_ref = zero_crossing(&coeffs, v_lo, v_hi).ok_or_else(|| {
        Error::CalibrationRejected(format!(
            "fitted {pair} polynomial has no zero crossing in [{v_lo}, {v_hi}] V"
        ))
    })?;
    CalibrationPolynomial::new(pair, coeffs, v_ref, v_lo, v_hi, max_err_deg, frequency_hz)
}

fn zero_crossing(coeffs: &[f64], lo: f64, hi: f64) -> Option<f64> {
    let f = |v| horner(coeffs, v);
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    let rising = fhi > flo;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Solves the polynomial least-squares problem through the normal equations.
/// Columns of the Vandermonde matrix are scaled to unit norm before forming
/// `A^T A`, which keeps degree-5 fits over a few volts well conditioned.
#[allow(clippy::needless_range_loop)]
fn least_squares(xs: &[f64], ys: &[f64], degree: usize) -> Result<Vec<f64>> {
    let n = degree + 1;
    let powers = |x: f64| {
        let mut row = vec![1.0; n];
        for j in 1..n {
            row[j] = row[j - 1] * x;
        }
        row
    };
    let rows: Vec<Vec<f64>> = xs.iter().map(|&x| powers(x)).collect();

    let mut scale = vec![0.0; n];
    for row in &rows {
        for j in 0..n {
            scale[j] += row[j] * row[j];
        }
    }
    for s in scale.iter_mut() {
        *s = s.sqrt();
        if *s == 0.0 {
            return Err(Error::FitFailure("all-zero design column".into()));
        }
    }

    let mut ata = vec![vec![0.0; n]; n];
    let mut aty = vec![0.0; n];
    for (row, &y) in rows.iter().zip(ys) {
        for i in 0..n {
            let ai = row[i] / scale[i];
            aty[i] += ai * y;
            for j in 0..=i {
                ata[i][j] += ai * row[j] / scale[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            ata[j][i] = ata[i][j];
        }
    }

    let y = cholesky_solve(ata, aty)?;
    Ok(y.iter().zip(&scale).map(|(v, s)| v / s).collect())
}

#[allow(clippy::needless_range_loop)]
fn cholesky_solve(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    let diag_max = (0..n).map(|i| m[i][i]).fold(0.0, f64::max);
    for j in 0..n {
        let mut d = m[j][j];
        for k in 0..j {
            d -= m[j][k] * m[j][k];
        }
        if d <= PIVOT_FLOOR * diag_max {
            return Err(Error::FitFailure(format!(
                "normal equations are singular (pivot {d:e} at column {j})"
            )));
        }
        let d = d.sqrt();
        m[j][j] = d;
        for i in (j + 1)..n {
            let mut s = m[i][j];
            for k in 0..j {
                s -= m[i][k] * m[j][k];
            }
            m[i][j] = s / d;
        }
    }
    // L z = b
    for i in 0..n {
        for k in 0..i {
            b[i] -= m[i][k] * b[k];
        }
        b[i] /= m[i][i];
    }
    // L^T x = z
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            b[i] -= m[k][i] * b[k];
        }
        b[i] /= m[i][i];
    }
    Ok(b)
}
