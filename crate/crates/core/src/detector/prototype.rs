//! Built-in calibration of the 2.46 GHz prototype and the raw readings it
//! was checked against (input power -20 dBm).

use crate::geometry::Pair;

use super::calibration::CalibrationPolynomial;
use super::MeasurementSample;

pub const FREQUENCY_HZ: f64 = 2.46e9;

/// Fitted quintic coefficients `a0..a5`, voltage in V, phase in degrees.
pub const COEFFS: [[f64; 6]; 3] = [
    [-114.203, 199.396, -228.453, 164.691, -55.965, 7.245],
    [-125.812, 211.489, -240.403, 172.357, -58.608, 7.596],
    [-129.954, 274.718, -328.593, 226.222, -73.488, 9.115],
];

/// Worst-case fit error in degrees over -10..-40 dBm input power.
pub const MAX_ERR_DEG: [f64; 3] = [0.9, 1.7, 3.8];

/// Zero-phase reference voltages.
pub const V_REF: [f64; 3] = [1.530, 1.624, 1.436];

/// Raw detector readings: `(nominal phase deg, voltage V)`. The first 0 deg
/// row of each column is the reference measurement.
pub const READINGS: [[(f64, f64); 10]; 3] = [
    [
        (-100.0, 0.228),
        (-90.0, 0.197),
        (-80.0, 0.223),
        (-70.0, 0.302),
        (0.0, 1.533),
        (0.0, 1.533),
        (70.0, 2.756),
        (80.0, 2.837),
        (90.0, 2.865),
        (100.0, 2.838),
    ],
    [
        (-100.0, 0.253),
        (-90.0, 0.248),
        (-80.0, 0.299),
        (-70.0, 0.399),
        (0.0, 1.610),
        (-4.0, 1.571),
        (70.0, 2.814),
        (80.0, 2.873),
        (90.0, 2.879),
        (100.0, 2.832),
    ],
    [
        (-100.0, 0.352),
        (-90.0, 0.283),
        (-80.0, 0.266),
        (-70.0, 0.303),
        (0.0, 1.443),
        (7.0, 1.577),
        (70.0, 2.691),
        (80.0, 2.796),
        (90.0, 2.854),
        (100.0, 2.863),
    ],
];

pub const READINGS_POWER_DBM: f64 = -20.0;

/// Names under which the prototype calibrations are exposed.
pub fn builtin_name(pair: Pair) -> String {
    format!("table2-{pair}")
}

pub fn builtin(name: &str) -> Option<CalibrationPolynomial> {
    Pair::ALL
        .into_iter()
        .find(|&p| builtin_name(p) == name)
        .map(profile)
}

/// Prototype calibration for `pair`; the validity interval is where the
/// polynomial reads -80 and +80 deg.
pub fn profile(pair: Pair) -> CalibrationPolynomial {
    let k = pair.index();
    CalibrationPolynomial::with_solved_interval(
        pair,
        COEFFS[k],
        V_REF[k],
        MAX_ERR_DEG[k],
        FREQUENCY_HZ,
        (0.0, 3.3),
    )
    .expect("built-in calibration is valid")
}

/// Raw readings for `pair` as measurement samples.
pub fn measurements(pair: Pair) -> Vec<MeasurementSample> {
    READINGS[pair.index()]
        .iter()
        .map(|&(theta_deg, voltage_v)| MeasurementSample {
            theta_deg,
            voltage_v,
            power_dbm: READINGS_POWER_DBM,
        })
        .collect()
}

/// Readings inside the calibrated +/-80 deg range.
pub fn in_range_measurements(pair: Pair) -> Vec<MeasurementSample> {
    measurements(pair)
        .into_iter()
        .filter(|s| s.theta_deg.abs() <= 80.0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn builtin_names_resolve() {
        for pair in Pair::ALL {
            let p = builtin(&builtin_name(pair)).unwrap();
            assert_eq!(p.pair(), pair);
        }
        assert!(builtin("table2-d99").is_none());
    }

    #[test]
    fn solved_intervals_sit_near_measured_extremes() {
        let d12 = profile(Pair::D12);
        assert_abs_diff_eq!(d12.v_lo(), 0.218, epsilon = 0.002);
        assert_abs_diff_eq!(d12.v_hi(), 2.842, epsilon = 0.002);
        for pair in Pair::ALL {
            let p = profile(pair);
            assert_abs_diff_eq!(p.eval(p.v_lo()), -80.0, epsilon = 1e-6);
            assert_abs_diff_eq!(p.eval(p.v_hi()), 80.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn readings_cross_validate_against_polynomials() {
        for pair in Pair::ALL {
            let p = profile(pair);
            for s in in_range_measurements(pair) {
                let err = (p.eval(s.voltage_v) - s.theta_deg).abs();
                assert!(
                    err <= p.max_err_deg() + 0.2,
                    "{pair} at {} deg: error {err}",
                    s.theta_deg
                );
            }
        }
    }

    #[test]
    fn polynomials_increase_at_millivolt_steps() {
        for pair in Pair::ALL {
            let p = profile(pair);
            let n = ((p.v_hi() - p.v_lo()) / 0.001) as usize;
            let mut prev = f64::NEG_INFINITY;
            for k in 0..=n {
                let th = p.eval(p.v_lo() + k as f64 * 0.001);
                assert!(th > prev);
                prev = th;
            }
        }
    }
}
