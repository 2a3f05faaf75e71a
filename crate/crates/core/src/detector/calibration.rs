use crate::error::{ensure_finite, Error, Result};
use crate::geometry::Pair;

use super::prototype;

/// Calibrated detectors are only trusted within +/-80 deg.
pub const CALIBRATED_RANGE_DEG: f64 = 80.0;

/// Voltages this far outside the validity interval are clamped rather than
/// rejected.
pub const GUARD_BAND_V: f64 = 0.010;

const MONOTONE_STEP_V: f64 = 0.001;
const INVERSE_TOL_V: f64 = 1e-6;

/// Polynomial map from detector output voltage to phase shift (degrees),
/// `a0 + a1 v + ... + a5 v^5`.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationPolynomial {
    pair: Pair,
    coeffs: [f64; 6],
    v_ref: f64,
    v_lo: f64,
    v_hi: f64,
    max_err_deg: f64,
    frequency_hz: f64,
}

pub(crate) fn horner(coeffs: &[f64], v: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &a| acc * v + a)
}

/// Bisection for `f(v) = target` on `[lo, hi]`, assuming `f` is increasing.
/// Returns `None` when the target is not bracketed.
fn solve_increasing(
    f: impl Fn(f64) -> f64,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Option<f64> {
    let (flo, fhi) = (f(lo) - target, f(hi) - target);
    if flo > 0.0 || fhi < 0.0 {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

impl CalibrationPolynomial {
    /// Builds and validates a calibration: the interval must be non-empty,
    /// the polynomial strictly increasing on it (checked every 1 mV) and the
    /// reference voltage must read within `max_err_deg` of zero.
    pub fn new(
        pair: Pair,
        coeffs: [f64; 6],
        v_ref: f64,
        v_lo: f64,
        v_hi: f64,
        max_err_deg: f64,
        frequency_hz: f64,
    ) -> Result<Self> {
        for (i, c) in coeffs.iter().enumerate() {
            ensure_finite(&format!("coefficient a{i}"), *c)?;
        }
        ensure_finite("v_ref", v_ref)?;
        ensure_finite("v_lo", v_lo)?;
        ensure_finite("v_hi", v_hi)?;
        ensure_finite("max_err_deg", max_err_deg)?;
        ensure_finite("frequency_hz", frequency_hz)?;
        if v_lo >= v_hi {
            return Err(Error::CalibrationRejected(format!(
                "empty validity interval [{v_lo}, {v_hi}] V"
            )));
        }
        if max_err_deg < 0.0 {
            return Err(Error::CalibrationRejected(format!(
                "negative max error {max_err_deg}"
            )));
        }
        let poly = Self {
            pair,
            coeffs,
            v_ref,
            v_lo,
            v_hi,
            max_err_deg,
            frequency_hz,
        };
        if let Some(v) = poly.first_non_increasing_point() {
            return Err(Error::CalibrationRejected(format!(
                "{pair} polynomial is not increasing near {v:.3} V"
            )));
        }
        let at_ref = poly.eval(v_ref);
        if at_ref.abs() > max_err_deg + 1e-9 {
            return Err(Error::CalibrationRejected(format!(
                "{pair} reads {at_ref:.3} deg at v_ref = {v_ref} V, beyond max error {max_err_deg}"
            )));
        }
        Ok(poly)
    }

    /// Builds a calibration whose validity interval is where the polynomial
    /// itself reads -80 and +80 deg.
    pub fn with_solved_interval(
        pair: Pair,
        coeffs: [f64; 6],
        v_ref: f64,
        max_err_deg: f64,
        frequency_hz: f64,
        search: (f64, f64),
    ) -> Result<Self> {
        let f = |v| horner(&coeffs, v);
        let solve = |target| {
            solve_increasing(f, target, search.0, search.1, 1e-9).ok_or_else(|| {
                Error::CalibrationRejected(format!(
                    "{pair} polynomial does not reach {target} deg within [{}, {}] V",
                    search.0, search.1
                ))
            })
        };
        let v_lo = solve(-CALIBRATED_RANGE_DEG)?;
        let v_hi = solve(CALIBRATED_RANGE_DEG)?;
        Self::new(pair, coeffs, v_ref, v_lo, v_hi, max_err_deg, frequency_hz)
    }

    pub fn pair(&self) -> Pair {
        self.pair
    }

    pub fn coeffs(&self) -> &[f64; 6] {
        &self.coeffs
    }

    pub fn v_ref(&self) -> f64 {
        self.v_ref
    }

    pub fn v_lo(&self) -> f64 {
        self.v_lo
    }

    pub fn v_hi(&self) -> f64 {
        self.v_hi
    }

    pub fn max_err_deg(&self) -> f64 {
        self.max_err_deg
    }

    pub fn frequency_hz(&self) -> f64 {
        self.frequency_hz
    }

    /// Raw polynomial value, no range checks.
    pub fn eval(&self, v: f64) -> f64 {
        horner(&self.coeffs, v)
    }

    fn first_non_increasing_point(&self) -> Option<f64> {
        let steps = ((self.v_hi - self.v_lo) / MONOTONE_STEP_V).floor() as usize;
        let mut grid: Vec<f64> = (0..=steps)
            .map(|k| self.v_lo + k as f64 * MONOTONE_STEP_V)
            .collect();
        if self.v_hi - grid[steps] > 0.5 * MONOTONE_STEP_V {
            grid.push(self.v_hi);
        }
        grid.windows(2)
            .find(|w| self.eval(w[1]) <= self.eval(w[0]))
            .map(|w| w[1])
    }

    /// Phase shift in degrees read from a raw detector voltage.
    ///
    /// Voltages up to [`GUARD_BAND_V`] outside `[v_lo, v_hi]` are accepted and
    /// their phase clamped to +/-80 deg; anything further out is an
    /// out-of-range error.
    pub fn phase_from_voltage(&self, v: f64) -> Result<f64> {
        let out_of_range = Error::OutOfRange {
            pair: self.pair,
            voltage: v,
            lo: self.v_lo,
            hi: self.v_hi,
        };
        if !v.is_finite() || v < self.v_lo - GUARD_BAND_V || v > self.v_hi + GUARD_BAND_V {
            return Err(out_of_range);
        }
        let theta = self.eval(v);
        if v < self.v_lo || v > self.v_hi {
            Ok(theta.clamp(-CALIBRATED_RANGE_DEG, CALIBRATED_RANGE_DEG))
        } else {
            Ok(theta)
        }
    }

    /// Raw detector voltage that reads `theta_deg`, solved by bisection to
    /// 1 uV. Phases beyond +/-80 deg are ambiguous.
    pub fn voltage_from_phase(&self, theta_deg: f64) -> Result<f64> {
        let ambiguous = Error::Ambiguity {
            pair: self.pair,
            theta_deg,
            limit_deg: CALIBRATED_RANGE_DEG,
        };
        if !theta_deg.is_finite() || theta_deg.abs() > CALIBRATED_RANGE_DEG {
            return Err(ambiguous);
        }
        solve_increasing(
            |v| self.eval(v),
            theta_deg,
            self.v_lo - GUARD_BAND_V,
            self.v_hi + GUARD_BAND_V,
            INVERSE_TOL_V,
        )
        .ok_or(ambiguous)
    }

    /// Voltage relative to the zero-phase reference; its sign is the sign of
    /// the phase shift.
    pub fn centered_voltage(&self, v_raw: f64) -> f64 {
        v_raw - self.v_ref
    }

    pub fn phase_from_centered(&self, v_centered: f64) -> Result<f64> {
        self.phase_from_voltage(v_centered + self.v_ref)
    }
}

/// One calibration per detector pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSet {
    polys: [CalibrationPolynomial; 3],
}

impl CalibrationSet {
    pub fn new(polys: [CalibrationPolynomial; 3]) -> Result<Self> {
        for (pair, poly) in Pair::ALL.iter().zip(&polys) {
            if poly.pair() != *pair {
                return Err(Error::invalid(format!(
                    "calibration slot {pair} holds a {} profile",
                    poly.pair()
                )));
            }
        }
        Ok(Self { polys })
    }

    /// The three built-in prototype calibrations.
    pub fn prototype() -> Self {
        Self {
            polys: Pair::ALL.map(prototype::profile),
        }
    }

    pub fn get(&self, pair: Pair) -> &CalibrationPolynomial {
        &self.polys[pair.index()]
    }

    /// Replaces the calibration for the pair `poly` models.
    pub fn set(&mut self, poly: CalibrationPolynomial) {
        let k = poly.pair().index();
        self.polys[k] = poly;
    }

    pub fn iter(&self) -> impl Iterator<Item = &CalibrationPolynomial> {
        self.polys.iter()
    }
}

impl Default for CalibrationSet {
    fn default() -> Self {
        Self::prototype()
    }
}
