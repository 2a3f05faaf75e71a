//! Near-field geometry of the three receiver inputs relative to the beacon.
//!
//! Frames and units: lengths are centimetres, angles degrees, frequency Hz.
//! The body frame has its origin at the incenter `O` of the receiver
//! triangle, +Y pointing forward (towards `P3`) and +X to the right. The
//! landing azimuth `phi_L` is measured from +Y towards +X, i.e. clockwise
//! when seen from above.

use std::fmt;
use std::io::{self, Write};
use std::ops::{Add, Mul, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Wraps an angle in degrees into `(-180, 180]`.
pub fn wrap_deg(angle: f64) -> f64 {
    let wrapped = (angle + 180.0).rem_euclid(360.0) - 180.0;
    if wrapped <= -180.0 {
        wrapped + 360.0
    } else {
        wrapped
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const ZERO: Vector3 = Vector3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Like [`Vector3::new`] but rejects non-finite components.
    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Self::new(x, y, z);
        v.ensure_finite("vector")?;
        Ok(v)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub(crate) fn ensure_finite(&self, name: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "{name} has non-finite components: {self:?}"
            )))
        }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &Vector3) -> f64 {
        (*self - *other).norm()
    }
}

impl Add for Vector3 {
    type Output = Vector3;
    fn add(self, rhs: Vector3) -> Vector3 {
        Vector3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vector3 {
    type Output = Vector3;
    fn sub(self, rhs: Vector3) -> Vector3 {
        Vector3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vector3 {
    type Output = Vector3;
    fn mul(self, rhs: f64) -> Vector3 {
        Vector3::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

/// One of the three detector input pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pair {
    D12,
    D23,
    D31,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::D12, Pair::D23, Pair::D31];

    pub fn index(self) -> usize {
        match self {
            Pair::D12 => 0,
            Pair::D23 => 1,
            Pair::D31 => 2,
        }
    }

    /// Zero-based indices of the two receiver inputs `(i, j)`.
    pub fn inputs(self) -> (usize, usize) {
        match self {
            Pair::D12 => (0, 1),
            Pair::D23 => (1, 2),
            Pair::D31 => (2, 0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pair::D12 => "d12",
            Pair::D23 => "d23",
            Pair::D31 => "d31",
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Pair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "d12" | "12" => Ok(Pair::D12),
            "d23" | "23" => Ok(Pair::D23),
            "d31" | "31" => Ok(Pair::D31),
            other => Err(Error::invalid(format!("unknown detector pair '{other}'"))),
        }
    }
}

/// The three receiver inputs on an equilateral triangle of side `D`, with
/// the incenter at the body origin and `P3` on the forward axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverGeometry {
    spacing_cm: f64,
    points: [Vector3; 3],
}

impl ReceiverGeometry {
    pub fn new(spacing_cm: f64) -> Result<Self> {
        ensure_positive("receiver spacing", spacing_cm)?;
        let half = spacing_cm / 2.0;
        let tan30 = (std::f64::consts::PI / 6.0).tan();
        let cos30 = (std::f64::consts::PI / 6.0).cos();
        let points = [
            Vector3::new(half, -half * tan30, 0.0),
            Vector3::new(-half, -half * tan30, 0.0),
            Vector3::new(0.0, spacing_cm / (2.0 * cos30), 0.0),
        ];
        Ok(Self { spacing_cm, points })
    }

    pub fn spacing_cm(&self) -> f64 {
        self.spacing_cm
    }

    pub fn points(&self) -> &[Vector3; 3] {
        &self.points
    }

    pub fn p1(&self) -> Vector3 {
        self.points[0]
    }

    pub fn p2(&self) -> Vector3 {
        self.points[1]
    }

    pub fn p3(&self) -> Vector3 {
        self.points[2]
    }

    /// Azimuth (clockwise from +Y) of input `P_i`, `i` in 1..=3.
    pub fn input_azimuth_deg(&self, input: usize) -> f64 {
        let p = self.points[input - 1];
        p.x.atan2(p.y).to_degrees()
    }
}

/// Builds the receiver triangle for input spacing `D`.
pub fn receiver_points(spacing_cm: f64) -> Result<ReceiverGeometry> {
    ReceiverGeometry::new(spacing_cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfConfig {
    pub frequency_hz: f64,
    pub wave_speed_m_s: f64,
}

impl RfConfig {
    pub fn new(frequency_hz: f64, wave_speed_m_s: f64) -> Result<Self> {
        ensure_positive("frequency", frequency_hz)?;
        ensure_positive("wave speed", wave_speed_m_s)?;
        Ok(Self {
            frequency_hz,
            wave_speed_m_s,
        })
    }

    /// Tone at `ghz` GHz propagating at the speed of light.
    pub fn from_ghz(ghz: f64) -> Result<Self> {
        Self::new(ghz * 1e9, SPEED_OF_LIGHT)
    }

    /// Phase shift in degrees produced by a path difference in centimetres.
    pub fn phase_deg(&self, path_diff_cm: f64) -> f64 {
        2.0 * self.frequency_hz * (path_diff_cm / 100.0) * 180.0 / self.wave_speed_m_s
    }

    /// Time delay in seconds produced by a path difference in centimetres.
    pub fn delay_s(&self, path_diff_cm: f64) -> f64 {
        (path_diff_cm / 100.0) / self.wave_speed_m_s
    }
}

impl Default for RfConfig {
    fn default() -> Self {
        Self {
            frequency_hz: 2.45e9,
            wave_speed_m_s: SPEED_OF_LIGHT,
        }
    }
}

/// Landing point in cylindrical coordinates relative to the drone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandingScenario {
    pub r_cm: f64,
    pub phi_deg: f64,
    pub z_cm: f64,
}

impl LandingScenario {
    pub fn new(r_cm: f64, phi_deg: f64, z_cm: f64) -> Result<Self> {
        ensure_finite("landing radius", r_cm)?;
        ensure_finite("landing azimuth", phi_deg)?;
        if r_cm < 0.0 {
            return Err(Error::invalid(format!(
                "landing radius must be >= 0, got {r_cm}"
            )));
        }
        ensure_positive("drone height", z_cm)?;
        Ok(Self {
            r_cm,
            phi_deg: wrap_deg(phi_deg),
            z_cm,
        })
    }

    pub fn landing_point(&self) -> Vector3 {
        landing_point_world(self)
    }
}

/// Landing point in the body frame: `(r sin phi, r cos phi, -z)`.
pub fn landing_point_world(scenario: &LandingScenario) -> Vector3 {
    let phi = scenario.phi_deg.to_radians();
    Vector3::new(
        scenario.r_cm * phi.sin(),
        scenario.r_cm * phi.cos(),
        -scenario.z_cm,
    )
}

/// Path differences, delays and (unwrapped) phase shifts for the three
/// input pairs, indexed by [`Pair::index`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSolution {
    pub path_diff_cm: [f64; 3],
    pub delay_s: [f64; 3],
    pub phase_deg: [f64; 3],
}

impl PhaseSolution {
    pub fn phase(&self, pair: Pair) -> f64 {
        self.phase_deg[pair.index()]
    }

    pub fn th12(&self) -> f64 {
        self.phase_deg[0]
    }

    pub fn th23(&self) -> f64 {
        self.phase_deg[1]
    }

    pub fn th31(&self) -> f64 {
        self.phase_deg[2]
    }

    /// Largest phase magnitude and the pair that carries it.
    pub fn max_abs_phase(&self) -> (Pair, f64) {
        Pair::ALL.iter().map(|&p| (p, self.phase(p).abs())).fold(
            (Pair::D12, f64::NEG_INFINITY),
            |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            },
        )
    }
}

/// Exact near-field phase solution for a landing point given in the body
/// frame.
pub fn phase_solution(
    geom: &ReceiverGeometry,
    landing: Vector3,
    rf: &RfConfig,
) -> Result<PhaseSolution> {
    landing.ensure_finite("landing point")?;
    let mut dist = [0.0; 3];
    for (i, p) in geom.points().iter().enumerate() {
        let d = landing.distance(p);
        if d <= 1e-12 {
            return Err(Error::DegenerateGeometry { input: i + 1 });
        }
        dist[i] = d;
    }
    let mut sol = PhaseSolution {
        path_diff_cm: [0.0; 3],
        delay_s: [0.0; 3],
        phase_deg: [0.0; 3],
    };
    for pair in Pair::ALL {
        let (i, j) = pair.inputs();
        let dd = dist[i] - dist[j];
        let k = pair.index();
        sol.path_diff_cm[k] = dd;
        sol.delay_s[k] = rf.delay_s(dd);
        sol.phase_deg[k] = rf.phase_deg(dd);
    }
    Ok(sol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub phi_deg: f64,
    pub phase_deg: [f64; 3],
}

/// `n` azimuths evenly spaced from -180 to +180 inclusive, so that `n = 361`
/// lands on whole degrees.
pub fn sweep_azimuths(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| -180.0 + 360.0 * k as f64 / (n - 1) as f64)
        .collect()
}

/// `n` azimuths evenly spaced over `(-180, 180]`.
pub fn ring_azimuths(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| -180.0 + 360.0 * (k + 1) as f64 / n as f64)
        .collect()
}

/// Phase shifts as the landing point circles the drone at fixed radius.
pub fn azimuth_sweep(
    r_cm: f64,
    z_cm: f64,
    geom: &ReceiverGeometry,
    rf: &RfConfig,
    n_samples: usize,
) -> Result<Vec<SweepRow>> {
    if n_samples < 3 {
        return Err(Error::invalid(format!(
            "azimuth sweep needs at least 3 samples, got {n_samples}"
        )));
    }
    sweep_azimuths(n_samples)
        .into_iter()
        .map(|phi| {
            let scenario = LandingScenario::new(r_cm, phi, z_cm)?;
            let sol = phase_solution(geom, scenario.landing_point(), rf)?;
            Ok(SweepRow {
                phi_deg: phi,
                phase_deg: sol.phase_deg,
            })
        })
        .collect()
}

/// Intersection of two phase curves in a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub phi_deg: f64,
    pub value_deg: f64,
    pub pairs: (Pair, Pair),
}

/// Locates every intersection between two of the three phase curves,
/// linearly interpolated between adjacent sweep rows.
pub fn curve_crossings(rows: &[SweepRow]) -> Vec<Crossing> {
    let combos = [
        (Pair::D12, Pair::D23),
        (Pair::D23, Pair::D31),
        (Pair::D31, Pair::D12),
    ];
    let mut out = Vec::new();
    for w in rows.windows(2) {
        for &(a, b) in &combos {
            let d0 = w[0].phase_deg[a.index()] - w[0].phase_deg[b.index()];
            let d1 = w[1].phase_deg[a.index()] - w[1].phase_deg[b.index()];
            if d0 == 0.0 || d0 * d1 >= 0.0 {
                continue;
            }
            let t = d0 / (d0 - d1);
            let lerp = |x0: f64, x1: f64| x0 + t * (x1 - x0);
            out.push(Crossing {
                phi_deg: lerp(w[0].phi_deg, w[1].phi_deg),
                value_deg: lerp(w[0].phase_deg[a.index()], w[1].phase_deg[a.index()]),
                pairs: (a, b),
            });
        }
    }
    out
}

/// Search parameters for [`nonambiguous_range_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSearch {
    /// Outward scan stops here; `None` means `ceiling_factor * z`.
    pub ceiling_cm: Option<f64>,
    pub ceiling_factor: f64,
    /// Scan step as a fraction of the height.
    pub step_fraction: f64,
    pub resolution_cm: f64,
}

impl Default for RangeSearch {
    fn default() -> Self {
        Self {
            ceiling_cm: None,
            ceiling_factor: 100.0,
            step_fraction: 0.01,
            resolution_cm: 0.1,
        }
    }
}

fn max_abs_phase_at(
    r_cm: f64,
    phi_deg: f64,
    z_cm: f64,
    geom: &ReceiverGeometry,
    rf: &RfConfig,
) -> Result<f64> {
    let scenario = LandingScenario::new(r_cm, phi_deg, z_cm)?;
    Ok(phase_solution(geom, scenario.landing_point(), rf)?
        .max_abs_phase()
        .1)
}

/// Largest horizontal distance at which every phase shift stays within
/// `theta_limit`, along the ray at azimuth `phi_deg` and height `z_cm`.
pub fn nonambiguous_range(
    z_cm: f64,
    phi_deg: f64,
    theta_limit: f64,
    geom: &ReceiverGeometry,
    rf: &RfConfig,
) -> Result<f64> {
    nonambiguous_range_with(
        z_cm,
        phi_deg,
        theta_limit,
        geom,
        rf,
        &RangeSearch::default(),
    )
}

pub fn nonambiguous_range_with(
    z_cm: f64,
    phi_deg: f64,
    theta_limit: f64,
    geom: &ReceiverGeometry,
    rf: &RfConfig,
    search: &RangeSearch,
) -> Result<f64> {
    ensure_positive("drone height", z_cm)?;
    ensure_finite("azimuth", phi_deg)?;
    ensure_finite("phase limit", theta_limit)?;
    if !(theta_limit > 0.0 && theta_limit < 180.0) {
        return Err(Error::invalid(format!(
            "phase limit must lie in (0, 180) deg, got {theta_limit}"
        )));
    }
    let ceiling = search.ceiling_cm.unwrap_or(search.ceiling_factor * z_cm);
    let step = z_cm * search.step_fraction;
    ensure_positive("range ceiling", ceiling)?;
    ensure_positive("scan step", step)?;

    let excess =
        |r: f64| -> Result<f64> { Ok(max_abs_phase_at(r, phi_deg, z_cm, geom, rf)? - theta_limit) };

    // Coarse outward scan for the first crossing.
    let mut lo = 0.0;
    let mut hi = None;
    let mut k = 1u64;
    loop {
        let r = (k as f64 * step).min(ceiling);
        if excess(r)? > 0.0 {
            hi = Some(r);
            break;
        }
        lo = r;
        if r >= ceiling {
            break;
        }
        k += 1;
    }
    let mut hi = hi.ok_or(Error::RangeUnbounded {
        z_cm,
        phi_deg,
        ceiling_cm: ceiling,
    })?;

    while hi - lo > search.resolution_cm {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeRow {
    pub z_cm: f64,
    pub phi_deg: f64,
    pub r_max_cm: f64,
}

/// Non-ambiguity cone: for every height and azimuth, the boundary radius.
/// Rows are ordered by height (input order) then azimuth.
pub fn cone_profile(
    z_list: &[f64],
    theta_limit: f64,
    geom: &ReceiverGeometry,
    rf: &RfConfig,
    n_azimuths: usize,
) -> Result<Vec<ConeRow>> {
    if n_azimuths == 0 {
        return Err(Error::invalid("cone profile needs at least one azimuth"));
    }
    for &z in z_list {
        ensure_positive("cone height", z)?;
    }
    let azimuths = ring_azimuths(n_azimuths);
    let jobs: Vec<(f64, f64)> = z_list
        .iter()
        .flat_map(|&z| azimuths.iter().map(move |&phi| (z, phi)))
        .collect();
    jobs.par_iter()
        .map(|&(z, phi)| {
            Ok(ConeRow {
                z_cm: z,
                phi_deg: phi,
                r_max_cm: nonambiguous_range(z, phi, theta_limit, geom, rf)?,
            })
        })
        .collect()
}

/// Smallest and largest boundary radius among rows at height `z_cm`.
pub fn cone_extrema(rows: &[ConeRow], z_cm: f64) -> Option<(f64, f64)> {
    rows.iter()
        .filter(|r| r.z_cm == z_cm)
        .map(|r| r.r_max_cm)
        .fold(None, |acc, r| match acc {
            None => Some((r, r)),
            Some((lo, hi)) => Some((lo.min(r), hi.max(r))),
        })
}

/// Detector voltage change per centimetre of horizontal offset, in mV/cm,
/// for a full-scale swing `v_max - v_min` spread over `2 * r_best_case`.
pub fn correction_sensitivity(v_max: f64, v_min: f64, r_best_case_cm: f64) -> Result<f64> {
    ensure_finite("v_max", v_max)?;
    ensure_finite("v_min", v_min)?;
    ensure_positive("best-case radius", r_best_case_cm)?;
    let span = v_max - v_min;
    if span < 0.0 {
        return Err(Error::invalid(format!(
            "voltage span must be non-negative, got {span} V"
        )));
    }
    Ok(span * 1000.0 / (2.0 * r_best_case_cm))
}

pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(w, "phi_deg,th12_deg,th23_deg,th31_deg")?;
    for r in rows {
        writeln!(
            w,
            "{:.6},{:.6},{:.6},{:.6}",
            r.phi_deg, r.phase_deg[0], r.phase_deg[1], r.phase_deg[2]
        )?;
    }
    Ok(())
}

pub fn write_cone_csv<W: Write>(mut w: W, rows: &[ConeRow]) -> io::Result<()> {
    writeln!(w, "z_cm,phi_deg,rmax_cm")?;
    for r in rows {
        writeln!(w, "{:.6},{:.6},{:.6}", r.z_cm, r.phi_deg, r.r_max_cm)?;
    }
    Ok(())
}
