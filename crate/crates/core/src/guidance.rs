//! Sector classification and the maneuver decision rule.
//!
//! The three centered detector voltages divide the horizontal plane into six
//! 60 deg sectors. Sector 1 (the pair `P1`/`P2` reads the smallest
//! magnitude) faces the forward axis; sectors 2 and 3 are escaped by a
//! single 60 deg yaw, after which the drone tracks the landing point with
//! small rotate and translate steps until all three voltages drop under the
//! hold threshold.
//!
//! A voltage of exactly zero counts as positive wherever a sign is taken.

use std::fmt;

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::geometry::wrap_deg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubSector {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SectorId {
    major: u8,
    sub: SubSector,
}

impl SectorId {
    pub fn new(major: u8, sub: SubSector) -> Result<Self> {
        if (1..=3).contains(&major) {
            Ok(Self { major, sub })
        } else {
            Err(Error::invalid(format!(
                "sector major must be 1, 2 or 3, got {major}"
            )))
        }
    }

    pub fn major(&self) -> u8 {
        self.major
    }

    pub fn sub(&self) -> SubSector {
        self.sub
    }

    const fn of(major: u8, sub: SubSector) -> Self {
        Self { major, sub }
    }
}

impl fmt::Display for SectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = match self.sub {
            SubSector::A => 'a',
            SubSector::B => 'b',
        };
        write!(f, "{}{}", self.major, sub)
    }
}

impl std::str::FromStr for SectorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("unknown sector '{s}'"));
        let mut chars = s.trim().chars();
        let major = chars.next().and_then(|c| c.to_digit(10)).ok_or_else(bad)? as u8;
        let sub = match chars.next() {
            Some('a') => SubSector::A,
            Some('b') => SubSector::B,
            _ => return Err(bad()),
        };
        if chars.next().is_some() {
            return Err(bad());
        }
        SectorId::new(major, sub).map_err(|_| bad())
    }
}

/// Centered (signed) detector voltages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoltageTriple {
    pub v12: f64,
    pub v23: f64,
    pub v31: f64,
}

impl VoltageTriple {
    pub const fn new(v12: f64, v23: f64, v31: f64) -> Self {
        Self { v12, v23, v31 }
    }

    pub fn try_new(v12: f64, v23: f64, v31: f64) -> Result<Self> {
        ensure_finite("v12", v12)?;
        ensure_finite("v23", v23)?;
        ensure_finite("v31", v31)?;
        Ok(Self::new(v12, v23, v31))
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.v12, self.v23, self.v31]
    }

    pub fn scaled(self, k: f64) -> Self {
        Self::new(self.v12 * k, self.v23 * k, self.v31 * k)
    }

    pub fn max_abs(&self) -> f64 {
        self.v12.abs().max(self.v23.abs()).max(self.v31.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ManeuverKind {
    YawLeft,
    YawRight,
    RotateLeft,
    RotateRight,
    Forward,
    Backward,
    Hold,
}

impl ManeuverKind {
    fn token(self) -> &'static str {
        match self {
            ManeuverKind::YawLeft => "YAWL",
            ManeuverKind::YawRight => "YAWR",
            ManeuverKind::RotateLeft => "ROTL",
            ManeuverKind::RotateRight => "ROTR",
            ManeuverKind::Forward => "FWD",
            ManeuverKind::Backward => "BWD",
            ManeuverKind::Hold => "HOLD",
        }
    }

    pub fn is_escape(self) -> bool {
        matches!(self, ManeuverKind::YawLeft | ManeuverKind::YawRight)
    }
}

/// A discrete flight command. Yaw and rotate magnitudes are degrees,
/// translations centimetres; `Hold` carries none.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maneuver {
    kind: ManeuverKind,
    magnitude: Option<f64>,
}

impl Maneuver {
    pub fn new(kind: ManeuverKind, magnitude: f64) -> Result<Self> {
        if kind == ManeuverKind::Hold {
            return Err(Error::invalid("hold takes no magnitude"));
        }
        ensure_positive("maneuver magnitude", magnitude)?;
        Ok(Self {
            kind,
            magnitude: Some(magnitude),
        })
    }

    pub const HOLD: Maneuver = Maneuver {
        kind: ManeuverKind::Hold,
        magnitude: None,
    };

    pub fn kind(&self) -> ManeuverKind {
        self.kind
    }

    pub fn magnitude(&self) -> Option<f64> {
        self.magnitude
    }

    fn unchecked(kind: ManeuverKind, magnitude: f64) -> Self {
        Self {
            kind,
            magnitude: Some(magnitude),
        }
    }
}

impl fmt::Display for Maneuver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.token())?;
        if let Some(m) = self.magnitude {
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Maneuver tokens joined with `;`, e.g. `ROTR1;FWD1`.
pub fn maneuver_tokens(maneuvers: &[Maneuver]) -> String {
    maneuvers
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidanceConfig {
    /// Volts; all three centered voltages at or below this mean "hold".
    pub hold_threshold_v: f64,
    pub rotate_step_deg: f64,
    pub move_step_cm: f64,
    pub escape_yaw_deg: f64,
}

impl GuidanceConfig {
    pub fn new(hold_threshold_v: f64, rotate_step_deg: f64, move_step_cm: f64) -> Result<Self> {
        ensure_positive("hold threshold", hold_threshold_v)?;
        ensure_positive("rotate step", rotate_step_deg)?;
        ensure_positive("move step", move_step_cm)?;
        Ok(Self {
            hold_threshold_v,
            rotate_step_deg,
            move_step_cm,
            escape_yaw_deg: 60.0,
        })
    }
}

impl Default for GuidanceConfig {
    fn default() -> Self {
        Self {
            hold_threshold_v: 0.02,
            rotate_step_deg: 1.0,
            move_step_cm: 1.0,
            escape_yaw_deg: 60.0,
        }
    }
}

fn non_negative(v: f64) -> bool {
    v >= 0.0
}

pub fn classify_sector(v: &VoltageTriple) -> SectorId {
    let (a12, a23, a31) = (v.v12.abs(), v.v23.abs(), v.v31.abs());
    if a12 <= a23 && a12 <= a31 {
        let sub = if non_negative(v.v23) {
            SubSector::A
        } else {
            SubSector::B
        };
        SectorId::of(1, sub)
    } else if a23 < a31 {
        let sub = if non_negative(v.v31) {
            SubSector::A
        } else {
            SubSector::B
        };
        SectorId::of(2, sub)
    } else {
        let sub = if non_negative(v.v23) {
            SubSector::B
        } else {
            SubSector::A
        };
        SectorId::of(3, sub)
    }
}

pub fn is_hold(v: &VoltageTriple, cfg: &GuidanceConfig) -> bool {
    v.max_abs() <= cfg.hold_threshold_v
}

/// The sector-1 branch: one rotation towards the landing point and one
/// translation along the forward axis.
pub fn tracking_maneuvers(v: &VoltageTriple, cfg: &GuidanceConfig) -> [Maneuver; 2] {
    let rotation = if non_negative(v.v12) != non_negative(v.v23) {
        ManeuverKind::RotateRight
    } else {
        ManeuverKind::RotateLeft
    };
    let translation = if v.v23 > 0.0 {
        ManeuverKind::Forward
    } else {
        ManeuverKind::Backward
    };
    [
        Maneuver::unchecked(rotation, cfg.rotate_step_deg),
        Maneuver::unchecked(translation, cfg.move_step_cm),
    ]
}

/// Maneuvers for one sense cycle: `[Hold]`, a single escape yaw, or a
/// rotate/translate pair.
pub fn decide(v: &VoltageTriple, cfg: &GuidanceConfig) -> Vec<Maneuver> {
    if is_hold(v, cfg) {
        return vec![Maneuver::HOLD];
    }
    match classify_sector(v).major() {
        2 => vec![Maneuver::unchecked(
            ManeuverKind::YawLeft,
            cfg.escape_yaw_deg,
        )],
        3 => vec![Maneuver::unchecked(
            ManeuverKind::YawRight,
            cfg.escape_yaw_deg,
        )],
        _ => tracking_maneuvers(v, cfg).to_vec(),
    }
}

/// Sector a landing point at azimuth `phi_deg` (body frame, clockwise from
/// forward) falls in, using 60 deg sectors centered on 0 (1a), +60 (3b),
/// +120 (2a), 180 (1b), -120 (3a) and -60 (2b).
pub fn expected_sector_from_azimuth(phi_deg: f64) -> SectorId {
    const ORDER: [SectorId; 6] = [
        SectorId::of(1, SubSector::A),
        SectorId::of(3, SubSector::B),
        SectorId::of(2, SubSector::A),
        SectorId::of(1, SubSector::B),
        SectorId::of(3, SubSector::A),
        SectorId::of(2, SubSector::B),
    ];
    let shifted = (wrap_deg(phi_deg) + 30.0).rem_euclid(360.0);
    ORDER[((shifted / 60.0).floor() as usize).min(5)]
}

/// Angular distance from `phi_deg` to the nearest sector boundary.
pub fn distance_to_sector_boundary(phi_deg: f64) -> f64 {
    let offset = (wrap_deg(phi_deg) + 30.0).rem_euclid(60.0);
    offset.min(60.0 - offset)
}

/// `v12,v23,v31,sector,maneuvers`.
pub fn trace_line(v: &VoltageTriple, cfg: &GuidanceConfig) -> String {
    let sector = classify_sector(v);
    let maneuvers = decide(v, cfg);
    format!(
        "{:.3},{:.3},{:.3},{},{}",
        v.v12,
        v.v23,
        v.v31,
        sector,
        maneuver_tokens(&maneuvers)
    )
}
