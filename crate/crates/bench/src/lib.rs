//! Fixed workloads shared by the benchmarks.

use phaseland::geometry::cone_profile;
use phaseland::simulator::simulate_landing;
use phaseland::{
    DroneState, GuidanceConfig, ReceiverGeometry, RfConfig, Sensor, SimConfig, Vector3,
};

/// Landing point at `r_cm`, azimuth `phi_deg` in world coordinates.
pub fn polar(r_cm: f64, phi_deg: f64) -> Vector3 {
    let (s, c) = phi_deg.to_radians().sin_cos();
    Vector3::new(r_cm * s, r_cm * c, 0.0)
}

/// One full landing from 300 cm towards a point 100 cm out at -35 deg.
/// Returns the number of cycles.
pub fn reference_landing(sensor: &Sensor) -> usize {
    let start = DroneState::new(Vector3::new(0.0, 0.0, 300.0), 0.0).expect("valid start");
    simulate_landing(
        start,
        polar(100.0, -35.0),
        sensor,
        &GuidanceConfig::default(),
        &SimConfig::default(),
    )
    .expect("reference landing stays in the cone")
    .records
    .len()
}

/// The 2.45 GHz, 90 deg cone at ten heights over a 360-point ring.
pub fn reference_cone() -> usize {
    let geom = ReceiverGeometry::new(7.0).expect("valid spacing");
    let rf = RfConfig::default();
    let heights: Vec<f64> = (1..=10).map(|k| 100.0 * k as f64).collect();
    cone_profile(&heights, 90.0, &geom, &rf, 360)
        .expect("cone is bounded")
        .len()
}
