//! Fixtures shared by the criterion benchmarks in `benches/`.

use trimode_core::classical::{ClassicalParams, Direction};
use trimode_core::full::{sideband_design, FullNetworkParams, SidebandConditions};
use trimode_core::rwa::{optimal_design, NetworkParams};

/// Forward drive inside the bistable window.
pub fn classical_point() -> ClassicalParams {
    ClassicalParams::new(0.005, 0.5, 0.05, 1e-3, Direction::Forward).expect("valid fixture")
}

/// Symmetric design at `Gamma = kappa / 10`, `Jm = 0.2 kappa`, and its
/// working frequency.
pub fn network_point() -> (NetworkParams, f64) {
    let d = optimal_design(0.1, 1.0, 0.2).expect("valid fixture");
    (d.params(5.0), d.omega_opt)
}

/// Full model at `omega_m / kappa = 20`.
pub fn full_point() -> (FullNetworkParams, f64) {
    sideband_design(20.0, &SidebandConditions::default()).expect("valid fixture")
}
