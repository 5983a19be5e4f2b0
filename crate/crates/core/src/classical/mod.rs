//! Mean-field dynamics of a single three-mode block under intense drive.
//!
//! All quantities are dimensionless: rates and detunings are in units of the
//! mechanical frequency and time in units of its inverse. The two optical
//! normal modes `a1`, `a2` are split by exactly one mechanical quantum, the
//! drive enters either `a1` (forward, port 1) or `a2` (backward, port 2).

mod dynamics;
mod fixed;
mod steady;

pub use dynamics::{integrate, integrate_with, ForcingProtocol, IntegrationConfig, Trajectory};
pub use fixed::{
    classify_stability, fixed_points, forward_threshold, region_iii_boundary, threshold_powers, Branch,
    FixedPoint, Stability, DEGENERATE_TOL, STABILITY_MARGIN,
};
pub use steady::{classify_steady_state, classify_steady_state_with, SteadyOptions, SteadyState};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ode::OdeError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassicalError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("backward threshold undefined for detuning {delta} (no backward transmission at any power)")]
    BackwardThresholdUndefined { delta: f64 },
    #[error("region III boundary not applicable: delta^2 + delta - kappa^2/4 = {discriminant} <= 0")]
    NotApplicable { discriminant: f64 },
    #[error("marginal stability: max eigenvalue real part {max_re:e} inside the dead-band")]
    MarginalStability { max_re: f64 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("unit error: `{name}` must be positive, got {value}")]
    UnitError { name: &'static str, value: f64 },
    #[error(transparent)]
    Integration(#[from] OdeError),
}

/// Which port carries the strong drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Drive into port 1, i.e. mode `a1`; transmission is `T21`.
    Forward,
    /// Drive into port 2, i.e. mode `a2`; transmission is `T12`.
    Backward,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

/// Renormalized block parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalParams {
    /// Drive strength `4 g^2 kappa alpha_in^2 / omega_m^4`.
    pub power: f64,
    /// Detuning of `a1` from the drive.
    pub delta: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub direction: Direction,
}

impl ClassicalParams {
    pub fn new(power: f64, delta: f64, kappa: f64, gamma: f64, direction: Direction) -> Result<Self, ClassicalError> {
        let p = Self {
            power,
            delta,
            kappa,
            gamma,
            direction,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ClassicalError> {
        let bad = |name, reason: &str| {
            Err(ClassicalError::InvalidParameter {
                name,
                reason: reason.to_string(),
            })
        };
        if !(self.power.is_finite() && self.power >= 0.0) {
            return bad("P", "must be finite and >= 0");
        }
        if !self.delta.is_finite() {
            return bad("Delta", "must be finite");
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return bad("kappa", "must be finite and > 0");
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return bad("gamma", "must be finite and >= 0");
        }
        Ok(())
    }

    pub fn with_power(self, power: f64) -> Self {
        Self { power, ..self }
    }

    pub fn with_direction(self, direction: Direction) -> Self {
        Self { direction, ..self }
    }

    /// `Delta^2 + Delta - kappa^2/4`, the recurring discriminant of the branch formulas.
    pub fn discriminant(&self) -> f64 {
        discriminant(self.delta, self.kappa)
    }
}

pub(crate) fn discriminant(delta: f64, kappa: f64) -> f64 {
    delta * delta + delta - kappa * kappa / 4.0
}

pub(crate) fn linewidth_term(delta: f64, kappa: f64) -> f64 {
    kappa * delta + kappa / 2.0
}

/// Mode amplitudes plus mechanical displacement and velocity.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassicalState {
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub x: f64,
    pub v: f64,
}

impl ClassicalState {
    pub const ORIGIN: Self = Self {
        alpha1: Complex64::new(0.0, 0.0),
        alpha2: Complex64::new(0.0, 0.0),
        x: 0.0,
        v: 0.0,
    };

    /// Coordinates `(Re a1, Im a1, Re a2, Im a2, X, V)`.
    pub fn to_array(&self) -> [f64; 6] {
        [self.alpha1.re, self.alpha1.im, self.alpha2.re, self.alpha2.im, self.x, self.v]
    }

    pub fn from_array(y: &[f64; 6]) -> Self {
        Self {
            alpha1: Complex64::new(y[0], y[1]),
            alpha2: Complex64::new(y[2], y[3]),
            x: y[4],
            v: y[5],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// Time derivative of the mean-field equations, with `force` acting on the
/// mechanical momentum.
pub fn rhs(state: &ClassicalState, params: &ClassicalParams, force: f64) -> ClassicalState {
    let i = Complex64::i();
    let (drive1, drive2) = match params.direction {
        Direction::Forward => (0.5, 0.0),
        Direction::Backward => (0.0, 0.5),
    };
    let half_k = params.kappa / 2.0;
    let a1 = state.alpha1;
    let a2 = state.alpha2;
    let x = state.x;
    let da1 = -(half_k + i * params.delta) * a1 - i * x * a2 + drive1;
    let da2 = -(half_k + i * (1.0 + params.delta)) * a2 - i * x * a1 + drive2;
    let radiation = 2.0 * (a1.conj() * a2).re;
    let dv = -x - params.gamma * state.v - params.power * radiation + force;
    ClassicalState {
        alpha1: da1,
        alpha2: da2,
        x: state.v,
        v: dv,
    }
}

pub(crate) fn rhs_array(y: &[f64; 6], params: &ClassicalParams, force: f64) -> [f64; 6] {
    rhs(&ClassicalState::from_array(y), params, force).to_array()
}

/// Analytic Jacobian over `(Re a1, Im a1, Re a2, Im a2, X, V)`. The trace is
/// `-2 kappa - gamma` everywhere.
pub fn jacobian(state: &ClassicalState, params: &ClassicalParams) -> [[f64; 6]; 6] {
    let h = params.kappa / 2.0;
    let d1 = params.delta;
    let d2 = 1.0 + params.delta;
    let (u1, w1) = (state.alpha1.re, state.alpha1.im);
    let (u2, w2) = (state.alpha2.re, state.alpha2.im);
    let x = state.x;
    let p2 = 2.0 * params.power;
    [
        [-h, d1, 0.0, x, w2, 0.0],
        [-d1, -h, -x, 0.0, -u2, 0.0],
        [0.0, x, -h, d2, w1, 0.0],
        [-x, 0.0, -d2, -h, -u1, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        [-p2 * u2, -p2 * w2, -p2 * u1, -p2 * w1, -1.0, -params.gamma],
    ]
}

/// Transmission into the non-driven port, `4 kappa^2 |alpha_j|^2`.
pub fn transmission(state: &ClassicalState, params: &ClassicalParams) -> f64 {
    let amp = match params.direction {
        Direction::Forward => state.alpha2,
        Direction::Backward => state.alpha1,
    };
    4.0 * params.kappa * params.kappa * amp.norm_sqr()
}

/// Output intensities at both ports, `(4k^2|a2|^2, 4k^2|a1|^2)`.
pub fn port_intensities(state: &ClassicalState, kappa: f64) -> (f64, f64) {
    let k2 = 4.0 * kappa * kappa;
    (k2 * state.alpha2.norm_sqr(), k2 * state.alpha1.norm_sqr())
}

/// Laboratory parameters, angular frequencies in rad/s and power in W.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub g: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub omega_m: f64,
    pub delta: f64,
    pub drive_power: f64,
    pub omega_l: f64,
}

pub const HBAR: f64 = 1.054_571_817e-34;

/// Maps laboratory parameters onto the dimensionless `(P, Delta, kappa, gamma)`.
/// The drive photon flux is `alpha_in^2 = drive_power / (hbar omega_l)`.
pub fn renormalize(physical: &PhysicalParams, direction: Direction) -> Result<ClassicalParams, ClassicalError> {
    for (name, value) in [
        ("kappa", physical.kappa),
        ("omega_m", physical.omega_m),
        ("omega_l", physical.omega_l),
    ] {
        if !(value > 0.0) {
            return Err(ClassicalError::UnitError { name, value });
        }
    }
    for (name, value) in [
        ("g", physical.g),
        ("gamma", physical.gamma),
        ("drive_power", physical.drive_power),
    ] {
        if !(value >= 0.0) {
            return Err(ClassicalError::UnitError { name, value });
        }
    }
    let wm = physical.omega_m;
    let flux = physical.drive_power / (HBAR * physical.omega_l);
    let power = 4.0 * physical.g * physical.g * physical.kappa * flux / wm.powi(4);
    ClassicalParams::new(
        power,
        physical.delta / wm,
        physical.kappa / wm,
        physical.gamma / wm,
        direction,
    )
}

/// Inverse of [`renormalize`] for the drive: the optical power (W) that
/// produces the dimensionless strength `power`.
pub fn drive_power_for(power: f64, physical: &PhysicalParams) -> f64 {
    let flux = power * physical.omega_m.powi(4) / (4.0 * physical.g * physical.g * physical.kappa);
    flux * HBAR * physical.omega_l
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(direction: Direction) -> ClassicalParams {
        ClassicalParams::new(0.005, 0.5, 0.05, 1e-3, direction).unwrap()
    }

    #[test]
    fn origin_derivative_is_the_drive() {
        let d = rhs(&ClassicalState::ORIGIN, &params(Direction::Forward), 0.0);
        assert_eq!(d.alpha1, Complex64::new(0.5, 0.0));
        assert_eq!(d.alpha2, Complex64::new(0.0, 0.0));
        assert_eq!((d.x, d.v), (0.0, 0.0));

        let d = rhs(&ClassicalState::ORIGIN, &params(Direction::Backward), 0.0);
        assert_eq!(d.alpha2, Complex64::new(0.5, 0.0));
        assert_eq!(d.alpha1, Complex64::new(0.0, 0.0));
        assert_eq!((d.x, d.v), (0.0, 0.0));
    }

    #[test]
    fn undriven_subspace_is_invariant() {
        let p = params(Direction::Forward);
        let s = ClassicalState {
            alpha1: Complex64::new(0.3, -1.7),
            ..ClassicalState::ORIGIN
        };
        let d = rhs(&s, &p, 0.0);
        assert_eq!(d.alpha2, Complex64::new(0.0, 0.0));
        assert_eq!(d.v, 0.0);
        assert_eq!(d.x, 0.0);

        let p = params(Direction::Backward);
        let s = ClassicalState {
            alpha2: Complex64::new(-2.0, 0.4),
            ..ClassicalState::ORIGIN
        };
        let d = rhs(&s, &p, 0.0);
        assert_eq!(d.alpha1, Complex64::new(0.0, 0.0));
        assert_eq!(d.v, 0.0);
    }

    #[test]
    fn force_enters_velocity_equation_only() {
        let p = params(Direction::Forward);
        let a = rhs(&ClassicalState::ORIGIN, &p, 0.0);
        let b = rhs(&ClassicalState::ORIGIN, &p, 0.7);
        assert_eq!(b.v - a.v, 0.7);
        assert_eq!(a.alpha1, b.alpha1);
        assert_eq!(a.x, b.x);
    }

    #[test]
    fn jacobian_trace() {
        let p = ClassicalParams { gamma: 0.0, ..params(Direction::Forward) };
        let s = ClassicalState {
            alpha1: Complex64::new(1.0, 2.0),
            alpha2: Complex64::new(-0.5, 0.1),
            x: 0.8,
            v: -0.2,
        };
        let j = jacobian(&s, &p);
        let trace: f64 = (0..6).map(|i| j[i][i]).sum();
        assert!((trace + 2.0 * p.kappa).abs() < 1e-15);
    }

    #[test]
    fn transmission_of_empty_port_is_zero() {
        let s = ClassicalState {
            alpha1: Complex64::new(3.0, 1.0),
            ..ClassicalState::ORIGIN
        };
        assert_eq!(transmission(&s, &params(Direction::Forward)), 0.0);
    }

    #[test]
    fn validation_rejects_bad_rates() {
        assert!(ClassicalParams::new(-1.0, 0.5, 0.05, 0.0, Direction::Forward).is_err());
        assert!(ClassicalParams::new(0.0, 0.5, 0.0, 0.0, Direction::Forward).is_err());
        assert!(ClassicalParams::new(0.0, 0.5, 0.05, -1e-3, Direction::Forward).is_err());
    }

    fn lab() -> PhysicalParams {
        PhysicalParams {
            g: 2.0 * PI * 1e6,
            kappa: 2.0 * PI * 250e6,
            gamma: 2.0 * PI * 5e6,
            omega_m: 2.0 * PI * 5e9,
            delta: PI * 5e9,
            drive_power: 10e-3,
            omega_l: 2.0 * PI * 200e12,
        }
    }

    #[test]
    fn renormalized_rates() {
        let p = renormalize(&lab(), Direction::Forward).unwrap();
        assert!((p.kappa - 0.05).abs() < 1e-15);
        assert!((p.delta - 0.5).abs() < 1e-15);
        assert!((p.gamma - 1e-3).abs() < 1e-15);
        let back = drive_power_for(p.power, &lab());
        assert!((back - 10e-3).abs() < 1e-15);
    }

    #[test]
    fn zero_coupling_means_zero_drive() {
        let p = renormalize(&PhysicalParams { g: 0.0, ..lab() }, Direction::Forward).unwrap();
        assert_eq!(p.power, 0.0);
    }

    #[test]
    fn nonpositive_frequency_is_a_unit_error() {
        let err = renormalize(&PhysicalParams { omega_m: 0.0, ..lab() }, Direction::Forward).unwrap_err();
        assert!(matches!(err, ClassicalError::UnitError { name: "omega_m", .. }));
    }
}
