use serde::{Deserialize, Serialize};

use super::{
    discriminant, fixed_points, port_intensities, rhs_array, transmission, Branch, ClassicalError, ClassicalParams,
    ClassicalState, Direction,
};
use crate::ode::{Dopri5, OdeOptions, OdeStats};

/// Linearly decaying kick on the mechanical momentum:
/// `F(t) = (1 - t/T) f` for `t < T`, zero afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForcingProtocol {
    pub ramp: f64,
    pub amplitude: f64,
}

impl ForcingProtocol {
    pub const DEFAULT_RAMP: f64 = 1e3;

    pub fn none() -> Self {
        Self {
            ramp: Self::DEFAULT_RAMP,
            amplitude: 0.0,
        }
    }

    /// Amplitude set to the forward `X+` displacement at `params`' power and
    /// detuning, whatever the drive direction. Below the forward threshold
    /// the saddle-node displacement `sqrt(Delta^2 + Delta - kappa^2/4)` is used.
    pub fn for_operating_point(params: &ClassicalParams) -> Self {
        let forward = params.with_direction(Direction::Forward);
        let amplitude = fixed_points(&forward)
            .iter()
            .find(|fp| fp.branch == Branch::XPlus)
            .map(|fp| fp.x)
            .unwrap_or_else(|| discriminant(params.delta, params.kappa).max(0.0).sqrt());
        Self {
            ramp: Self::DEFAULT_RAMP,
            amplitude,
        }
    }

    pub fn force(&self, t: f64) -> f64 {
        if t < self.ramp {
            (1.0 - t / self.ramp) * self.amplitude
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    pub ode: OdeOptions,
    /// Samples before this time are not stored.
    pub record_from: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            ode: OdeOptions::default(),
            record_from: 0.0,
        }
    }
}

/// States sampled on the uniform grid `t_i = i * dt_out`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: ClassicalParams,
    pub dt_out: f64,
    pub t_end: f64,
    pub times: Vec<f64>,
    pub states: Vec<ClassicalState>,
    pub stats: OdeStats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Transmission into the non-driven port at every sample.
    pub fn transmission(&self) -> Vec<f64> {
        self.states.iter().map(|s| transmission(s, &self.params)).collect()
    }

    /// `(4k^2|a2|^2, 4k^2|a1|^2)` at every sample.
    pub fn port_intensities(&self) -> Vec<(f64, f64)> {
        self.states.iter().map(|s| port_intensities(s, self.params.kappa)).collect()
    }

    pub fn last(&self) -> Option<&ClassicalState> {
        self.states.last()
    }

    /// Mean transmission over samples with `t >= from`.
    pub fn mean_transmission_from(&self, from: f64) -> f64 {
        let vals: Vec<f64> = self
            .times
            .iter()
            .zip(&self.states)
            .filter(|(t, _)| **t >= from)
            .map(|(_, s)| transmission(s, &self.params))
            .collect();
        if vals.is_empty() {
            return f64::NAN;
        }
        vals.iter().sum::<f64>() / vals.len() as f64
    }
}

/// Integrates from the classical ground state with default tolerances.
pub fn integrate(params: &ClassicalParams, forcing: &ForcingProtocol, t_end: f64, dt_out: f64) -> Result<Trajectory, ClassicalError> {
    integrate_with(params, forcing, t_end, dt_out, &IntegrationConfig::default())
}

pub fn integrate_with(
    params: &ClassicalParams,
    forcing: &ForcingProtocol,
    t_end: f64,
    dt_out: f64,
    config: &IntegrationConfig,
) -> Result<Trajectory, ClassicalError> {
    params.validate()?;
    if !(t_end > 0.0) {
        return Err(ClassicalError::InvalidParameter {
            name: "t_end",
            reason: "must be > 0".into(),
        });
    }
    if !(dt_out > 0.0) {
        return Err(ClassicalError::InvalidParameter {
            name: "dt_out",
            reason: "must be > 0".into(),
        });
    }

    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut record = |t: f64, y: &[f64; 6]| {
        if t >= config.record_from {
            times.push(t);
            states.push(ClassicalState::from_array(y));
        }
    };
    let y0 = ClassicalState::ORIGIN.to_array();
    record(0.0, &y0);

    let mut solver = Dopri5::new(config.ode);
    let p = *params;
    let f = *forcing;
    // The force has a kink at the end of the ramp, so integrate the two
    // pieces separately.
    let split = if f.amplitude != 0.0 && f.ramp < t_end { f.ramp } else { t_end };
    let (y_mid, next) = solver.integrate(
        |t, y| rhs_array(y, &p, f.force(t)),
        0.0,
        y0,
        split,
        dt_out,
        1,
        |_, t, y| record(t, y),
    )?;
    if split < t_end {
        solver.integrate(
            |_, y| rhs_array(y, &p, 0.0),
            split,
            y_mid,
            t_end,
            dt_out,
            next,
            |_, t, y| record(t, y),
        )?;
    }

    Ok(Trajectory {
        params: *params,
        dt_out,
        t_end,
        times,
        states,
        stats: solver.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn force_ramp_is_continuous() {
        let f = ForcingProtocol {
            ramp: 1e3,
            amplitude: 0.9,
        };
        assert_eq!(f.force(0.0), 0.9);
        assert!((f.force(500.0) - 0.45).abs() < 1e-15);
        assert!(f.force(1e3 - 1e-9).abs() < 1e-11);
        assert_eq!(f.force(1e3), 0.0);
        assert_eq!(f.force(5e3), 0.0);
    }

    #[test]
    fn default_amplitude_is_forward_upper_branch() {
        let p = ClassicalParams::new(0.005, 0.5, 0.05, 1e-3, Direction::Backward).unwrap();
        let f = ForcingProtocol::for_operating_point(&p);
        assert!((f.amplitude - 0.885_849_8).abs() < 1e-6);
        assert_eq!(f.ramp, 1e3);
    }

    #[test]
    fn unforced_ground_state_never_transmits() {
        for dir in [Direction::Forward, Direction::Backward] {
            let p = ClassicalParams::new(0.3, 0.5, 0.05, 1e-3, dir).unwrap();
            let traj = integrate(&p, &ForcingProtocol::none(), 500.0, 0.5).unwrap();
            assert_eq!(traj.len(), 1001);
            assert!(traj.states.iter().all(|s| s.x == 0.0 && s.v == 0.0));
            assert!(traj.transmission().iter().all(|t| *t == 0.0));
        }
    }

    #[test]
    fn sampling_grid_is_exact() {
        let p = ClassicalParams::new(0.005, 0.5, 0.05, 1e-3, Direction::Forward).unwrap();
        let traj = integrate(&p, &ForcingProtocol::for_operating_point(&p), 1500.0, 0.25).unwrap();
        assert_eq!(traj.len(), 6001);
        for (i, t) in traj.times.iter().enumerate() {
            assert_eq!(*t, i as f64 * 0.25);
        }
    }

    #[test]
    fn rejects_nonpositive_horizon() {
        let p = ClassicalParams::new(0.005, 0.5, 0.05, 1e-3, Direction::Forward).unwrap();
        assert!(integrate(&p, &ForcingProtocol::none(), 0.0, 0.1).is_err());
    }
}
