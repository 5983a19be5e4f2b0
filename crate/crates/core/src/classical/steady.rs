use serde::{Deserialize, Serialize};

use super::{ClassicalError, Trajectory};

/// Long-time behaviour of a trajectory, judged from the maxima of `X(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SteadyState {
    FixedPoint { x: f64 },
    LimitCycle { period: f64 },
    /// Maxima alternate between two levels; `period` spans both.
    PeriodDoubled { period: f64 },
    Irregular,
}

impl SteadyState {
    pub fn label(&self) -> &'static str {
        match self {
            SteadyState::FixedPoint { .. } => "FixedPoint",
            SteadyState::LimitCycle { .. } => "LimitCycle",
            SteadyState::PeriodDoubled { .. } => "PeriodDoubled",
            SteadyState::Irregular => "Irregular",
        }
    }

    pub fn period(&self) -> Option<f64> {
        match self {
            SteadyState::LimitCycle { period } | SteadyState::PeriodDoubled { period } => Some(*period),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyOptions {
    /// Leading fraction of the run treated as transient.
    pub discard_fraction: f64,
    /// Minimum tail length in mechanical periods (`2 pi`).
    pub min_tail_periods: f64,
    /// Peak-to-peak `X` below this is a fixed point.
    pub fixed_point_tol: f64,
    /// Maxima within this fraction of the peak-to-peak swing share a level.
    pub level_spread: f64,
}

impl Default for SteadyOptions {
    fn default() -> Self {
        Self {
            discard_fraction: 0.8,
            min_tail_periods: 50.0,
            fixed_point_tol: 1e-6,
            level_spread: 0.01,
        }
    }
}

pub fn classify_steady_state(traj: &Trajectory) -> Result<SteadyState, ClassicalError> {
    classify_steady_state_with(traj, &SteadyOptions::default())
}

pub fn classify_steady_state_with(traj: &Trajectory, opts: &SteadyOptions) -> Result<SteadyState, ClassicalError> {
    let (Some(&t_first), Some(&t_last)) = (traj.times.first(), traj.times.last()) else {
        return Err(ClassicalError::InsufficientData("empty trajectory".into()));
    };
    // The transient is measured against the full integration span, which
    // may extend before the first recorded sample.
    let t_cut = (opts.discard_fraction * traj.t_end).max(t_first);
    let tail_len = t_last - t_cut;
    let needed = opts.min_tail_periods * std::f64::consts::TAU;
    if tail_len < needed {
        return Err(ClassicalError::InsufficientData(format!(
            "tail spans {tail_len:.3} time units, need {needed:.3}"
        )));
    }
    let start = traj.times.partition_point(|t| *t < t_cut);
    let times = &traj.times[start..];
    let xs: Vec<f64> = traj.states[start..].iter().map(|s| s.x).collect();
    if xs.len() < 3 {
        return Err(ClassicalError::InsufficientData("fewer than three tail samples".into()));
    }
    classify_series(times, &xs, opts)
}

/// Classifies a uniformly sampled tail `x(t)`.
pub(crate) fn classify_series(times: &[f64], xs: &[f64], opts: &SteadyOptions) -> Result<SteadyState, ClassicalError> {
    let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(*x), hi.max(*x)));
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(ClassicalError::InsufficientData("non-finite samples in tail".into()));
    }
    let swing = hi - lo;
    if swing < opts.fixed_point_tol {
        return Ok(SteadyState::FixedPoint { x: 0.5 * (lo + hi) });
    }

    // A spiral still converging onto an equilibrium has a shrinking swing;
    // it is not a cycle even when consecutive maxima look level.
    let half = xs.len() / 2;
    let early = swing_of(&xs[..half]);
    let late = swing_of(&xs[half..]);
    if late < (1.0 - opts.level_spread) * early {
        let tail = &xs[half..];
        return Ok(SteadyState::FixedPoint {
            x: tail.iter().sum::<f64>() / tail.len() as f64,
        });
    }

    let maxima = local_maxima(times, xs);
    if maxima.len() < 6 {
        return Ok(SteadyState::Irregular);
    }
    let tol = opts.level_spread * swing;
    let repeats_after = |k: usize| maxima.windows(k + 1).all(|w| (w[0].1 - w[k].1).abs() <= tol);

    if repeats_after(1) {
        let n = maxima.len();
        let period = (maxima[n - 1].0 - maxima[0].0) / (n - 1) as f64;
        return Ok(SteadyState::LimitCycle { period });
    }
    if repeats_after(2) {
        // Use an even number of spacings so both levels are weighted equally.
        let n = maxima.len();
        let m = if (n - 1) % 2 == 0 { n - 1 } else { n - 2 };
        let period = 2.0 * (maxima[m].0 - maxima[0].0) / m as f64;
        return Ok(SteadyState::PeriodDoubled { period });
    }
    Ok(SteadyState::Irregular)
}

fn swing_of(xs: &[f64]) -> f64 {
    let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(*x), hi.max(*x)));
    hi - lo
}

/// Interior strict-left maxima, refined by a parabola through the three
/// neighbouring samples.
fn local_maxima(times: &[f64], xs: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 1..xs.len() - 1 {
        let (a, b, c) = (xs[i - 1], xs[i], xs[i + 1]);
        if b > a && b >= c {
            let denom = a - 2.0 * b + c;
            let (dt, peak) = if denom < 0.0 {
                let s = 0.5 * (a - c) / denom;
                (s, b - 0.25 * (a - c) * s)
            } else {
                (0.0, b)
            };
            let h = times[i + 1] - times[i];
            out.push((times[i] + dt * h, peak));
        }
    }
    out
}
