//! Deterministic parallel sweeps.
//!
//! Cells are independent pure evaluations. They run on a work-stealing pool
//! and are gathered by grid index, so output never depends on the worker
//! count or on completion order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classical::{
    self, classify_steady_state, fixed_points, Branch, ClassicalError, ClassicalParams, Direction, ForcingProtocol,
    IntegrationConfig, Stability, SteadyState,
};
use crate::full::{self, SidebandConditions, SidebandRow};
use crate::rwa::{self, Metrics};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error("no sign change of the leading eigenvalue real part on [{p_lo}, {p_hi}] (values {re_lo:e}, {re_hi:e})")]
    NoSignChange { p_lo: f64, p_hi: f64, re_lo: f64, re_hi: f64 },
    #[error("upper branch missing at P = {power}")]
    MissingBranch { power: f64 },
    #[error(transparent)]
    Classical(#[from] ClassicalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Axis {
    pub fn linear(name: &str, start: f64, stop: f64, points: usize) -> Self {
        Self {
            name: name.into(),
            start,
            stop,
            points,
            spacing: Spacing::Linear,
        }
    }

    pub fn log(name: &str, start: f64, stop: f64, points: usize) -> Self {
        Self {
            spacing: Spacing::Log,
            ..Self::linear(name, start, stop, points)
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.points < 2 {
            return Err(SweepError::InvalidSpec(format!("axis `{}` needs at least 2 points", self.name)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(SweepError::InvalidSpec(format!("axis `{}` has a non-finite range", self.name)));
        }
        if self.spacing == Spacing::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(SweepError::InvalidSpec(format!("log axis `{}` must be positive", self.name)));
        }
        Ok(())
    }

    /// Grid values; endpoints are reproduced exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == n - 1 {
                    return self.stop;
                }
                let s = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.start + s * (self.stop - self.start),
                    Spacing::Log => self.start * (self.stop / self.start).powf(s),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepTask {
    RegionMap,
    HopfTrace,
    GammaSweep,
    AsymMap,
    SidebandSweep,
    SpectrumGrid,
}

impl SweepTask {
    /// Axis names the task accepts, in order.
    pub fn axis_names(self) -> &'static [&'static str] {
        match self {
            SweepTask::RegionMap => &["P", "Delta"],
            SweepTask::HopfTrace => &["Delta"],
            SweepTask::GammaSweep => &["Gamma"],
            SweepTask::AsymMap => &["Gamma1", "Gamma2"],
            SweepTask::SidebandSweep => &["ratio"],
            SweepTask::SpectrumGrid => &["omega"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub task: SweepTask,
    pub axes: Vec<Axis>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        let names = self.task.axis_names();
        if self.axes.len() != names.len() {
            return Err(SweepError::InvalidSpec(format!(
                "{:?} takes {} axes, got {}",
                self.task,
                names.len(),
                self.axes.len()
            )));
        }
        for (axis, name) in self.axes.iter().zip(names) {
            if axis.name != *name {
                return Err(SweepError::InvalidSpec(format!(
                    "{:?} expects axis `{name}`, got `{}`",
                    self.task, axis.name
                )));
            }
            axis.validate()?;
        }
        Ok(())
    }
}

/// Worker count; `None` uses the available parallelism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SweepOptions {
    pub workers: Option<usize>,
}

/// Evaluates `f(0..n)` in parallel and returns results in index order.
pub fn run_cells<T, F>(n: usize, opts: &SweepOptions, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let work = || (0..n).into_par_iter().map(&f).collect::<Vec<T>>();
    match opts.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(_) => (0..n).map(&f).collect(),
        },
        None => work(),
    }
}

/// Outcome of one cell; failures are kept in place rather than dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "message", rename_all = "lowercase")]
pub enum CellStatus {
    Ok,
    Failed(String),
}

impl CellStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, CellStatus::Ok)
    }

    /// Single-token form for data files.
    pub fn label(&self) -> String {
        match self {
            CellStatus::Ok => "ok".into(),
            CellStatus::Failed(msg) => format!("failed: {}", msg.replace([',', '\n'], ";")),
        }
    }
}

// ---------------------------------------------------------------- classical

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    I,
    II,
    III,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
        }
    }

    pub fn from_count(n: usize) -> Option<Self> {
        match n {
            1 => Some(Region::I),
            3 => Some(Region::II),
            2 => Some(Region::III),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub p: f64,
    pub delta: f64,
    pub region: Option<Region>,
    /// Whether `X+` has crossed its Hopf boundary; `None` without `X+`.
    pub hopf_crossed: Option<bool>,
    /// Steady transmission at `X+` while it is stable.
    pub upper_transmission: Option<f64>,
    pub status: CellStatus,
}

pub fn region_cell(p: f64, delta: f64, kappa: f64, gamma: f64, direction: Direction) -> RegionCell {
    let mut cell = RegionCell {
        p,
        delta,
        region: None,
        hopf_crossed: None,
        upper_transmission: None,
        status: CellStatus::Ok,
    };
    let params = match ClassicalParams::new(p, delta, kappa, gamma, direction) {
        Ok(v) => v,
        Err(e) => {
            cell.status = CellStatus::Failed(e.to_string());
            return cell;
        }
    };
    let fps = fixed_points(&params);
    cell.region = Region::from_count(fps.len());
    if let Some(up) = fps.iter().find(|f| f.branch == Branch::XPlus) {
        match up.stability {
            Stability::Marginal => cell.status = CellStatus::Failed("marginal stability of X+".into()),
            s => cell.hopf_crossed = Some(s == Stability::UnstableSpiral),
        }
        if up.stability == Stability::StableSpiral {
            cell.upper_transmission = Some(classical::transmission(&up.state(), &params));
        }
    }
    cell
}

/// `(P, Delta)` map, `Delta` outer and `P` inner.
pub fn region_map(
    p_axis: &Axis,
    delta_axis: &Axis,
    kappa: f64,
    gamma: f64,
    direction: Direction,
    opts: &SweepOptions,
) -> Result<Vec<RegionCell>, SweepError> {
    p_axis.validate()?;
    delta_axis.validate()?;
    let ps = p_axis.values();
    let ds = delta_axis.values();
    Ok(run_cells(ps.len() * ds.len(), opts, |i| {
        region_cell(ps[i % ps.len()], ds[i / ps.len()], kappa, gamma, direction)
    }))
}

/// Default map axes: `Delta in (0, 1]`, `P` log-spaced over `[1e-4, 10]`.
pub fn default_region_axes() -> (Axis, Axis) {
    (Axis::log("P", 1e-4, 10.0, 200), Axis::linear("Delta", 0.005, 1.0, 200))
}

fn upper_branch_growth(p: f64, base: &ClassicalParams) -> Result<f64, SweepError> {
    let params = base.with_power(p);
    fixed_points(&params)
        .into_iter()
        .find(|f| f.branch == Branch::XPlus)
        .map(|f| f.max_real_part())
        .ok_or(SweepError::MissingBranch { power: p })
}

/// Absolute bracket width at which the Hopf bisection stops.
pub const HOPF_TOL: f64 = 1e-6;

/// Power at which the leading eigenvalue of `X+` crosses the imaginary
/// axis, bracketed by `[p_lo, p_hi]`.
pub fn hopf_trace(
    delta: f64,
    kappa: f64,
    gamma: f64,
    direction: Direction,
    p_lo: f64,
    p_hi: f64,
) -> Result<f64, SweepError> {
    let base = ClassicalParams::new(p_lo, delta, kappa, gamma, direction)?;
    let (mut a, mut b) = (p_lo, p_hi);
    let (re_lo, re_hi) = (upper_branch_growth(a, &base)?, upper_branch_growth(b, &base)?);
    if re_lo.signum() == re_hi.signum() {
        return Err(SweepError::NoSignChange {
            p_lo,
            p_hi,
            re_lo,
            re_hi,
        });
    }
    let rising = re_lo < 0.0;
    while b - a > HOPF_TOL {
        let mid = 0.5 * (a + b);
        let re = upper_branch_growth(mid, &base)?;
        if (re < 0.0) == rising {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopfRow {
    pub delta: f64,
    pub p_hopf: Option<f64>,
    pub status: CellStatus,
}

/// Hopf power per detuning. Each bracket starts just above the forward
/// saddle-node and ends at `p_max`.
pub fn hopf_curve(
    delta_axis: &Axis,
    kappa: f64,
    gamma: f64,
    direction: Direction,
    p_max: f64,
    opts: &SweepOptions,
) -> Result<Vec<HopfRow>, SweepError> {
    delta_axis.validate()?;
    let ds = delta_axis.values();
    Ok(run_cells(ds.len(), opts, |i| {
        let delta = ds[i];
        let onset = match direction {
            Direction::Forward => classical::forward_threshold(delta, kappa),
            Direction::Backward => classical::threshold_powers(delta, kappa).map(|t| t.1).unwrap_or(f64::NAN),
        };
        let res = if onset.is_finite() {
            hopf_trace(delta, kappa, gamma, direction, onset * (1.0 + 1e-6) + 1e-12, p_max)
        } else {
            Err(SweepError::InvalidSpec(format!("no saddle-node at Delta = {delta}")))
        };
        match res {
            Ok(p) => HopfRow {
                delta,
                p_hopf: Some(p),
                status: CellStatus::Ok,
            },
            Err(e) => HopfRow {
                delta,
                p_hopf: None,
                status: CellStatus::Failed(e.to_string()),
            },
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayPoint {
    pub p: f64,
    pub state: Option<SteadyState>,
    /// Transmission into the non-driven port, averaged over the tail.
    pub mean_transmission: f64,
    pub status: CellStatus,
}

/// Integrates and classifies the long-time state at each power.
pub fn steady_ray(
    base: &ClassicalParams,
    powers: &[f64],
    t_end: f64,
    dt_out: f64,
    opts: &SweepOptions,
) -> Vec<RayPoint> {
    run_cells(powers.len(), opts, |i| {
        let p = powers[i];
        let params = base.with_power(p);
        let forcing = ForcingProtocol::for_operating_point(&params);
        let config = IntegrationConfig {
            record_from: 0.8 * t_end,
            ..Default::default()
        };
        let res = classical::integrate_with(&params, &forcing, t_end, dt_out, &config)
            .and_then(|traj| Ok((classify_steady_state(&traj)?, traj.mean_transmission_from(0.0))));
        match res {
            Ok((state, t)) => RayPoint {
                p,
                state: Some(state),
                mean_transmission: t,
                status: CellStatus::Ok,
            },
            Err(e) => RayPoint {
                p,
                state: None,
                mean_transmission: f64::NAN,
                status: CellStatus::Failed(e.to_string()),
            },
        }
    })
}

// --------------------------------------------------------------- scattering

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaRow {
    pub gamma: f64,
    pub jm_opt: f64,
    pub metrics: Option<Metrics>,
    pub status: CellStatus,
}

/// Per damping: optimal `Jm`, design couplings, then figures of merit.
pub fn gamma_sweep(gamma_axis: &Axis, kappa: f64, kappad: f64, opts: &SweepOptions) -> Result<Vec<GammaRow>, SweepError> {
    gamma_axis.validate()?;
    let gs = gamma_axis.values();
    Ok(run_cells(gs.len(), opts, |i| gamma_row(gs[i], kappa, kappad)))
}

pub fn gamma_row(gamma: f64, kappa: f64, kappad: f64) -> GammaRow {
    let res = rwa::optimal_jm(gamma, kappa).and_then(|opt| {
        let d = rwa::optimal_design(gamma, kappa, opt.jm)?;
        Ok((opt.jm, rwa::metrics(&d.params(kappad))?))
    });
    match res {
        Ok((jm, m)) => GammaRow {
            gamma,
            jm_opt: jm,
            metrics: Some(m),
            status: CellStatus::Ok,
        },
        Err(e) => GammaRow {
            gamma,
            jm_opt: f64::NAN,
            metrics: None,
            status: CellStatus::Failed(e.to_string()),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymCell {
    pub gamma1: f64,
    pub gamma2: f64,
    pub design: Option<rwa::AsymmetricDesign>,
    pub metrics: Option<Metrics>,
    pub status: CellStatus,
}

pub fn asym_cell(gamma1: f64, gamma2: f64, kappa: f64, kappad: f64) -> AsymCell {
    let res = rwa::optimize_asymmetric(gamma1, gamma2, kappa).and_then(|d| Ok((d, rwa::metrics(&d.params(kappad))?)));
    match res {
        Ok((d, m)) => AsymCell {
            gamma1,
            gamma2,
            design: Some(d),
            metrics: Some(m),
            status: CellStatus::Ok,
        },
        Err(e) => AsymCell {
            gamma1,
            gamma2,
            design: None,
            metrics: None,
            status: CellStatus::Failed(e.to_string()),
        },
    }
}

/// `(Gamma1, Gamma2)` map, `Gamma2` outer and `Gamma1` inner.
pub fn asym_map(
    g1_axis: &Axis,
    g2_axis: &Axis,
    kappa: f64,
    kappad: f64,
    opts: &SweepOptions,
) -> Result<Vec<AsymCell>, SweepError> {
    g1_axis.validate()?;
    g2_axis.validate()?;
    let g1 = g1_axis.values();
    let g2 = g2_axis.values();
    Ok(run_cells(g1.len() * g2.len(), opts, |i| {
        asym_cell(g1[i % g1.len()], g2[i / g1.len()], kappa, kappad)
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidebandCell {
    pub ratio: f64,
    pub row: Option<SidebandRow>,
    pub status: CellStatus,
}

pub fn sideband_sweep(ratios: &[f64], conditions: &SidebandConditions, opts: &SweepOptions) -> Vec<SidebandCell> {
    run_cells(ratios.len(), opts, |i| match full::sideband_point(ratios[i], conditions) {
        Ok(row) => SidebandCell {
            ratio: ratios[i],
            row: Some(row),
            status: CellStatus::Ok,
        },
        Err(e) => SidebandCell {
            ratio: ratios[i],
            row: None,
            status: CellStatus::Failed(e.to_string()),
        },
    })
}
