//! Subcommand implementations: config in, table out.

use thiserror::Error;
use trimode_core::classical::{
    self, fixed_points, integrate_with, ClassicalParams, Direction, ForcingProtocol, IntegrationConfig,
};
use trimode_core::full::{self, FullError, SidebandConditions};
use trimode_core::ode::OdeOptions;
use trimode_core::rwa::{self, NetworkParams, RwaError};
use trimode_core::sweep::{self, Axis, SweepSpec, SweepTask, SweepOptions};

use crate::config::{classical_validation, Command, ConfigError, RunConfig};
use crate::table::{Cell, Table};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{operation} failed ({context}): {message}")]
    Numerical {
        operation: &'static str,
        context: String,
        message: String,
    },
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// 1 for invalid input, 2 for numerical or I/O failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            RunError::Numerical { .. } | RunError::Io(_) => 2,
        }
    }
}

fn numerical(operation: &'static str, context: String, e: impl ToString) -> RunError {
    RunError::Numerical {
        operation,
        context,
        message: e.to_string(),
    }
}

fn rwa_error(operation: &'static str, context: String, e: RwaError) -> RunError {
    match e {
        RwaError::InvalidParameter { name, reason } => ConfigError::validation(name, reason).into(),
        e => numerical(operation, context, e),
    }
}

fn full_error(operation: &'static str, context: String, e: FullError) -> RunError {
    match e {
        FullError::InvalidParameter { name, reason } => ConfigError::validation(name, reason).into(),
        FullError::Network(e) => rwa_error(operation, context, e),
        e => numerical(operation, context, e),
    }
}

fn classical_ctx(p: &ClassicalParams) -> String {
    format!(
        "P = {}, Delta = {}, kappa = {}, gamma = {}, direction = {}",
        p.power,
        p.delta,
        p.kappa,
        p.gamma,
        p.direction.label()
    )
}

fn axis(cfg: &RunConfig, name: &str) -> Result<Axis, ConfigError> {
    let start = cfg.number(&format!("{name}_min"))?;
    let stop = cfg.number(&format!("{name}_max"))?;
    let points = cfg.count(&format!("{name}_points"))?;
    Ok(Axis {
        name: name.to_string(),
        start,
        stop,
        points,
        spacing: cfg.spacing(&format!("{name}_spacing"))?,
    })
}

fn checked_spec(task: SweepTask, axes: Vec<Axis>) -> Result<SweepSpec, ConfigError> {
    let spec = SweepSpec { task, axes };
    for a in &spec.axes {
        a.validate().map_err(|e| ConfigError::validation(&format!("{}_points", a.name), e.to_string()))?;
    }
    spec.validate().map_err(|e| ConfigError::validation("command", e.to_string()))?;
    Ok(spec)
}

fn uniform(cfg: &RunConfig, lo: &str, hi: &str) -> Result<Vec<f64>, ConfigError> {
    let (a, b) = (cfg.number(lo)?, cfg.number(hi)?);
    let n = cfg.count("omega_points")?;
    if !(b > a) || n < 2 {
        return Err(ConfigError::validation(hi, format!("need {lo} < {hi} and at least two points")));
    }
    Ok(Axis::linear("omega", a, b, n).values())
}

/// Adds `w` to a sorted grid unless it is outside or already present.
fn with_point(mut grid: Vec<f64>, w: f64) -> Vec<f64> {
    if w >= grid[0] && w <= grid[grid.len() - 1] && !grid.contains(&w) {
        let at = grid.partition_point(|x| *x < w);
        grid.insert(at, w);
    }
    grid
}

pub fn execute(cfg: &RunConfig, opts: &SweepOptions) -> Result<Table, RunError> {
    let command = cfg.command.ok_or_else(|| ConfigError::validation("command", "required"))?;
    match command {
        Command::DynamicsRun => dynamics_run(cfg),
        Command::DynamicsFixedPoints => dynamics_fixed_points(cfg),
        Command::DynamicsRegions => dynamics_regions(cfg, opts),
        Command::DynamicsHopf => dynamics_hopf(cfg, opts),
        Command::DynamicsRay => dynamics_ray(cfg, opts),
        Command::ScatterSpectrum => scatter_spectrum(cfg),
        Command::ScatterOptimize => scatter_optimize(cfg),
        Command::ScatterGammaSweep => scatter_gamma_sweep(cfg, opts),
        Command::ScatterAsymMap => scatter_asym_map(cfg, opts),
        Command::FullSpectrum => full_spectrum(cfg),
        Command::FullSidebandSweep => full_sideband_sweep(cfg, opts),
    }
}

// ------------------------------------------------------------- dynamics

fn dynamics_run(cfg: &RunConfig) -> Result<Table, RunError> {
    let p = cfg.classical_params()?;
    let mut forcing = match cfg.word("forcing")? {
        "none" => ForcingProtocol::none(),
        _ => ForcingProtocol::for_operating_point(&p),
    };
    if forcing.amplitude != 0.0 {
        forcing.ramp = cfg.number("ramp")?;
    }
    let config = IntegrationConfig {
        ode: OdeOptions {
            rtol: cfg.number("rtol")?,
            atol: cfg.number("atol")?,
            ..OdeOptions::default()
        },
        record_from: cfg.number("record_from")?,
    };
    let traj = integrate_with(&p, &forcing, cfg.number("t_end")?, cfg.number("dt_out")?, &config)
        .map_err(|e| match e {
            classical::ClassicalError::Integration(_) => numerical("dynamics run", classical_ctx(&p), e),
            e => classical_validation(e).into(),
        })?;
    let mut t = Table::new(&["t", "re_a1", "im_a1", "re_a2", "im_a2", "X", "V", "T_fwd", "T_bwd_applicable"]);
    for (time, (s, tr)) in traj.times.iter().zip(traj.states.iter().zip(traj.transmission())) {
        let (fwd, bwd) = match p.direction {
            Direction::Forward => (Cell::Num(tr), Cell::Empty),
            Direction::Backward => (Cell::Empty, Cell::Num(tr)),
        };
        t.push(vec![
            Cell::Num(*time),
            Cell::Num(s.alpha1.re),
            Cell::Num(s.alpha1.im),
            Cell::Num(s.alpha2.re),
            Cell::Num(s.alpha2.im),
            Cell::Num(s.x),
            Cell::Num(s.v),
            fwd,
            bwd,
        ]);
    }
    Ok(t)
}

fn dynamics_fixed_points(cfg: &RunConfig) -> Result<Table, RunError> {
    let p = cfg.classical_params()?;
    let mut t = Table::new(&[
        "branch",
        "X",
        "re_a1",
        "im_a1",
        "re_a2",
        "im_a2",
        "stability",
        "max_re_lambda",
        "T",
        "coincident_with_X0",
    ]);
    for fp in fixed_points(&p) {
        t.push(vec![
            Cell::text(fp.branch.label()),
            Cell::Num(fp.x),
            Cell::Num(fp.alpha1.re),
            Cell::Num(fp.alpha1.im),
            Cell::Num(fp.alpha2.re),
            Cell::Num(fp.alpha2.im),
            Cell::text(fp.stability.label()),
            Cell::Num(fp.max_real_part()),
            Cell::Num(classical::transmission(&fp.state(), &p)),
            Cell::Bool(fp.coincident_with_x0),
        ]);
    }
    Ok(t)
}

fn map_rates(cfg: &RunConfig) -> Result<(f64, f64, Direction), RunError> {
    let (kappa, gamma, dir) = (cfg.number("kappa")?, cfg.number("gamma")?, cfg.direction()?);
    // Probe validity once so that bad rates exit as configuration errors.
    ClassicalParams::new(0.0, 1.0, kappa, gamma, dir).map_err(classical_validation)?;
    Ok((kappa, gamma, dir))
}

fn dynamics_regions(cfg: &RunConfig, opts: &SweepOptions) -> Result<Table, RunError> {
    let (kappa, gamma, dir) = map_rates(cfg)?;
    let spec = checked_spec(SweepTask::RegionMap, vec![axis(cfg, "P")?, axis(cfg, "Delta")?])?;
    let cells = sweep::region_map(&spec.axes[0], &spec.axes[1], kappa, gamma, dir, opts)
        .map_err(|e| numerical("dynamics regions", format!("kappa = {kappa}, gamma = {gamma}"), e))?;
    let mut t = Table::new(&["P", "Delta", "region", "hopf_crossed", "T_upper", "status"]);
    for c in cells {
        t.push(vec![
            Cell::Num(c.p),
            Cell::Num(c.delta),
            c.region.map_or(Cell::Empty, |r| Cell::text(r.label())),
            c.hopf_crossed.map_or(Cell::Empty, Cell::Bool),
            Cell::opt(c.upper_transmission),
            Cell::text(c.status.label()),
        ]);
    }
    Ok(t)
}

fn dynamics_hopf(cfg: &RunConfig, opts: &SweepOptions) -> Result<Table, RunError> {
    let (kappa, gamma, dir) = map_rates(cfg)?;
    let spec = checked_spec(SweepTask::HopfTrace, vec![axis(cfg, "Delta")?])?;
    let p_max = cfg.number("P_max")?;
    let rows = sweep::hopf_curve(&spec.axes[0], kappa, gamma, dir, p_max, opts)
        .map_err(|e| numerical("dynamics hopf", format!("kappa = {kappa}, gamma = {gamma}"), e))?;
    let mut t = Table::new(&["Delta", "P_hopf", "status"]);
    for r in rows {
        t.push(vec![Cell::Num(r.delta), Cell::opt(r.p_hopf), Cell::text(r.status.label())]);
    }
    Ok(t)
}

fn dynamics_ray(cfg: &RunConfig, opts: &SweepOptions) -> Result<Table, RunError> {
    let p_axis = axis(cfg, "P")?;
    p_axis
        .validate()
        .map_err(|e| ConfigError::validation("P_points", e.to_string()))?;
    let powers = p_axis.values();
    let base = ClassicalParams::new(
        powers[0],
        cfg.number("Delta")?,
        cfg.number("kappa")?,
        cfg.number("gamma")?,
        cfg.direction()?,
    )
    .map_err(classical_validation)?;
    let ray = sweep::steady_ray(&base, &powers, cfg.number("t_end")?, cfg.number("dt_out")?, opts);
    let mut t = Table::new(&["P", "state", "period", "T_mean", "status"]);
    for r in ray {
        t.push(vec![
            Cell::Num(r.p),
            r.state.map_or(Cell::Empty, |s| Cell::text(s.label())),
            Cell::opt(r.state.and_then(|s| s.period())),
            Cell::Num(r.mean_transmission),
            Cell::text(r.status.label()),
        ]);
    }
    Ok(t)
}

// ----------------------------------------------------------- scattering

/// `Gamma1`/`Gamma2` if either is given (missing one falls back to `Gamma`).
fn asymmetric_gammas(cfg: &RunConfig) -> Result<Option<(f64, f64)>, ConfigError> {
    if !(cfg.has("Gamma1") || cfg.has("Gamma2")) {
        return Ok(None);
    }
    let g = cfg.number("Gamma")?;
    let pick = |k: &str| if cfg.has(k) { cfg.number(k) } else { Ok(g) };
    Ok(Some((pick("Gamma1")?, pick("Gamma2")?)))
}

/// Designed network and its working frequency.
fn designed_network(cfg: &RunConfig, op: &'static str) -> Result<(NetworkParams, f64), RunError> {
    let kappa = cfg.number("kappa")?;
    let kappad = cfg.number("kappad")?;
    let ctx = || format!("kappa = {kappa}, kappad = {kappad}");
    if let Some((g1, g2)) = asymmetric_gammas(cfg)? {
        if cfg.number_or_auto("Jm")?.is_some() && cfg.command == Some(Command::ScatterOptimize) {
            return Err(ConfigError::validation("Jm", "chosen by the optimiser when Gamma1/Gamma2 are set").into());
        }
        let d = rwa::optimize_asymmetric(g1, g2, kappa).map_err(|e| rwa_error(op, ctx(), e))?;
        return Ok((d.params(kappad), d.omega_star));
    }
    let gamma = cfg.number("Gamma")?;
    let jm = match cfg.number_or_auto("Jm")? {
        Some(j) => j,
        None => rwa::optimal_jm(gamma, kappa).map_err(|e| rwa_error(op, ctx(), e))?.jm,
    };
    let d = rwa::optimal_design(gamma, kappa, jm).map_err(|e| rwa_error(op, ctx(), e))?;
    Ok((d.params(kappad), d.omega_opt))
}

fn scatter_spectrum(cfg: &RunConfig) -> Result<Table, RunError> {
    let op = "scatter spectrum";
    let theta = cfg.theta("theta")?;
    let mut grid = uniform(cfg, "omega_min", "omega_max")?;
    let p = match cfg.word("design")? {
        "manual" => {
            let kappa = cfg.number("kappa")?;
            let (g1, g2) = asymmetric_gammas(cfg)?.unwrap_or((cfg.number("Gamma")?, cfg.number("Gamma")?));
            let jm = cfg
                .number_or_auto("Jm")?
                .ok_or_else(|| ConfigError::validation("Jm", "manual design needs a number"))?;
            NetworkParams {
                j0: cfg.number("J0")?,
                jm,
                g1: cfg.number("G1")?,
                g2: cfg.number("G2")?,
                theta,
                ..NetworkParams::uncoupled(kappa)
            }
            .with_effective_damping(g1, g2, cfg.number("kappad")?)
        }
        _ => {
            for k in ["J0", "G1", "G2"] {
                if cfg.has(k) {
                    return Err(ConfigError::validation(k, "only used with design = manual").into());
                }
            }
            let (p, w) = designed_network(cfg, op)?;
            grid = with_point(grid, w);
            p.with_theta(theta)
        }
    };
    p.validate().map_err(|e| rwa_error(op, String::new(), e))?;
    let s = rwa::spectrum(&p, &grid).map_err(|e| rwa_error(op, format!("{p:?}"), e))?;
    let mut t = Table::new(&["omega", "T_plus", "T_minus", "contrast"]);
    for i in 0..s.len() {
        t.push(vec![
            Cell::Num(s.omega[i]),
            Cell::Num(s.t_plus[i]),
            Cell::Num(s.t_minus[i]),
            Cell::Num(s.contrast[i]),
        ]);
    }
    Ok(t)
}

const DESIGN_COLUMNS: &[&str] = &[
    "Gamma1",
    "Gamma2",
    "G1",
    "G2",
    "J0",
    "Jm",
    "omega_star",
    "T_plus",
    "T_minus",
    "IL_dB",
    "isolation_dB",
    "bandwidth",
];

fn metric_cells(m: Option<&rwa::Metrics>) -> Vec<Cell> {
    match m {
        Some(m) => vec![
            Cell::Num(m.omega_star),
            Cell::Num(m.t_plus),
            Cell::Num(m.t_minus),
            Cell::Num(m.insertion_loss_db),
            Cell::Num(m.isolation_db),
            Cell::Num(m.bandwidth),
        ],
        None => vec![Cell::Empty; 6],
    }
}

fn scatter_optimize(cfg: &RunConfig) -> Result<Table, RunError> {
    let op = "scatter optimize";
    let (p, _) = designed_network(cfg, op)?;
    let m = rwa::metrics(&p).map_err(|e| rwa_error(op, format!("{p:?}"), e))?;
    let mut t = Table::new(DESIGN_COLUMNS);
    let gamma = cfg.number("Gamma")?;
    let (g1, g2) = asymmetric_gammas(cfg)?.unwrap_or((gamma, gamma));
    let mut row = vec![
        Cell::Num(g1),
        Cell::Num(g2),
        Cell::Num(p.g1),
        Cell::Num(p.g2),
        Cell::Num(p.j0),
        Cell::Num(p.jm),
    ];
    row.extend(metric_cells(Some(&m)));
    t.push(row);
    Ok(t)
}

fn scatter_gamma_sweep(cfg: &RunConfig, opts: &SweepOptions) -> Result<Table, RunError> {
    let spec = checked_spec(SweepTask::GammaSweep, vec![axis(cfg, "Gamma")?])?;
    let rows = sweep::gamma_sweep(&spec.axes[0], cfg.number("kappa")?, cfg.number("kappad")?, opts)
        .map_err(|e| numerical("scatter gamma-sweep", String::new(), e))?;
    let mut t = Table::new(&[
        "Gamma",
        "Jm_opt",
        "omega_star",
        "T_plus",
        "T_minus",
        "IL_dB",
        "isolation_dB",
        "bandwidth",
        "status",
    ]);
    for r in rows {
        let mut row = vec![Cell::Num(r.gamma), Cell::opt(Some(r.jm_opt).filter(|j| j.is_finite()))];
        row.extend(metric_cells(r.metrics.as_ref()));
        row.push(Cell::text(r.status.label()));
        t.push(row);
    }
    Ok(t)
}

fn scatter_asym_map(cfg: &RunConfig, opts: &SweepOptions) -> Result<Table, RunError> {
    let spec = checked_spec(SweepTask::AsymMap, vec![axis(cfg, "Gamma1")?, axis(cfg, "Gamma2")?])?;
    let cells = sweep::asym_map(&spec.axes[0], &spec.axes[1], cfg.number("kappa")?, cfg.number("kappad")?, opts)
        .map_err(|e| numerical("scatter asym-map", String::new(), e))?;
    let mut t = Table::new(&[DESIGN_COLUMNS, &["status"]].concat());
    for c in cells {
        let mut row = vec![Cell::Num(c.gamma1), Cell::Num(c.gamma2)];
        match &c.design {
            Some(d) => row.extend([Cell::Num(d.g1), Cell::Num(d.g2), Cell::Num(d.j0), Cell::Num(d.jm)]),
            None => row.extend(vec![Cell::Empty; 4]),
        }
        row.extend(metric_cells(c.metrics.as_ref()));
        row.push(Cell::text(c.status.label()));
        t.push(row);
    }
    Ok(t)
}

// ----------------------------------------------------------------- full

fn conditions(cfg: &RunConfig) -> Result<SidebandConditions, ConfigError> {
    Ok(SidebandConditions {
        kappa: cfg.number("kappa")?,
        gamma: cfg.number("Gamma")?,
        kappad: cfg.number("kappad")?,
    })
}

fn full_spectrum(cfg: &RunConfig) -> Result<Table, RunError> {
    let op = "full spectrum";
    let c = conditions(cfg)?;
    let ratio = cfg.number("ratio")?;
    let ctx = format!("ratio = {ratio}, kappa = {}, Gamma = {}, kappad = {}", c.kappa, c.gamma, c.kappad);
    let (p, w_star) = full::sideband_design(ratio, &c).map_err(|e| full_error(op, ctx.clone(), e))?;
    let offsets = uniform(cfg, "detuning_min", "detuning_max")?;
    let grid = with_point(offsets.iter().map(|d| p.omega_m + d).collect(), w_star);
    let mut t = Table::new(&["omega", "T_fwd", "T_bwd", "S_c1_vac", "S_c2_vac"]);
    for w in grid {
        let pt = full::full_scattering(&p, w).map_err(|e| full_error(op, format!("{ctx}, omega = {w}"), e))?;
        t.push(vec![
            Cell::Num(pt.omega),
            Cell::Num(pt.t_forward),
            Cell::Num(pt.t_backward),
            Cell::Num(pt.s_c1_vac),
            Cell::Num(pt.s_c2_vac),
        ]);
    }
    Ok(t)
}

fn full_sideband_sweep(cfg: &RunConfig, opts: &SweepOptions) -> Result<Table, RunError> {
    let c = conditions(cfg)?;
    let cells = sweep::sideband_sweep(cfg.list("ratios")?, &c, opts);
    let mut t = Table::new(&[
        "ratio",
        "omega",
        "T_fwd",
        "T_bwd",
        "isolation_dB",
        "S_vac",
        "S_c1_vac",
        "S_c2_vac",
        "P2_over_P3",
        "status",
    ]);
    for cell in cells {
        let mut row = vec![Cell::Num(cell.ratio)];
        match cell.row {
            Some(r) => row.extend([
                Cell::Num(r.omega),
                Cell::Num(r.t_forward),
                Cell::Num(r.t_backward),
                Cell::Num(r.isolation_db),
                Cell::Num(r.s_vac),
                Cell::Num(r.s_c1_vac),
                Cell::Num(r.s_c2_vac),
                Cell::Num(r.p2_over_p3),
            ]),
            None => row.extend(vec![Cell::Empty; 8]),
        }
        row.push(Cell::text(cell.status.label()));
        t.push(row);
    }
    Ok(t)
}
