//! Interference-optimal couplings.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{analytic_tpm, NetworkParams, RwaError};

/// Symmetric design point at `theta = pi/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub gamma: f64,
    pub kappa: f64,
    pub jm: f64,
    pub omega_opt: f64,
    pub j0: f64,
    pub g: f64,
}

impl Design {
    /// Full parameter record with the effective damping realised through
    /// auxiliary modes of decay `kappad`.
    pub fn params(&self, kappad: f64) -> NetworkParams {
        NetworkParams {
            g1: self.g,
            g2: self.g,
            j0: self.j0,
            jm: self.jm,
            theta: FRAC_PI_2,
            ..NetworkParams::uncoupled(self.kappa)
        }
        .with_effective_damping(self.gamma, self.gamma, kappad)
    }

    /// Same couplings with the damping applied directly to the mechanics.
    pub(crate) fn bare_params(&self) -> NetworkParams {
        NetworkParams {
            gamma1: self.gamma,
            gamma2: self.gamma,
            g1: self.g,
            g2: self.g,
            j0: self.j0,
            jm: self.jm,
            theta: FRAC_PI_2,
            ..NetworkParams::uncoupled(self.kappa)
        }
    }

    pub fn t_plus(&self) -> f64 {
        analytic_tpm(&self.bare_params(), self.omega_opt).0
    }
}

fn positive(name: &'static str, v: f64) -> Result<(), RwaError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(RwaError::InvalidParameter {
            name,
            reason: format!("must be finite and > 0, got {v}"),
        })
    }
}

/// Frequency, photon hopping and optomechanical coupling that null the
/// backward path and maximise forward transmission for given `Jm`.
pub fn optimal_design(gamma: f64, kappa: f64, jm: f64) -> Result<Design, RwaError> {
    positive("Gamma", gamma)?;
    positive("kappa", kappa)?;
    if !(jm.is_finite() && jm >= 0.0) {
        return Err(RwaError::InvalidParameter {
            name: "Jm",
            reason: format!("must be finite and >= 0, got {jm}"),
        });
    }
    let s = 4.0 * jm * jm + gamma * gamma;
    let root = s.sqrt();
    let g = gamma.sqrt() * (s * (s + kappa * kappa) / (16.0 * jm * jm + 8.0 * gamma * gamma)).powf(0.25);
    Ok(Design {
        gamma,
        kappa,
        jm,
        omega_opt: -0.5 * root,
        j0: 2.0 * g * g * jm / (gamma * root),
        g,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalJm {
    pub jm: f64,
    pub t_plus: f64,
}

/// Golden-section maximisation on `[a, b]`, stopping when the bracket is
/// narrower than `rel_tol` times its midpoint.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, rel_tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > rel_tol * (0.5 * (a + b)).abs().max(f64::MIN_POSITIVE) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

const JM_SCAN: usize = 400;
const JM_FLOOR: f64 = 1e-6;
const JM_CEIL: f64 = 5.0;

/// Phonon hopping maximising `T+(omega_opt)` once the design formulas are
/// substituted, over `Jm in (0, 5 kappa]`.
pub fn optimal_jm(gamma: f64, kappa: f64) -> Result<OptimalJm, RwaError> {
    positive("Gamma", gamma)?;
    positive("kappa", kappa)?;
    let objective = |jm: f64| optimal_design(gamma, kappa, jm).map(|d| d.t_plus()).unwrap_or(f64::NEG_INFINITY);

    // Log pre-scan to bracket the global maximum before refining.
    let (lo, hi) = (JM_FLOOR * kappa, JM_CEIL * kappa);
    let grid: Vec<f64> = (0..JM_SCAN)
        .map(|i| lo * (hi / lo).powf(i as f64 / (JM_SCAN - 1) as f64))
        .collect();
    let best = grid
        .iter()
        .map(|&x| objective(x))
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    if best.0 == 0 || best.0 == JM_SCAN - 1 {
        return Err(RwaError::NoInteriorMaximum { jm: grid[best.0] });
    }
    let (jm, t_plus) = golden_max(objective, grid[best.0 - 1], grid[best.0 + 1], 1e-9);
    Ok(OptimalJm { jm, t_plus })
}

/// Numerically re-optimised couplings for unequal mechanical damping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymmetricDesign {
    pub gamma1: f64,
    pub gamma2: f64,
    pub kappa: f64,
    pub g1: f64,
    pub g2: f64,
    pub j0: f64,
    pub jm: f64,
    /// Contrast peak of the final design.
    pub omega_star: f64,
    pub t_plus: f64,
    pub t_minus: f64,
    pub iterations: usize,
}

impl AsymmetricDesign {
    pub fn params(&self, kappad: f64) -> NetworkParams {
        NetworkParams {
            g1: self.g1,
            g2: self.g2,
            j0: self.j0,
            jm: self.jm,
            theta: FRAC_PI_2,
            ..NetworkParams::uncoupled(self.kappa)
        }
        .with_effective_damping(self.gamma1, self.gamma2, kappad)
    }
}

const PEAK_SCAN: usize = 1601;

/// Argmax of `T+ - T-` over `[-2 kappa, 2 kappa]`, refined by golden
/// section; returns `(omega, T+, T-)`.
pub(crate) fn contrast_peak(p: &NetworkParams) -> (f64, f64, f64) {
    let span = 2.0 * p.kappa1;
    let step = 2.0 * span / (PEAK_SCAN - 1) as f64;
    let contrast = |w: f64| {
        let (tp, tm) = analytic_tpm(p, w);
        tp - tm
    };
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..PEAK_SCAN {
        let v = contrast(-span + i as f64 * step);
        if v > best.1 {
            best = (i, v);
        }
    }
    let w0 = -span + best.0 as f64 * step;
    let (w, _) = golden_max(contrast, w0 - step, w0 + step, 1e-12);
    let (tp, tm) = analytic_tpm(p, w);
    (w, tp, tm)
}

/// Compass search in log-coordinates over `(G1, G2, J0, Jm)` maximising
/// `T+` at the contrast peak, seeded from the symmetric design at the
/// mean damping.
pub fn optimize_asymmetric(gamma1: f64, gamma2: f64, kappa: f64) -> Result<AsymmetricDesign, RwaError> {
    positive("Gamma1", gamma1)?;
    positive("Gamma2", gamma2)?;
    positive("kappa", kappa)?;
    let mean = 0.5 * (gamma1 + gamma2);
    let seed = optimal_design(mean, kappa, optimal_jm(mean, kappa)?.jm)?;

    let build = |x: &[f64; 4]| NetworkParams {
        gamma1,
        gamma2,
        g1: x[0].exp(),
        g2: x[1].exp(),
        j0: x[2].exp(),
        jm: x[3].exp(),
        theta: FRAC_PI_2,
        ..NetworkParams::uncoupled(kappa)
    };
    let score = |x: &[f64; 4]| {
        let (_, tp, tm) = contrast_peak(&build(x));
        tp - tm
    };

    let mut x = [seed.g.ln(), seed.g.ln(), seed.j0.ln(), seed.jm.ln()];
    let mut fx = score(&x);
    let mut step = 0.25;
    let mut iterations = 0;
    while step > 1e-7 && iterations < 20_000 {
        let mut improved = false;
        for k in 0..4 {
            for dir in [1.0, -1.0] {
                let mut y = x;
                y[k] += dir * step;
                let fy = score(&y);
                iterations += 1;
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    let p = build(&x);
    let (omega_star, t_plus, t_minus) = contrast_peak(&p);
    Ok(AsymmetricDesign {
        gamma1,
        gamma2,
        kappa,
        g1: p.g1,
        g2: p.g2,
        j0: p.j0,
        jm: p.jm,
        omega_star,
        t_plus,
        t_minus,
        iterations,
    })
}
