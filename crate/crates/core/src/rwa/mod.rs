//! Linear scattering of the dual-block network in the rotating-wave
//! approximation.
//!
//! Mode order is `(c1, c2, b1, b2)` for the eliminated model and
//! `(c1, c2, b1, b2, d1, d2)` before the auxiliary modes are eliminated.
//! Frequencies are measured from the rotating frame, in the same units as
//! the rates (usually `kappa1 = 1`).

mod design;
mod metrics;

pub use design::{optimal_design, optimal_jm, optimize_asymmetric, AsymmetricDesign, Design, OptimalJm};
pub use metrics::{
    default_grid, metrics, metrics_from_spectrum, spectrum, spectrum_analytic, Metrics, Spectrum, ISOLATION_CAP_DB,
    MIN_CONTRAST,
};

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{inverse_checked, sandwich, shifted, CMatrix};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RwaError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("singular response at omega = {omega}: condition number {condition:e}")]
    SingularResponse { omega: f64, condition: f64 },
    #[error("no contrast peak: max T+ - T- = {max_contrast:e}")]
    NoContrastPeak { max_contrast: f64 },
    #[error("optimal Jm sits on the search boundary at {jm}")]
    NoInteriorMaximum { jm: f64 },
}

/// Dual-block network parameters. The effective mechanical damping
/// `Gamma_i = gamma_i + 4 Gd_i^2 / kappad_i` is always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    pub kappa1: f64,
    pub kappa2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gd1: f64,
    pub gd2: f64,
    pub kappad1: f64,
    pub kappad2: f64,
    pub j0: f64,
    pub jm: f64,
    pub g1: f64,
    pub g2: f64,
    pub theta: f64,
}

/// Intrinsic mechanical damping as a fraction of a target effective damping.
pub const INTRINSIC_FRACTION: f64 = 0.01;

impl NetworkParams {
    /// All couplings off, unit optical decay.
    pub fn uncoupled(kappa: f64) -> Self {
        Self {
            kappa1: kappa,
            kappa2: kappa,
            gamma1: 0.0,
            gamma2: 0.0,
            gd1: 0.0,
            gd2: 0.0,
            kappad1: 0.0,
            kappad2: 0.0,
            j0: 0.0,
            jm: 0.0,
            g1: 0.0,
            g2: 0.0,
            theta: FRAC_PI_2,
        }
    }

    /// Sets `gamma_i = Gamma_i / 100` and back-solves `Gd_i` so that the
    /// effective damping equals the targets with auxiliary decay `kappad`.
    pub fn with_effective_damping(mut self, big_gamma1: f64, big_gamma2: f64, kappad: f64) -> Self {
        let split = |big: f64| {
            let gamma = INTRINSIC_FRACTION * big;
            (gamma, ((big - gamma) * kappad / 4.0).max(0.0).sqrt())
        };
        (self.gamma1, self.gd1) = split(big_gamma1);
        (self.gamma2, self.gd2) = split(big_gamma2);
        self.kappad1 = kappad;
        self.kappad2 = kappad;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn big_gamma1(&self) -> f64 {
        effective_damping(self.gamma1, self.gd1, self.kappad1)
    }

    pub fn big_gamma2(&self) -> f64 {
        effective_damping(self.gamma2, self.gd2, self.kappad2)
    }

    /// `kappad_i >= 10 max(Gd_i, gamma_i)` on both blocks.
    pub fn elimination_valid(&self) -> bool {
        self.kappad1 >= 10.0 * self.gd1.max(self.gamma1) && self.kappad2 >= 10.0 * self.gd2.max(self.gamma2)
    }

    pub fn validate(&self) -> Result<(), RwaError> {
        let fields = [
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("Gd1", self.gd1),
            ("Gd2", self.gd2),
            ("kappad1", self.kappad1),
            ("kappad2", self.kappad2),
            ("J0", self.j0),
            ("Jm", self.jm),
            ("G1", self.g1),
            ("G2", self.g2),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v >= 0.0) {
                return Err(RwaError::InvalidParameter {
                    name,
                    reason: format!("must be finite and >= 0, got {v}"),
                });
            }
        }
        for (name, v) in [("kappa1", self.kappa1), ("kappa2", self.kappa2)] {
            if v <= 0.0 {
                return Err(RwaError::InvalidParameter {
                    name,
                    reason: "must be > 0".into(),
                });
            }
        }
        for (name, gd, kd) in [("kappad1", self.gd1, self.kappad1), ("kappad2", self.gd2, self.kappad2)] {
            if gd > 0.0 && kd <= 0.0 {
                return Err(RwaError::InvalidParameter {
                    name,
                    reason: "must be > 0 when the auxiliary coupling is on".into(),
                });
            }
        }
        if !self.theta.is_finite() {
            return Err(RwaError::InvalidParameter {
                name: "theta",
                reason: "must be finite".into(),
            });
        }
        Ok(())
    }
}

pub(crate) fn effective_damping(gamma: f64, gd: f64, kappad: f64) -> f64 {
    if gd == 0.0 {
        gamma
    } else {
        gamma + 4.0 * gd * gd / kappad
    }
}

/// Drift, input and auxiliary-noise matrices of the eliminated model:
/// `d/dt v = -M v + L v_in + N d_in`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrices {
    pub m: CMatrix,
    pub l: Vec<f64>,
    pub n: CMatrix,
}

pub fn build_matrices(p: &NetworkParams) -> Matrices {
    let phase = Complex64::from_polar(1.0, p.theta);
    let c = |v: f64| Complex64::new(v, 0.0);
    let ic = |v: f64| I * v;
    #[rustfmt::skip]
    let m = CMatrix::from_row_slice(4, 4, &[
        c(p.kappa1 / 2.0), ic(p.j0),           ic(p.g1),                 c(0.0),
        ic(p.j0),          c(p.kappa2 / 2.0),  c(0.0),                   ic(p.g2) * phase.conj(),
        ic(p.g1),          c(0.0),             c(p.big_gamma1() / 2.0),  ic(p.jm),
        c(0.0),            ic(p.g2) * phase,   ic(p.jm),                 c(p.big_gamma2() / 2.0),
    ]);
    let l = vec![p.kappa1.sqrt(), p.kappa2.sqrt(), p.gamma1.sqrt(), p.gamma2.sqrt()];
    let mut n = CMatrix::zeros(4, 2);
    if p.gd1 > 0.0 {
        n[(2, 0)] = -2.0 * I * p.gd1 / p.kappad1.sqrt();
    }
    if p.gd2 > 0.0 {
        n[(3, 1)] = -2.0 * I * p.gd2 / p.kappad2.sqrt();
    }
    Matrices { m, l, n }
}

/// Drift and input matrices before the auxiliary modes are eliminated.
pub fn build_matrices_6(p: &NetworkParams) -> (CMatrix, Vec<f64>) {
    let phase = Complex64::from_polar(1.0, p.theta);
    let c = |v: f64| Complex64::new(v, 0.0);
    let ic = |v: f64| I * v;
    let z = c(0.0);
    #[rustfmt::skip]
    let m = CMatrix::from_row_slice(6, 6, &[
        c(p.kappa1 / 2.0), ic(p.j0),          ic(p.g1),           z,                        z,                  z,
        ic(p.j0),          c(p.kappa2 / 2.0), z,                  ic(p.g2) * phase.conj(),  z,                  z,
        ic(p.g1),          z,                 c(p.gamma1 / 2.0),  ic(p.jm),                 ic(p.gd1),          z,
        z,                 ic(p.g2) * phase,  ic(p.jm),           c(p.gamma2 / 2.0),        z,                  ic(p.gd2),
        z,                 z,                 ic(p.gd1),          z,                        c(p.kappad1 / 2.0), z,
        z,                 z,                 z,                  ic(p.gd2),                z,                  c(p.kappad2 / 2.0),
    ]);
    let l = [p.kappa1, p.kappa2, p.gamma1, p.gamma2, p.kappad1, p.kappad2]
        .iter()
        .map(|v| v.sqrt())
        .collect();
    (m, l)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterResult {
    pub omega: f64,
    /// Port-to-port amplitudes over `(c1, c2, b1, b2)`.
    pub u: CMatrix,
    /// Auxiliary-bath amplitudes over `(d1, d2)`.
    pub r: CMatrix,
    pub t_plus: f64,
    pub t_minus: f64,
    pub condition: f64,
}

impl ScatterResult {
    /// `sum_w |U_vw|^2 + sum_k |R_vk|^2` for output row `v`.
    pub fn row_flux(&self, v: usize) -> f64 {
        self.u.row(v).iter().map(|z| z.norm_sqr()).sum::<f64>() + self.r.row(v).iter().map(|z| z.norm_sqr()).sum::<f64>()
    }
}

fn diag_input(l: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        l.len(),
        l.iter().map(|v| Complex64::new(*v, 0.0)),
    ))
}

/// `U = L (M - i w)^{-1} L - I` and `R = L (M - i w)^{-1} N`.
pub fn scattering_matrix(p: &NetworkParams, omega: f64) -> Result<ScatterResult, RwaError> {
    p.validate()?;
    let mats = build_matrices(p);
    let (inv, condition) = inverse_checked(&shifted(&mats.m, omega))
        .map_err(|s| RwaError::SingularResponse { omega, condition: s.condition })?;
    let mut u = sandwich(&mats.l, &inv, &diag_input(&mats.l));
    for i in 0..4 {
        u[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    let r = sandwich(&mats.l, &inv, &mats.n);
    Ok(ScatterResult {
        omega,
        t_plus: u[(1, 0)].norm_sqr(),
        t_minus: u[(0, 1)].norm_sqr(),
        u,
        r,
        condition,
    })
}

/// Scattering of the un-eliminated model; every damping channel is a port,
/// so `U` is unitary.
pub fn scattering_matrix_6(p: &NetworkParams, omega: f64) -> Result<(CMatrix, f64, f64), RwaError> {
    p.validate()?;
    let (m, l) = build_matrices_6(p);
    let (inv, _) =
        inverse_checked(&shifted(&m, omega)).map_err(|s| RwaError::SingularResponse { omega, condition: s.condition })?;
    let mut u = sandwich(&l, &inv, &diag_input(&l));
    for i in 0..6 {
        u[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    let (tp, tm) = (u[(1, 0)].norm_sqr(), u[(0, 1)].norm_sqr());
    Ok((u, tp, tm))
}

/// Closed-form `(T+, T-)` from the cofactor expansion of the eliminated
/// model; the numerator carries the mechanical susceptibilities.
pub fn analytic_tpm(p: &NetworkParams, omega: f64) -> (f64, f64) {
    let w = Complex64::new(0.0, omega);
    let zeta1 = p.kappa1 / 2.0 - w;
    let zeta2 = p.kappa2 / 2.0 - w;
    let chi1 = p.big_gamma1() / 2.0 - w;
    let chi2 = p.big_gamma2() / 2.0 - w;
    let (g1, g2, j0, jm) = (p.g1, p.g2, p.j0, p.jm);

    let det = j0 * j0 * jm * jm + g1 * g1 * g2 * g2 - 2.0 * j0 * jm * g1 * g2 * p.theta.cos()
        + g2 * g2 * zeta1 * chi1
        + g1 * g1 * zeta2 * chi2
        + j0 * j0 * chi1 * chi2
        + jm * jm * zeta1 * zeta2
        + zeta1 * zeta2 * chi1 * chi2;
    let common = j0 * (jm * jm + chi1 * chi2);
    let loop_gain = g1 * g2 * jm;
    let scale = (p.kappa1 * p.kappa2).sqrt();
    let plus = scale * (loop_gain * Complex64::from_polar(1.0, -p.theta) - common) / det;
    let minus = scale * (loop_gain * Complex64::from_polar(1.0, p.theta) - common) / det;
    (plus.norm_sqr(), minus.norm_sqr())
}

/// Largest `|T+-(eliminated) - T+-(6-mode)|` over the grid.
pub fn elimination_error(p: &NetworkParams, omegas: &[f64]) -> Result<f64, RwaError> {
    let mut worst: f64 = 0.0;
    for &w in omegas {
        let four = scattering_matrix(p, w)?;
        let (_, tp6, tm6) = scattering_matrix_6(p, w)?;
        worst = worst.max((four.t_plus - tp6).abs()).max((four.t_minus - tm6).abs());
    }
    Ok(worst)
}
