//! The dual-block network with counter-rotating terms.
//!
//! The state is `(c1, c2, b1, b2, d1, d2)` followed by the six conjugate
//! operators. Each mode diagonal carries `+ i omega_m`, so a signal that the
//! rotating-wave model places at `omega` appears here at `omega_m + omega`.
//! The drift matrix has the doubled form `[[A, B], [B*, A*]]` with `A` the
//! beam-splitter block and `B` the counter-rotating block; with every bath
//! treated as a port the scattering matrix is a Bogoliubov transformation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{inverse_checked, sandwich, shifted, CMatrix};
use crate::rwa::{self, NetworkParams, RwaError};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FullError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("singular response at omega = {omega}: condition number {condition:e}")]
    SingularResponse { omega: f64, condition: f64 },
    #[error(transparent)]
    Network(#[from] RwaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullNetworkParams {
    pub net: NetworkParams,
    pub omega_m: f64,
}

impl FullNetworkParams {
    pub fn validate(&self) -> Result<(), FullError> {
        self.net.validate()?;
        if !(self.omega_m.is_finite() && self.omega_m > 0.0) {
            return Err(FullError::InvalidParameter {
                name: "omega_m",
                reason: format!("must be finite and > 0, got {}", self.omega_m),
            });
        }
        Ok(())
    }

    /// `omega_m / kappa1`.
    pub fn sideband_ratio(&self) -> f64 {
        self.omega_m / self.net.kappa1
    }
}

/// Drift matrix and diagonal input couplings over all twelve operators.
pub fn build_full_matrices(p: &FullNetworkParams) -> (CMatrix, Vec<f64>) {
    let n = &p.net;
    let down = Complex64::from_polar(1.0, -n.theta);
    let up = down.conj();
    let z = Complex64::new(0.0, 0.0);
    let d = |rate: f64| Complex64::new(rate / 2.0, p.omega_m);
    let ic = |v: f64| I * v;
    #[rustfmt::skip]
    let a = CMatrix::from_row_slice(6, 6, &[
        d(n.kappa1), ic(n.j0),        ic(n.g1),    z,                z,            z,
        ic(n.j0),    d(n.kappa2),     z,           ic(n.g2) * down,  z,            z,
        ic(n.g1),    z,               d(n.gamma1), ic(n.jm),         ic(n.gd1),    z,
        z,           ic(n.g2) * up,   ic(n.jm),    d(n.gamma2),      z,            ic(n.gd2),
        z,           z,               ic(n.gd1),   z,                d(n.kappad1), z,
        z,           z,               z,           ic(n.gd2),        z,            d(n.kappad2),
    ]);
    // Counter-rotating pairs: c_i b_i, b_i d_i. The phase rides on the
    // same coupling as in the beam-splitter term, so both partners see
    // `e^{-i theta}` on block 2.
    #[rustfmt::skip]
    let b = CMatrix::from_row_slice(6, 6, &[
        z,        z,               ic(n.g1),  z,                z,          z,
        z,        z,               z,         ic(n.g2) * down,  z,          z,
        ic(n.g1), z,               z,         z,                ic(n.gd1),  z,
        z,        ic(n.g2) * down, z,         z,                z,          ic(n.gd2),
        z,        z,               ic(n.gd1), z,                z,          z,
        z,        z,               z,         ic(n.gd2),        z,          z,
    ]);
    let mut m = CMatrix::zeros(12, 12);
    m.view_mut((0, 0), (6, 6)).copy_from(&a);
    m.view_mut((0, 6), (6, 6)).copy_from(&b);
    m.view_mut((6, 0), (6, 6)).copy_from(&b.map(|v| v.conj()));
    m.view_mut((6, 6), (6, 6)).copy_from(&a.map(|v| v.conj()));
    let half: Vec<f64> = [n.kappa1, n.kappa2, n.gamma1, n.gamma2, n.kappad1, n.kappad2]
        .iter()
        .map(|v| v.sqrt())
        .collect();
    let l = half.iter().chain(&half).copied().collect();
    (m, l)
}

/// `U = L (M - i w)^{-1} L - I` over all twelve ports.
pub fn full_u(p: &FullNetworkParams, omega: f64) -> Result<CMatrix, FullError> {
    p.validate()?;
    let (m, l) = build_full_matrices(p);
    let (inv, _) = inverse_checked(&shifted(&m, omega))
        .map_err(|s| FullError::SingularResponse { omega, condition: s.condition })?;
    let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        12,
        l.iter().map(|v| Complex64::new(*v, 0.0)),
    ));
    let mut u = sandwich(&l, &inv, &diag);
    for i in 0..12 {
        u[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    Ok(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpectrumPoint {
    pub omega: f64,
    /// `|U_21|^2 + |U_27|^2`: port 1 into port 2, including the conjugate channel.
    pub t_forward: f64,
    /// `|U_12|^2 + |U_18|^2`.
    pub t_backward: f64,
    /// Vacuum quanta added to output `c1` by the conjugate inputs.
    pub s_c1_vac: f64,
    pub s_c2_vac: f64,
}

impl NoiseSpectrumPoint {
    pub fn from_u(omega: f64, u: &CMatrix) -> Self {
        let vac = |row: usize| (6..12).map(|k| u[(row, k)].norm_sqr()).sum::<f64>();
        Self {
            omega,
            t_forward: u[(1, 0)].norm_sqr() + u[(1, 6)].norm_sqr(),
            t_backward: u[(0, 1)].norm_sqr() + u[(0, 7)].norm_sqr(),
            s_c1_vac: vac(0),
            s_c2_vac: vac(1),
        }
    }

    /// `10 log10(T_fwd / T_bwd)`, capped like the rotating-wave isolation.
    pub fn isolation_db(&self) -> f64 {
        if self.t_backward <= 0.0 {
            return rwa::ISOLATION_CAP_DB;
        }
        (10.0 * (self.t_forward / self.t_backward).log10()).min(rwa::ISOLATION_CAP_DB)
    }
}

pub fn full_scattering(p: &FullNetworkParams, omega: f64) -> Result<NoiseSpectrumPoint, FullError> {
    Ok(NoiseSpectrumPoint::from_u(omega, &full_u(p, omega)?))
}

/// Largest `|sum_{w<6} |U_vw|^2 - sum_{w>=6} |U_vw|^2 - 1|` over the first
/// six output rows.
pub fn bogoliubov_defect(u: &CMatrix) -> f64 {
    (0..6)
        .map(|v| {
            let plus: f64 = (0..6).map(|w| u[(v, w)].norm_sqr()).sum();
            let minus: f64 = (6..12).map(|w| u[(v, w)].norm_sqr()).sum();
            (plus - minus - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Control power of a two-mode scheme, which must drive a cavity detuned
/// by `omega_m`, relative to the resonant three-mode scheme.
pub fn power_ratio(omega_m: f64, kappa: f64) -> f64 {
    let r = omega_m / kappa;
    1.0 + 4.0 * r * r
}

/// Conditions for a sideband-resolution scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidebandConditions {
    pub kappa: f64,
    pub gamma: f64,
    pub kappad: f64,
}

impl Default for SidebandConditions {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            gamma: 1.0 / 25.0,
            kappad: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidebandRow {
    pub ratio: f64,
    pub omega: f64,
    pub t_forward: f64,
    pub t_backward: f64,
    pub isolation_db: f64,
    /// Vacuum noise on the forward output port, `S_c2`.
    pub s_vac: f64,
    pub s_c1_vac: f64,
    pub s_c2_vac: f64,
    pub p2_over_p3: f64,
}

/// Rotating-wave optimal design at the given conditions, placed at
/// `omega_m = ratio * kappa`.
pub fn sideband_design(ratio: f64, c: &SidebandConditions) -> Result<(FullNetworkParams, f64), FullError> {
    if !(ratio.is_finite() && ratio >= 1.0) {
        return Err(FullError::InvalidParameter {
            name: "ratio",
            reason: format!("must be >= 1, got {ratio}"),
        });
    }
    let jm = rwa::optimal_jm(c.gamma, c.kappa)?.jm;
    let design = rwa::optimal_design(c.gamma, c.kappa, jm)?;
    let p = FullNetworkParams {
        net: design.params(c.kappad),
        omega_m: ratio * c.kappa,
    };
    Ok((p, p.omega_m + design.omega_opt))
}

pub fn sideband_point(ratio: f64, c: &SidebandConditions) -> Result<SidebandRow, FullError> {
    let (p, omega) = sideband_design(ratio, c)?;
    let pt = full_scattering(&p, omega)?;
    Ok(SidebandRow {
        ratio,
        omega,
        t_forward: pt.t_forward,
        t_backward: pt.t_backward,
        isolation_db: pt.isolation_db(),
        s_vac: pt.s_c2_vac,
        s_c1_vac: pt.s_c1_vac,
        s_c2_vac: pt.s_c2_vac,
        p2_over_p3: power_ratio(p.omega_m, c.kappa),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig8(ratio: f64) -> (FullNetworkParams, f64) {
        sideband_design(ratio, &SidebandConditions::default()).unwrap()
    }

    #[test]
    fn doubled_structure() {
        let (p, _) = fig8(20.0);
        let (m, l) = build_full_matrices(&p);
        let a = m.view((0, 0), (6, 6)).into_owned();
        let b = m.view((0, 6), (6, 6)).into_owned();
        assert_eq!(m.view((6, 0), (6, 6)), b.map(|v| v.conj()));
        assert_eq!(m.view((6, 6), (6, 6)), a.map(|v| v.conj()));
        assert_eq!(l[..6], l[6..]);
    }

    #[test]
    fn uncoupled_is_diagonal() {
        let p = FullNetworkParams {
            net: NetworkParams {
                gamma1: 0.01,
                gamma2: 0.02,
                ..NetworkParams::uncoupled(1.0)
            },
            omega_m: 20.0,
        };
        let (m, _) = build_full_matrices(&p);
        for i in 0..12 {
            for j in 0..12 {
                if i != j {
                    assert_eq!(m[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
        assert_eq!(m[(0, 0)], Complex64::new(0.5, 20.0));
        assert_eq!(m[(9, 9)], Complex64::new(0.01, -20.0));
    }

    #[test]
    fn bogoliubov_identity_holds() {
        let (p, w0) = fig8(20.0);
        for dw in [-1.0, -0.1, 0.0, 0.05, 0.7] {
            let u = full_u(&p, w0 + dw).unwrap();
            assert!(bogoliubov_defect(&u) < 1e-9, "{}", bogoliubov_defect(&u));
        }
    }

    #[test]
    fn power_ratio_values() {
        assert_eq!(power_ratio(85.0, 1.0), 28901.0);
        assert_eq!(power_ratio(20.0, 1.0), 1601.0);
        assert_eq!(power_ratio(0.0, 1.0), 1.0);
    }

    #[test]
    fn approaches_rotating_wave_limit() {
        let (p, w) = fig8(500.0);
        let full = full_scattering(&p, w).unwrap();
        let (_, tp, tm) = rwa::scattering_matrix_6(&p.net, w - p.omega_m).unwrap();
        assert!((full.t_forward - tp).abs() < 1e-4);
        assert!((full.t_backward - tm).abs() < 1e-4);
        assert!(full.s_c1_vac < 1e-4 && full.s_c2_vac < 1e-5);
    }

    #[test]
    fn rejects_nonpositive_mechanical_frequency() {
        let (mut p, _) = fig8(20.0);
        p.omega_m = 0.0;
        assert!(matches!(full_u(&p, 0.0), Err(FullError::InvalidParameter { name: "omega_m", .. })));
    }
}
