//! Spectra and nonreciprocity figures of merit.

use serde::{Deserialize, Serialize};

use super::design::golden_max;
use super::{analytic_tpm, scattering_matrix, NetworkParams, RwaError};

/// Isolation reported when `T-` underflows.
pub const ISOLATION_CAP_DB: f64 = 200.0;
/// Contrast below this counts as no nonreciprocity.
pub const MIN_CONTRAST: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Spectrum {
    pub omega: Vec<f64>,
    pub t_plus: Vec<f64>,
    pub t_minus: Vec<f64>,
    pub contrast: Vec<f64>,
}

impl Spectrum {
    fn push(&mut self, w: f64, tp: f64, tm: f64) {
        self.omega.push(w);
        self.t_plus.push(tp);
        self.t_minus.push(tm);
        self.contrast.push(tp - tm);
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }
}

/// Spectrum by matrix inversion at every grid point.
pub fn spectrum(p: &NetworkParams, omegas: &[f64]) -> Result<Spectrum, RwaError> {
    let mut s = Spectrum::default();
    for &w in omegas {
        let r = scattering_matrix(p, w)?;
        s.push(w, r.t_plus, r.t_minus);
    }
    Ok(s)
}

/// Spectrum from the closed form.
pub fn spectrum_analytic(p: &NetworkParams, omegas: &[f64]) -> Spectrum {
    let mut s = Spectrum::default();
    for &w in omegas {
        let (tp, tm) = analytic_tpm(p, w);
        s.push(w, tp, tm);
    }
    s
}

/// Uniform 4096 points over `[-2 kappa1, 2 kappa1]`, 2048 over
/// `omega_c +- 10 kappa1`, and 2048 log-spaced offsets within
/// `+- 5 Gamma` of the design frequency `omega_c`.
pub fn default_grid(p: &NetworkParams) -> Vec<f64> {
    let k = p.kappa1;
    let (g1, g2) = (p.big_gamma1(), p.big_gamma2());
    let center = -(p.jm * p.jm + 0.25 * g1 * g2).sqrt();
    let mut grid = Vec::with_capacity(8192);
    grid.extend(linspace(-2.0 * k, 2.0 * k, 4096));
    grid.extend(linspace(center - 10.0 * k, center + 10.0 * k, 2048));
    let width = 5.0 * g1.max(g2);
    if width > 0.0 {
        for i in 0..1024 {
            let off = width * 10f64.powf(-4.0 + 4.0 * i as f64 / 1023.0);
            grid.push(center - off);
            grid.push(center + off);
        }
        grid.push(center);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

pub(crate) fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(move |i| if i == n - 1 { b } else { a + i as f64 * step })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Frequency of the forward contrast peak.
    pub omega_star: f64,
    pub t_plus: f64,
    pub t_minus: f64,
    pub insertion_loss_db: f64,
    pub isolation_db: f64,
    /// Full width at half maximum of the contrast lobe around the peak.
    pub bandwidth: f64,
}

fn isolation_db(tp: f64, tm: f64) -> f64 {
    if tm <= 0.0 {
        return ISOLATION_CAP_DB;
    }
    (10.0 * (tp / tm).log10()).min(ISOLATION_CAP_DB)
}

/// Half-maximum crossings of `contrast` on either side of `peak`, by
/// linear interpolation. Grid edges stand in for missing crossings.
fn fwhm(omega: &[f64], contrast: &[f64], peak: usize, half: f64) -> f64 {
    let cross = |i: usize, j: usize| {
        let (a, b) = (contrast[i] - half, contrast[j] - half);
        omega[i] + (omega[j] - omega[i]) * a / (a - b)
    };
    let mut left = omega[0];
    for i in (0..peak).rev() {
        if contrast[i] < half {
            left = cross(i, i + 1);
            break;
        }
    }
    let mut right = omega[omega.len() - 1];
    for i in peak + 1..omega.len() {
        if contrast[i] < half {
            right = cross(i - 1, i);
            break;
        }
    }
    right - left
}

/// Figures of merit read off a precomputed spectrum.
pub fn metrics_from_spectrum(s: &Spectrum) -> Result<Metrics, RwaError> {
    let (peak, max) = s
        .contrast
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if *v > acc.1 { (i, *v) } else { acc });
    if !(max >= MIN_CONTRAST) {
        return Err(RwaError::NoContrastPeak {
            max_contrast: max.max(0.0),
        });
    }
    let (tp, tm) = (s.t_plus[peak], s.t_minus[peak]);
    Ok(Metrics {
        omega_star: s.omega[peak],
        t_plus: tp,
        t_minus: tm,
        insertion_loss_db: -10.0 * tp.log10(),
        isolation_db: isolation_db(tp, tm),
        bandwidth: fwhm(&s.omega, &s.contrast, peak, 0.5 * max),
    })
}

/// Figures of merit on [`default_grid`], with the peak frequency refined
/// off-grid by golden section.
pub fn metrics(p: &NetworkParams) -> Result<Metrics, RwaError> {
    p.validate()?;
    let grid = default_grid(p);
    let s = spectrum_analytic(p, &grid);
    let coarse = metrics_from_spectrum(&s)?;
    let i = grid.partition_point(|w| *w < coarse.omega_star);
    let (lo, hi) = (grid[i.saturating_sub(1)], grid[(i + 1).min(grid.len() - 1)]);
    let (w, peak) = golden_max(
        |w| {
            let (tp, tm) = analytic_tpm(p, w);
            tp - tm
        },
        lo,
        hi,
        1e-13,
    );
    let (tp, tm) = analytic_tpm(p, w);
    Ok(Metrics {
        omega_star: w,
        t_plus: tp,
        t_minus: tm,
        insertion_loss_db: -10.0 * tp.log10(),
        isolation_db: isolation_db(tp, tm),
        bandwidth: fwhm(&s.omega, &s.contrast, i, 0.5 * peak.max(coarse.t_plus - coarse.t_minus)),
    })
}
