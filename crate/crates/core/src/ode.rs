//! Dormand–Prince 5(4) integrator with Hairer's continuous extension.
//!
//! The state is a fixed-size `[f64; N]`; the classical block only ever needs
//! six real coordinates, so heap-free stages keep the inner loop tight.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("state diverged at t = {t}: |y| = {magnitude:e} exceeds bound {bound:e}")]
    Divergence { t: f64, magnitude: f64, bound: f64 },
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("non-finite derivative at t = {t}")]
    NonFinite { t: f64 },
}

/// Step-control and safety settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Any component magnitude above this aborts with [`OdeError::Divergence`].
    pub bound: f64,
    /// Upper limit on the step size; `None` lets the controller decide.
    pub h_max: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            bound: 1e6,
            h_max: None,
        }
    }
}

/// Counters reported after a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: u64,
    pub rejected: u64,
    pub evaluations: u64,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Interpolant over one accepted step, valid for `t in [t0, t0 + h]`.
struct Dense<const N: usize> {
    t0: f64,
    h: f64,
    r: [[f64; N]; 5],
}

impl<const N: usize> Dense<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = self.r[0][i]
                + s * (self.r[1][i]
                    + s1 * (self.r[2][i] + s * (self.r[3][i] + s1 * self.r[4][i])));
        }
        out
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

fn max_abs<const N: usize>(y: &[f64; N]) -> f64 {
    y.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Adaptive Dormand–Prince 5(4) solver.
#[derive(Debug, Clone, Default)]
pub struct Dopri5 {
    pub options: OdeOptions,
    pub stats: OdeStats,
}

impl Dopri5 {
    pub fn new(options: OdeOptions) -> Self {
        Self {
            options,
            stats: OdeStats::default(),
        }
    }

    fn initial_step<const N: usize, F>(&mut self, f: &F, t0: f64, y0: &[f64; N], k0: &[f64; N], span: f64) -> f64
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let OdeOptions { rtol, atol, .. } = self.options;
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..N {
            let sc = atol + rtol * y0[i].abs();
            d0 += (y0[i] / sc).powi(2);
            d1 += (k0[i] / sc).powi(2);
        }
        d0 = (d0 / N as f64).sqrt();
        d1 = (d1 / N as f64).sqrt();
        let mut h0 = if d0 < 1e-10 || d1 < 1e-10 { 1e-6 } else { 0.01 * d0 / d1 };
        h0 = h0.min(span);
        let y1 = axpy(y0, h0, &[(1.0, k0)]);
        let k1 = f(t0 + h0, &y1);
        self.stats.evaluations += 1;
        let mut d2 = 0.0;
        for i in 0..N {
            let sc = atol + rtol * y0[i].abs();
            d2 += ((k1[i] - k0[i]) / sc).powi(2);
        }
        d2 = (d2 / N as f64).sqrt() / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(span)
    }

    /// Integrates from `(t0, y0)` to `t1`, calling `emit(i, y)` for every
    /// sample time `i * dt_out` with `i >= first_sample` lying in
    /// `(t0, t1]`. Returns the state at `t1` and the next unemitted index.
    pub fn integrate<const N: usize, F, E>(
        &mut self,
        f: F,
        t0: f64,
        y0: [f64; N],
        t1: f64,
        dt_out: f64,
        first_sample: u64,
        mut emit: E,
    ) -> Result<([f64; N], u64), OdeError>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
        E: FnMut(u64, f64, &[f64; N]),
    {
        let OdeOptions {
            rtol,
            atol,
            bound,
            h_max,
        } = self.options;
        let span = t1 - t0;
        let mut next = first_sample;
        if span <= 0.0 {
            return Ok((y0, next));
        }
        let h_max = h_max.unwrap_or(span).min(span);

        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y);
        self.stats.evaluations += 1;
        let mut h = self.initial_step(&f, t0, &y0, &k1, span).min(h_max);

        loop {
            if t + h >= t1 || t + 1.01 * h >= t1 {
                h = t1 - t;
            }
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(OdeError::StepSizeUnderflow { t, h });
            }

            let y2 = axpy(&y, h, &[(A21, &k1)]);
            let k2 = f(t + C2 * h, &y2);
            let y3 = axpy(&y, h, &[(A31, &k1), (A32, &k2)]);
            let k3 = f(t + C3 * h, &y3);
            let y4 = axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            let k4 = f(t + C4 * h, &y4);
            let y5 = axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            let k5 = f(t + C5 * h, &y5);
            let y6 = axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
            let k6 = f(t + h, &y6);
            let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(t + h, &y_new);
            self.stats.evaluations += 6;

            if k7.iter().any(|v| !v.is_finite()) {
                return Err(OdeError::NonFinite { t: t + h });
            }

            let mut err = 0.0;
            for i in 0..N {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = atol + rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
            }
            err = (err / N as f64).sqrt();

            if err <= 1.0 {
                let t_new = if h == t1 - t { t1 } else { t + h };
                let magnitude = max_abs(&y_new);
                if magnitude > bound {
                    return Err(OdeError::Divergence {
                        t: t_new,
                        magnitude,
                        bound,
                    });
                }
                self.stats.accepted += 1;

                let mut ydiff = [0.0; N];
                let mut bspl = [0.0; N];
                let mut r4 = [0.0; N];
                let mut r5 = [0.0; N];
                for i in 0..N {
                    ydiff[i] = y_new[i] - y[i];
                    bspl[i] = h * k1[i] - ydiff[i];
                    r4[i] = ydiff[i] - h * k7[i] - bspl[i];
                    r5[i] = h
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                }
                let dense = Dense {
                    t0: t,
                    h,
                    r: [y, ydiff, bspl, r4, r5],
                };
                loop {
                    let ts = next as f64 * dt_out;
                    if ts > t_new {
                        break;
                    }
                    if ts > t {
                        let ys = if ts == t_new { y_new } else { dense.eval(ts) };
                        emit(next, ts, &ys);
                    }
                    next += 1;
                }

                t = t_new;
                y = y_new;
                k1 = k7;
                if t >= t1 {
                    return Ok((y, next));
                }
                let fac = if err == 0.0 { 10.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 10.0) };
                h = (h * fac).min(h_max);
            } else {
                self.stats.rejected += 1;
                let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                h *= fac;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_matches_closed_form() {
        let mut solver = Dopri5::new(OdeOptions::default());
        let mut samples = Vec::new();
        let (y, next) = solver
            .integrate(
                |_, y: &[f64; 2]| [y[1], -y[0]],
                0.0,
                [1.0, 0.0],
                20.0,
                0.5,
                1,
                |_, t, y| samples.push((t, *y)),
            )
            .unwrap();
        assert_eq!(samples.len(), 40);
        assert_eq!(next, 41);
        assert!((y[0] - 20.0_f64.cos()).abs() < 1e-8);
        for (t, s) in samples {
            assert!((s[0] - t.cos()).abs() < 1e-8, "t={t}");
            assert!((s[1] + t.sin()).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn exponential_growth_is_caught() {
        let mut solver = Dopri5::new(OdeOptions {
            bound: 1e3,
            ..OdeOptions::default()
        });
        let err = solver
            .integrate(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], 100.0, 1.0, 1, |_, _, _| {})
            .unwrap_err();
        assert!(matches!(err, OdeError::Divergence { .. }));
    }

    #[test]
    fn dense_output_is_fifth_order_accurate_between_steps() {
        // Few large steps; dense samples at many interior points.
        let mut solver = Dopri5::new(OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            ..OdeOptions::default()
        });
        let mut worst: f64 = 0.0;
        solver
            .integrate(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 5.0, 0.01, 1, |_, t, y| {
                worst = worst.max((y[0] - (-t).exp()).abs());
            })
            .unwrap();
        assert!(worst < 1e-9, "worst {worst}");
    }
}
