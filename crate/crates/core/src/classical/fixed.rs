use nalgebra::Matrix6;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{discriminant, jacobian, linewidth_term, rhs, ClassicalError, ClassicalParams, ClassicalState, Direction};

/// Eigenvalue real parts within this band of zero are reported as marginal.
pub const STABILITY_MARGIN: f64 = 1e-9;
/// Branches with `X^2` below this are flagged as coincident with `X0`.
pub const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    X0,
    XPlus,
    XMinus,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::X0 => "X0",
            Branch::XPlus => "XPlus",
            Branch::XMinus => "XMinus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stability {
    StableSpiral,
    Saddle,
    /// A complex pair has crossed into the right half-plane (beyond Hopf).
    UnstableSpiral,
    /// The leading real part sits inside the `STABILITY_MARGIN` dead-band.
    Marginal,
}

impl Stability {
    pub fn label(self) -> &'static str {
        match self {
            Stability::StableSpiral => "StableSpiral",
            Stability::Saddle => "Saddle",
            Stability::UnstableSpiral => "UnstableSpiral",
            Stability::Marginal => "Marginal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub branch: Branch,
    pub x: f64,
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub eigenvalues: [Complex64; 6],
    pub stability: Stability,
    /// Set when `X^2 < DEGENERATE_TOL`: the branch sits on top of `X0`.
    pub coincident_with_x0: bool,
}

impl FixedPoint {
    pub fn state(&self) -> ClassicalState {
        ClassicalState {
            alpha1: self.alpha1,
            alpha2: self.alpha2,
            x: self.x,
            v: 0.0,
        }
    }

    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Norm of the right-hand side at this point (zero force).
    pub fn residual(&self, params: &ClassicalParams) -> f64 {
        let d = rhs(&self.state(), params, 0.0).to_array();
        d.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Saddle-node power thresholds `(P_forward, P_backward)`.
pub fn threshold_powers(delta: f64, kappa: f64) -> Result<(f64, f64), ClassicalError> {
    let numerator = threshold_numerator(delta, kappa);
    let backward = numerator / delta;
    if !(delta > 0.0) || backward < 0.0 || !backward.is_finite() {
        return Err(ClassicalError::BackwardThresholdUndefined { delta });
    }
    Ok((numerator / (delta + 1.0), backward))
}

/// Forward threshold alone; defined for every `delta > -1`.
pub fn forward_threshold(delta: f64, kappa: f64) -> f64 {
    threshold_numerator(delta, kappa) / (delta + 1.0)
}

fn threshold_numerator(delta: f64, kappa: f64) -> f64 {
    let a = discriminant(delta, kappa);
    let b = linewidth_term(delta, kappa);
    let sgn = if a > 0.0 {
        1.0
    } else if a < 0.0 {
        -1.0
    } else {
        0.0
    };
    2.0 * b * b - (sgn - 1.0) * a * a
}

/// Power at which the saddle `X-` reaches zero displacement (region II/III edge).
pub fn region_iii_boundary(delta: f64, kappa: f64, direction: Direction) -> Result<f64, ClassicalError> {
    let a = discriminant(delta, kappa);
    if !(a > 0.0) {
        return Err(ClassicalError::NotApplicable { discriminant: a });
    }
    let b = linewidth_term(delta, kappa);
    let weight = drive_weight(delta, direction);
    Ok(2.0 * (a * a + b * b) / weight)
}

/// `Delta + 1` for forward drive, `Delta` for backward: the factor multiplying
/// `P/2` in the fixed-point condition.
fn drive_weight(delta: f64, direction: Direction) -> f64 {
    match direction {
        Direction::Forward => delta + 1.0,
        Direction::Backward => delta,
    }
}

fn amplitudes(x: f64, params: &ClassicalParams) -> (Complex64, Complex64) {
    let (k, d) = (params.kappa, params.delta);
    let i = Complex64::i();
    let denom = 2.0 * Complex64::new(x * x - discriminant(d, k), linewidth_term(d, k));
    let numerator_driven = match params.direction {
        Direction::Forward => Complex64::new(k / 2.0, d + 1.0),
        Direction::Backward => Complex64::new(k / 2.0, d),
    };
    let other = -i * x / denom;
    let driven = numerator_driven / denom;
    match params.direction {
        Direction::Forward => (driven, other),
        Direction::Backward => (other, driven),
    }
}

/// Eigenvalues of the Jacobian at `state`, sorted by descending real part.
pub(crate) fn eigenvalues(state: &ClassicalState, params: &ClassicalParams) -> [Complex64; 6] {
    let j = jacobian(state, params);
    let m = Matrix6::from_fn(|r, c| j[r][c]);
    let ev = m.complex_eigenvalues();
    let mut out = [Complex64::new(0.0, 0.0); 6];
    for (slot, v) in out.iter_mut().zip(ev.iter()) {
        *slot = *v;
    }
    out.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    out
}

fn classify(eigs: &[Complex64; 6]) -> Result<Stability, ClassicalError> {
    let max_re = eigs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    if max_re.abs() <= STABILITY_MARGIN {
        return Err(ClassicalError::MarginalStability { max_re });
    }
    if max_re < 0.0 {
        return Ok(Stability::StableSpiral);
    }
    let real_unstable = eigs.iter().any(|l| l.re > STABILITY_MARGIN && l.im.abs() <= 1e-12 * l.norm().max(1.0));
    if real_unstable {
        Ok(Stability::Saddle)
    } else {
        Ok(Stability::UnstableSpiral)
    }
}

/// Stability class and Jacobian spectrum at `fp`.
pub fn classify_stability(fp: &FixedPoint, params: &ClassicalParams) -> Result<(Stability, [Complex64; 6]), ClassicalError> {
    let eigs = eigenvalues(&fp.state(), params);
    classify(&eigs).map(|s| (s, eigs))
}

fn build(branch: Branch, x: f64, coincident: bool, params: &ClassicalParams) -> FixedPoint {
    let (alpha1, alpha2) = amplitudes(x, params);
    let mut fp = FixedPoint {
        branch,
        x,
        alpha1,
        alpha2,
        eigenvalues: [Complex64::new(0.0, 0.0); 6],
        stability: Stability::Marginal,
        coincident_with_x0: coincident,
    };
    let eigs = eigenvalues(&fp.state(), params);
    fp.eigenvalues = eigs;
    fp.stability = classify(&eigs).unwrap_or(Stability::Marginal);
    fp
}

/// All non-negative mechanical equilibria: `X0` always, then `X+` and `X-`
/// whenever their squared displacement is real and non-negative. The mirror
/// roots `-X+-` (same transmission, `a2 -> -a2`) are not listed separately.
pub fn fixed_points(params: &ClassicalParams) -> Vec<FixedPoint> {
    let mut out = vec![build(Branch::X0, 0.0, false, params)];
    let a = params.discriminant();
    let b = linewidth_term(params.delta, params.kappa);
    let radicand = drive_weight(params.delta, params.direction) * params.power / 2.0 - b * b;
    if radicand < 0.0 {
        return out;
    }
    let root = radicand.sqrt();
    for (branch, x2) in [(Branch::XPlus, a + root), (Branch::XMinus, a - root)] {
        if x2 < 0.0 {
            continue;
        }
        if x2 < DEGENERATE_TOL {
            out.push(build(branch, 0.0, true, params));
        } else {
            out.push(build(branch, x2.sqrt(), false, params));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(power: f64, direction: Direction) -> ClassicalParams {
        ClassicalParams::new(power, 0.5, 0.05, 1e-3, direction).unwrap()
    }

    #[test]
    fn region_one_has_only_the_origin_branch() {
        let fps = fixed_points(&p(0.002, Direction::Forward));
        assert_eq!(fps.len(), 1);
        assert_eq!(fps[0].branch, Branch::X0);
        assert_eq!(fps[0].stability, Stability::StableSpiral);
    }

    #[test]
    fn region_two_branches() {
        let params = p(0.005, Direction::Forward);
        let fps = fixed_points(&params);
        assert_eq!(fps.len(), 3);
        // Frozen from the closed form: X+^2 = A + sqrt(c), X-^2 = A - sqrt(c)
        // with A = 0.749375, c = 0.00125.
        assert!((fps[1].x - 0.885_849_8).abs() < 1e-6);
        assert!((fps[2].x - 0.844_997_0).abs() < 1e-6);
        assert_eq!(fps[2].stability, Stability::Saddle);
        for fp in &fps {
            assert!(fp.residual(&params) < 1e-10, "{:?}", fp.branch);
        }
    }

    #[test]
    fn origin_branch_has_empty_undriven_mode() {
        for dir in [Direction::Forward, Direction::Backward] {
            let params = p(0.3, dir);
            let x0 = &fixed_points(&params)[0];
            assert_eq!(x0.x, 0.0);
            match dir {
                Direction::Forward => assert_eq!(x0.alpha2.norm(), 0.0),
                Direction::Backward => assert_eq!(x0.alpha1.norm(), 0.0),
            }
            assert!(x0.residual(&params) < 1e-14);
        }
    }

    #[test]
    fn thresholds_at_the_operating_point() {
        let (f, b) = threshold_powers(0.5, 0.05).unwrap();
        assert!((f - 1.0 / 300.0).abs() < 1e-15);
        assert!((b - 0.01).abs() < 1e-15);
        assert!((b / f - 3.0).abs() < 1e-12);
    }

    #[test]
    fn thresholds_vanish_without_optical_loss() {
        let (f, b) = threshold_powers(0.7, 0.0).unwrap();
        assert_eq!(f, 0.0);
        assert_eq!(b, 0.0);
    }

    #[test]
    fn backward_threshold_needs_positive_detuning() {
        assert!(matches!(
            threshold_powers(-0.3, 0.05),
            Err(ClassicalError::BackwardThresholdUndefined { .. })
        ));
        assert!(threshold_powers(0.0, 0.05).is_err());
    }

    #[test]
    fn region_three_boundaries() {
        let f = region_iii_boundary(0.5, 0.05, Direction::Forward).unwrap();
        let b = region_iii_boundary(0.5, 0.05, Direction::Backward).unwrap();
        assert!((f - 0.752_084).abs() < 1e-6);
        assert!((b - 2.256_252).abs() < 1e-6);
        let (pf, pb) = threshold_powers(0.5, 0.05).unwrap();
        assert!(f > pf && b > pb);
        assert!(matches!(
            region_iii_boundary(-0.5, 0.05, Direction::Forward),
            Err(ClassicalError::NotApplicable { .. })
        ));
    }

    #[test]
    fn stability_at_reference_points() {
        let x0 = &fixed_points(&p(0.002, Direction::Forward))[0];
        let (s, _) = classify_stability(x0, &p(0.002, Direction::Forward)).unwrap();
        assert_eq!(s, Stability::StableSpiral);
        let params = p(0.005, Direction::Forward);
        let xm = &fixed_points(&params)[2];
        assert_eq!(classify_stability(xm, &params).unwrap().0, Stability::Saddle);
    }

    #[test]
    fn eigenvalue_sum_is_the_trace() {
        let params = ClassicalParams::new(0.005, 0.5, 0.05, 0.0, Direction::Forward).unwrap();
        for fp in fixed_points(&params) {
            let sum: Complex64 = fp.eigenvalues.iter().sum();
            assert!((sum.re + 0.1).abs() < 1e-12);
            assert!(sum.im.abs() < 1e-12);
        }
    }

    #[test]
    fn transmission_on_upper_branch() {
        let params = p(0.005, Direction::Forward);
        let xp = &fixed_points(&params)[1];
        let t = super::super::transmission(&xp.state(), &params);
        // |a2|^2 = X^2 / (4 |D|^2), |D|^2 = c + B^2 = 0.00375.
        let expected = 4.0 * 0.0025 * (0.749375 + 0.00125_f64.sqrt()) / (4.0 * 0.00375);
        assert!((t - expected).abs() < 1e-12);
        assert!((t - 0.5232).abs() < 1e-4);
    }

    #[test]
    fn degenerate_branch_is_flagged() {
        // Exactly on the region II/III boundary X-^2 = 0.
        let pb = region_iii_boundary(0.5, 0.05, Direction::Forward).unwrap();
        let fps = fixed_points(&p(pb, Direction::Forward));
        let xm = fps.iter().find(|f| f.branch == Branch::XMinus);
        if let Some(xm) = xm {
            assert!(xm.coincident_with_x0);
        }
    }
}
