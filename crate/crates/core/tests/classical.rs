use num_complex::Complex64;
use proptest::prelude::*;
use trimode_core::classical::{
    classify_steady_state, fixed_points, integrate, jacobian, region_iii_boundary, rhs, threshold_powers, Branch,
    ClassicalParams, ClassicalState, Direction, ForcingProtocol, SteadyState,
};

fn direction() -> impl Strategy<Value = Direction> {
    prop_oneof![Just(Direction::Forward), Just(Direction::Backward)]
}

fn params() -> impl Strategy<Value = ClassicalParams> {
    (1e-4f64..3.0, 0.01f64..2.0, 0.005f64..0.3, 0.0f64..0.02, direction())
        .prop_map(|(p, d, k, g, dir)| ClassicalParams::new(p, d, k, g, dir).unwrap())
}

fn state() -> impl Strategy<Value = ClassicalState> {
    prop::array::uniform6(-3.0f64..3.0).prop_map(|y| ClassicalState::from_array(&y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn equilibria_are_roots(p in params()) {
        for fp in fixed_points(&p) {
            let tol = if fp.branch == Branch::X0 { 1e-14 } else { 1e-10 };
            prop_assert!(fp.residual(&p) < tol, "{:?} residual {}", fp.branch, fp.residual(&p));
        }
    }

    #[test]
    fn jacobian_matches_central_differences(p in params(), s in state()) {
        let j = jacobian(&s, &p);
        let y = s.to_array();
        let h = 1e-6;
        let scale = j.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        for c in 0..6 {
            let (mut yp, mut ym) = (y, y);
            yp[c] += h;
            ym[c] -= h;
            let fp = rhs(&ClassicalState::from_array(&yp), &p, 0.0).to_array();
            let fm = rhs(&ClassicalState::from_array(&ym), &p, 0.0).to_array();
            for r in 0..6 {
                let fd = (fp[r] - fm[r]) / (2.0 * h);
                prop_assert!((j[r][c] - fd).abs() <= 1e-6 * scale, "({r},{c}): {} vs {fd}", j[r][c]);
            }
        }
    }

    #[test]
    fn undriven_quiet_subspace_is_invariant(p in params(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let driven = Complex64::new(re, im);
        let zero = Complex64::new(0.0, 0.0);
        let s = match p.direction {
            Direction::Forward => ClassicalState { alpha1: driven, alpha2: zero, x: 0.0, v: 0.0 },
            Direction::Backward => ClassicalState { alpha1: zero, alpha2: driven, x: 0.0, v: 0.0 },
        };
        let d = rhs(&s, &p, 0.0);
        let quiet = match p.direction {
            Direction::Forward => d.alpha2,
            Direction::Backward => d.alpha1,
        };
        prop_assert_eq!(quiet, zero);
        prop_assert_eq!(d.x, 0.0);
        prop_assert_eq!(d.v, 0.0);
    }

    #[test]
    fn jacobian_trace_is_total_damping(p in params(), s in state()) {
        let j = jacobian(&s, &p);
        let tr: f64 = (0..6).map(|k| j[k][k]).sum();
        prop_assert!((tr + 2.0 * p.kappa + p.gamma).abs() < 1e-12);
    }
}

#[test]
fn root_count_changes_exactly_at_thresholds() {
    let kappa = 0.05;
    for delta in [0.2, 0.5, 0.8, 1.0] {
        let (pf, pb) = threshold_powers(delta, kappa).unwrap();
        for (dir, onset) in [(Direction::Forward, pf), (Direction::Backward, pb)] {
            let count = |p: f64| fixed_points(&ClassicalParams::new(p, delta, kappa, 1e-3, dir).unwrap()).len();
            assert_eq!(count(onset - 1e-6), 1, "{dir:?} Delta = {delta}");
            assert_eq!(count(onset + 1e-6), 3, "{dir:?} Delta = {delta}");
            let edge = region_iii_boundary(delta, kappa, dir).unwrap();
            assert_eq!(count(edge - 1e-6), 3, "{dir:?} Delta = {delta}");
            assert_eq!(count(edge + 1e-6), 2, "{dir:?} Delta = {delta}");
        }
    }
}

#[test]
fn reference_thresholds() {
    let (f, b) = threshold_powers(0.5, 0.05).unwrap();
    assert!((f - 1.0 / 300.0).abs() < 1e-15);
    assert!((b - 0.01).abs() < 1e-15);
    let fwd = region_iii_boundary(0.5, 0.05, Direction::Forward).unwrap();
    let bwd = region_iii_boundary(0.5, 0.05, Direction::Backward).unwrap();
    assert!((fwd - 0.752084).abs() < 1e-6, "{fwd}");
    assert!((bwd - 2.256252).abs() < 1e-6, "{bwd}");
}

#[test]
fn backward_onset_exceeds_forward_by_detuning_ratio() {
    for delta in [0.1, 0.3, 0.5, 0.9, 1.5] {
        let (f, b) = threshold_powers(delta, 0.05).unwrap();
        assert!((b / f - (delta + 1.0) / delta).abs() < 1e-12 * (b / f));
    }
}

#[test]
fn integration_is_bit_reproducible() {
    let p = ClassicalParams::new(0.008, 0.5, 0.05, 1e-3, Direction::Forward).unwrap();
    let forcing = ForcingProtocol::for_operating_point(&p);
    let a = integrate(&p, &forcing, 3000.0, 0.5).unwrap();
    let b = integrate(&p, &forcing, 3000.0, 0.5).unwrap();
    assert_eq!(a.times, b.times);
    assert_eq!(a.states, b.states);
}

#[test]
fn region_two_settles_on_upper_branch() {
    let p = ClassicalParams::new(0.005, 0.5, 0.05, 1e-3, Direction::Forward).unwrap();
    let traj = integrate(&p, &ForcingProtocol::for_operating_point(&p), 2e4, 0.1).unwrap();
    let upper = fixed_points(&p).into_iter().find(|f| f.branch == Branch::XPlus).unwrap();
    match classify_steady_state(&traj).unwrap() {
        SteadyState::FixedPoint { x } => assert!((x - upper.x).abs() < 1e-4, "{x} vs {}", upper.x),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unforced_backward_drive_stays_dark() {
    let p = ClassicalParams::new(0.006, 0.5, 0.05, 1e-3, Direction::Backward).unwrap();
    let traj = integrate(&p, &ForcingProtocol::none(), 5000.0, 1.0).unwrap();
    assert!(traj.transmission().iter().all(|t| *t < 1e-12));
}
