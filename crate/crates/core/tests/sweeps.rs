use trimode_core::classical::{
    classify_steady_state, integrate, region_iii_boundary, threshold_powers, ClassicalParams, Direction,
    ForcingProtocol, SteadyState,
};
use trimode_core::sweep::{
    asym_cell, asym_map, gamma_row, gamma_sweep, hopf_curve, hopf_trace, region_cell, region_map, sideband_sweep,
    steady_ray, Axis, Region, SweepOptions,
};
use trimode_core::SidebandConditions;

const KAPPA: f64 = 0.05;

fn workers(n: usize) -> SweepOptions {
    SweepOptions { workers: Some(n) }
}

#[test]
fn region_map_agrees_with_analytic_boundaries() {
    let pa = Axis::log("P", 1e-4, 5.0, 60);
    let da = Axis::linear("Delta", 0.1, 1.0, 10);
    for dir in [Direction::Forward, Direction::Backward] {
        let cells = region_map(&pa, &da, KAPPA, 1e-3, dir, &SweepOptions::default()).unwrap();
        for c in cells {
            let (pf, pb) = threshold_powers(c.delta, KAPPA).unwrap();
            let onset = if dir == Direction::Forward { pf } else { pb };
            let edge = region_iii_boundary(c.delta, KAPPA, dir).unwrap();
            let expected = if c.p < onset {
                Region::I
            } else if c.p < edge {
                Region::II
            } else {
                Region::III
            };
            assert_eq!(c.region, Some(expected), "{dir:?} P = {}, Delta = {}", c.p, c.delta);
        }
    }
}

#[test]
fn cells_reproduce_direct_calls() {
    let pa = Axis::log("P", 1e-3, 1.0, 7);
    let da = Axis::linear("Delta", 0.2, 1.0, 5);
    let cells = region_map(&pa, &da, KAPPA, 1e-3, Direction::Forward, &workers(3)).unwrap();
    for c in &cells {
        assert_eq!(*c, region_cell(c.p, c.delta, KAPPA, 1e-3, Direction::Forward));
    }
    let ga = Axis::log("Gamma", 0.01, 0.3, 4);
    for row in gamma_sweep(&ga, 1.0, 10.0, &workers(2)).unwrap() {
        assert_eq!(row, gamma_row(row.gamma, 1.0, 10.0));
    }
    let g = Axis::linear("Gamma1", 0.05, 0.2, 2);
    let h = Axis::linear("Gamma2", 0.05, 0.2, 2);
    for cell in asym_map(&g, &h, 1.0, 10.0, &workers(2)).unwrap() {
        assert_eq!(cell, asym_cell(cell.gamma1, cell.gamma2, 1.0, 10.0));
    }
}

#[test]
fn outputs_independent_of_worker_count() {
    let da = Axis::linear("Delta", 0.1, 1.0, 12);
    let h1 = hopf_curve(&da, KAPPA, 1e-3, Direction::Forward, 10.0, &workers(1)).unwrap();
    let h4 = hopf_curve(&da, KAPPA, 1e-3, Direction::Forward, 10.0, &workers(4)).unwrap();
    assert_eq!(format!("{h1:?}"), format!("{h4:?}"));

    let ratios = [10.0, 20.0, 85.0, 0.5];
    let c = SidebandConditions::default();
    let s1 = sideband_sweep(&ratios, &c, &workers(1));
    let s3 = sideband_sweep(&ratios, &c, &workers(3));
    assert_eq!(format!("{s1:?}"), format!("{s3:?}"));
    assert!(!s1[3].status.is_ok(), "ratio below 1 is a failed cell, kept in place");

    let base = ClassicalParams::new(0.0, 0.5, KAPPA, 1e-3, Direction::Forward).unwrap();
    let powers = [0.004, 0.006, 0.009];
    let r1 = steady_ray(&base, &powers, 3000.0, 0.1, &workers(1));
    let r3 = steady_ray(&base, &powers, 3000.0, 0.1, &workers(3));
    assert_eq!(format!("{r1:?}"), format!("{r3:?}"));
}

#[test]
fn hopf_point_reference() {
    let (pf, _) = threshold_powers(0.5, KAPPA).unwrap();
    let p = hopf_trace(0.5, KAPPA, 1e-3, Direction::Forward, pf * 1.001, 1.0).unwrap();
    assert!((p - 0.0076043).abs() < 2e-6, "{p}");
}

#[test]
fn hopf_onset_rises_with_mechanical_damping() {
    let (pf, _) = threshold_powers(0.5, KAPPA).unwrap();
    let at = |gamma: f64| hopf_trace(0.5, KAPPA, gamma, Direction::Forward, pf * 1.001, 1.0).unwrap();
    assert!(at(1e-2) > at(1e-4));
}

#[test]
fn hopf_boundary_separates_rest_from_oscillation() {
    let (pf, _) = threshold_powers(0.5, KAPPA).unwrap();
    let ph = hopf_trace(0.5, KAPPA, 1e-3, Direction::Forward, pf * 1.001, 1.0).unwrap();
    let state = |p: f64| {
        let params = ClassicalParams::new(p, 0.5, KAPPA, 1e-3, Direction::Forward).unwrap();
        let traj = integrate(&params, &ForcingProtocol::for_operating_point(&params), 3e4, 0.1).unwrap();
        classify_steady_state(&traj).unwrap()
    };
    assert!(matches!(state(0.5 * (pf + ph)), SteadyState::FixedPoint { .. }));
    assert!(matches!(state(1.2 * ph), SteadyState::LimitCycle { .. }));
}
