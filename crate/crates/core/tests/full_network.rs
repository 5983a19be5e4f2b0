use proptest::prelude::*;
use trimode_core::full::{
    bogoliubov_defect, full_scattering, full_u, power_ratio, sideband_design, sideband_point, FullNetworkParams,
    SidebandConditions,
};
use trimode_core::rwa::{scattering_matrix_6, NetworkParams};

fn full_params() -> impl Strategy<Value = (FullNetworkParams, f64)> {
    (
        (0.3f64..3.0, 0.01f64..0.5, 0.01f64..0.5, 1.0f64..20.0),
        (0.0f64..1.0, 0.0f64..0.5, 0.0f64..0.6, 0.0f64..0.6, 0.0f64..6.3),
        (2.0f64..200.0, -3.0f64..3.0),
    )
        .prop_map(|((kappa, b1, b2, kd), (j0, jm, g1, g2, theta), (wm, dw))| {
            let net = NetworkParams {
                j0,
                jm,
                g1,
                g2,
                theta,
                ..NetworkParams::uncoupled(kappa)
            }
            .with_effective_damping(b1, b2, kd);
            (FullNetworkParams { net, omega_m: wm }, wm + dw)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bogoliubov_identity_holds((p, w) in full_params()) {
        let u = full_u(&p, w).unwrap();
        prop_assert!(bogoliubov_defect(&u) < 1e-9);
    }

    #[test]
    fn vacuum_noise_is_nonnegative((p, w) in full_params()) {
        let pt = full_scattering(&p, w).unwrap();
        prop_assert!(pt.s_c1_vac >= 0.0 && pt.s_c2_vac >= 0.0);
        prop_assert!(pt.t_forward >= 0.0 && pt.t_backward >= 0.0);
    }
}

#[test]
fn power_ratio_is_exact() {
    assert_eq!(power_ratio(85.0, 1.0), 28901.0);
    assert_eq!(power_ratio(20.0, 1.0), 1601.0);
    assert_eq!(power_ratio(0.0, 1.0), 1.0);
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

#[test]
fn vacuum_noise_falls_as_inverse_square_of_resolution() {
    let c = SidebandConditions::default();
    let ratios: Vec<f64> = (0..10).map(|k| 50.0 * 10f64.powf(k as f64 / 9.0)).collect();
    let rows: Vec<_> = ratios.iter().map(|r| sideband_point(*r, &c).unwrap()).collect();
    let s1: Vec<f64> = rows.iter().map(|r| r.s_c1_vac).collect();
    let s2: Vec<f64> = rows.iter().map(|r| r.s_c2_vac).collect();
    for (name, s) in [("S_c1", slope(&ratios, &s1)), ("S_c2", slope(&ratios, &s2))] {
        assert!((s + 2.0).abs() <= 0.2, "{name} slope {s}");
    }
}

#[test]
fn isolation_improves_with_resolution() {
    let c = SidebandConditions::default();
    let iso: Vec<f64> = [10.0, 20.0, 50.0, 85.0, 200.0, 500.0]
        .iter()
        .map(|r| sideband_point(*r, &c).unwrap().isolation_db)
        .collect();
    assert!(iso.windows(2).all(|w| w[0] < w[1]), "{iso:?}");
}

#[test]
fn rotating_wave_limit() {
    let (p, w) = sideband_design(500.0, &SidebandConditions::default()).unwrap();
    let full = full_scattering(&p, w).unwrap();
    let (_, tp, tm) = scattering_matrix_6(&p.net, w - p.omega_m).unwrap();
    assert!((full.t_forward - tp).abs() < 1e-4);
    assert!((full.t_backward - tm).abs() < 1e-4);
}
