use proptest::prelude::*;
use trimode_cli::{parse_config, Command, RunConfig};

fn theta_text() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("0".to_string()),
        Just("pi/2".to_string()),
        Just("pi".to_string()),
        Just("3pi/2".to_string()),
        (-10.0f64..10.0).prop_map(|r| format!("{r:?}")),
        (-10.0f64..10.0).prop_map(|r| format!("{r:e}")),
    ]
}

proptest! {
    #[test]
    fn parse_emit_parse_is_identity(
        gamma in 0.0f64..1.0,
        jm in prop_oneof![Just("auto".to_string()), (0.0f64..1.0).prop_map(|x| format!("{x}"))],
        theta in theta_text(),
        omega_min in -5.0f64..-0.1,
        points in 2usize..5000,
    ) {
        let text = format!(
            "command = scatter spectrum\nGamma = {gamma}\nJm = {jm}\ntheta = {theta}\nomega_min = {omega_min:e}\nomega_points = {points}\n"
        );
        let first = parse_config(&text).unwrap();
        let second = parse_config(&first.emit()).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(first.emit(), second.emit());
    }

    #[test]
    fn negative_rates_name_their_key(x in -1e3f64..-1e-12, key in prop::sample::select(vec!["kappa", "gamma", "P", "kappad", "Gamma"])) {
        let e = parse_config(&format!("{key} = {x}")).unwrap_err();
        prop_assert_eq!(e.key(), Some(key));
    }
}

#[test]
fn defaults_round_trip_for_every_command() {
    for c in Command::ALL {
        let cfg = RunConfig::default().for_command(c).unwrap();
        assert_eq!(parse_config(&cfg.emit()).unwrap(), cfg, "{c}");
    }
}
