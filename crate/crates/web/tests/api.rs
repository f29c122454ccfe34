use gaussify_web::api;
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn sweep_is_monotone_in_delta() {
    let v = parse(api::delta_sweep(0.5, 6, 6).unwrap());
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let e: Vec<f64> = rows.iter().map(|r| r["logneg_inf"].as_f64().unwrap()).collect();
    assert!(e.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{e:?}");
    assert!(rows.iter().all(|r| r["holds"] == Value::Bool(true)));
}

#[test]
fn run_ledger_has_one_row_per_round() {
    let v = parse(api::run_protocol(0.5, 1.0, 6, 2).unwrap());
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["n"], 2);
    assert!(rows[1]["success_prob"].as_f64().unwrap() > 0.0);
}

#[test]
fn chi_slice_approaches_gaussian() {
    let dev = |rounds| {
        let v = parse(api::chi_slice(0.5, 1.0, 8, rounds, 2.0, 7).unwrap());
        assert_eq!(v["measured"].as_array().unwrap().len(), 49);
        v["max_deviation"].as_f64().unwrap()
    };
    let (d0, d2) = (dev(0), dev(2));
    assert!(d2 < d0, "{d0} -> {d2}");
}

#[test]
fn bad_inputs_are_rejected() {
    assert!(api::delta_sweep(1.5, 6, 5).is_err());
    assert!(api::delta_sweep(0.5, 40, 5).is_err());
    assert!(api::run_protocol(0.5, 0.0, 6, 2).is_err());
    assert!(api::run_protocol(0.5, 1.0, 6, 99).is_err());
    assert!(api::chi_slice(0.5, 1.0, 6, 1, -1.0, 5).is_err());
}
