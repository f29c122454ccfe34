use gaussify::analysis::predict;
use gaussify::filter::FilterSpec;
use gaussify::linalg::{max_abs_diff, real_part, to_complex};
use gaussify::protocol::run::Amplitude;
use gaussify::protocol::{run, HeadroomPolicy, ProtocolConfig, StateSpec, Tolerances};

fn config(state: StateSpec, delta: f64, rounds: usize, cutoff: usize) -> ProtocolConfig {
    ProtocolConfig {
        filter: FilterSpec::from_delta(delta, state.mode_count()).unwrap(),
        state,
        rounds,
        cutoff,
        policy: HeadroomPolicy::ExactPair,
        tolerances: Tolerances { leakage_bound: 1e-2, ..Tolerances::default() },
    }
}

#[test]
fn covariance_approaches_predicted_limit() {
    let cfg = config(StateSpec::PsiLambda { lambda: 0.5 }, 0.5, 3, 8);
    let out = run(&cfg).unwrap();
    assert!(out.is_complete());
    let p = predict(&out.records[0].state, &cfg.filter, None).unwrap();
    let target = p.gamma_rho_inf.expect("limit exists");
    let residuals: Vec<f64> = out
        .records
        .iter()
        .map(|r| max_abs_diff(&to_complex(&real_part(&r.rho_moments.gamma)), &target))
        .collect();
    assert!(residuals.windows(2).all(|w| w[1] < w[0]), "{residuals:?}");
}

#[test]
fn custom_amplitudes_match_named_family() {
    let amplitudes = vec![
        Amplitude { index: vec![0, 0], value: 1.0, imag: 0.0 },
        Amplitude { index: vec![1, 1], value: 0.3, imag: 0.0 },
    ];
    let a = run(&config(StateSpec::PsiLambda { lambda: 0.3 }, 0.7, 2, 6)).unwrap();
    let b = run(&config(StateSpec::Custom { modes: 2, amplitudes }, 0.7, 2, 6)).unwrap();
    for (x, y) in a.records.iter().zip(&b.records) {
        assert!((x.success_prob - y.success_prob).abs() < 1e-14);
        assert!(max_abs_diff(x.state.data(), y.state.data()) < 1e-14);
    }
}

#[test]
fn copies_double_each_round() {
    let out = run(&config(StateSpec::PsiLambda { lambda: 0.2 }, 1.0, 3, 6)).unwrap();
    let copies: Vec<u128> = out.records.iter().map(|r| r.cumulative_copies).collect();
    assert_eq!(copies, vec![1, 2, 4, 8]);
    assert!(out.records[1..].iter().all(|r| r.success_prob > 0.0 && r.success_prob <= 1.0));
}
