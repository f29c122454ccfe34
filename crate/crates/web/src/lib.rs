//! Browser demo for the gaussify simulator.
//!
//! Every export takes plain numbers and returns a JSON string. The plain Rust
//! functions in [`api`] do the work so they can be tested natively; the
//! `#[wasm_bindgen]` shims only translate errors into `JsValue`s.

use wasm_bindgen::prelude::*;

pub mod api {
    use gaussify::analysis::{predict, run_report, sweep_delta, ExperimentConfig, SweepSettings};
    use gaussify::filter::FilterSpec;
    use gaussify::fock::CharFn;
    use gaussify::gaussian::{gaussian_char, GaussianOperator};
    use gaussify::protocol::{run, HeadroomPolicy, ProtocolConfig, StateSpec, Tolerances};
    use serde::Serialize;

    /// Larger cutoffs stall a browser tab.
    pub const MAX_CUTOFF: usize = 10;
    pub const MAX_ROUNDS: usize = 6;
    pub const MAX_POINTS: usize = 61;

    type ApiResult = Result<String, String>;

    fn check(lambda: f64, cutoff: usize) -> Result<(), String> {
        if !lambda.is_finite() || lambda <= 0.0 || lambda >= 1.0 {
            return Err(format!("lambda must lie in (0, 1), got {lambda}"));
        }
        if !(2..=MAX_CUTOFF).contains(&cutoff) {
            return Err(format!("cutoff must lie in 2..={MAX_CUTOFF}, got {cutoff}"));
        }
        Ok(())
    }

    fn json<T: Serialize>(v: &T) -> ApiResult {
        serde_json::to_string(v).map_err(|e| e.to_string())
    }

    #[derive(Serialize)]
    struct SweepPoint {
        delta: f64,
        logneg_inf: Option<f64>,
        logneg_rho_fock: Option<f64>,
        logneg_rho_gaussian: Option<f64>,
        holds: Option<bool>,
        error: Option<String>,
    }

    /// Predicted `E_N(ρ_∞)` over `points` filter strengths for `Ψ_λ`.
    pub fn delta_sweep(lambda: f64, cutoff: usize, points: usize) -> ApiResult {
        check(lambda, cutoff)?;
        if !(2..=MAX_POINTS).contains(&points) {
            return Err(format!("points must lie in 2..={MAX_POINTS}, got {points}"));
        }
        let settings = SweepSettings {
            state: StateSpec::PsiLambda { lambda },
            cutoff,
            rounds: 0,
            policy: HeadroomPolicy::default(),
            tolerances: Tolerances::default(),
        };
        let deltas: Vec<f64> = (0..points).map(|k| (k as f64 / (points - 1) as f64).max(1e-6)).collect();
        let rows = sweep_delta(&settings, &deltas).map_err(|e| e.to_string())?;
        let out: Vec<SweepPoint> = rows
            .into_iter()
            .map(|r| SweepPoint {
                delta: r.delta,
                logneg_inf: r.logneg_inf,
                logneg_rho_fock: r.logneg_rho_fock,
                logneg_rho_gaussian: r.logneg_rho_gaussian,
                holds: r.theorem1_holds,
                error: r.error,
            })
            .collect();
        json(&out)
    }

    /// Per-round ledger of a run on `Ψ_λ`.
    pub fn run_protocol(lambda: f64, delta: f64, cutoff: usize, rounds: usize) -> ApiResult {
        check(lambda, cutoff)?;
        if rounds > MAX_ROUNDS {
            return Err(format!("rounds must be at most {MAX_ROUNDS}, got {rounds}"));
        }
        let text = format!(
            "cutoff = {cutoff}\nrounds = {rounds}\n[state]\nfamily = \"psi_lambda\"\nlambda = {lambda:?}\n\
             [filter]\ndelta = {delta:?}\n[diagnostics]\ndoubling = false\n"
        );
        let cfg = ExperimentConfig::from_toml_str(&text).map_err(|e| e.to_string())?;
        let report = run_report(&cfg).map_err(|e| e.to_string())?;
        json(&report)
    }

    #[derive(Serialize)]
    struct ChiSlice {
        axis: Vec<f64>,
        /// Round whose `σ` was sampled.
        round: usize,
        /// `|χ_σ(x, 0, y, 0)|`, row-major in `(x, y)`.
        measured: Vec<f64>,
        /// Same slice of the Gaussian with `σ`'s initial covariance.
        predicted: Option<Vec<f64>>,
        max_deviation: Option<f64>,
    }

    /// `|χ_σ_n|` on the `(X₁, X₂)` plane after `rounds` rounds.
    pub fn chi_slice(lambda: f64, delta: f64, cutoff: usize, rounds: usize, radius: f64, points: usize) -> ApiResult {
        check(lambda, cutoff)?;
        if rounds > MAX_ROUNDS {
            return Err(format!("rounds must be at most {MAX_ROUNDS}, got {rounds}"));
        }
        if !(2..=MAX_POINTS).contains(&points) || !(radius.is_finite() && radius > 0.0) {
            return Err("need 2 ≤ points ≤ 61 and radius > 0".into());
        }
        let state = StateSpec::PsiLambda { lambda };
        let filter = FilterSpec::from_delta(delta, 2).map_err(|e| e.to_string())?;
        let config = ProtocolConfig { state, filter, rounds, cutoff, policy: HeadroomPolicy::default(), tolerances: Tolerances::default() };
        let outcome = run(&config).map_err(|e| e.to_string())?;
        let last = outcome.records.last().ok_or("no rounds completed")?;
        let sigma = last.sigma(&config.filter).map_err(|e| e.to_string())?;
        let chi = CharFn::new(&sigma);
        let prediction = predict(&outcome.records[0].state, &config.filter, None).map_err(|e| e.to_string())?;
        let gauss = prediction.gamma_sigma.map(GaussianOperator::centered).transpose().map_err(|e| e.to_string())?;

        let axis: Vec<f64> = (0..points).map(|k| -radius + 2.0 * radius * k as f64 / (points - 1) as f64).collect();
        let mut measured = Vec::with_capacity(points * points);
        let mut predicted = gauss.as_ref().map(|_| Vec::with_capacity(points * points));
        for &x in &axis {
            for &y in &axis {
                let r = [x, 0.0, y, 0.0];
                measured.push(chi.eval(&r).map_err(|e| e.to_string())?.norm());
                if let (Some(g), Some(p)) = (&gauss, predicted.as_mut()) {
                    p.push(gaussian_char(g, &r).map_err(|e| e.to_string())?.norm());
                }
            }
        }
        let max_deviation = predicted.as_ref().map(|p| p.iter().zip(&measured).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        json(&ChiSlice { axis, round: last.round, measured, predicted, max_deviation })
    }
}

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = deltaSweep)]
pub fn delta_sweep(lambda: f64, cutoff: usize, points: usize) -> Result<String, JsValue> {
    to_js(api::delta_sweep(lambda, cutoff, points))
}

#[wasm_bindgen(js_name = runProtocol)]
pub fn run_protocol(lambda: f64, delta: f64, cutoff: usize, rounds: usize) -> Result<String, JsValue> {
    to_js(api::run_protocol(lambda, delta, cutoff, rounds))
}

#[wasm_bindgen(js_name = chiSlice)]
pub fn chi_slice(lambda: f64, delta: f64, cutoff: usize, rounds: usize, radius: f64, points: usize) -> Result<String, JsValue> {
    to_js(api::chi_slice(lambda, delta, cutoff, rounds, radius, points))
}
