use arfisma::ecf::{empirical_cf, joint_cf};
use arfisma::model::{ma_coeffs, table1_model, ArfismaParams};
use arfisma::simulate::{simulate, simulate_with_innovations, SimulationConfig};
use arfisma::stable::sample_sas;

fn acf(x: &[f64], lag: usize) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    x.iter().zip(&x[lag..]).map(|(a, b)| (a - mean) * (b - mean)).sum::<f64>() / var
}

fn median_abs(x: &[f64]) -> f64 {
    let mut a: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    a.sort_by(f64::total_cmp);
    a[a.len() / 2]
}

#[test]
fn seasonal_lags_stand_out_at_the_gaussian_boundary() {
    let (psi, spec) = table1_model(1).unwrap();
    let psi = ArfismaParams { alpha: 2.0, ..psi };
    let x = simulate(&SimulationConfig::new(psi, spec, 100_000, 31)).unwrap();
    let r: Vec<f64> = (0..=13).map(|k| acf(&x, k)).collect();
    for k in [4, 8, 12] {
        assert!(r[k] > r[k - 1] && r[k] > r[k + 1], "lag {k}: {:?}", &r[k - 1..=k + 1]);
    }
}

// The marginal scale (sum_{j <= M} |c_j|^alpha)^(1/alpha) of the study
// models itself grows by about 2.2% from M = 5000 to M = 10000, because
// |c_j|^1.6 decays like j^(-1.04); a 1% agreement is therefore out of reach.
#[test]
#[ignore = "the truncated marginal scale moves by ~2.2% between M = 5000 and M = 10000"]
fn truncation_5000_and_10000_agree_in_scale() {
    let t = 20_000;
    for i in 1..=4 {
        let (psi, spec) = table1_model(i).unwrap();
        let z = sample_sas(psi.alpha, t + 10_000, 40 + i as u64).unwrap();
        let long = simulate_with_innovations(&psi, &spec, &z, t).unwrap();
        let short = simulate_with_innovations(&psi, &spec, &z[5000..], t).unwrap();
        let (a, b) = (median_abs(&long), median_abs(&short));
        assert!(((a - b) / a).abs() < 0.01, "model {i}: median |X| {a} vs {b}");
    }
}

#[test]
fn empirical_cf_matches_the_model_cf() {
    let (psi, spec) = table1_model(1).unwrap();
    let x = simulate(&SimulationConfig::new(psi.clone(), spec, 100_000, 32)).unwrap();
    let grid = [-1.0, 0.0, 1.0];
    for &r1 in &grid {
        for &r2 in &grid {
            let r = [r1, r2];
            let model = joint_cf(&psi, &spec, &r, 5000, None).unwrap();
            let err = (empirical_cf(&x, &r).unwrap().re - model).abs();
            assert!(err <= 0.02, "r = {r:?}: {err}");
        }
    }
}

#[test]
fn longer_truncation_adds_exactly_the_tail_convolution() {
    let t = 2000;
    let (psi, spec) = table1_model(4).unwrap();
    let z = sample_sas(psi.alpha, t + 10_000, 45).unwrap();
    let long = simulate_with_innovations(&psi, &spec, &z, t).unwrap();
    let short = simulate_with_innovations(&psi, &spec, &z[5000..], t).unwrap();
    let c = ma_coeffs(&psi, &spec, 10_000).unwrap();
    for i in (0..t).step_by(97) {
        // X_t uses z[10000 + i - j] for j = 0..=10000
        let tail: f64 = (5001..=10_000).map(|j| c[j] * z[10_000 + i - j]).sum();
        let err = (long[i] - short[i] - tail).abs();
        assert!(err < 1e-9 * (1.0 + tail.abs()), "t = {i}: {err}");
    }
}

#[test]
fn marginal_scale_shift_between_truncations() {
    let (psi, spec) = table1_model(1).unwrap();
    let c = ma_coeffs(&psi, &spec, 10_000).unwrap();
    let scale = |m: usize| c[..=m].iter().map(|v| v.abs().powf(psi.alpha)).sum::<f64>().powf(1.0 / psi.alpha);
    let shift = scale(10_000) / scale(5000) - 1.0;
    assert!(shift > 0.01 && shift < 0.03, "{shift}");
}
