use arfisma::ecf::{estimate_ecf, EcfConfig, EcfObjective};
use arfisma::harness::{ExperimentConfig, Method};
use arfisma::model::{table1_model, ArfismaParams};
use arfisma::simulate::{simulate, SimulationConfig};

fn series(model: usize, t: usize, seed: u64) -> Vec<f64> {
    let (psi, spec) = table1_model(model).unwrap();
    simulate(&SimulationConfig::new(psi, spec, t, seed)).unwrap()
}

#[test]
fn truth_beats_a_smaller_memory_on_a_long_path() {
    let (psi, spec) = table1_model(1).unwrap();
    let x = series(1, 1_000_000, 51);
    let obj = EcfObjective::new(&x, &EcfConfig { nodes: 2048, ..Default::default() }).unwrap();
    let at_truth = obj.value(&psi, &spec).unwrap();
    // d + 0.1 leaves the admissible region, so only the downward move is checked
    let lower = obj.value(&ArfismaParams { d: psi.d - 0.1, ..psi.clone() }, &spec).unwrap();
    assert!(at_truth < lower, "{at_truth} vs {lower}");
}

#[test]
fn truth_dominates_a_heavy_tailed_alternative() {
    let (psi, spec) = table1_model(1).unwrap();
    // outside the admissible region (|d + D| = 0.7), so compared through the
    // truncated expression directly
    let far = ArfismaParams::memory_only(1.2, 0.35, 0.35);
    let config = ExperimentConfig::preset(1).unwrap();
    let mut wins = 0;
    for rep in 0..100 {
        let x = arfisma::harness::simulate_replication(&config, rep).unwrap();
        let obj = EcfObjective::new(&x, &EcfConfig { node_seed: rep as u64, ..Default::default() }).unwrap();
        if obj.value(&psi, &spec).unwrap() < obj.value_unchecked(&far, &spec).unwrap() {
            wins += 1;
        }
    }
    assert!(wins >= 95, "{wins} of 100");
}

#[test]
fn objective_at_truth_shrinks_with_length() {
    let (psi, spec) = table1_model(1).unwrap();
    let mean_value = |t: usize| {
        (0..20u64)
            .map(|seed| {
                let x = series(1, t, 500 + seed);
                let config = EcfConfig { nodes: 256, node_seed: seed, ..Default::default() };
                EcfObjective::new(&x, &config).unwrap().value(&psi, &spec).unwrap()
            })
            .sum::<f64>()
            / 20.0
    };
    let (short, long) = (mean_value(1000), mean_value(10_000));
    assert!(long < short, "T=1e4: {long}, T=1e3: {short}");
}

// At T = 1e4 the minimizer itself sits 0.03-0.09 above the true alpha for
// most seeds (the objective there is below its value at the truth), so the
// search leaves the 0.02 box for statistical, not numerical, reasons.
#[test]
#[ignore = "the ECF minimizer at T = 1e4 is typically more than 0.02 from the truth in alpha"]
fn search_started_at_the_truth_stays_there() {
    let (psi, spec) = table1_model(1).unwrap();
    let x = series(1, 10_000, 52);
    let config = EcfConfig { initial: Some(psi.clone()), neutral_start: false, random_restarts: 0, ..Default::default() };
    let report = estimate_ecf(&x, &spec, &config).unwrap();
    for (name, (e, t)) in spec.param_names().iter().zip(report.psi_hat.to_vec().iter().zip(psi.to_vec())) {
        assert!((e - t).abs() <= 0.02, "{name}: {e} vs {t}");
    }
}

#[test]
fn search_from_the_truth_never_ends_higher() {
    let (psi, spec) = table1_model(1).unwrap();
    let x = series(1, 3000, 54);
    let config = EcfConfig { initial: Some(psi.clone()), neutral_start: false, random_restarts: 0, nodes: 256, ..Default::default() };
    let report = estimate_ecf(&x, &spec, &config).unwrap();
    let at_truth = EcfObjective::new(&x, &config).unwrap().value(&psi, &spec).unwrap();
    assert!(report.objective <= at_truth, "{} > {at_truth}", report.objective);
}

#[test]
fn no_start_is_an_error() {
    let (_, spec) = table1_model(1).unwrap();
    let x = series(1, 200, 53);
    let config = EcfConfig { neutral_start: false, random_restarts: 0, ..Default::default() };
    assert!(estimate_ecf(&x, &spec, &config).is_err());
}

#[test]
#[ignore = "full study: 100 ECF fits of a seven-observation block"]
fn model2_block_six_means() {
    let mut config = ExperimentConfig::preset(2).unwrap();
    config.method = Method::Ecf;
    config.ecf.m = 6;
    let summary = arfisma::harness::run_experiment(&config, None).unwrap().summary.unwrap();
    for (name, target) in [("alpha", 1.624), ("d", 0.169), ("D", 0.222), ("phi1", 0.591)] {
        let mean = summary.get(name).unwrap().mean;
        assert!((mean - target).abs() <= 0.07, "{name}: {mean}");
    }
}
