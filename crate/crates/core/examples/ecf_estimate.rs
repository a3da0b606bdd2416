//! Simulate Model 1 and fit it by the ECF method with block overlap m = 1.
//!
//!     cargo run --release --example ecf_estimate -- [seed]

use arfisma::ecf::{estimate_ecf, EcfConfig};
use arfisma::model::table1_model;
use arfisma::simulate::{simulate, SimulationConfig};

fn main() -> arfisma::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let (psi, spec) = table1_model(1)?;
    let x = simulate(&SimulationConfig::new(psi.clone(), spec, 1500, seed))?;
    let report = estimate_ecf(&x, &spec, &EcfConfig::default())?;
    println!("truth    {psi}");
    println!("estimate {}", report.psi_hat);
    println!(
        "objective {:.3e}, {} evaluations, converged {}, {:.1} s",
        report.objective, report.evaluations, report.converged, report.wall_time_secs
    );
    Ok(())
}
