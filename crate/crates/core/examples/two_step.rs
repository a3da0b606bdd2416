//! Two-step fit: MCMC-Whittle memory estimates, then alpha from the
//! filtered residuals.
//!
//!     cargo run --release --example two_step -- [model] [seed]

use arfisma::model::table1_model;
use arfisma::simulate::{simulate, SimulationConfig};
use arfisma::twostep::{estimate_two_step, WhittleConfig};

fn main() -> arfisma::Result<()> {
    let mut args = std::env::args().skip(1);
    let model: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);
    let (psi, spec) = table1_model(model)?;
    let x = simulate(&SimulationConfig::new(psi.clone(), spec, 1500, seed))?;
    let report = estimate_two_step(&x, &spec, &WhittleConfig { seed, ..Default::default() })?;
    println!("truth    {psi}");
    println!("estimate {}", report.psi_hat);
    for w in &report.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
