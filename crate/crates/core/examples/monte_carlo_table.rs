//! A small Monte Carlo study written to disk: per-replication CSV plus
//! summary CSV and JSON.
//!
//!     cargo run --release --example monte_carlo_table -- [out_dir] [replications]

use std::path::PathBuf;

use arfisma::harness::{run_experiment, write_experiment, ExperimentConfig, Method};

fn main() -> arfisma::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "arfisma-out".into()));
    let replications = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);
    let config = ExperimentConfig { method: Method::Tsm, replications, master_seed: 1, ..ExperimentConfig::preset(1)? };
    let outcome = run_experiment(&config, None)?;
    let files = write_experiment(&config, &outcome, &dir)?;
    if let Some(summary) = &outcome.summary {
        for p in &summary.params {
            println!("{:<6} truth {:.4} mean {:.4} rmse {:.4} mae {:.4}", p.name, p.truth, p.mean, p.rmse, p.mae);
        }
    }
    println!("wrote {}", files.replications.display());
    Ok(())
}
