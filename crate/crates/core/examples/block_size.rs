//! Block-overlap selection by Monte Carlo MSE on a small grid. Expensive:
//! every (m, replication) pair is a full ECF fit.
//!
//!     cargo run --release --example block_size -- [replications]

use arfisma::harness::{run_block_size, ExperimentConfig};

fn main() -> arfisma::Result<()> {
    let replications = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let mut config = ExperimentConfig { replications, m_grid: vec![1, 2, 3], length: 800, ..ExperimentConfig::preset(1)? };
    config.ecf.nodes = 256;
    let selection = run_block_size(&config, None)?;
    for row in &selection.rows {
        println!("m = {}: total MSE {:.5} ({} used)", row.m, row.total_mse, row.used);
    }
    println!("m_opt = {}", selection.m_opt);
    Ok(())
}
