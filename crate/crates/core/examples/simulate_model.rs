//! Simulate a study model and print summary statistics and the first
//! autocorrelations.
//!
//!     cargo run --release --example simulate_model -- [model] [length]

use arfisma::model::table1_model;
use arfisma::simulate::{simulate, SimulationConfig};

fn main() -> arfisma::Result<()> {
    let mut args = std::env::args().skip(1);
    let model: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let length: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1500);
    let (psi, spec) = table1_model(model)?;
    let x = simulate(&SimulationConfig::new(psi.clone(), spec, length, 5))?;
    let mut sorted = x.clone();
    sorted.sort_by(f64::total_cmp);
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let var: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    println!("{psi}, T = {length}");
    println!("median {:.3}, min {:.2}, max {:.2}", sorted[length / 2], sorted[0], sorted[length - 1]);
    for lag in 1..=8 {
        let r: f64 = x.iter().zip(&x[lag..]).map(|(a, b)| (a - mean) * (b - mean)).sum::<f64>() / var;
        println!("acf({lag}) = {r:+.3}");
    }
    Ok(())
}
