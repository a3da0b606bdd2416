//! Draw iid SaS variables and recover alpha by maximum likelihood.
//!
//!     cargo run --release --example sample_and_fit_alpha -- [alpha] [n]

use arfisma::stable::{fit_alpha_mle, sample_sas, ALPHA_SEARCH_LOWER};

fn main() -> arfisma::Result<()> {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1.6);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(5000);
    let xs = sample_sas(alpha, n, 11)?;
    let fit = fit_alpha_mle(&xs, (ALPHA_SEARCH_LOWER, 2.0))?;
    println!("alpha {alpha}, n {n}: estimate {:.4}", fit.alpha);
    Ok(())
}
