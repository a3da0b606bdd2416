//! MA(inf) and AR(inf) weights of the four study models, and a check that
//! the two filters invert each other.
//!
//!     cargo run --release --example coefficients

use arfisma::model::{ar_coeffs, ma_coeffs, table1_model};

fn main() -> arfisma::Result<()> {
    for i in 1..=4 {
        let (psi, spec) = table1_model(i)?;
        let c = ma_coeffs(&psi, &spec, 1000)?;
        let ct = ar_coeffs(&psi, &spec, 1000)?;
        let head = |v: &[f64]| v[..8].iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" ");
        let worst = (1..=30).map(|j| (0..=j).map(|k| ct[k] * c[j - k]).sum::<f64>().abs()).fold(0.0, f64::max);
        println!("model {i}: {psi}");
        println!("  c  {}", head(&c));
        println!("  c~ {}", head(&ct));
        println!("  max |(c~ * c)_j|, 1 <= j <= 30: {worst:.1e}");
    }
    Ok(())
}
