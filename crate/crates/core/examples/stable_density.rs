//! Tabulate the symmetric alpha-stable density for a few tail indices.
//!
//!     cargo run --release --example stable_density

use arfisma::stable::{QuadratureSettings, SasDensity};

fn main() -> arfisma::Result<()> {
    let alphas = [1.2, 1.6, 2.0];
    let densities: Vec<SasDensity> =
        alphas.iter().map(|&a| SasDensity::new(a, QuadratureSettings::default())).collect::<arfisma::Result<_>>()?;
    println!("{:>6} {:>12} {:>12} {:>12}", "x", "a=1.2", "a=1.6", "a=2.0");
    for x in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0] {
        let row: Vec<String> = densities.iter().map(|d| d.eval(x).map(|v| format!("{v:>12.4e}"))).collect::<arfisma::Result<_>>()?;
        println!("{x:>6} {}", row.join(" "));
    }
    Ok(())
}
