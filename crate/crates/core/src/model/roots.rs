use nalgebra::DMatrix;
use num_complex::Complex64;

/// Roots of `a_0 + a_1 z + ... + a_n z^n` from the eigenvalues of the
/// companion matrix. Trailing zero coefficients are dropped; a constant
/// polynomial has no roots.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = match coeffs.iter().rposition(|&c| c != 0.0) {
        Some(n) if n > 0 => n,
        _ => return Vec::new(),
    };
    let lead = coeffs[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / lead;
    }
    // the unbounded Schur iteration behind `complex_eigenvalues` can stall
    // on near-defective companions, so cap it and fall back to Durand–Kerner
    match m.try_schur(1e-14, 10_000) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => durand_kerner(&coeffs[..=n]),
    }
}

fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let monic: Vec<f64> = coeffs.iter().map(|c| c / coeffs[n]).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2_000 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    roots
}
