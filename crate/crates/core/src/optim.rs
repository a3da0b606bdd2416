//! Derivative-free minimizers: Nelder–Mead simplex for the vector
//! objectives and Brent's bounded scalar search for the tail-index MLE.

/// Outcome of a minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadSettings {
    /// Initial simplex edge along each coordinate.
    pub step: f64,
    /// Stop when the simplex fits in a box of this half-width...
    pub xtol: f64,
    /// ...and the vertex values spread by less than this.
    pub ftol: f64,
    pub max_evaluations: usize,
}

impl Default for NelderMeadSettings {
    fn default() -> Self {
        NelderMeadSettings { step: 0.25, xtol: 1e-4, ftol: 1e-10, max_evaluations: 2000 }
    }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Nelder–Mead with the standard coefficients (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). Non-finite objective values are treated as
/// `+inf`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], settings: &NelderMeadSettings) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        sanitize(f(x))
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += settings.step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let mut iterations = 0;
    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    while evals < settings.max_evaluations {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let size = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if size <= settings.xtol && spread <= settings.ftol {
            converged = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].clone();
        for i in 0..n {
            trial[i] = centroid[i] + (centroid[i] - worst[i]);
        }
        let fr = eval(&trial, &mut evals);

        if fr < values[0] {
            for i in 0..n {
                trial2[i] = centroid[i] + 2.0 * (centroid[i] - worst[i]);
            }
            let fe = eval(&trial2, &mut evals);
            if fe < fr {
                simplex[n].copy_from_slice(&trial2);
                values[n] = fe;
            } else {
                simplex[n].copy_from_slice(&trial);
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n].copy_from_slice(&trial);
            values[n] = fr;
            continue;
        }
        // contraction: outside if the reflection improved on the worst point
        let (base, fbase) = if fr < values[n] { (trial.clone(), fr) } else { (worst.clone(), values[n]) };
        for i in 0..n {
            trial2[i] = centroid[i] + 0.5 * (base[i] - centroid[i]);
        }
        let fc = eval(&trial2, &mut evals);
        if fc < fbase {
            simplex[n].copy_from_slice(&trial2);
            values[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for j in 1..=n {
            for i in 0..n {
                simplex[j][i] = best[i] + 0.5 * (simplex[j][i] - best[i]);
            }
            values[j] = eval(&simplex[j], &mut evals);
        }
    }

    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        evaluations: evals,
        converged,
    }
}

/// Brent's bounded scalar minimization (golden section with parabolic
/// steps) on `[lower, upper]` to absolute tolerance `tol`.
pub fn brent<F>(mut f: F, lower: f64, upper: f64, tol: f64, max_iterations: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    const GOLDEN: f64 = 0.381_966_011_250_105_1;
    let (mut a, mut b) = (lower, upper);
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = sanitize(f(x));
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    let mut evals = 1;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iterations {
        let m = 0.5 * (a + b);
        let tol1 = 1e-10 * x.abs() + tol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            converged = true;
            break;
        }
        iterations += 1;
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < m { b - x } else { a - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else if d > 0.0 { x + tol1 } else { x - tol1 };
        let fu = sanitize(f(u));
        evals += 1;
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    // the interior search never samples the end points themselves
    for edge in [lower, upper] {
        let fe = sanitize(f(edge));
        evals += 1;
        if fe < fx {
            x = edge;
            fx = fe;
        }
    }
    Minimum { x: vec![x], value: fx, iterations, evaluations: evals, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let s = NelderMeadSettings { step: 0.5, xtol: 1e-8, ftol: 1e-14, max_evaluations: 5000 };
        let m = nelder_mead(rosen, &[-1.2, 1.0], &s);
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] - 1.0).abs() < 1e-5, "{:?}", m.x);
    }

    #[test]
    fn nelder_mead_quadratic_four_dims() {
        let target = [0.3, -1.0, 2.0, 0.5];
        let f = |x: &[f64]| x.iter().zip(&target).enumerate().map(|(i, (a, b))| (i + 1) as f64 * (a - b).powi(2)).sum();
        let m = nelder_mead(f, &[0.0; 4], &NelderMeadSettings::default());
        assert!(m.converged);
        for (a, b) in m.x.iter().zip(&target) {
            assert!((a - b).abs() < 1e-3);
        }
    }

    #[test]
    fn nelder_mead_treats_nan_as_infinite() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 0.2).powi(2) };
        let m = nelder_mead(f, &[0.5], &NelderMeadSettings::default());
        assert!((m.x[0] - 0.2).abs() < 1e-3);
    }

    #[test]
    fn brent_interior_and_boundary() {
        let m = brent(|x| (x - 1.3).powi(2), 1.0, 2.0, 1e-8, 200);
        assert!(m.converged && (m.x[0] - 1.3).abs() < 1e-7);
        let m = brent(|x| -x, 1.0, 2.0, 1e-8, 200);
        assert_eq!(m.x[0], 2.0);
    }
}
