use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Exp1, Open01};

use crate::error::{Error, Result};
use crate::seed;

/// One symmetric standard stable draw by the Chambers–Mallows–Stuck
/// construction: `U ~ Uniform(-pi/2, pi/2)`, `W ~ Exp(1)`,
/// `X = sin(alpha U) / cos(U)^(1/alpha) * (cos((1 - alpha) U) / W)^((1 - alpha)/alpha)`.
#[inline]
fn cms_draw<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u: f64 = PI * (rng.sample::<f64, _>(Open01) - 0.5);
    let w: f64 = rng.sample(Exp1);
    let lead = (alpha * u).sin() / u.cos().powf(1.0 / alpha);
    let tail = ((1.0 - alpha) * u).cos() / w;
    lead * tail.powf((1.0 - alpha) / alpha)
}

/// Draws `count` i.i.d. `S(alpha, 0, 1, 0)` variates from an existing stream,
/// consuming two uniforms per draw in order.
pub fn sample_sas_from<R: Rng + ?Sized>(alpha: f64, count: usize, rng: &mut R) -> Result<Vec<f64>> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok((0..count).map(|_| cms_draw(alpha, rng)).collect())
}

/// Draws `count` i.i.d. symmetric standard stable variates, `1 < alpha <= 2`,
/// from the ChaCha20 stream for `seed`.
pub fn sample_sas(alpha: f64, count: usize, seed: u64) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    sample_sas_from(alpha, count, &mut seed::rng(seed))
}
