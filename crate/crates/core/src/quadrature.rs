//! Gauss–Kronrod 7/15 panel rules.

/// Kronrod abscissae on [-1, 1] (non-negative half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const NODES_PER_PANEL: usize = 15;

/// One quadrature node: abscissa, Kronrod weight, embedded Gauss weight
/// (zero for Kronrod-only nodes).
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub t: f64,
    pub wk: f64,
    pub wg: f64,
}

/// The 15 nodes of the GK rule mapped to `[a, b]`.
pub fn panel(a: f64, b: f64) -> [Node; NODES_PER_PANEL] {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut out = [Node { t: 0.0, wk: 0.0, wg: 0.0 }; NODES_PER_PANEL];
    let mut k = 0;
    for i in 0..7 {
        let wg = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
        for sign in [-1.0, 1.0] {
            out[k] = Node { t: mid + sign * half * XGK[i], wk: half * WGK[i], wg: half * wg };
            k += 1;
        }
    }
    out[k] = Node { t: mid, wk: half * WGK[7], wg: half * WG[3] };
    out
}

/// Adaptive-free composite integral of `f` over `[a, b]` using `n` equal GK15
/// panels. Returns `(kronrod, |kronrod - gauss|)` summed panel-wise.
pub fn composite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> (f64, f64) {
    let h = (b - a) / n as f64;
    let mut total = 0.0;
    let mut err = 0.0;
    for p in 0..n {
        let lo = a + p as f64 * h;
        let (mut k, mut g) = (0.0, 0.0);
        for node in panel(lo, lo + h) {
            let v = f(node.t);
            k += node.wk * v;
            g += node.wg * v;
        }
        total += k;
        err += (k - g).abs();
    }
    (total, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        let p = panel(1.0, 3.0);
        let sk: f64 = p.iter().map(|n| n.wk).sum();
        let sg: f64 = p.iter().map(|n| n.wg).sum();
        assert!((sk - 2.0).abs() < 1e-14);
        assert!((sg - 2.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_smooth_functions() {
        let (v, e) = composite(|t| t.exp(), 0.0, 1.0, 1);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-15);
        assert!(e < 1e-10);
        let (v, _) = composite(|t| t.sin(), 0.0, std::f64::consts::PI, 4);
        assert!((v - 2.0).abs() < 1e-14);
    }
}
