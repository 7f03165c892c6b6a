//! Adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 60;
const MAX_INTERVALS: usize = 200_000;

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * half, (kron - gauss).abs() * half)
}

/// Integrates `f` over `[a, b]` to a relative tolerance `rel_tol`.
///
/// Intervals are bisected until the Kronrod–Gauss difference on each piece is
/// below its share of the tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integration bounds [{a}, {b}] must be finite"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let (whole, _) = kronrod(&f, a, b);
    let target = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    let mut budget = MAX_INTERVALS;
    refine(&f, a, b, target, MAX_DEPTH, &mut budget)
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    budget: &mut usize,
) -> Result<f64> {
    let (value, err) = kronrod(f, a, b);
    if !(value.is_finite() && err.is_finite()) {
        return Err(Error::Domain(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    if err <= tol || depth == 0 {
        return Ok(value);
    }
    if *budget == 0 {
        return Err(Error::Domain("quadrature did not converge".into()));
    }
    *budget -= 1;
    let mid = 0.5 * (a + b);
    Ok(refine(f, a, mid, tol * 0.5, depth - 1, budget)?
        + refine(f, mid, b, tol * 0.5, depth - 1, budget)?)
}
