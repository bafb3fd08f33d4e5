//! Gauss–Legendre rules, composite Gauss on a breakpoint grid with a
//! step-halving error estimate, and adaptive Gauss–Kronrod.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_m`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..(m + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=m {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if m == 0 { 1.0 } else { p1 };
    let d = m as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Vector-valued composite quadrature result.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeResult {
    pub value: Vec<f64>,
    /// Absolute error estimates per component.
    pub error: Vec<f64>,
    /// Number of subintervals per grid cell in the final pass.
    pub pieces: usize,
}

/// Composite Gauss–Legendre over the cells of `breaks`.
///
/// Every cell is integrated with the `order`-point rule whole and as two
/// halves; the halves give the value and their difference from the whole
/// cell gives the error estimate. If any component misses
/// `rel_tol·|value| + abs_tol`, every cell is split in two and the pass is
/// repeated, up to `max_refine` times.
pub fn composite_gauss<F>(
    breaks: &[f64],
    dim: usize,
    order: usize,
    rel_tol: f64,
    abs_tol: f64,
    max_refine: usize,
    mut f: F,
) -> CompositeResult
where
    F: FnMut(usize, f64, &mut [f64]),
{
    let (x, w) = gauss_legendre(order);
    let mut buf = vec![0.0; dim];
    let mut pieces = 1usize;
    loop {
        let mut value = vec![0.0; dim];
        let mut error = vec![0.0; dim];
        let mut coarse = vec![0.0; dim];
        let mut fine = vec![0.0; dim];
        for (cell, pair) in breaks.windows(2).enumerate() {
            let (a0, b0) = (pair[0], pair[1]);
            let width = (b0 - a0) / pieces as f64;
            for p in 0..pieces {
                let a = a0 + p as f64 * width;
                let b = if p + 1 == pieces { b0 } else { a + width };
                coarse.iter_mut().for_each(|v| *v = 0.0);
                fine.iter_mut().for_each(|v| *v = 0.0);
                gauss_accumulate(&x, &w, a, b, cell, &mut f, &mut buf, &mut coarse);
                let mid = 0.5 * (a + b);
                gauss_accumulate(&x, &w, a, mid, cell, &mut f, &mut buf, &mut fine);
                gauss_accumulate(&x, &w, mid, b, cell, &mut f, &mut buf, &mut fine);
                for d in 0..dim {
                    value[d] += fine[d];
                    error[d] += (fine[d] - coarse[d]).abs();
                }
            }
        }
        let converged = (0..dim).all(|d| error[d] <= rel_tol * value[d].abs() + abs_tol);
        if converged || max_refine == 0 || pieces >= 1 << max_refine {
            return CompositeResult { value, error, pieces };
        }
        pieces *= 2;
    }
}

#[allow(clippy::too_many_arguments)]
fn gauss_accumulate<F>(
    x: &[f64],
    w: &[f64],
    a: f64,
    b: f64,
    cell: usize,
    f: &mut F,
    buf: &mut [f64],
    acc: &mut [f64],
) where
    F: FnMut(usize, f64, &mut [f64]),
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for (xi, wi) in x.iter().zip(w) {
        f(cell, mid + half * xi, buf);
        for (s, v) in acc.iter_mut().zip(buf.iter()) {
            *s += half * wi * v;
        }
    }
}

// Gauss-Kronrod 7-15 abscissae and weights (QUADPACK qk15)
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
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive Gauss–Kronrod 7-15 on `[a, b]`.
///
/// Returns `(value, error_estimate)`; fails when `max_intervals` is exhausted
/// before the error drops below `max(abs_tol, rel_tol·|value|)`.
pub fn adaptive_gauss_kronrod<F>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok((total, err));
        }
        if parts.len() >= max_intervals {
            return Err(Error::Solver(format!(
                "adaptive quadrature did not converge: value {total}, error {err}"
            )));
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}
