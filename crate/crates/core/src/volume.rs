//! Tube volume in terms of the degrees.
//!
//! With `u = λ s² = sin²(√λ r)`,
//!
//! ```text
//! vol(P_ρ)/vol(P) = (π/λ)^{n−q} Σ_i v_i ∫_0^U u^{n−q+i−1} (1−u)^{q−i} du,   U = sin²(√λ ρ)
//! ```
//!
//! where `v_i` are [`Moments::volume_coefficient`]. The polynomial in `U` is
//! evaluated exactly; only `U` itself and the prefactor are floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chern::{binomial, rational_to_f64, DegreeProfile, Moments};
use crate::error::{Error, Result};
use crate::geometry::trig_unchecked;
use crate::quadrature::adaptive_gauss_kronrod;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeRatio {
    pub rho: f64,
    pub ratio: f64,
    /// First radius in `(0, ρ]` where the degree-weighted density vanishes.
    pub density_zero: Option<f64>,
    pub warnings: Vec<String>,
}

fn check(profile: &DegreeProfile, n: usize, q: usize, lambda: f64, rho: f64) -> Result<()> {
    if profile.n != n || profile.q != q {
        return Err(Error::InvalidInput(format!(
            "degree profile for n = {}, q = {} does not match n = {n}, q = {q}",
            profile.n, profile.q
        )));
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    let half = std::f64::consts::FRAC_PI_2 / lambda.sqrt();
    if !(rho >= 0.0) || rho > half {
        return Err(Error::Domain(format!("rho = {rho} outside [0, {half}]")));
    }
    Ok(())
}

/// Exact value of `Σ_i v_i ∫_0^U u^{α_i−1}(1−u)^{β_i} du`.
pub fn volume_polynomial(moments: &Moments, u: &BigRational) -> BigRational {
    let (n, q) = (moments.n, moments.q);
    let mut total = BigRational::zero();
    for i in 0..=q {
        let vc = moments.volume_coefficient(i);
        if vc.is_zero() {
            continue;
        }
        let mut inner = BigRational::zero();
        for k in 0..=(q - i) {
            let e = n - q + i + k;
            let term = BigRational::from(BigInt::from(binomial((q - i) as i64, k as i64)))
                * num_traits::pow(u.clone(), e)
                / BigRational::from(BigInt::from(e));
            if k % 2 == 1 {
                inner -= term;
            } else {
                inner += term;
            }
        }
        total += vc * inner;
    }
    total
}

/// `vol(P_ρ)/vol(P)` for a center of the given degrees.
pub fn tube_volume_ratio(n: usize, q: usize, profile: &DegreeProfile, lambda: f64, rho: f64) -> Result<VolumeRatio> {
    check(profile, n, q, lambda, rho)?;
    let moments = Moments::from_profile(profile);
    let u = (lambda.sqrt() * rho).sin().powi(2);
    let ub = BigRational::from_f64(u).ok_or_else(|| Error::Domain(format!("U = {u} not finite")))?;
    let p = rational_to_f64(&volume_polynomial(&moments, &ub));
    let ratio = (std::f64::consts::PI / lambda).powi((n - q) as i32) * p;
    let density_zero = density_first_zero(&moments, lambda, rho);
    let mut warnings = Vec::new();
    if let Some(r0) = density_zero {
        warnings.push(format!(
            "density is negative past r = {r0}; the tube is beyond a focal distance consistent with the degrees"
        ));
    }
    Ok(VolumeRatio { rho, ratio, density_zero, warnings })
}

/// The same ratio by adaptive quadrature of the density.
pub fn tube_volume_ratio_quadrature(
    n: usize,
    q: usize,
    profile: &DegreeProfile,
    lambda: f64,
    rho: f64,
) -> Result<f64> {
    check(profile, n, q, lambda, rho)?;
    let moments = Moments::from_profile(profile);
    let vc = float_coefficients(&moments);
    let (n, q) = (n as i32, q as i32);
    let pre = 2.0 * std::f64::consts::PI.powi(n - q);
    let (v, _) = adaptive_gauss_kronrod(
        |r| {
            let t = trig_unchecked(lambda, r);
            pre * t.s.powi(2 * (n - q) - 1) * t.c * density_factor(&vc, (lambda.sqrt() * r).sin().powi(2))
        },
        0.0,
        rho,
        1e-13,
        0.0,
        4000,
    )?;
    Ok(v)
}

/// `2π^{n−q} Σ_i v_i λ^i s^{2(n−q+i)−1} c^{2(q−i)+1}`, the `r`-derivative of the ratio.
pub fn volume_density(moments: &Moments, lambda: f64, r: f64) -> f64 {
    let (n, q) = (moments.n, moments.q);
    let t = trig_unchecked(lambda, r);
    let pre = 2.0
        * std::f64::consts::PI.powi((n - q) as i32)
        * t.s.powi((2 * (n - q) - 1) as i32)
        * t.c;
    pre * density_factor(&float_coefficients(moments), (lambda.sqrt() * r).sin().powi(2))
}

fn float_coefficients(moments: &Moments) -> Vec<f64> {
    (0..=moments.q)
        .map(|i| rational_to_f64(&moments.volume_coefficient(i)))
        .collect()
}

/// `Σ_i v_i u^i (1−u)^{q−i}`: the density with its positive prefactor removed.
fn density_factor(vc: &[f64], u: f64) -> f64 {
    let q = vc.len() - 1;
    vc.iter()
        .enumerate()
        .map(|(i, v)| v * u.powi(i as i32) * (1.0 - u).powi((q - i) as i32))
        .sum()
}

/// First `r ∈ (0, ρ]` where the density vanishes, if any: either a sign
/// change or a minimum that touches zero (an even-order root).
pub fn density_first_zero(moments: &Moments, lambda: f64, rho: f64) -> Option<f64> {
    let sl = lambda.sqrt();
    let vc = float_coefficients(moments);
    let g = |r: f64| density_factor(&vc, (sl * r).sin().powi(2));
    let scale: f64 = vc.iter().map(|v| v.abs()).sum();
    const SAMPLES: usize = 2048;
    let rs: Vec<f64> = (0..=SAMPLES).map(|j| rho * j as f64 / SAMPLES as f64).collect();
    let vs: Vec<f64> = rs.iter().map(|&r| g(r)).collect();
    for j in 1..=SAMPLES {
        if vs[j] <= 0.0 {
            let (mut a, mut b) = (rs[j - 1], rs[j]);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if g(m) > 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Some(b);
        }
        if j < SAMPLES && vs[j] <= vs[j - 1] && vs[j] <= vs[j + 1] {
            let (r_min, v_min) = golden_min(&g, rs[j - 1], rs[j + 1]);
            if v_min <= 1e-10 * scale {
                return Some(r_min);
            }
        }
    }
    None
}

fn golden_min<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..200 {
        if b - a <= 1e-15 * b.abs() {
            break;
        }
        if g1 <= g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - inv_phi * (b - a);
            g1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + inv_phi * (b - a);
            g2 = g(x2);
        }
    }
    if g1 <= g2 {
        (x1, g1)
    } else {
        (x2, g2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn hyperplane_closed_form() {
        for n in 2..=6 {
            let q = n - 1;
            let p = DegreeProfile::linear(n, q).unwrap();
            for lambda in [0.5f64, 1.0, 3.0] {
                for rho in [0.1, 0.7, 1.2] {
                    if rho > PI / (2.0 * lambda.sqrt()) {
                        continue;
                    }
                    let v = tube_volume_ratio(n, q, &p, lambda, rho).unwrap().ratio;
                    let c = (lambda.sqrt() * rho).cos();
                    let e = PI * (1.0 - c.powi(2 * q as i32 + 2)) / ((q + 1) as f64 * lambda);
                    assert!((v - e).abs() < 1e-13 * e, "n={n}: {v} vs {e}");
                }
                let full = tube_volume_ratio(n, q, &p, lambda, PI / (2.0 * lambda.sqrt())).unwrap().ratio;
                assert!((full - PI / (n as f64 * lambda)).abs() < 1e-13 * full);
            }
        }
    }

    #[test]
    fn small_radius_is_a_flat_ball() {
        let p = DegreeProfile::new(5, 2, vec![2, 3, 4]).unwrap();
        let rho = 1e-3;
        let v = tube_volume_ratio(5, 2, &p, 1.0, rho).unwrap().ratio;
        // volume of the radius-ρ ball in R^6
        let ball = PI.powi(3) * rho.powi(6) / 6.0;
        assert!((v / ball - 1.0).abs() < 1e-4);
    }

    #[test]
    fn exact_and_quadrature_agree() {
        let p = DegreeProfile::new(4, 2, vec![2, 3]).unwrap();
        for rho in [0.1, 0.3, 0.5] {
            let e = tube_volume_ratio(4, 2, &p, 1.0, rho).unwrap();
            let qv = tube_volume_ratio_quadrature(4, 2, &p, 1.0, rho).unwrap();
            assert!((e.ratio - qv).abs() < 1e-10 * qv.abs());
        }
    }

    #[test]
    fn negative_density_is_flagged() {
        let p = DegreeProfile::new(2, 1, vec![5]).unwrap();
        let m = Moments::from_profile(&p);
        // v_0 = 1, v_1 = −β_1 = −4: zero where (1−u) = 4u
        let z = density_first_zero(&m, 1.0, 1.5).unwrap();
        assert!((z.sin().powi(2) - 0.2).abs() < 1e-12);
        let v = tube_volume_ratio(2, 1, &p, 1.0, 1.0).unwrap();
        assert_eq!(v.warnings.len(), 1);
        assert!(tube_volume_ratio(2, 1, &p, 1.0, 0.3).unwrap().warnings.is_empty());
    }

    #[test]
    fn touching_zero_is_found() {
        // density factor (1 − 5u)² never changes sign
        let p = DegreeProfile::new(3, 2, vec![5]).unwrap();
        let z = density_first_zero(&Moments::from_profile(&p), 1.0, 1.0).unwrap();
        assert!((z.sin().powi(2) - 0.2).abs() < 1e-6, "{z}");
        assert!(density_first_zero(&Moments::from_profile(&p), 1.0, 0.4).is_none());
    }

    #[test]
    fn increasing_while_density_positive() {
        let p = DegreeProfile::new(6, 3, vec![2, 2, 3]).unwrap();
        let m = Moments::from_profile(&p);
        let stop = density_first_zero(&m, 1.0, PI / 2.0).unwrap_or(PI / 2.0);
        let mut last = 0.0;
        for j in 1..=40 {
            let rho = stop * j as f64 / 41.0;
            let v = tube_volume_ratio(6, 3, &p, 1.0, rho).unwrap().ratio;
            assert!(v > last);
            last = v;
        }
    }
}
