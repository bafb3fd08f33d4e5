//! Trigonometric primitives of `CP^n(λ)`, the catalog of constant-curvature
//! model centers, tube densities and the mean curvature of tubular hypersurfaces.
//!
//! Radii are measured from the center of the tube. All functions are pure.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The values `s_λ(r)`, `c_λ(r)` and `c_{4λ}(r)` at one radius.
///
/// `s = sin(√λ r)/√λ`, `c = cos(√λ r)`, `c4 = cos(2√λ r)`. For `λ = 0` these
/// degenerate to the flat values `s = r`, `c = c4 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigBundle {
    pub r: f64,
    pub lambda: f64,
    pub s: f64,
    pub c: f64,
    pub c4: f64,
}

impl TrigBundle {
    /// `ta_λ(r) = s/c`; undefined where `c` vanishes.
    pub fn ta(&self) -> Result<f64> {
        if self.c == 0.0 {
            return Err(Error::Domain(format!(
                "ta_λ undefined at r = {} where c_λ vanishes",
                self.r
            )));
        }
        Ok(self.s / self.c)
    }
}

/// Evaluates the trigonometric bundle at radius `r`.
pub fn trig(lambda: f64, r: f64) -> Result<TrigBundle> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be >= 0, got {r}")));
    }
    Ok(trig_unchecked(lambda, r))
}

#[inline]
pub(crate) fn trig_unchecked(lambda: f64, r: f64) -> TrigBundle {
    if lambda == 0.0 {
        return TrigBundle { r, lambda, s: r, c: 1.0, c4: 1.0 };
    }
    let k = lambda.sqrt();
    let (sin, cos) = (k * r).sin_cos();
    TrigBundle {
        r,
        lambda,
        s: sin / k,
        c: cos,
        c4: (2.0 * k * r).cos(),
    }
}

/// Inverse of `ta_λ` with image in `[0, π/(2√λ))`.
pub fn inverse_ta(lambda: f64, x: f64) -> f64 {
    if x.is_infinite() {
        return PI / (2.0 * lambda.sqrt());
    }
    let k = lambda.sqrt();
    (k * x).atan() / k
}

/// The five families of complex submanifolds of `CP^n(λ)` whose principal
/// curvatures do not depend on the point or the normal direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Totally geodesic `CP^q(λ)`.
    Cpq,
    /// Complex hyperquadric `Q^{n-1}(λ)`.
    Quadric,
    /// Segre embedding `CP^1 × CP^{m-1} ⊂ CP^{2m-1}`, `m ≥ 3`.
    Segre,
    /// `SU(5)/S(U(3)×U(2)) ⊂ CP^9`.
    Su5,
    /// `SO(10)/U(5) ⊂ CP^15`.
    So10,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Cpq,
        Family::Quadric,
        Family::Segre,
        Family::Su5,
        Family::So10,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::Cpq => "cpq",
            Family::Quadric => "quadric",
            Family::Segre => "segre",
            Family::Su5 => "su5",
            Family::So10 => "so10",
        }
    }

    pub fn from_id(id: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.id() == id)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A model center: family, ambient complex dimension `n`, complex dimension
/// `q`, and the number `zc` of principal curvatures equal to `√λ` (the rest vanish).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub family: Family,
    pub n: usize,
    pub q: usize,
    pub zc: usize,
}

impl ModelDescriptor {
    /// Builds a model, checking `(family, n, q)` against the classification.
    pub fn new(family: Family, n: usize, q: usize) -> Result<Self> {
        let zc = match family {
            Family::Cpq => {
                if q < 1 || q + 1 > n {
                    return Err(Error::InvalidInput(format!(
                        "cpq requires 1 <= q <= n-1, got n = {n}, q = {q}"
                    )));
                }
                0
            }
            Family::Quadric => {
                if n < 2 || q + 1 != n {
                    return Err(Error::InvalidInput(format!(
                        "quadric requires n >= 2 and q = n-1, got n = {n}, q = {q}"
                    )));
                }
                n - 1
            }
            Family::Segre => {
                if n < 5 || n % 2 == 0 || q != (n + 1) / 2 {
                    return Err(Error::InvalidInput(format!(
                        "segre requires n = 2m-1 >= 5 and q = m, got n = {n}, q = {q}"
                    )));
                }
                2
            }
            Family::Su5 => {
                if n != 9 || q != 6 {
                    return Err(Error::InvalidInput(format!(
                        "su5 requires n = 9, q = 6, got n = {n}, q = {q}"
                    )));
                }
                4
            }
            Family::So10 => {
                if n != 15 || q != 10 {
                    return Err(Error::InvalidInput(format!(
                        "so10 requires n = 15, q = 10, got n = {n}, q = {q}"
                    )));
                }
                6
            }
        };
        Ok(ModelDescriptor { family, n, q, zc })
    }

    pub fn cpq(n: usize, q: usize) -> Result<Self> {
        Self::new(Family::Cpq, n, q)
    }

    pub fn quadric(n: usize) -> Result<Self> {
        Self::new(Family::Quadric, n, n.saturating_sub(1))
    }

    /// `CP^1 × CP^{m-1}` in `CP^{2m-1}`.
    pub fn segre(m: usize) -> Result<Self> {
        Self::new(Family::Segre, (2 * m).saturating_sub(1), m)
    }

    pub fn su5() -> Self {
        ModelDescriptor { family: Family::Su5, n: 9, q: 6, zc: 4 }
    }

    pub fn so10() -> Self {
        ModelDescriptor { family: Family::So10, n: 15, q: 10, zc: 6 }
    }

    /// Real codimension `2(n - q)`.
    pub fn codim(&self) -> usize {
        2 * (self.n - self.q)
    }

    /// Exponent `2n - 2q - 1` of `s_λ` in the density.
    pub fn sphere_exponent(&self) -> i32 {
        (2 * (self.n - self.q) - 1) as i32
    }

    /// First positive zero of the tube density: `π/(2√λ)` for the totally
    /// geodesic center, `π/(4√λ)` when some curvature equals `√λ`.
    pub fn cut_radius(&self, lambda: f64) -> f64 {
        if self.zc == 0 {
            PI / (2.0 * lambda.sqrt())
        } else {
            PI / (4.0 * lambda.sqrt())
        }
    }

    /// Principal curvature magnitudes: `zc` copies of `√λ` followed by zeros.
    pub fn curvature_vector(&self, lambda: f64) -> CurvatureVector {
        let mut k = vec![lambda.sqrt(); self.zc];
        k.resize(self.q, 0.0);
        CurvatureVector { k }
    }

    /// `h_𝔓 c^2 = zc λ / c_{4λ} + q λ`, no range checks.
    #[inline]
    pub(crate) fn h_c2_raw(&self, t: &TrigBundle) -> f64 {
        let q = self.q as f64;
        if self.zc == 0 {
            q * t.lambda
        } else {
            self.zc as f64 * t.lambda / t.c4 + q * t.lambda
        }
    }

    /// Weingarten trace without range checks.
    #[inline]
    pub(crate) fn trace_raw(&self, t: &TrigBundle) -> f64 {
        let ta = t.s / t.c;
        2.0 * ta * self.h_c2_raw(t) - self.sphere_exponent() as f64 * t.c / t.s + t.lambda * ta
    }

    /// Density without range checks.
    #[inline]
    pub(crate) fn theta_raw(&self, t: &TrigBundle) -> f64 {
        let e_c = 2 * (self.q - self.zc) as i32 + 1;
        t.s.powi(self.sphere_exponent()) * t.c.powi(e_c) * t.c4.powi(self.zc as i32)
    }
}

impl fmt::Display for ModelDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={}, q={})", self.family, self.n, self.q)
    }
}

/// Principal curvature magnitudes `k_1, …, k_q` in a normal direction.
///
/// Complex submanifolds have curvatures in pairs `±k_i`; only the magnitudes are kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureVector {
    pub k: Vec<f64>,
}

impl CurvatureVector {
    pub fn new(k: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = k.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidInput(format!(
                "curvature k[{i}] = {v} must be finite and nonnegative"
            )));
        }
        Ok(CurvatureVector { k })
    }

    pub fn zeros(q: usize) -> Self {
        CurvatureVector { k: vec![0.0; q] }
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    /// First radius where some factor `c^2 - k^2 s^2` vanishes.
    pub fn focal_radius(&self, lambda: f64) -> f64 {
        let kmax = self.k.iter().copied().fold(0.0, f64::max);
        // c^2 = k^2 s^2  <=>  ta = 1/k
        inverse_ta(lambda, 1.0 / kmax)
    }
}

/// `h_P(r) = Σ_i (λ + k_i²)/(c² − k_i² s²)`.
pub fn h_general(k: &CurvatureVector, lambda: f64, r: f64) -> Result<f64> {
    let t = trig(lambda, r)?;
    let (c2, s2) = (t.c * t.c, t.s * t.s);
    let mut h = 0.0;
    for (index, &ki) in k.k.iter().enumerate() {
        let den = c2 - ki * ki * s2;
        if !(den > 0.0) {
            return Err(Error::FocalRadius { index, k: ki, r });
        }
        h += (lambda + ki * ki) / den;
    }
    Ok(h)
}

fn check_radius(model: &ModelDescriptor, lambda: f64, r: f64, allow_cut: bool) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("model tubes require lambda > 0, got {lambda}")));
    }
    let cut = model.cut_radius(lambda);
    let beyond = if allow_cut { r > cut } else { r >= cut };
    if !(r >= 0.0) || beyond {
        return Err(Error::Domain(format!(
            "radius {r} outside [0, {cut}) for {model}"
        )));
    }
    Ok(())
}

/// `h_𝔓(r)·c_λ(r)² = zc·λ/c_{4λ}(r) + q·λ` for a model center.
pub fn h_model_c2(model: &ModelDescriptor, lambda: f64, r: f64) -> Result<f64> {
    check_radius(model, lambda, r, false)?;
    Ok(model.h_c2_raw(&trig_unchecked(lambda, r)))
}

/// Trace of the shape operator of the tubular hypersurface at distance `r`:
/// `2 s c h_𝔓 − (2n−2q−1) c/s + λ s/c`. Equals `−(log θ_𝔓)'(r)`.
pub fn weingarten_trace(model: &ModelDescriptor, lambda: f64, r: f64) -> Result<f64> {
    check_radius(model, lambda, r, false)?;
    if r == 0.0 {
        return Err(Error::Domain("Weingarten trace is singular at r = 0".into()));
    }
    Ok(model.trace_raw(&trig_unchecked(lambda, r)))
}

/// Tube density of a model: `s^{2n−2q−1} c^{2(q−zc)+1} c_{4λ}^{zc}`.
pub fn theta_model(model: &ModelDescriptor, lambda: f64, r: f64) -> Result<f64> {
    check_radius(model, lambda, r, true)?;
    Ok(model.theta_raw(&trig_unchecked(lambda, r)).max(0.0))
}

/// Tube density for constant curvatures `k`: `s^{2n−2q−1} c ∏_j (c² − s² k_j²)`.
pub fn theta_general(k: &CurvatureVector, n: usize, q: usize, lambda: f64, r: f64) -> Result<f64> {
    if k.len() != q || q >= n {
        return Err(Error::InvalidInput(format!(
            "curvature vector of length {} does not match q = {q} (n = {n})",
            k.len()
        )));
    }
    let t = trig(lambda, r)?;
    let (c2, s2) = (t.c * t.c, t.s * t.s);
    let v: f64 = k.k.iter().map(|ki| c2 - s2 * ki * ki).product();
    Ok(t.s.powi((2 * (n - q) - 1) as i32) * t.c * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT1_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn models() -> Vec<ModelDescriptor> {
        vec![
            ModelDescriptor::cpq(2, 1).unwrap(),
            ModelDescriptor::cpq(5, 2).unwrap(),
            ModelDescriptor::quadric(2).unwrap(),
            ModelDescriptor::quadric(4).unwrap(),
            ModelDescriptor::segre(3).unwrap(),
            ModelDescriptor::su5(),
            ModelDescriptor::so10(),
        ]
    }

    #[test]
    fn trig_exact_values() {
        let t = trig(1.0, PI / 4.0).unwrap();
        assert!((t.s - SQRT1_2).abs() < 1e-15);
        assert!((t.c - SQRT1_2).abs() < 1e-15);
        assert!((t.ta().unwrap() - 1.0).abs() < 1e-15);
        assert!(t.c4.abs() < 1e-15);

        let t = trig(1.0, 0.0).unwrap();
        assert_eq!((t.s, t.c, t.ta().unwrap(), t.c4), (0.0, 1.0, 0.0, 1.0));

        let t = trig(4.0, PI / 8.0).unwrap();
        assert!((t.s - (PI / 4.0).sin() / 2.0).abs() < 1e-15);
        assert!((t.s - 0.353553).abs() < 1e-6);
        assert!((t.c - 0.707107).abs() < 1e-6);
        assert!(t.c4.abs() < 1e-15);
    }

    #[test]
    fn trig_flat_limit_and_errors() {
        let t = trig(0.0, 0.7).unwrap();
        assert_eq!((t.s, t.c, t.c4), (0.7, 1.0, 1.0));
        assert!(trig(-1.0, 0.1).is_err());
        assert!(trig(1.0, -0.1).is_err());
        let t = TrigBundle { r: 1.0, lambda: 1.0, s: 1.0, c: 0.0, c4: -1.0 };
        assert!(matches!(t.ta(), Err(Error::Domain(_))));
    }

    #[test]
    fn trig_identities_on_grid() {
        for lambda in [0.25, 1.0, 4.0] {
            for i in 0..=200 {
                let r = i as f64 * 0.01;
                let t = trig(lambda, r).unwrap();
                assert!((t.c * t.c + lambda * t.s * t.s - 1.0).abs() < 1e-14);
                assert!((t.c4 - (2.0 * t.c * t.c - 1.0)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn model_catalog_constraints() {
        assert!(ModelDescriptor::cpq(3, 0).is_err());
        assert!(ModelDescriptor::cpq(3, 3).is_err());
        assert!(ModelDescriptor::new(Family::Quadric, 4, 2).is_err());
        assert!(ModelDescriptor::segre(2).is_err());
        assert!(ModelDescriptor::new(Family::Segre, 6, 3).is_err());
        assert!(ModelDescriptor::new(Family::Su5, 9, 5).is_err());
        assert_eq!(ModelDescriptor::segre(4).unwrap().zc, 2);
        assert_eq!(ModelDescriptor::quadric(5).unwrap().zc, 4);
        assert_eq!(ModelDescriptor::new(Family::So10, 15, 10).unwrap(), ModelDescriptor::so10());
        assert_eq!(ModelDescriptor::new(Family::Su5, 9, 6).unwrap(), ModelDescriptor::su5());
        let m = ModelDescriptor::cpq(4, 2).unwrap();
        assert!((m.cut_radius(4.0) - PI / 4.0).abs() < 1e-15);
        let m = ModelDescriptor::quadric(3).unwrap();
        assert!((m.cut_radius(4.0) - PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn h_general_reductions() {
        let lambda = 1.3;
        let r = 0.4;
        let t = trig(lambda, r).unwrap();
        let h0 = h_general(&CurvatureVector::zeros(3), lambda, r).unwrap();
        assert!((h0 - 3.0 * lambda / (t.c * t.c)).abs() < 1e-13);

        let k = CurvatureVector::new(vec![lambda.sqrt(); 3]).unwrap();
        let h = h_general(&k, lambda, r).unwrap();
        assert!((h - 6.0 * lambda / t.c4).abs() < 1e-12);

        let k = CurvatureVector::new(vec![0.3, 1.1, 2.0]).unwrap();
        let h = h_general(&k, lambda, 0.0).unwrap();
        let expect = 3.0 * lambda + 0.09 + 1.21 + 4.0;
        assert!((h - expect).abs() < 1e-13);
    }

    #[test]
    fn h_general_reports_focal_index() {
        let k = CurvatureVector::new(vec![0.0, 5.0]).unwrap();
        let focal = k.focal_radius(1.0);
        match h_general(&k, 1.0, focal * 1.01) {
            Err(Error::FocalRadius { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected focal error, got {other:?}"),
        }
    }

    #[test]
    fn h_model_c2_values_and_identity() {
        let cp = ModelDescriptor::cpq(4, 2).unwrap();
        assert!((h_model_c2(&cp, 2.0, 0.5).unwrap() - 4.0).abs() < 1e-15);
        for m in models() {
            let v = h_model_c2(&m, 1.5, 0.0).unwrap();
            assert!((v - (m.zc + m.q) as f64 * 1.5).abs() < 1e-13);
        }
        let quad = ModelDescriptor::quadric(2).unwrap();
        let v = h_model_c2(&quad, 1.0, PI / 8.0).unwrap();
        assert!((v - (1.0 / (PI / 4.0).cos() + 1.0)).abs() < 1e-12);
        assert!((v - 2.414214).abs() < 1e-6);

        for m in models() {
            for lambda in [0.5, 1.0, 3.0] {
                let cut = m.cut_radius(lambda);
                let k = m.curvature_vector(lambda);
                for j in 0..50 {
                    let r = cut * j as f64 / 50.0;
                    let t = trig(lambda, r).unwrap();
                    let lhs = h_model_c2(&m, lambda, r).unwrap();
                    let rhs = h_general(&k, lambda, r).unwrap() * t.c * t.c;
                    assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "{m} r={r}");
                }
            }
        }
        assert!(h_model_c2(&quad, 1.0, PI / 4.0).is_err());
    }

    #[test]
    fn trace_is_minus_log_density_derivative() {
        for m in models() {
            for lambda in [0.5, 2.0] {
                let cut = m.cut_radius(lambda);
                for j in 1..20 {
                    let r = cut * j as f64 / 20.0;
                    let dh = 1e-6;
                    let lp = theta_model(&m, lambda, r + dh).unwrap().ln();
                    let lm = theta_model(&m, lambda, r - dh).unwrap().ln();
                    let fd = -(lp - lm) / (2.0 * dh);
                    let tr = weingarten_trace(&m, lambda, r).unwrap();
                    assert!((fd - tr).abs() < 1e-5 * tr.abs().max(1.0), "{m} r={r}: {fd} vs {tr}");
                }
            }
        }
    }

    #[test]
    fn trace_leading_singularity_and_errors() {
        let m = ModelDescriptor::cpq(4, 1).unwrap();
        let r = 1e-4;
        let tr = weingarten_trace(&m, 1.0, r).unwrap();
        assert!((tr + 5.0 / r).abs() < 1e-2);
        assert!(weingarten_trace(&m, 1.0, 0.0).is_err());
        assert!(weingarten_trace(&m, 1.0, m.cut_radius(1.0)).is_err());

        // Quadric n=2, λ=1, r=π/8 against the explicit expression
        let quad = ModelDescriptor::quadric(2).unwrap();
        let r = PI / 8.0;
        let h = h_general(&quad.curvature_vector(1.0), 1.0, r).unwrap();
        let expect = 2.0 * r.sin() * r.cos() * h - r.cos() / r.sin() + r.sin() / r.cos();
        assert!((weingarten_trace(&quad, 1.0, r).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn theta_model_matches_general() {
        for m in models() {
            for lambda in [0.5, 1.0, 3.0] {
                let cut = m.cut_radius(lambda);
                let k = m.curvature_vector(lambda);
                for j in 0..=100 {
                    let r = cut * j as f64 / 100.0 * 0.999;
                    let a = theta_model(&m, lambda, r).unwrap();
                    let b = theta_general(&k, m.n, m.q, lambda, r).unwrap();
                    assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300) + 1e-300, "{m} r={r}");
                }
            }
        }
    }

    #[test]
    fn theta_vanishes_first_at_cut() {
        for m in models() {
            let lambda = 1.7;
            let cut = m.cut_radius(lambda);
            assert!(theta_model(&m, lambda, cut).unwrap() <= 1e-12);
            for j in 1..1000 {
                let r = cut * j as f64 / 1000.0;
                assert!(theta_model(&m, lambda, r).unwrap() > 0.0, "{m} r={r}");
            }
        }
    }

    #[test]
    fn theta_closed_forms() {
        let m = ModelDescriptor::cpq(2, 1).unwrap();
        for r in [0.1, 0.5, 1.2] {
            let v = theta_model(&m, 1.0, r).unwrap();
            assert!((v - r.sin() * r.cos().powi(3)).abs() < 1e-15);
        }
        let t = trig(2.0, 0.3).unwrap();
        let v = theta_general(&CurvatureVector::zeros(2), 5, 2, 2.0, 0.3).unwrap();
        assert!((v - t.s.powi(5) * t.c.powi(5)).abs() < 1e-16);
        let k = CurvatureVector::new(vec![0.4, 2.0]).unwrap();
        assert_eq!(theta_general(&k, 3, 2, 1.0, 0.0).unwrap(), 0.0);
    }
}
