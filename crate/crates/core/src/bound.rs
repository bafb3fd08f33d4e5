//! Correction term, sign classification and the assembled upper bound.
//!
//! For a center `P` with degree profile `a` and a model `𝔓` with the same
//! `(n, q)`, the bound reads `μ₁(P_ρ) ≤ μ₁(𝔓_ρ) + M`, where `M` is a ratio
//! of two alternating sums of eigenfunction moments
//!
//! ```text
//! B_i = ∫ s ta^{2i} ν dr,      C_i = ∫ ta^{2i} μ_w dr
//! ```
//!
//! with the weights of [`crate::radial::eigenfunction_weights`]. Coefficients
//! are assembled exactly from the `β` moments and converted to `f64` once.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chern::{binomial, rational_to_f64, DegreeProfile, Moments};
use crate::error::{Error, Result};
use crate::geometry::{h_general, inverse_ta, theta_general, trig_unchecked, CurvatureVector, Family, ModelDescriptor};
use crate::quadrature::{adaptive_gauss_kronrod, composite_gauss};
use crate::radial::{solve_mu1, weights_at, RadialProblem, SpectralSolution};
use crate::volume::density_first_zero;

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Fraction of `π/(4√λ)` beyond which the `ν` moments are refused.
pub const NU_DOMAIN_FRACTION: f64 = 0.999;

/// Moments `B_0..B_q`, `C_0..C_q` with absolute error estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quadratures {
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub b_error: Vec<f64>,
    pub c_error: Vec<f64>,
}

/// Largest radius accepted by [`quadratures`].
pub fn nu_domain_limit(lambda: f64) -> f64 {
    NU_DOMAIN_FRACTION * std::f64::consts::FRAC_PI_4 / lambda.sqrt()
}

pub fn quadratures(sol: &SpectralSolution) -> Result<Quadratures> {
    quadratures_with_tol(sol, DEFAULT_QUAD_TOL)
}

/// Composite 8-point Gauss on the solver grid, refined until every moment
/// meets `rel_tol`.
pub fn quadratures_with_tol(sol: &SpectralSolution, rel_tol: f64) -> Result<Quadratures> {
    let p = &sol.problem;
    let limit = nu_domain_limit(p.lambda);
    if p.rho > limit {
        return Err(Error::Domain(format!(
            "rho = {} exceeds {limit}: the nu weight has c_4λ in its denominator; restrict rho",
            p.rho
        )));
    }
    let q = p.model.q;
    let dim = 2 * (q + 1);
    let res = composite_gauss(&sol.grid, dim, 8, rel_tol, 0.0, 6, |cell, r, out| {
        let (f, fp) = sol.eval_in_cell(cell, r);
        let t = trig_unchecked(p.lambda, r);
        let (wm, wn) = weights_at(p, &t, f, fp);
        let ta2 = (t.s / t.c).powi(2);
        let mut pw = 1.0;
        for i in 0..=q {
            out[i] = t.s * pw * wn.0;
            out[q + 1 + i] = pw * wm.0;
            pw *= ta2;
        }
    });
    for d in 0..dim {
        if res.error[d] > rel_tol * res.value[d].abs() {
            return Err(Error::Solver(format!(
                "moment quadrature missed tolerance {rel_tol}: component {d}, value {}, error {}",
                res.value[d], res.error[d]
            )));
        }
    }
    Ok(Quadratures {
        b: res.value[..=q].to_vec(),
        c: res.value[q + 1..].to_vec(),
        b_error: res.error[..=q].to_vec(),
        c_error: res.error[q + 1..].to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionBreakdown {
    #[serde(rename = "B")]
    pub b: Vec<f64>,
    #[serde(rename = "C")]
    pub c: Vec<f64>,
    pub numerator: f64,
    pub denominator: f64,
    #[serde(rename = "M")]
    pub m: f64,
    /// Propagated quadrature error bound on `M`.
    pub error: f64,
}

fn signed(r: BigRational, i: usize) -> BigRational {
    if i % 2 == 1 {
        -r
    } else {
        r
    }
}

fn big(n: i64, k: i64) -> BigRational {
    BigRational::from(BigInt::from(binomial(n, k)))
}

/// Exact `B_i` coefficients (without `λ^{i+1}`) for center moments against model `𝔓`.
pub fn numerator_coefficients(model: &ModelDescriptor, moments: &Moments) -> Vec<BigRational> {
    let (n, q, z) = (model.n as i64, model.q as i64, model.zc as i64);
    (0..=q)
        .map(|i| {
            let t1 = BigRational::from(BigInt::from(i - z)) * big(n - 1, q - i) * moments.beta_at(i as usize);
            let t2 = BigRational::from(BigInt::from(i + 1))
                * big(n - 1, q - i - 1)
                * moments.beta_at(i as usize + 1);
            signed(t1 + t2, i as usize)
        })
        .collect()
}

/// Exact `C_i` coefficients (without `λ^i`).
pub fn denominator_coefficients(model: &ModelDescriptor, moments: &Moments) -> Vec<BigRational> {
    let (n, q) = (model.n as i64, model.q as i64);
    (0..=q)
        .map(|i| signed(big(n - 1, q - i) * moments.beta_at(i as usize), i as usize))
        .collect()
}

fn assemble(
    num_coef: &[BigRational],
    den_coef: &[BigRational],
    lambda: f64,
    quad: Quadratures,
) -> Result<CorrectionBreakdown> {
    let (mut num, mut num_err) = (0.0, 0.0);
    let mut lp = lambda;
    for (i, co) in num_coef.iter().enumerate() {
        if !co.is_zero() {
            let w = rational_to_f64(co) * lp;
            num += w * quad.b[i];
            num_err += (w * quad.b_error[i]).abs();
        }
        lp *= lambda;
    }
    let (mut den, mut den_err) = (0.0, 0.0);
    let mut lp = 1.0;
    for (i, co) in den_coef.iter().enumerate() {
        if !co.is_zero() {
            let w = rational_to_f64(co) * lp;
            den += w * quad.c[i];
            den_err += (w * quad.c_error[i]).abs();
        }
        lp *= lambda;
    }
    if !(den > 0.0) {
        return Err(Error::Inconsistency(format!(
            "denominator {den} is not positive"
        )));
    }
    let m = num / den;
    Ok(CorrectionBreakdown {
        b: quad.b,
        c: quad.c,
        numerator: num,
        denominator: den,
        m,
        error: num_err / den + m.abs() * den_err / den,
    })
}

fn check_solution(model: &ModelDescriptor, lambda: f64, rho: f64, sol: &SpectralSolution) -> Result<()> {
    let p = &sol.problem;
    if p.model != *model || p.lambda != lambda || p.rho != rho {
        return Err(Error::InvalidInput(format!(
            "solution was computed for {} (lambda = {}, rho = {}), not {model} (lambda = {lambda}, rho = {rho})",
            p.model, p.lambda, p.rho
        )));
    }
    Ok(())
}

/// `M` for a center with moments `moments` measured against model `model`.
pub fn correction_m(
    model: &ModelDescriptor,
    moments: &Moments,
    lambda: f64,
    rho: f64,
    sol: &SpectralSolution,
) -> Result<CorrectionBreakdown> {
    correction_m_with_tol(model, moments, lambda, rho, sol, DEFAULT_QUAD_TOL)
}

pub fn correction_m_with_tol(
    model: &ModelDescriptor,
    moments: &Moments,
    lambda: f64,
    rho: f64,
    sol: &SpectralSolution,
    quad_tol: f64,
) -> Result<CorrectionBreakdown> {
    check_solution(model, lambda, rho, sol)?;
    if moments.n != model.n || moments.q != model.q {
        return Err(Error::InvalidInput(format!(
            "moments for n = {}, q = {} do not match {model}",
            moments.n, moments.q
        )));
    }
    let quad = quadratures_with_tol(sol, quad_tol)?;
    assemble(
        &numerator_coefficients(model, moments),
        &denominator_coefficients(model, moments),
        lambda,
        quad,
    )
}

/// `M` for a hypersurface of degree `a` against the quadric, in the factored
/// form `(a−2)·Σ_{i<n−1} (−1)^i λ^{i+1} (i+1) C(n−1,i+1) (a−1)^i B_i`.
pub fn correction_m_quadric(
    n: usize,
    a: u32,
    lambda: f64,
    rho: f64,
    sol: &SpectralSolution,
) -> Result<CorrectionBreakdown> {
    if a < 1 {
        return Err(Error::InvalidInput("degree must be >= 1".into()));
    }
    let model = ModelDescriptor::quadric(n)?;
    check_solution(&model, lambda, rho, sol)?;
    let quad = quadratures(sol)?;
    let n = n as i64;
    let am1 = BigRational::from(BigInt::from(a as i64 - 1));
    let am2 = BigRational::from(BigInt::from(a as i64 - 2));
    let mut pw = BigRational::one();
    let mut num_coef = Vec::new();
    let mut den_coef = Vec::new();
    for i in 0..n {
        let nc = if i < n - 1 {
            signed(
                am2.clone() * BigRational::from(BigInt::from(i + 1)) * big(n - 1, i + 1) * pw.clone(),
                i as usize,
            )
        } else {
            BigRational::zero()
        };
        num_coef.push(nc);
        den_coef.push(signed(big(n - 1, n - 1 - i) * pw.clone(), i as usize));
        pw *= am1.clone();
    }
    assemble(&num_coef, &den_coef, lambda, quad)
}

/// Radii below which the quadric correction has a certified sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// `+∞` when no index constrains it (`n = 2`).
    pub rho1: f64,
    /// Same minimum without the `(a−1)` factor under the root.
    pub rho1_without_degree_factor: f64,
    /// `min(ρ₁, π/(4√λ))`.
    pub rho0: f64,
}

pub fn rho_thresholds(n: usize, a: u32, lambda: f64) -> Result<Thresholds> {
    if a < 2 {
        return Err(Error::Domain(format!("thresholds need degree >= 2, got {a}")));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("quadric needs n >= 2, got {n}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    let (mut rho1, mut plain) = (f64::INFINITY, f64::INFINITY);
    for j in 0..=(n - 2) / 2 {
        let k = n as f64 - 2.0 * j as f64 - 2.0;
        if k <= 0.0 {
            continue;
        }
        let x = (2.0 * j as f64 + 1.0) / (lambda * k);
        rho1 = rho1.min(inverse_ta(lambda, (x / (a as f64 - 1.0)).sqrt()));
        plain = plain.min(inverse_ta(lambda, x.sqrt()));
    }
    let cut = ModelDescriptor::quadric(n)?.cut_radius(lambda);
    Ok(Thresholds { rho1, rho1_without_degree_factor: plain, rho0: rho1.min(cut) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Zero,
    Negative,
    Uncontrolled,
}

impl SignClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SignClass::Zero => "zero",
            SignClass::Negative => "negative",
            SignClass::Uncontrolled => "uncontrolled",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub model: Family,
    pub n: usize,
    pub q: usize,
    pub lambda: f64,
    pub rho: f64,
    pub profile: Vec<u32>,
    pub mu1_model: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub bound: f64,
    pub sign_class: SignClass,
    /// Only finite thresholds are reported.
    pub rho1: Option<f64>,
    pub rho1_without_degree_factor: Option<f64>,
    pub rho0: Option<f64>,
    pub warnings: Vec<String>,
    pub grid_points: usize,
    pub achieved_tol: f64,
    pub m_error: f64,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn bound_report(
    model: &ModelDescriptor,
    profile: &DegreeProfile,
    lambda: f64,
    rho: f64,
    tol: f64,
) -> Result<BoundReport> {
    if profile.n != model.n || profile.q != model.q {
        return Err(Error::InvalidInput(format!(
            "degree profile for n = {}, q = {} does not match {model}",
            profile.n, profile.q
        )));
    }
    let problem = RadialProblem::new(*model, lambda, rho)?;
    let sol = solve_mu1(&problem, tol)?;
    let moments = Moments::from_profile(profile);
    let focal = density_first_zero(&moments, lambda, rho);
    let br = match correction_m(model, &moments, lambda, rho, &sol) {
        Err(Error::Inconsistency(msg)) if focal.is_some() => {
            return Err(Error::Domain(format!(
                "{msg}: the degree-weighted density vanishes at r = {}, so rho = {rho} is past a focal distance for these degrees",
                focal.unwrap_or_default()
            )))
        }
        other => other?,
    };

    let mut warnings = Vec::new();
    let mut thresholds = None;
    let sign_class = match model.family {
        Family::Cpq if profile.is_linear() => SignClass::Zero,
        Family::Cpq => SignClass::Negative,
        Family::Quadric => {
            let a = profile.degrees[0];
            if a < 2 {
                SignClass::Uncontrolled
            } else {
                let t = rho_thresholds(model.n, a, lambda)?;
                thresholds = Some(t);
                if rho >= t.rho0 {
                    warnings.push(format!(
                        "rho = {rho} is not below rho0 = {}; sign of M not certified",
                        t.rho0
                    ));
                    SignClass::Uncontrolled
                } else if a == 2 {
                    SignClass::Zero
                } else {
                    SignClass::Negative
                }
            }
        }
        _ => SignClass::Uncontrolled,
    };

    let cut = model.cut_radius(lambda);
    if rho > 0.95 * cut {
        warnings.push(format!("rho = {rho} is within 5% of the model cut radius {cut}"));
    }
    let nu_limit = std::f64::consts::FRAC_PI_4 / lambda.sqrt();
    if model.zc == 0 && rho > 0.95 * nu_limit {
        warnings.push(format!(
            "rho = {rho} is within 5% of pi/(4 sqrt(lambda)) = {nu_limit}, where the nu weight is singular"
        ));
    }
    if !profile.is_linear() {
        warnings.push(
            "bound holds for a center P only when rho is below cut(P), which the degrees do not determine"
                .to_string(),
        );
    }
    if let Some(r0) = focal {
        warnings.push(format!(
            "degree-weighted volume density vanishes at r = {r0} <= rho; rho lies past a focal distance for these degrees"
        ));
    }
    let bound = sol.mu1 + br.m;
    if !(bound > 0.0) {
        warnings.push(format!("bound {bound} is not positive and carries no information"));
    }
    let tiny = 10.0 * br.error + 1e-14 * sol.mu1;
    let inconsistent = match sign_class {
        SignClass::Zero => br.m.abs() > tiny,
        SignClass::Negative => br.m >= -tiny,
        SignClass::Uncontrolled => false,
    };
    if inconsistent {
        warnings.push(format!(
            "M = {} (error {}) is inconsistent with sign class {}",
            br.m,
            br.error,
            sign_class.as_str()
        ));
    }

    Ok(BoundReport {
        model: model.family,
        n: model.n,
        q: model.q,
        lambda,
        rho,
        profile: profile.degrees.clone(),
        mu1_model: sol.mu1,
        m: br.m,
        bound,
        sign_class,
        rho1: thresholds.and_then(|t| finite(t.rho1)),
        rho1_without_degree_factor: thresholds.and_then(|t| finite(t.rho1_without_degree_factor)),
        rho0: thresholds.map(|t| t.rho0),
        warnings,
        grid_points: sol.grid.len(),
        achieved_tol: sol.achieved_tol,
        m_error: br.error,
    })
}

/// `μ₁ + ∫ 2ff' s c (h_P − h_𝔓) θ_P dr / ∫ f² θ_P dr` for a center with
/// constant principal curvatures `k`, by adaptive Gauss–Kronrod directly on
/// the tube density of `P`.
pub fn direct_quotient_oracle(
    model: &ModelDescriptor,
    k: &CurvatureVector,
    lambda: f64,
    rho: f64,
    sol: &SpectralSolution,
) -> Result<f64> {
    check_solution(model, lambda, rho, sol)?;
    let (n, q) = (model.n, model.q);
    if k.len() != q {
        return Err(Error::InvalidInput(format!(
            "curvature vector of length {} does not match q = {q}",
            k.len()
        )));
    }
    h_general(k, lambda, rho)?;
    let field = |r: f64, num: bool| -> f64 {
        let (f, fp) = sol.eval(r).unwrap_or((f64::NAN, f64::NAN));
        let th = theta_general(k, n, q, lambda, r).unwrap_or(f64::NAN);
        if num {
            let t = trig_unchecked(lambda, r);
            let hk = h_general(k, lambda, r).unwrap_or(f64::NAN);
            let hm = model.h_c2_raw(&t) / (t.c * t.c);
            2.0 * f * fp * t.s * t.c * (hk - hm) * th
        } else {
            f * f * th
        }
    };
    let (den, _) = adaptive_gauss_kronrod(|r| field(r, false), 0.0, rho, 1e-13, 0.0, 4000)?;
    let (num, _) = adaptive_gauss_kronrod(|r| field(r, true), 0.0, rho, 1e-13, 1e-14 * sol.mu1 * den, 4000)?;
    Ok(sol.mu1 + num / den)
}
