//! Invariant and oracle checks shared by `verify` and the acceptance suite.
//!
//! Every check returns its worst observed metric next to the tolerance it
//! was held to, so a failure report says by how much.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use tubebound::bound::{
    bound_report, correction_m, correction_m_quadric, direct_quotient_oracle, rho_thresholds, DEFAULT_QUAD_TOL,
};
use tubebound::chern::{beta_table, gamma_generating_check, quadric_binomial_identity, DegreeProfile, Moments};
use tubebound::geometry::{
    h_general, theta_model, trig, weingarten_trace, CurvatureVector, ModelDescriptor,
};
use tubebound::radial::{rayleigh_quotient, solve_mu1, solve_mu1_fd, RadialProblem, SpectralSolution, DEFAULT_TOL};
use tubebound::volume::{density_first_zero, tube_volume_ratio, tube_volume_ratio_quadrature};
use tubebound::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(passed: bool, detail: String) -> Self {
        CheckOutcome { passed, detail }
    }

    /// Passes when `worst <= tol`.
    fn within(what: &str, worst: f64, tol: f64) -> Self {
        CheckOutcome::new(worst <= tol, format!("{what} {worst:.3e} (tol {tol:.0e})"))
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn solve(model: ModelDescriptor, lambda: f64, rho: f64) -> Result<SpectralSolution> {
    solve_mu1(&RadialProblem::new(model, lambda, rho)?, DEFAULT_TOL)
}

/// Radius where the moment quadratures are defined for every model.
fn nu_radius(lambda: f64) -> f64 {
    0.999 * FRAC_PI_4 / lambda.sqrt()
}

/// One representative of each model family, plus a second size for the infinite ones.
pub fn catalog() -> Vec<ModelDescriptor> {
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

pub fn trig_identities(seed: u64) -> Result<CheckOutcome> {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let lambda = 10f64.powf(g.gen_range(-1.0..1.0));
        let r = g.gen_range(0.0..0.999) * FRAC_PI_2 / lambda.sqrt();
        let t = trig(lambda, r)?;
        worst = worst
            .max((t.c * t.c + lambda * t.s * t.s - 1.0).abs())
            .max((t.c4 - (2.0 * t.c * t.c - 1.0)).abs())
            .max((t.ta()? - t.s / t.c).abs() / (t.s / t.c).abs().max(1.0));
    }
    Ok(CheckOutcome::within("max identity residual", worst, 1e-14))
}

pub fn mean_curvature_reductions(seed: u64) -> Result<CheckOutcome> {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let q = g.gen_range(1..7usize);
        let lambda = g.gen_range(0.2..5.0);
        let r = g.gen_range(0.0..0.95) * FRAC_PI_4 / f64::sqrt(lambda);
        let t = trig(lambda, r)?;
        let zero = h_general(&CurvatureVector::zeros(q), lambda, r)?;
        worst = worst.max(rel(zero, q as f64 * lambda / (t.c * t.c)));
        let full = h_general(&CurvatureVector::new(vec![lambda.sqrt(); q])?, lambda, r)?;
        worst = worst.max(rel(full, 2.0 * q as f64 * lambda / t.c4));
        let k: Vec<f64> = (0..q).map(|_| g.gen_range(0.0..3.0)).collect();
        let at0 = h_general(&CurvatureVector::new(k.clone())?, lambda, 0.0)?;
        worst = worst.max(rel(at0, q as f64 * lambda + k.iter().map(|x| x * x).sum::<f64>()));
    }
    Ok(CheckOutcome::within("max relative deviation", worst, 1e-12))
}

/// `trS = −(log θ)'` against a central difference of the density.
pub fn trace_is_log_derivative(seed: u64) -> Result<CheckOutcome> {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for m in catalog() {
        for _ in 0..20 {
            let lambda = g.gen_range(0.5..2.0);
            let r = g.gen_range(0.05..0.9) * m.cut_radius(lambda);
            let h = 1e-5 * r;
            let d = (theta_model(&m, lambda, r + h)?.ln() - theta_model(&m, lambda, r - h)?.ln()) / (2.0 * h);
            worst = worst.max(rel(-d, weingarten_trace(&m, lambda, r)?));
        }
    }
    Ok(CheckOutcome::within("max relative deviation", worst, 1e-6))
}

fn random_profile(g: &mut ChaCha8Rng, nmax: usize, dmax: u32) -> DegreeProfile {
    let n = g.gen_range(2..=nmax);
    let q = g.gen_range(1..n);
    let degrees = (0..n - q).map(|_| g.gen_range(1..=dmax)).collect();
    DegreeProfile::new(n, q, degrees).unwrap()
}

pub fn gamma_generating_random(seed: u64, count: usize) -> Result<CheckOutcome> {
    let mut g = rng(seed);
    let failures = (0..count)
        .filter(|_| gamma_generating_check(&random_profile(&mut g, 14, 9)).is_err())
        .count();
    Ok(CheckOutcome::new(failures == 0, format!("{failures} of {count} profiles fail")))
}

pub fn quadric_binomial_all(nmax: usize) -> Result<CheckOutcome> {
    let mut total = 0;
    let mut failures = 0;
    for n in 2..=nmax {
        for i in 0..=n - 2 {
            total += 1;
            if !quadric_binomial_identity(n, i)?.holds {
                failures += 1;
            }
        }
    }
    Ok(CheckOutcome::new(failures == 0, format!("{failures} of {total} (n, i) pairs fail")))
}

pub fn beta_permutation_symmetry(seed: u64) -> Result<CheckOutcome> {
    let mut g = rng(seed);
    let mut failures = 0;
    for _ in 0..100 {
        let p = random_profile(&mut g, 10, 7);
        let mut d = p.degrees.clone();
        d.shuffle(&mut g);
        if beta_table(&p) != beta_table(&DegreeProfile::new(p.n, p.q, d)?) {
            failures += 1;
        }
    }
    Ok(CheckOutcome::new(failures == 0, format!("{failures} of 100 permutations change beta")))
}

pub const J01_SQ: f64 = 5.783_185_962_946_783;
pub const J11_SQ: f64 = 14.681_970_642_123_895;

/// `(value for n − q = 1, value for n − q = 2)` at `λ = 1e-8`, `ρ = 1`.
pub fn flat_limit_values() -> Result<(f64, f64)> {
    let a = solve(ModelDescriptor::cpq(2, 1)?, 1e-8, 1.0)?.mu1;
    let b = solve(ModelDescriptor::cpq(3, 1)?, 1e-8, 1.0)?.mu1;
    Ok((a, b))
}

pub fn flat_limit_bessel() -> Result<CheckOutcome> {
    let (a, b) = flat_limit_values()?;
    let worst = rel(a, J01_SQ).max(rel(b, J11_SQ));
    Ok(CheckOutcome::within("max relative error vs Bessel zeros", worst, 1e-4))
}

/// The quadric curve in `CP^2` has `θ = sin(4r)/4`: a round sphere of radius 1/4,
/// whose hemisphere has first Dirichlet eigenvalue `2·16`.
pub fn hemisphere_exact() -> Result<CheckOutcome> {
    let mu = solve(ModelDescriptor::quadric(2)?, 1.0, PI / 8.0)?.mu1;
    Ok(CheckOutcome::within("relative error vs 32", rel(mu, 32.0), 1e-9))
}

/// 3 models × 3 curvature scales × 3 radius fractions.
pub fn oracle_sample() -> Vec<(ModelDescriptor, f64, f64)> {
    let mut out = Vec::new();
    for m in [ModelDescriptor::cpq(4, 2).unwrap(), ModelDescriptor::quadric(3).unwrap(), ModelDescriptor::so10()] {
        for lambda in [0.5, 1.0, 2.0] {
            for frac in [0.2, 0.5, 0.75] {
                out.push((m, lambda, frac * m.cut_radius(lambda)));
            }
        }
    }
    out
}

pub fn shooting_vs_fd() -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    let sample = oracle_sample();
    for &(m, lambda, rho) in &sample {
        let p = RadialProblem::new(m, lambda, rho)?;
        let shoot = solve_mu1(&p, DEFAULT_TOL)?.mu1;
        worst = worst.max(rel(solve_mu1_fd(&p, 4000)?, shoot));
    }
    Ok(CheckOutcome::within(&format!("max relative difference over {} triples", sample.len()), worst, 1e-6))
}

pub fn fd_richardson() -> Result<CheckOutcome> {
    let cases = [
        (ModelDescriptor::quadric(2)?, PI / 8.0),
        (ModelDescriptor::segre(3)?, 0.4),
        (ModelDescriptor::cpq(3, 1)?, 0.9),
    ];
    let mut worst: f64 = 0.0;
    for (m, rho) in cases {
        let p = RadialProblem::new(m, 1.0, rho)?;
        let mu: Vec<f64> = [500, 1000, 2000].iter().map(|&n| solve_mu1_fd(&p, n)).collect::<Result<_>>()?;
        let ratio = (mu[0] - mu[1]).abs() / (mu[1] - mu[2]).abs();
        worst = worst.max((ratio / 4.0 - 1.0).abs());
    }
    Ok(CheckOutcome::within("max deviation of convergence ratio from 4", worst, 0.2))
}

pub fn eigenvalue_scaling(seed: u64) -> Result<CheckOutcome> {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for m in catalog() {
        let lambda = g.gen_range(0.5..2.0);
        let rho = g.gen_range(0.1..0.9) * m.cut_radius(lambda);
        let base = solve(m, lambda, rho)?.mu1;
        for s in [0.5, 2.0] {
            worst = worst.max(rel(solve(m, lambda / (s * s), s * rho)?.mu1 * s * s, base));
        }
    }
    Ok(CheckOutcome::within("max relative deviation", worst, 1e-8))
}

/// Rayleigh quotient, sign facts and the boundary value on random problems.
pub fn solution_consistency(seed: u64) -> Result<CheckOutcome> {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    let mut sign_failures = 0;
    for m in catalog() {
        let lambda = g.gen_range(0.5..2.0);
        let rho = g.gen_range(0.05..0.95) * m.cut_radius(lambda);
        let sol = solve(m, lambda, rho)?;
        worst = worst.max(rel(rayleigh_quotient(&sol), sol.mu1));
        let last = sol.grid.len() - 1;
        let ok = sol.f[..last].iter().all(|&v| v > 0.0)
            && sol.fprime[1..].iter().all(|&v| v < 0.0)
            && sol.fprime[0] == 0.0
            && sol.f[last].abs() <= 1e-6;
        if !ok {
            sign_failures += 1;
        }
    }
    Ok(CheckOutcome::new(
        worst <= 1e-6 && sign_failures == 0,
        format!("max Rayleigh deviation {worst:.3e} (tol 1e-6), {sign_failures} sign-fact failures"),
    ))
}

pub fn radius_monotonicity() -> Result<CheckOutcome> {
    let mut failures = Vec::new();
    for m in catalog() {
        let cut = m.cut_radius(1.0);
        let mus: Vec<f64> = [0.15, 0.3, 0.5, 0.7, 0.9]
            .iter()
            .map(|f| solve(m, 1.0, f * cut).map(|s| s.mu1))
            .collect::<Result<_>>()?;
        if !mus.windows(2).all(|w| w[0] > w[1]) {
            failures.push(m.to_string());
        }
    }
    Ok(CheckOutcome::new(failures.is_empty(), format!("non-monotone ladders: {failures:?}")))
}

/// `|M|/μ₁` over linear profiles against `CP^q` and degree-2 hypersurfaces
/// against the quadric.
pub fn equality_cases(seed: u64) -> Result<CheckOutcome> {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let n = g.gen_range(2..=8usize);
        let q = g.gen_range(1..n);
        let rho = g.gen_range(0.05..0.95) * nu_radius(1.0);
        let m = ModelDescriptor::cpq(n, q)?;
        let r = bound_report(&m, &DegreeProfile::linear(n, q)?, 1.0, rho, DEFAULT_TOL)?;
        worst = worst.max(r.m.abs() / r.mu1_model);
    }
    for n in 2..=11usize {
        let rho = g.gen_range(0.05..0.95) * nu_radius(1.0);
        let m = ModelDescriptor::quadric(n)?;
        let sol = solve(m, 1.0, rho)?;
        let p = DegreeProfile::new(n, n - 1, vec![2])?;
        let br = correction_m(&m, &Moments::from_profile(&p), 1.0, rho, &sol)?;
        worst = worst.max(br.m.abs() / sol.mu1);
    }
    Ok(CheckOutcome::within("max |M|/mu1 over 20 equality cases", worst, 1e-8))
}

/// Largest `M + threshold` over the sample: negative means every case is
/// strictly negative beyond ten quadrature tolerances.
fn margin(m: f64, m_error: f64, mu1: f64) -> f64 {
    m + 10.0 * m_error.max(DEFAULT_QUAD_TOL * mu1)
}

pub fn cpq_gap(seed: u64, count: usize) -> Result<CheckOutcome> {
    let mut g = rng(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut failures = 0;
    for _ in 0..count {
        let mut p = random_profile(&mut g, 7, 6);
        if p.is_linear() {
            let j = g.gen_range(0..p.degrees.len());
            p.degrees[j] = g.gen_range(2..=6);
        }
        let lambda = g.gen_range(0.5..2.0);
        let limit = nu_radius(lambda);
        let stop = density_first_zero(&Moments::from_profile(&p), lambda, limit).unwrap_or(limit);
        let rho = g.gen_range(0.05..0.9) * stop;
        let m = ModelDescriptor::cpq(p.n, p.q)?;
        let r = bound_report(&m, &p, lambda, rho, DEFAULT_TOL)?;
        let v = margin(r.m, r.m_error, r.mu1_model);
        worst = worst.max(v / r.mu1_model);
        if v >= 0.0 {
            failures += 1;
        }
    }
    Ok(CheckOutcome::new(
        failures == 0,
        format!("{failures} of {count} profiles not strictly negative; max (M + 10 err)/mu1 = {worst:.3e}"),
    ))
}

pub fn quadric_gap() -> Result<CheckOutcome> {
    let mut worst = f64::NEG_INFINITY;
    let mut failures = 0;
    let mut total = 0;
    for n in 2..=4usize {
        let model = ModelDescriptor::quadric(n)?;
        for a in 3..=5u32 {
            let rho0 = rho_thresholds(n, a, 1.0)?.rho0;
            for frac in [0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
                total += 1;
                let r = bound_report(&model, &DegreeProfile::new(n, n - 1, vec![a])?, 1.0, frac * rho0, DEFAULT_TOL)?;
                let v = margin(r.m, r.m_error, r.mu1_model);
                worst = worst.max(v / r.mu1_model);
                if v >= 0.0 || r.sign_class != tubebound::bound::SignClass::Negative {
                    failures += 1;
                }
            }
        }
    }
    Ok(CheckOutcome::new(
        failures == 0,
        format!("{failures} of {total} (n, a, rho) not strictly negative; max (M + 10 err)/mu1 = {worst:.3e}"),
    ))
}

pub fn quadric_specialization(seed: u64) -> Result<CheckOutcome> {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    let mut nonzero_factored = 0;
    for n in 2..=6usize {
        let m = ModelDescriptor::quadric(n)?;
        let lambda = g.gen_range(0.5..2.0);
        // below the focal distance of the highest degree, where the denominator is positive
        let top = DegreeProfile::new(n, n - 1, vec![6])?;
        let limit = nu_radius(lambda);
        let stop = density_first_zero(&Moments::from_profile(&top), lambda, limit).unwrap_or(limit);
        let rho = g.gen_range(0.1..0.95) * stop;
        let sol = solve(m, lambda, rho)?;
        for a in 1..=6u32 {
            let p = DegreeProfile::new(n, n - 1, vec![a])?;
            let general = correction_m(&m, &Moments::from_profile(&p), lambda, rho, &sol)?;
            let factored = correction_m_quadric(n, a, lambda, rho, &sol)?;
            if a == 2 {
                if factored.numerator != 0.0 {
                    nonzero_factored += 1;
                }
            } else {
                worst = worst.max(rel(factored.m, general.m));
            }
        }
    }
    Ok(CheckOutcome::new(
        worst <= 1e-10 && nonzero_factored == 0,
        format!("max relative difference {worst:.3e} (tol 1e-10), {nonzero_factored} nonzero factored numerators at degree 2"),
    ))
}

/// Surrogate centers: all curvatures zero, all equal to `√λ`, and the model's own.
pub fn oracle_chain() -> Result<CheckOutcome> {
    let models = [
        ModelDescriptor::cpq(2, 1)?,
        ModelDescriptor::cpq(4, 2)?,
        ModelDescriptor::quadric(2)?,
        ModelDescriptor::quadric(3)?,
        ModelDescriptor::segre(3)?,
        ModelDescriptor::su5(),
        ModelDescriptor::so10(),
    ];
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for m in models {
        for lambda in [1.0, 0.7] {
            let rho = 0.5 * nu_radius(lambda);
            let sol = solve(m, lambda, rho)?;
            for zk in [0, m.q, m.zc] {
                let mut k = vec![lambda.sqrt(); zk];
                k.resize(m.q, 0.0);
                let oracle = direct_quotient_oracle(&m, &CurvatureVector::new(k)?, lambda, rho, &sol)?;
                let br = correction_m(&m, &Moments::from_curvature_count(m.n, m.q, zk)?, lambda, rho, &sol)?;
                worst = worst.max(rel(oracle, sol.mu1 + br.m));
                cases += 1;
            }
        }
    }
    Ok(CheckOutcome::within(&format!("max relative difference over {cases} cases"), worst, 1e-8))
}

pub fn threshold_examples() -> Result<CheckOutcome> {
    let a = rho_thresholds(3, 2, 1.0)?;
    let b = rho_thresholds(4, 3, 1.0)?;
    let c = rho_thresholds(2, 3, 1.0)?;
    let worst = (a.rho1 - FRAC_PI_4)
        .abs()
        .max((a.rho0 - FRAC_PI_4).abs())
        .max((b.rho1 - 0.5f64.atan()).abs())
        .max((c.rho0 - FRAC_PI_4).abs());
    let ok = c.rho1.is_infinite() && rho_thresholds(3, 1, 1.0).is_err();
    Ok(CheckOutcome::new(ok && worst <= 1e-15, format!("max deviation {worst:.3e} (tol 1e-15)")))
}

/// `vol(P_ρ)/vol(P)` over the full tube of a hyperplane, exact and by quadrature.
pub fn volume_full_tube() -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for n in 2..=10usize {
        let p = DegreeProfile::linear(n, n - 1)?;
        for lambda in [0.5, 1.0, 2.0] {
            let rho = FRAC_PI_2 / f64::sqrt(lambda);
            let target = PI / (n as f64 * lambda);
            let exact = tube_volume_ratio(n, n - 1, &p, lambda, rho)?.ratio;
            let quad = tube_volume_ratio_quadrature(n, n - 1, &p, lambda, rho)?;
            worst = worst.max((exact - target).abs()).max((quad - target).abs());
        }
    }
    Ok(CheckOutcome::within("max absolute error vs pi/(n lambda)", worst, 1e-10))
}

/// `μ₁`, `M`, bound and `ρ₁` under `(λ, ρ) → (λ/s², sρ)`.
pub fn scaling_covariance() -> Result<CheckOutcome> {
    let cases = [
        (ModelDescriptor::cpq(3, 1)?, vec![2, 3]),
        (ModelDescriptor::cpq(4, 2)?, vec![1, 4]),
        (ModelDescriptor::quadric(3)?, vec![3]),
        (ModelDescriptor::segre(3)?, vec![2, 2]),
    ];
    let mut worst: f64 = 0.0;
    for (m, d) in cases {
        let p = DegreeProfile::new(m.n, m.q, d)?;
        let base = bound_report(&m, &p, 1.0, 0.4, DEFAULT_TOL)?;
        for s in [0.5, 2.0] {
            let r = bound_report(&m, &p, 1.0 / (s * s), 0.4 * s, DEFAULT_TOL)?;
            let s2 = s * s;
            worst = worst
                .max(rel(r.mu1_model * s2, base.mu1_model))
                .max(rel(r.m * s2, base.m))
                .max(rel(r.bound * s2, base.bound));
        }
    }
    for n in 3..=6usize {
        for a in [3u32, 5] {
            let base = rho_thresholds(n, a, 1.0)?.rho1;
            for s in [0.5, 2.0] {
                worst = worst.max(rel(rho_thresholds(n, a, 1.0 / (s * s))?.rho1, s * base));
            }
        }
    }
    Ok(CheckOutcome::within("max relative deviation", worst, 1e-8))
}

/// One radius of the two-way comparison between the line and the conic in `CP^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossInstance {
    pub rho: f64,
    pub mu1_quadric: f64,
    pub mu1_line: f64,
    /// `μ₁(CP¹_ρ) + M(degree 2) − μ₁(Q¹_ρ)`.
    pub slack_conic: f64,
    /// `μ₁(Q¹_ρ) + M_Q(degree 1) − μ₁(CP¹_ρ)`.
    pub slack_line: f64,
}

pub fn cross_model_instances() -> Result<Vec<CrossInstance>> {
    let line = ModelDescriptor::cpq(2, 1)?;
    let conic = ModelDescriptor::quadric(2)?;
    let rho0 = rho_thresholds(2, 2, 1.0)?.rho0.min(nu_radius(1.0));
    (1..=10)
        .map(|j| {
            let rho = rho0 * j as f64 / 11.0;
            let sl = solve(line, 1.0, rho)?;
            let sq = solve(conic, 1.0, rho)?;
            let m_line = correction_m(&line, &Moments::from_profile(&DegreeProfile::new(2, 1, vec![2])?), 1.0, rho, &sl)?;
            let m_conic = correction_m_quadric(2, 1, 1.0, rho, &sq)?;
            Ok(CrossInstance {
                rho,
                mu1_quadric: sq.mu1,
                mu1_line: sl.mu1,
                slack_conic: sl.mu1 + m_line.m - sq.mu1,
                slack_line: sq.mu1 + m_conic.m - sl.mu1,
            })
        })
        .collect()
}

pub fn cross_model_instance() -> Result<CheckOutcome> {
    let inst = cross_model_instances()?;
    let min = inst
        .iter()
        .map(|c| c.slack_conic.min(c.slack_line))
        .fold(f64::INFINITY, f64::min);
    Ok(CheckOutcome::new(min >= 0.0, format!("minimum slack {min:.6e} over {} radii", inst.len())))
}
