//! First Dirichlet eigenvalue of a model tube.
//!
//! A radial eigenfunction `f` of the tube of radius `ρ` around a model center
//! solves `−f'' + trS f' = μ f` with `f'(0) = 0` and `f(ρ) = 0`. The point
//! `r = 0` is a regular singular point (`trS ~ −(2n−2q−1)/r`), so the shooting
//! solver starts slightly off it from the regular series solution. Because
//! `trS = −θ'/θ`, the same operator has the divergence form `−(θ f')' = μ θ f`,
//! which the finite-difference oracle discretizes independently.

use crate::error::{Error, Result};
use crate::geometry::{trig_unchecked, ModelDescriptor, TrigBundle};
use crate::ode::{dp5_step, State};
use crate::quadrature::{composite_gauss, gauss_legendre};

/// A model tube: center, curvature scale `λ` and radius `ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProblem {
    pub model: ModelDescriptor,
    pub lambda: f64,
    pub rho: f64,
}

impl RadialProblem {
    pub fn new(model: ModelDescriptor, lambda: f64, rho: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
        }
        let cut = model.cut_radius(lambda);
        if !(rho > 0.0) || rho >= cut {
            return Err(Error::Domain(format!(
                "tube radius {rho} must lie in (0, {cut}) for {model}"
            )));
        }
        Ok(RadialProblem { model, lambda, rho })
    }

    /// Real codimension `d = 2(n − q)`; near `r = 0` the operator looks like
    /// the radial Laplacian of `R^d`.
    pub fn codim(&self) -> usize {
        self.model.codim()
    }

    #[inline]
    fn trig(&self, r: f64) -> TrigBundle {
        trig_unchecked(self.lambda, r)
    }

    #[inline]
    fn trace(&self, r: f64) -> f64 {
        self.model.trace_raw(&self.trig(r))
    }

    #[inline]
    fn theta(&self, r: f64) -> f64 {
        self.model.theta_raw(&self.trig(r))
    }
}

/// Shooting-solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    /// Relative tolerance on the eigenvalue.
    pub tol: f64,
    /// Integration starts at `start_fraction·ρ`.
    pub start_fraction: f64,
    /// Upper limit for the dimensionless `μ ρ²` when bracketing.
    pub mu_rho2_ceiling: f64,
    pub max_steps: usize,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        ShootingOptions {
            tol: DEFAULT_TOL,
            start_fraction: 1e-6,
            mu_rho2_ceiling: 1e8,
            max_steps: 2_000_000,
        }
    }
}

pub const DEFAULT_TOL: f64 = 1e-11;

impl ShootingOptions {
    pub fn with_tol(tol: f64) -> Self {
        ShootingOptions { tol, ..Default::default() }
    }

    fn ode_rtol(&self) -> f64 {
        (self.tol * 1e-2).max(2e-14)
    }
}

/// The first eigenvalue and its eigenfunction, normalized by `f(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSolution {
    pub problem: RadialProblem,
    pub mu1: f64,
    /// `0 = r_0 < r_1 < … < r_N = ρ`; `r_1` is the series start point.
    pub grid: Vec<f64>,
    pub f: Vec<f64>,
    pub fprime: Vec<f64>,
    /// Relative width of the final eigenvalue bracket.
    pub achieved_tol: f64,
}

impl SpectralSolution {
    /// `(f(r), f'(r))` for `r` in `[0, ρ]`.
    ///
    /// Between grid points the value comes from one integrator step taken from
    /// the left node, so it carries the same local accuracy as the grid itself.
    pub fn eval(&self, r: f64) -> Result<(f64, f64)> {
        let rho = self.problem.rho;
        if !(r >= 0.0) || r > rho {
            return Err(Error::Domain(format!("r = {r} outside [0, {rho}]")));
        }
        let k = self.grid.partition_point(|&x| x <= r).saturating_sub(1);
        Ok(self.eval_in_cell(k, r))
    }

    pub(crate) fn eval_in_cell(&self, k: usize, r: f64) -> (f64, f64) {
        if k == 0 {
            return series_start(self.mu1, self.problem.codim(), r);
        }
        let r0 = self.grid[k];
        if r == r0 {
            return (self.f[k], self.fprime[k]);
        }
        let (y, _) = dp5_step(&rhs(&self.problem, self.mu1), r0, &[self.f[k], self.fprime[k]], r - r0);
        (y[0], y[1])
    }

    /// `count` equally spaced samples `(r, f, f')`, endpoints included.
    pub fn samples(&self, count: usize) -> Vec<(f64, f64, f64)> {
        let count = count.max(2);
        (0..count)
            .map(|j| {
                let r = self.problem.rho * j as f64 / (count - 1) as f64;
                let (f, fp) = self.eval(r.min(self.problem.rho)).expect("inside the tube");
                (r, f, fp)
            })
            .collect()
    }
}

fn series_start(mu: f64, d: usize, r: f64) -> (f64, f64) {
    let d = d as f64;
    (1.0 - mu * r * r / (2.0 * d), -mu * r / d)
}

fn rhs(problem: &RadialProblem, mu: f64) -> impl Fn(f64, &State) -> State + '_ {
    move |r, y| [y[1], problem.trace(r) * y[1] - mu * y[0]]
}

struct Trajectory {
    grid: Vec<f64>,
    f: Vec<f64>,
    fp: Vec<f64>,
    /// Sign changes of `f` detected strictly before `ρ`.
    interior_zeros: usize,
    f_end: Option<f64>,
}

fn shoot(
    problem: &RadialProblem,
    mu: f64,
    opts: &ShootingOptions,
    record: bool,
    stop_at_zeros: usize,
) -> Result<Trajectory> {
    let rho = problem.rho;
    let rtol = opts.ode_rtol();
    let eps = opts.start_fraction * rho;
    let (f0, fp0) = series_start(mu, problem.codim(), eps);
    let mut y: State = [f0, fp0];
    let mut r = eps;
    let field = rhs(problem, mu);

    let mut traj = Trajectory {
        grid: Vec::new(),
        f: Vec::new(),
        fp: Vec::new(),
        interior_zeros: 0,
        f_end: None,
    };
    if record {
        traj.grid.extend([0.0, eps]);
        traj.f.extend([1.0, f0]);
        traj.fp.extend([0.0, fp0]);
    }

    let stability_cap = |r: f64| 2.0 / problem.trace(r).abs().max(1e-300);
    let mut h = (0.5 * stability_cap(r)).min(0.01 * rho);
    let mut steps = 0usize;
    while r < rho {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::Solver(format!(
                "integration exceeded {} steps at r = {r} (mu = {mu})",
                opts.max_steps
            )));
        }
        h = h.min(stability_cap(r)).min(0.1 * rho);
        let mut last = false;
        if r + h >= rho || rho - (r + h) < 1e-9 * rho {
            h = rho - r;
            last = true;
        }
        let (y_new, err) = dp5_step(&field, r, &y, h);
        let sc0 = rtol * (1.0 + y[0].abs().max(y_new[0].abs()));
        let sc1 = rtol * (1.0 / rho + y[1].abs().max(y_new[1].abs()));
        let e = (0.5 * ((err[0] / sc0).powi(2) + (err[1] / sc1).powi(2))).sqrt();
        if !e.is_finite() {
            h *= 0.2;
            continue;
        }
        if e <= 1.0 {
            let r_new = if last { rho } else { r + h };
            if !last && (y_new[0] <= 0.0) != (y[0] <= 0.0) {
                traj.interior_zeros += 1;
            }
            r = r_new;
            y = y_new;
            if record {
                traj.grid.push(r);
                traj.f.push(y[0]);
                traj.fp.push(y[1]);
            }
            if traj.interior_zeros >= stop_at_zeros {
                return Ok(traj);
            }
            let fac = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * e.powf(-0.2)).clamp(0.2, 1.0);
        }
        if h < 1e-15 * rho {
            return Err(Error::Solver(format!("step size underflow at r = {r} (mu = {mu})")));
        }
    }
    traj.f_end = Some(y[0]);
    Ok(traj)
}

enum Trial {
    /// No zero on `(0, ρ]`: below the first eigenvalue.
    Below(f64),
    /// Exactly one zero on `(0, ρ]`, with `f(ρ) ≤ 0`.
    Above(f64),
    /// Two or more zeros: above the second eigenvalue.
    FarAbove,
}

fn classify(problem: &RadialProblem, mu: f64, opts: &ShootingOptions) -> Result<Trial> {
    let t = shoot(problem, mu, opts, false, 2)?;
    Ok(match (t.interior_zeros, t.f_end) {
        (0, Some(fe)) if fe > 0.0 => Trial::Below(fe),
        (0, Some(fe)) => Trial::Above(fe),
        (1, Some(fe)) if fe < 0.0 => Trial::Above(fe),
        _ => Trial::FarAbove,
    })
}

/// First Dirichlet eigenvalue by shooting from the singular endpoint,
/// with the default options at relative tolerance `tol`.
pub fn solve_mu1(problem: &RadialProblem, tol: f64) -> Result<SpectralSolution> {
    solve_mu1_with(problem, &ShootingOptions::with_tol(tol))
}

/// Shooting with Sturm certification: a trial `μ` is below `μ₁` exactly when
/// the solution stays positive on `(0, ρ]`. The bracket is refined by an
/// Illinois-modified regula falsi on `f(ρ; μ)`, falling back to bisection
/// when the trial oscillates.
pub fn solve_mu1_with(problem: &RadialProblem, opts: &ShootingOptions) -> Result<SpectralSolution> {
    if !(opts.tol >= 1e-12) {
        return Err(Error::InvalidInput(format!("tolerance {} below 1e-12", opts.tol)));
    }
    let rho = problem.rho;
    let rho2 = rho * rho;
    let d = problem.codim() as f64;

    let (mut lo, mut f_lo) = (0.0, 1.0);
    let mut hi = (0.5 * d + 1.5).powi(2) / rho2;
    let mut f_hi: Option<f64>;
    loop {
        match classify(problem, hi, opts)? {
            Trial::Below(fe) => {
                lo = hi;
                f_lo = fe;
                hi *= 4.0;
                if hi * rho2 > opts.mu_rho2_ceiling {
                    return Err(Error::Solver(format!(
                        "no sign change of f(rho) below mu = {} for {}",
                        opts.mu_rho2_ceiling / rho2,
                        problem.model
                    )));
                }
            }
            Trial::Above(fe) => {
                f_hi = Some(fe);
                break;
            }
            Trial::FarAbove => {
                f_hi = None;
                break;
            }
        }
    }

    // Illinois: `side` remembers which end moved last
    let mut side = 0i8;
    let mut iterations = 0;
    while hi - lo > opts.tol * hi {
        iterations += 1;
        if iterations > 400 {
            return Err(Error::Solver("eigenvalue refinement did not converge".into()));
        }
        let width = hi - lo;
        let mid = match f_hi {
            Some(fh) if fh != f_lo => {
                let x = hi - fh * (hi - lo) / (fh - f_lo);
                if x <= lo + 1e-3 * width || x >= hi - 1e-3 * width {
                    // keep the bracket shrinking when the secant hugs an end
                    x.clamp(lo + 1e-3 * width, hi - 1e-3 * width)
                } else {
                    x
                }
            }
            _ => 0.5 * (lo + hi),
        };
        match classify(problem, mid, opts)? {
            Trial::Below(fe) => {
                lo = mid;
                f_lo = fe;
                if side == -1 {
                    if let Some(fh) = f_hi.as_mut() {
                        *fh *= 0.5;
                    }
                }
                side = -1;
            }
            Trial::Above(fe) => {
                hi = mid;
                f_hi = Some(fe);
                if side == 1 {
                    f_lo *= 0.5;
                }
                side = 1;
            }
            Trial::FarAbove => {
                hi = mid;
                f_hi = None;
                side = 0;
            }
        }
    }

    let mu1 = match f_hi {
        Some(fh) if fh != f_lo => (hi - fh * (hi - lo) / (fh - f_lo)).clamp(lo, hi),
        _ => 0.5 * (lo + hi),
    };
    let t = shoot(problem, mu1, opts, true, usize::MAX)?;
    let sol = SpectralSolution {
        problem: *problem,
        mu1,
        grid: t.grid,
        f: t.f,
        fprime: t.fp,
        achieved_tol: (hi - lo) / mu1,
    };
    check_sign_facts(&sol)?;
    Ok(sol)
}

/// `f > 0` on `[0, ρ)` and `f' < 0` on `(0, ρ]` at every grid point.
fn check_sign_facts(sol: &SpectralSolution) -> Result<()> {
    let last = sol.grid.len() - 1;
    for i in 0..last {
        if !(sol.f[i] > 0.0) {
            return Err(Error::Solver(format!(
                "eigenfunction not positive at r = {} (f = {})",
                sol.grid[i], sol.f[i]
            )));
        }
    }
    for i in 1..=last {
        if !(sol.fprime[i] < 0.0) {
            return Err(Error::Solver(format!(
                "eigenfunction not decreasing at r = {} (f' = {})",
                sol.grid[i], sol.fprime[i]
            )));
        }
    }
    Ok(())
}

/// Smallest grid size accepted by [`solve_mu1_fd`] for a problem.
pub fn fd_min_grid(problem: &RadialProblem) -> usize {
    100.max(20 * problem.model.sphere_exponent() as usize)
}

/// First eigenvalue of the cell-centred finite-difference discretization
/// of `−(θ f')' = μ θ f` on a uniform grid of `n_grid` cells.
///
/// Fluxes use `θ` at the cell faces; the diagonal mass uses `θ` integrated
/// over each dual cell. The flux vanishes at `r = 0` because `θ(0) = 0`, and
/// `f(ρ) = 0` is imposed by dropping the last node. The smallest eigenvalue
/// of the symmetric pencil is isolated by Sturm-count bisection.
pub fn solve_mu1_fd(problem: &RadialProblem, n_grid: usize) -> Result<f64> {
    let min = fd_min_grid(problem);
    if n_grid < min {
        return Err(Error::InvalidInput(format!(
            "grid of {n_grid} cells too coarse for density exponent {}: need >= {min}",
            problem.model.sphere_exponent()
        )));
    }
    let (stiff_diag, stiff_off, mass) = fd_assemble(problem, n_grid);
    Ok(smallest_pencil_eigenvalue(&stiff_diag, &stiff_off, &mass))
}

pub(crate) fn fd_assemble(problem: &RadialProblem, n_grid: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let h = problem.rho / n_grid as f64;
    let face: Vec<f64> = (0..n_grid)
        .map(|i| problem.theta((i as f64 + 0.5) * h) / h)
        .collect();
    let (x, w) = gauss_legendre(8);
    let integ = |a: f64, b: f64| -> f64 {
        let (m, half) = (0.5 * (a + b), 0.5 * (b - a));
        x.iter().zip(&w).map(|(xi, wi)| wi * problem.theta(m + half * xi)).sum::<f64>() * half
    };
    let mass: Vec<f64> = (0..n_grid)
        .map(|i| {
            let r = i as f64 * h;
            if i == 0 {
                integ(0.0, 0.5 * h)
            } else {
                integ(r - 0.5 * h, r) + integ(r, r + 0.5 * h)
            }
        })
        .collect();
    let diag: Vec<f64> = (0..n_grid)
        .map(|i| face[i] + if i > 0 { face[i - 1] } else { 0.0 })
        .collect();
    let off: Vec<f64> = (0..n_grid - 1).map(|i| -face[i]).collect();
    (diag, off, mass)
}

/// Number of eigenvalues of `K − x M` below zero (Sylvester inertia of the LDLᵀ pivots).
fn sturm_count(diag: &[f64], off: &[f64], mass: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = diag[0] - x * mass[0];
    if d < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let prev = if d == 0.0 { f64::MIN_POSITIVE } else { d };
        d = diag[i] - x * mass[i] - off[i - 1] * off[i - 1] / prev;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn smallest_pencil_eigenvalue(diag: &[f64], off: &[f64], mass: &[f64]) -> f64 {
    // Gershgorin bound for M^{-1} K
    let mut hi: f64 = 0.0;
    for i in 0..diag.len() {
        let mut row = diag[i].abs();
        if i > 0 {
            row += off[i - 1].abs();
        }
        if i < off.len() {
            row += off[i].abs();
        }
        hi = hi.max(row / mass[i]);
    }
    let mut lo = 0.0;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        if sturm_count(diag, off, mass, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The weight `f² s^{2n−2q−1} c^{2q+1}` used in the denominator quadratures.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct WeightMu(pub f64);

/// The weight `(f²)' s^{2n−2q−1} c^{2q} / c_{4λ}` used in the numerator quadratures.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct WeightNu(pub f64);

/// Both eigenfunction weights at radius `r`.
pub fn eigenfunction_weights(sol: &SpectralSolution, r: f64) -> Result<(WeightMu, WeightNu)> {
    let (f, fp) = sol.eval(r)?;
    let t = sol.problem.trig(r);
    if !(t.c4 > 0.0) {
        return Err(Error::Domain(format!(
            "c_4λ vanishes at or before r = {r}; restrict rho below pi/(4 sqrt(lambda)) = {}",
            std::f64::consts::FRAC_PI_4 / sol.problem.lambda.sqrt()
        )));
    }
    Ok(weights_at(&sol.problem, &t, f, fp))
}

#[inline]
pub(crate) fn weights_at(problem: &RadialProblem, t: &TrigBundle, f: f64, fp: f64) -> (WeightMu, WeightNu) {
    let q = problem.model.q as i32;
    let base = t.s.powi(problem.model.sphere_exponent()) * t.c.powi(2 * q);
    (
        WeightMu(f * f * base * t.c),
        WeightNu(2.0 * f * fp * base / t.c4),
    )
}

/// `∫ θ f'² dr / ∫ θ f² dr` over the solution grid.
pub fn rayleigh_quotient(sol: &SpectralSolution) -> f64 {
    let res = composite_gauss(&sol.grid, 2, 8, 1e-12, 0.0, 3, |cell, r, out| {
        let (f, fp) = sol.eval_in_cell(cell, r);
        let th = sol.problem.theta(r);
        out[0] = th * fp * fp;
        out[1] = th * f * f;
    });
    res.value[0] / res.value[1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const J01_SQ: f64 = 5.783_185_962_946_783;
    const J11_SQ: f64 = 14.681_970_642_123_895;

    fn solve(model: ModelDescriptor, lambda: f64, rho: f64) -> SpectralSolution {
        solve_mu1(&RadialProblem::new(model, lambda, rho).unwrap(), DEFAULT_TOL).unwrap()
    }

    #[test]
    fn flat_limit_matches_bessel_zeros() {
        let s = solve(ModelDescriptor::cpq(2, 1).unwrap(), 1e-8, 1.0);
        assert!((s.mu1 - J01_SQ).abs() / J01_SQ < 1e-4);
        let s = solve(ModelDescriptor::cpq(3, 1).unwrap(), 1e-8, 1.0);
        assert!((s.mu1 - J11_SQ).abs() / J11_SQ < 1e-4);
    }

    #[test]
    fn hemisphere_closed_form() {
        // Q^1 in CP^2: θ = sin(4r)/4, a sphere of radius 1/4; ρ = π/8 is the hemisphere
        let s = solve(ModelDescriptor::quadric(2).unwrap(), 1.0, PI / 8.0);
        assert!((s.mu1 - 32.0).abs() < 1e-8, "{}", s.mu1);
    }

    #[test]
    fn shooting_agrees_with_fd() {
        let p = RadialProblem::new(ModelDescriptor::quadric(2).unwrap(), 1.0, PI / 8.0).unwrap();
        let s = solve_mu1(&p, DEFAULT_TOL).unwrap();
        let fd = solve_mu1_fd(&p, 4000).unwrap();
        assert!((fd - s.mu1).abs() / s.mu1 < 1e-6, "{fd} vs {}", s.mu1);
    }

    #[test]
    fn fd_is_second_order() {
        let p = RadialProblem::new(ModelDescriptor::segre(3).unwrap(), 1.0, 0.4).unwrap();
        let m: Vec<f64> = [500, 1000, 2000].iter().map(|&n| solve_mu1_fd(&p, n).unwrap()).collect();
        let ratio = (m[0] - m[1]) / (m[1] - m[2]);
        assert!((ratio - 4.0).abs() < 0.8, "ratio {ratio}");
    }

    #[test]
    fn fd_rejects_coarse_grid() {
        let p = RadialProblem::new(ModelDescriptor::so10(), 1.0, 0.3).unwrap();
        assert!(matches!(solve_mu1_fd(&p, 99), Err(Error::InvalidInput(_))));
        assert!(solve_mu1_fd(&p, 150).is_err());
        assert!(solve_mu1_fd(&p, 180).is_ok());
    }

    #[test]
    fn fd_monotone_in_radius() {
        let m = ModelDescriptor::cpq(3, 2).unwrap();
        let a = solve_mu1_fd(&RadialProblem::new(m, 1.0, 0.3).unwrap(), 400).unwrap();
        let b = solve_mu1_fd(&RadialProblem::new(m, 1.0, 0.5).unwrap(), 400).unwrap();
        assert!(a > b);
    }

    #[test]
    fn problem_validation() {
        let m = ModelDescriptor::quadric(3).unwrap();
        assert!(RadialProblem::new(m, 1.0, PI / 4.0).is_err());
        assert!(RadialProblem::new(m, 0.0, 0.1).is_err());
        assert!(RadialProblem::new(m, 1.0, 0.0).is_err());
        let p = RadialProblem::new(m, 1.0, 0.3).unwrap();
        assert!(solve_mu1(&p, 1e-13).is_err());
    }

    #[test]
    fn sign_facts_and_normalization() {
        let s = solve(ModelDescriptor::su5(), 2.0, 0.4);
        assert_eq!(s.f[0], 1.0);
        assert_eq!(s.fprime[0], 0.0);
        let last = s.grid.len() - 1;
        assert_eq!(s.grid[last], 0.4);
        assert!(s.f[last].abs() < 1e-8);
        assert!(s.grid.windows(2).all(|w| w[0] < w[1]));
        assert!(s.f[..last].iter().all(|&v| v > 0.0));
        assert!(s.fprime[1..].iter().all(|&v| v < 0.0));
        assert!(s.eval(0.41).is_err());
    }

    #[test]
    fn rayleigh_self_consistency() {
        let s = solve(ModelDescriptor::cpq(4, 2).unwrap(), 1.0, 0.6);
        let rq = rayleigh_quotient(&s);
        assert!((rq - s.mu1).abs() / s.mu1 < 1e-6, "{rq} vs {}", s.mu1);
    }

    #[test]
    fn weights_at_endpoints_and_signs() {
        let s = solve(ModelDescriptor::quadric(3).unwrap(), 1.0, 0.5);
        let (wm, wn) = eigenfunction_weights(&s, 0.0).unwrap();
        assert_eq!((wm.0, wn.0), (0.0, 0.0));
        let (wm, _) = eigenfunction_weights(&s, 0.5).unwrap();
        assert!(wm.0.abs() < 1e-8);
        for j in 1..=50 {
            let (_, wn) = eigenfunction_weights(&s, 0.5 * j as f64 / 50.0).unwrap();
            assert!(wn.0 <= 1e-9, "{}", wn.0);
        }
        let s = solve(ModelDescriptor::cpq(2, 1).unwrap(), 1.0, 1.2);
        assert!(matches!(eigenfunction_weights(&s, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn eval_interpolates_consistently() {
        let s = solve(ModelDescriptor::cpq(3, 1).unwrap(), 1.0, 0.8);
        for k in 2..s.grid.len() {
            let (f, fp) = s.eval(s.grid[k]).unwrap();
            assert_eq!((f, fp), (s.f[k], s.fprime[k]));
        }
        // one step of size h from node k-1 reproduces the recorded node k
        for k in 2..s.grid.len() {
            let (f, _) = s.eval_in_cell(k - 1, s.grid[k]);
            assert!((f - s.f[k]).abs() < 1e-12);
        }
    }
}
