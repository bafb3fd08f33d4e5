use proptest::prelude::*;
use std::f64::consts::FRAC_PI_4;

use tubebound::bound::{bound_report, correction_m, correction_m_quadric, quadratures, rho_thresholds};
use tubebound::chern::{DegreeProfile, Moments};
use tubebound::geometry::ModelDescriptor;
use tubebound::radial::{rayleigh_quotient, solve_mu1, solve_mu1_fd, RadialProblem, DEFAULT_TOL};
use tubebound::volume::{density_first_zero, tube_volume_ratio};

fn model_strategy() -> impl Strategy<Value = ModelDescriptor> {
    prop_oneof![
        (2usize..7).prop_flat_map(|n| (Just(n), 1..n)).prop_map(|(n, q)| ModelDescriptor::cpq(n, q).unwrap()),
        (2usize..7).prop_map(|n| ModelDescriptor::quadric(n).unwrap()),
        (3usize..6).prop_map(|m| ModelDescriptor::segre(m).unwrap()),
        Just(ModelDescriptor::su5()),
        Just(ModelDescriptor::so10()),
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn eigenvalue_scales_with_metric(model in model_strategy(), lambda in 0.3f64..3.0, frac in 0.1f64..0.9) {
        let rho = frac * FRAC_PI_4 / lambda.sqrt();
        let base = solve_mu1(&RadialProblem::new(model, lambda, rho).unwrap(), DEFAULT_TOL).unwrap();
        for s in [0.5, 2.0] {
            let p = RadialProblem::new(model, lambda / (s * s), s * rho).unwrap();
            let scaled = solve_mu1(&p, DEFAULT_TOL).unwrap();
            prop_assert!(rel(scaled.mu1 * s * s, base.mu1) < 1e-8);
        }
    }

    #[test]
    fn solution_invariants(model in model_strategy(), lambda in 0.3f64..3.0, frac in 0.05f64..0.95) {
        let rho = frac * model.cut_radius(lambda);
        let sol = solve_mu1(&RadialProblem::new(model, lambda, rho).unwrap(), DEFAULT_TOL).unwrap();
        let last = sol.grid.len() - 1;
        prop_assert_eq!(sol.grid[0], 0.0);
        prop_assert_eq!(sol.grid[last], rho);
        prop_assert_eq!(sol.f[0], 1.0);
        prop_assert_eq!(sol.fprime[0], 0.0);
        let fmax = sol.f.iter().cloned().fold(0.0, f64::max);
        prop_assert!(sol.f[last].abs() <= 1e-6 * fmax);
        prop_assert!(sol.f[..last].iter().all(|&v| v > 0.0));
        prop_assert!(sol.fprime[1..].iter().all(|&v| v < 0.0));
        prop_assert!(rel(rayleigh_quotient(&sol), sol.mu1) < 1e-6);
    }

    #[test]
    fn fd_oracle_agrees(model in model_strategy(), lambda in 0.5f64..2.0, frac in 0.2f64..0.75) {
        let rho = frac * model.cut_radius(lambda);
        let p = RadialProblem::new(model, lambda, rho).unwrap();
        let shoot = solve_mu1(&p, DEFAULT_TOL).unwrap().mu1;
        // second-order grid error removed by extrapolation; boundary layers near the cut make it sizeable
        let fd = (4.0 * solve_mu1_fd(&p, 4000).unwrap() - solve_mu1_fd(&p, 2000).unwrap()) / 3.0;
        prop_assert!(rel(fd, shoot) < 1e-6, "{} vs {}", fd, shoot);
    }

    #[test]
    fn quadric_specialization_matches(n in 2usize..6, a in 1u32..7, frac in 0.1f64..0.9, lambda in 0.5f64..2.0) {
        let model = ModelDescriptor::quadric(n).unwrap();
        let p = DegreeProfile::new(n, n - 1, vec![a]).unwrap();
        let limit = 0.999 * FRAC_PI_4 / lambda.sqrt();
        let rho = frac * density_first_zero(&Moments::from_profile(&p), lambda, limit).unwrap_or(limit);
        let sol = solve_mu1(&RadialProblem::new(model, lambda, rho).unwrap(), DEFAULT_TOL).unwrap();
        let g = correction_m(&model, &Moments::from_profile(&p), lambda, rho, &sol).unwrap();
        let f = correction_m_quadric(n, a, lambda, rho, &sol).unwrap();
        prop_assert!(g.denominator > 0.0);
        if a == 2 {
            prop_assert_eq!(f.numerator, 0.0);
            prop_assert!(g.m.abs() < 1e-12 * sol.mu1);
        } else {
            prop_assert!(rel(f.m, g.m) < 1e-10);
        }
    }

    #[test]
    fn moment_signs(model in model_strategy(), lambda in 0.5f64..2.0, frac in 0.05f64..0.95) {
        let rho = frac * 0.999 * FRAC_PI_4 / lambda.sqrt();
        let sol = solve_mu1(&RadialProblem::new(model, lambda, rho).unwrap(), DEFAULT_TOL).unwrap();
        let qd = quadratures(&sol).unwrap();
        prop_assert!(qd.b.iter().all(|&b| b < 0.0));
        prop_assert!(qd.c.iter().all(|&c| c > 0.0));
        for (v, e) in qd.b.iter().zip(&qd.b_error).chain(qd.c.iter().zip(&qd.c_error)) {
            prop_assert!(*e <= 1e-8 * v.abs());
        }
    }

    #[test]
    fn bound_scales_with_metric(
        degrees in prop::collection::vec(1u32..5, 1..4),
        extra in 1usize..3,
        frac in 0.1f64..0.6,
    ) {
        let q = extra;
        let n = q + degrees.len();
        let model = ModelDescriptor::cpq(n, q).unwrap();
        let profile = DegreeProfile::new(n, q, degrees).unwrap();
        let rho = frac * FRAC_PI_4;
        let base = bound_report(&model, &profile, 1.0, rho, DEFAULT_TOL).unwrap();
        prop_assert_eq!(base.bound, base.mu1_model + base.m);
        for s in [0.5, 2.0] {
            let r = bound_report(&model, &profile, 1.0 / (s * s), s * rho, DEFAULT_TOL).unwrap();
            prop_assert!(rel(r.mu1_model * s * s, base.mu1_model) < 1e-8);
            prop_assert!((r.m * s * s - base.m).abs() <= 1e-8 * base.m.abs().max(base.mu1_model * 1e-3));
            prop_assert!(rel(r.bound * s * s, base.bound) < 1e-8);
        }
    }

    #[test]
    fn volume_increases_until_density_vanishes(
        degrees in prop::collection::vec(1u32..5, 1..4),
        q in 1usize..4,
        lambda in 0.5f64..2.0,
    ) {
        let n = q + degrees.len();
        let profile = DegreeProfile::new(n, q, degrees).unwrap();
        let half = std::f64::consts::FRAC_PI_2 / lambda.sqrt();
        let stop = density_first_zero(&Moments::from_profile(&profile), lambda, half).unwrap_or(half);
        let mut last = 0.0;
        for j in 1..=20 {
            let v = tube_volume_ratio(n, q, &profile, lambda, stop * j as f64 / 21.0).unwrap();
            prop_assert!(v.ratio > last);
            prop_assert!(v.warnings.is_empty());
            last = v.ratio;
        }
    }
}

#[test]
fn eigenvalue_decreases_along_radius_ladder() {
    let models = [
        ModelDescriptor::cpq(3, 1).unwrap(),
        ModelDescriptor::cpq(4, 3).unwrap(),
        ModelDescriptor::quadric(3).unwrap(),
        ModelDescriptor::segre(3).unwrap(),
        ModelDescriptor::su5(),
        ModelDescriptor::so10(),
    ];
    for m in models {
        let cut = m.cut_radius(1.0);
        let mus: Vec<f64> = [0.15, 0.3, 0.5, 0.7, 0.9]
            .iter()
            .map(|f| solve_mu1(&RadialProblem::new(m, 1.0, f * cut).unwrap(), DEFAULT_TOL).unwrap().mu1)
            .collect();
        assert!(mus.windows(2).all(|w| w[0] > w[1]), "{m}: {mus:?}");
    }
}

#[test]
fn quadric_gap_below_threshold() {
    for n in 2..=4usize {
        let model = ModelDescriptor::quadric(n).unwrap();
        for a in 3..=5u32 {
            let rho0 = rho_thresholds(n, a, 1.0).unwrap().rho0;
            for frac in [0.2, 0.5, 0.8, 0.95] {
                let rho = (frac * rho0).min(0.99 * FRAC_PI_4);
                let profile = DegreeProfile::new(n, n - 1, vec![a]).unwrap();
                let r = bound_report(&model, &profile, 1.0, rho, DEFAULT_TOL).unwrap();
                assert!(r.m < -10.0 * r.m_error, "n={n} a={a} rho={rho}: {}", r.m);
            }
        }
    }
}
