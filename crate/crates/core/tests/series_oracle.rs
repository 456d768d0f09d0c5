mod common;

use std::f64::consts::PI;

use common::{c, random_unit_circle_config, rel, rng};
use heun_connect::series::{
    frobenius_solution, integrate_path, recurrence_residual, taylor_solution, wronskian, Branch, BranchCuts,
    EvalOptions, PathOptions,
};
use heun_connect::C64;
use rand::Rng;

#[test]
fn taylor_series_agrees_with_integration() {
    let mut rng = rng(11);
    let opts = EvalOptions::default();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let cfg = random_unit_circle_config(&mut rng, 0.3);
        let init = (common::random_point(&mut rng, 1.0), common::random_point(&mut rng, 1.0));
        let sol = taylor_solution(&cfg, c(0.0, 0.0), init.0, init.1, 64).unwrap();
        for frac in [0.1, 0.3, 0.5] {
            let z = C64::from_polar(frac * sol.conv_radius, rng.gen_range(0.0..2.0 * PI));
            let e = sol.evaluate(z, &opts).unwrap();
            let (v, d) = integrate_path(&cfg, c(0.0, 0.0), init, z, &PathOptions::default()).unwrap();
            worst = worst.max(rel(e.value, v)).max(rel(e.derivative, d));
        }
    }
    assert!(worst <= 1e-8, "worst relative deviation {worst:e}");
}

#[test]
fn frobenius_series_agrees_with_integration() {
    let mut rng = rng(12);
    let opts = EvalOptions::default();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let cfg = random_unit_circle_config(&mut rng, 0.3);
        let cuts = BranchCuts::radial(&cfg);
        let j = rng.gen_range(1..=4);
        let branch = if rng.gen_bool(0.5) { Branch::First } else { Branch::Second };
        let sol = frobenius_solution(&cfg, j, branch, 64, &cuts).unwrap();
        // stay on the side opposite to the cut
        let theta = cuts.directions[j - 1] + PI + rng.gen_range(-0.6..0.6);
        let za = sol.center + C64::from_polar(0.5 * sol.conv_radius, theta);
        let zb = sol.center + C64::from_polar(0.3 * sol.conv_radius, theta + 0.5);
        let ea = sol.evaluate(za, &opts).unwrap();
        let eb = sol.evaluate(zb, &opts).unwrap();
        let (v, d) = integrate_path(&cfg, za, (ea.value, ea.derivative), zb, &PathOptions::default()).unwrap();
        worst = worst.max(rel(eb.value, v)).max(rel(eb.derivative, d));
    }
    assert!(worst <= 1e-8, "worst relative deviation {worst:e}");
}

#[test]
fn generated_coefficients_satisfy_the_equation() {
    let mut rng = rng(13);
    for _ in 0..30 {
        let cfg = random_unit_circle_config(&mut rng, 0.3);
        let cuts = BranchCuts::radial(&cfg);
        let t = taylor_solution(&cfg, c(0.05, 0.02), c(1.0, 0.0), c(0.3, -0.1), 128).unwrap();
        assert!(recurrence_residual(&cfg, &t) <= 1e-12);
        for j in 1..=4 {
            for branch in [Branch::First, Branch::Second] {
                let f = frobenius_solution(&cfg, j, branch, 128, &cuts).unwrap();
                assert!(recurrence_residual(&cfg, &f) <= 1e-12);
            }
        }
    }
}

#[test]
fn exponents_solve_the_indicial_quadratic() {
    let mut rng = rng(14);
    for _ in 0..1000 {
        let cfg = random_unit_circle_config(&mut rng, 0.05);
        let mut total = c(0.0, 0.0);
        for j in 1..=4 {
            let (a, b) = cfg.indicial_exponents(j).unwrap();
            let ab = a * b;
            for rho in [a, b] {
                assert!((rho * rho - rho / 2.0 + ab).norm() <= 1e-14);
            }
            total += a + b;
        }
        assert_eq!(total, c(2.0, 0.0));
    }
}

#[test]
fn modified_wronskian_is_constant() {
    let mut rng = rng(15);
    let opts = EvalOptions::default();
    for _ in 0..20 {
        let cfg = random_unit_circle_config(&mut rng, 0.3);
        let f1 = taylor_solution(&cfg, c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), 64).unwrap();
        let f2 = taylor_solution(&cfg, c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), 64).unwrap();
        assert_eq!(wronskian(&f1, &f2, c(0.0, 0.0), &opts).unwrap(), c(1.0, 0.0));
        for _ in 0..5 {
            let z = C64::from_polar(rng.gen_range(0.0..0.8) * f1.conv_radius, rng.gen_range(0.0..2.0 * PI));
            let w = wronskian(&f1, &f2, z, &opts).unwrap();
            // W(z) Π (1 - z/z_j)^{1/2} = W(0)
            let factor: C64 = cfg.z().iter().map(|&zj| (1.0 - z / zj).sqrt()).product();
            assert!((w * factor - 1.0).norm() <= 1e-8, "{}", w * factor);
        }
        let g = taylor_solution(&cfg, c(0.0, 0.0), c(2.0, 1.0), c(0.0, 0.0), 64).unwrap();
        let z = C64::from_polar(0.4 * f1.conv_radius, 1.0);
        assert!(wronskian(&f1, &g, z, &opts).unwrap().norm() <= 1e-12);
    }
}
