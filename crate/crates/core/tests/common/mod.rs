#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_4, TAU};

use heun_connect::geometry::AngleTriple;
use heun_connect::series::SymmetricHeunConfig;
use heun_connect::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_point(rng: &mut impl Rng, scale: f64) -> C64 {
    c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Index angle with `|cos 2χ| > 0.1`, keeping the exponent difference
/// `cos(2χ)/2` away from integers.
pub fn random_chi(rng: &mut impl Rng) -> C64 {
    loop {
        let re: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        if ((re / FRAC_PI_4).round() * FRAC_PI_4 - re).abs() > 0.08 {
            return c(re, rng.gen_range(-0.1..0.1));
        }
    }
}

/// `z1, z2, z4` on the unit circle, `z3` inside the annulus
/// `0.2 < |z| < 1.6`, all pairwise separated by at least `min_sep`.
pub fn random_unit_circle_config(rng: &mut impl Rng, min_sep: f64) -> SymmetricHeunConfig {
    loop {
        let phis = AngleTriple::new(rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
        let z3 = C64::from_polar(rng.gen_range(0.2..1.6), rng.gen_range(0.0..TAU));
        let [p1, p2, p4] = phis.points();
        let z = [p1, p2, z3, p4];
        let sep = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .map(|(i, j)| (z[i] - z[j]).norm())
            .fold(f64::INFINITY, f64::min);
        if sep < min_sep {
            continue;
        }
        let chi = [random_chi(rng), random_chi(rng), random_chi(rng), random_chi(rng)];
        let lambda = C64::from_polar(rng.gen_range(0.0..5.0), rng.gen_range(0.0..TAU));
        return SymmetricHeunConfig::new(z, chi, lambda).unwrap();
    }
}

/// Unit-circle configuration satisfying the chord condition on `z1, z2, z4`.
pub fn random_condition_a_config(rng: &mut impl Rng) -> SymmetricHeunConfig {
    loop {
        let cfg = random_unit_circle_config(rng, 0.3);
        if heun_connect::regions::condition_a_points(cfg.z()) {
            return cfg;
        }
    }
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}
