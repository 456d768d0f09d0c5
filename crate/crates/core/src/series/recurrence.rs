//! Coefficient recurrences generated from the polynomial form of the
//! equation,
//!
//! ```text
//! P² F'' + (1/2) P P' F' + (λ P + Σ_j q_j P/(z - z_j)) F = 0,
//! ```
//!
//! recentered at the expansion point and rescaled to `u = (z - c)/R`.
//! Substituting `F = (z - c)^ρ Σ c_n u^n` gives
//! `c_n H_0(n + ρ) = -Σ_{j≥1} c_{n-j} H_j(n - j + ρ)`, where each
//! `H_j(x) = a_j x(x-1) + b_j x + d_j`. At a regular point the polynomial
//! degrees give nine terms (`j = 0..=8`); at a singular point the leading
//! coefficients vanish exactly and `H_0` is the indicial polynomial.

use super::config::{DerivedParams, SymmetricHeunConfig};
use crate::{poly, C64};

/// Coefficient polynomials `a2, a1, a0` of the equation in the scaled
/// variable `u`, low degree first.
pub(crate) struct ScaledEquation {
    pub a2: Vec<C64>,
    pub a1: Vec<C64>,
    pub a0: Vec<C64>,
}

impl ScaledEquation {
    /// `singular` is the zero-based index of the singular point the center
    /// sits on, if any; its offset is forced to exactly zero.
    pub fn new(
        cfg: &SymmetricHeunConfig,
        derived: &DerivedParams,
        center: C64,
        singular: Option<usize>,
        scale: f64,
    ) -> Self {
        let offsets: Vec<C64> = (0..4)
            .map(|i| if Some(i) == singular { C64::default() } else { center - cfg.z()[i] })
            .collect();
        let p = poly::from_offsets(offsets.iter().copied());
        let dp = poly::derivative(&p);
        let a2 = poly::mul(&p, &p);
        let mut a1 = poly::mul(&p, &dp);
        a1.iter_mut().for_each(|c| *c *= 0.5);
        let mut a0: Vec<C64> = p.iter().map(|&c| c * cfg.lambda()).collect();
        for i in 0..4 {
            let others = poly::from_offsets((0..4).filter(|&k| k != i).map(|k| offsets[k]));
            poly::add_scaled(&mut a0, &others, derived.q[i]);
        }
        // F_tt = F_uu / R², F_t = F_u / R, t^k = R^k u^k
        let rescale = |v: Vec<C64>, shift: i32| -> Vec<C64> {
            v.into_iter()
                .enumerate()
                .map(|(k, c)| c * scale.powi(k as i32 - shift))
                .collect()
        };
        ScaledEquation { a2: rescale(a2, 2), a1: rescale(a1, 1), a0: rescale(a0, 0) }
    }
}

fn at(v: &[C64], k: isize) -> C64 {
    if k < 0 {
        C64::default()
    } else {
        v.get(k as usize).copied().unwrap_or_default()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Recurrence {
    exponent: C64,
    /// Coefficients given as initial data (2 at a regular point, 1 at a
    /// singular point).
    n_free: usize,
    terms: Vec<[C64; 3]>,
}

impl Recurrence {
    pub fn new(eq: &ScaledEquation, exponent: C64, singular: bool) -> Self {
        let sigma: isize = if singular { 2 } else { 0 };
        let depth = 8 - sigma;
        let terms = (0..=depth)
            .map(|j| {
                [
                    at(&eq.a2, j + sigma),
                    at(&eq.a1, j + sigma - 1),
                    at(&eq.a0, j + sigma - 2),
                ]
            })
            .collect();
        Recurrence { exponent, n_free: if singular { 1 } else { 2 }, terms }
    }

    fn h(&self, j: usize, x: C64) -> C64 {
        let [a, b, d] = self.terms[j];
        a * x * (x - 1.0) + b * x + d
    }

    /// Indicial polynomial `H_0` evaluated at `x`.
    #[cfg(test)]
    pub fn indicial(&self, x: C64) -> C64 {
        self.h(0, x)
    }

    #[cfg(test)]
    pub fn depth(&self) -> usize {
        self.terms.len()
    }

    /// Extends `coeffs` (which must hold at least the free initial data) to
    /// `n_terms` entries.
    pub fn extend(&self, coeffs: &mut Vec<C64>, n_terms: usize) {
        debug_assert!(coeffs.len() >= self.n_free);
        let last = self.terms.len() - 1;
        for n in coeffs.len()..n_terms {
            let mut acc = C64::default();
            for j in 1..=n.min(last) {
                let m = n - j;
                acc += coeffs[m] * self.h(j, C64::new(m as f64, 0.0) + self.exponent);
            }
            let lead = self.h(0, C64::new(n as f64, 0.0) + self.exponent);
            coeffs.push(-acc / lead);
        }
    }
}

/// Largest relative residual obtained by substituting the coefficients of
/// `sol` back into the scaled polynomial form of the equation, over all
/// orders whose terms are fully determined by the stored coefficients.
///
/// Each order is normalised by the sum of the moduli of its individual
/// contributions, so that exact cancellation in the indicial term does not
/// inflate the ratio.
pub fn recurrence_residual(cfg: &SymmetricHeunConfig, sol: &super::LocalSolution) -> f64 {
    let derived = cfg.derived_params();
    let singular = match sol.kind {
        super::SolutionKind::Frobenius { index, .. } => Some(index - 1),
        super::SolutionKind::Taylor => None,
    };
    let eq = ScaledEquation::new(cfg, &derived, sol.center, singular, sol.scale);
    let rho = sol.exponent;
    let c = &sol.coefficients;
    let mut worst: f64 = 0.0;
    // coefficient of u^{n + ρ - 2}
    for n in 0..c.len() {
        let mut sum = C64::default();
        let mut mag = 0.0;
        for (m, &cm) in c.iter().enumerate().take(n + 1) {
            let x = C64::new(m as f64, 0.0) + rho;
            let k = (n - m) as isize;
            let parts = [at(&eq.a2, k) * x * (x - 1.0), at(&eq.a1, k - 1) * x, at(&eq.a0, k - 2)];
            sum += cm * (parts[0] + parts[1] + parts[2]);
            mag += cm.norm() * parts.iter().map(|p| p.norm()).sum::<f64>();
        }
        if mag > 0.0 {
            worst = worst.max(sum.norm() / mag);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn cfg() -> SymmetricHeunConfig {
        SymmetricHeunConfig::new(
            [c(1.1, 0.2), c(-0.3, 1.0), c(-1.2, -0.4), c(0.2, -1.3)],
            [c(0.3, 0.0), c(0.7, 0.1), c(1.2, 0.0), c(0.1, -0.2)],
            c(1.3, -0.7),
        )
        .unwrap()
    }

    #[test]
    fn depth_is_nine_at_regular_points_and_seven_at_singular_ones() {
        let cfg = cfg();
        let d = cfg.derived_params();
        let eq = ScaledEquation::new(&cfg, &d, c(0.1, 0.0), None, 0.5);
        assert_eq!(Recurrence::new(&eq, C64::default(), false).depth(), 9);
        let eq = ScaledEquation::new(&cfg, &d, cfg.z()[1], Some(1), 0.5);
        assert_eq!(Recurrence::new(&eq, d.alpha[1], true).depth(), 7);
    }

    #[test]
    fn indicial_roots_are_the_exponents() {
        let cfg = cfg();
        let d = cfg.derived_params();
        for j in 0..4 {
            let eq = ScaledEquation::new(&cfg, &d, cfg.z()[j], Some(j), 0.7);
            let rec = Recurrence::new(&eq, d.alpha[j], true);
            let lead = eq.a2[2].norm();
            assert!(rec.indicial(d.alpha[j]).norm() < 1e-14 * lead);
            assert!(rec.indicial(d.beta[j]).norm() < 1e-14 * lead);
            assert!(rec.indicial(d.alpha[j] + 0.5).norm() > 1e-3 * lead);
        }
    }
}
