//! The standard `HeunG` form
//!
//! ```text
//! H'' + (γ/ζ + δ/(ζ-1) + ε/(ζ-a)) H' + (αβζ - q)/(ζ(ζ-1)(ζ-a)) H = 0
//! ```
//!
//! and its relation to the symmetric form: with `ζ` the canonical map
//! sending `z1, z2, z3, z4` to `0, 1, a, ∞`,
//! `F(z) = H(ζ(z)) Π_k (z - z_k)^{ν_k}`.
//!
//! The exponent `ν_k = α_k` is removed at each point sent to a finite
//! singularity, and the point sent to infinity carries the balancing
//! exponent `ν_4 = -α_1 - α_2 - α_3` so that `Σ ν_k = 0` and `z = ∞`
//! stays an ordinary point.

use serde::{Deserialize, Serialize};

use crate::geometry::{canonical_map, cross_ratio, MoebiusMap};
use crate::series::{branch_pow, integrate_segment, BranchCuts, PathOptions, SymmetricHeunConfig};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardHeunParams {
    pub a: C64,
    /// Accessory parameter.
    pub q: C64,
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub delta: C64,
    pub epsilon: C64,
}

impl StandardHeunParams {
    /// `γ + δ + ε - α - β - 1`, zero for a valid parameter set.
    pub fn fuchs_defect(&self) -> C64 {
        self.gamma + self.delta + self.epsilon - self.alpha - self.beta - 1.0
    }

    /// Exponent pairs at `0, 1, a, ∞`.
    pub fn exponents(&self) -> [(C64, C64); 4] {
        let zero = C64::default();
        [
            (zero, 1.0 - self.gamma),
            (zero, 1.0 - self.delta),
            (zero, 1.0 - self.epsilon),
            (self.alpha, self.beta),
        ]
    }

    /// Coefficients `(p, r)` of `H'' + p H' + r H = 0`.
    pub fn ode_coefficients(&self, zeta: C64) -> (C64, C64) {
        let (z0, z1, za) = (zeta, zeta - 1.0, zeta - self.a);
        let p = self.gamma / z0 + self.delta / z1 + self.epsilon / za;
        let r = (self.alpha * self.beta * zeta - self.q) / (z0 * z1 * za);
        (p, r)
    }

    fn min_separation(&self) -> f64 {
        1f64.min(self.a.norm()).min((self.a - 1.0).norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardFormMap {
    pub params: StandardHeunParams,
    pub nu: [C64; 4],
    /// `z ↦ ζ`.
    pub moebius: MoebiusMap,
}

/// Standard parameters and prefactor exponents for `cfg`.
///
/// `q` follows from comparing residues at `z1`: if `R(z)` is the
/// zeroth-order coefficient of the equation for `H` written in `z`, then
/// `q = -a Res_{z1} R / ζ'(z1)`.
pub fn standard_form_map(cfg: &SymmetricHeunConfig) -> Result<StandardFormMap> {
    let z = *cfg.z();
    let moebius = canonical_map(z[0], z[1], z[3]).map_err(|e| Error::DegenerateConfig(e.to_string()))?;
    let a = cross_ratio(z[0], z[1], z[2], z[3]).map_err(|e| Error::DegenerateConfig(e.to_string()))?;
    let d = cfg.derived_params();
    let s = d.alpha[0] + d.alpha[1] + d.alpha[2];
    let nu = [d.alpha[0], d.alpha[1], d.alpha[2], -s];

    let dz: Vec<C64> = (1..4).map(|k| z[0] - z[k]).collect();
    let s1: C64 = dz.iter().map(|d| 1.0 / d).sum();
    let potential: C64 = cfg.lambda() + (1..4).map(|k| d.q[k] / dz[k - 1]).sum::<C64>();
    let nu_sum: C64 = (1..4).map(|k| nu[k] / dz[k - 1]).sum();
    let a1 = d.alpha[0];
    let residue = potential / cfg.p_prime_at(0) + a1 * a1 * s1 + (0.5 + 2.0 * a1) * nu_sum;
    let q = -a * residue / moebius.derivative(z[0]);

    let params = StandardHeunParams {
        a,
        q,
        alpha: s + d.alpha[3],
        beta: s + d.beta[3],
        gamma: 0.5 + 2.0 * d.alpha[0],
        delta: 0.5 + 2.0 * d.alpha[1],
        epsilon: 0.5 + 2.0 * d.alpha[2],
    };
    Ok(StandardFormMap { params, nu, moebius })
}

impl StandardFormMap {
    /// `g(z) = Π_k (z - z_k)^{ν_k}` and its logarithmic derivative, each
    /// factor on the branch given by `cuts`.
    pub fn prefactor(&self, cfg: &SymmetricHeunConfig, z: C64, cuts: &BranchCuts) -> Result<(C64, C64)> {
        let mut g = C64::new(1.0, 0.0);
        let mut log_d = C64::default();
        for k in 0..4 {
            let t = z - cfg.z()[k];
            g *= branch_pow(t, self.nu[k], cuts.directions[k])?;
            log_d += self.nu[k] / t;
        }
        Ok((g, log_d))
    }

    /// `(ζ, H, dH/dζ)` from `(F, F')` at `z`.
    pub fn to_standard(
        &self,
        cfg: &SymmetricHeunConfig,
        z: C64,
        (f, df): (C64, C64),
        cuts: &BranchCuts,
    ) -> Result<(C64, C64, C64)> {
        let (g, log_d) = self.prefactor(cfg, z, cuts)?;
        let zeta = self.moebius.apply_finite(z).ok_or(Error::CenterIsSingular(z))?;
        let h = f / g;
        let dh_dz = (df - log_d * f) / g;
        Ok((zeta, h, dh_dz / self.moebius.derivative(z)))
    }

    /// `(F, F')` at `z` from `(H, dH/dζ)` at `ζ(z)`.
    pub fn from_standard(
        &self,
        cfg: &SymmetricHeunConfig,
        z: C64,
        (h, dh): (C64, C64),
        cuts: &BranchCuts,
    ) -> Result<(C64, C64)> {
        let (g, log_d) = self.prefactor(cfg, z, cuts)?;
        let f = g * h;
        Ok((f, g * (log_d * h + self.moebius.derivative(z) * dh)))
    }
}

/// Integrates the standard form along the straight segment from `start` to
/// `end`; the segment must keep its clearance from `0, 1, a`.
pub fn integrate_standard(
    p: &StandardHeunParams,
    start: C64,
    init: (C64, C64),
    end: C64,
    opts: &PathOptions,
) -> Result<(C64, C64)> {
    let clearance = opts.min_clearance.unwrap_or(0.05 * p.min_separation());
    let singular = [C64::default(), C64::new(1.0, 0.0), p.a];
    crate::series::check_clearance(start, end, &singular, clearance)?;
    let rhs = |zeta: C64, y: &[C64; 2]| {
        let (pc, rc) = p.ode_coefficients(zeta);
        [y[1], -pc * y[1] - rc * y[0]]
    };
    let [v, d] = integrate_segment(rhs, start, [init.0, init.1], end, opts.rtol)?;
    Ok((v, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::taylor_solution;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn generic() -> SymmetricHeunConfig {
        SymmetricHeunConfig::new(
            [c(1.1, 0.2), c(-0.3, 1.0), c(-1.2, -0.4), c(0.2, -1.3)],
            [c(0.3, 0.0), c(0.7, 0.1), c(1.2, 0.0), c(0.1, -0.2)],
            c(1.3, -0.7),
        )
        .unwrap()
    }

    #[test]
    fn parameter_identities() {
        let cfg = generic();
        let m = standard_form_map(&cfg).unwrap();
        let z = cfg.z();
        assert!(m.params.fuchs_defect().norm() < 1e-14);
        assert_eq!(m.params.a, cross_ratio(z[0], z[1], z[2], z[3]).unwrap());
        let d = cfg.derived_params();
        assert_eq!(m.nu[1], d.alpha[1]);
        assert!(m.nu.iter().sum::<C64>().norm() < 1e-15);
    }

    #[test]
    fn accessory_parameter_matches_pointwise_elimination() {
        // Solve the transformed equation for q at several regular points
        // using F'' from the symmetric equation.
        let cfg = generic();
        let m = standard_form_map(&cfg).unwrap();
        let p = m.params;
        let derived = cfg.derived_params();
        let cuts = BranchCuts::radial(&cfg);
        for z in [c(0.1, 0.05), c(-0.2, 0.3), c(0.35, -0.1)] {
            let (f, df) = (c(0.7, -0.2), c(0.3, 1.1));
            let (pz, rz) = cfg.ode_coefficients(z, &derived);
            let d2f = -pz * df - rz * f;
            let (g, l) = m.prefactor(&cfg, z, &cuts).unwrap();
            let dl: C64 = (0..4).map(|k| -m.nu[k] / (z - cfg.z()[k]).powi(2)).sum();
            // H = F/g in z
            let h = f / g;
            let hz = (df - l * f) / g;
            let hzz = (d2f - 2.0 * l * df - (dl - l * l) * f) / g;
            let zp = m.moebius.derivative(z);
            let zpp = -2.0 * m.moebius.c_coef * zp / (m.moebius.c_coef * z + m.moebius.d_coef);
            let zeta = m.moebius.apply_finite(z).unwrap();
            let hzeta = hz / zp;
            let hzz_zeta = (hzz - zpp * hzeta) / (zp * zp);
            let (pc, _) = p.ode_coefficients(zeta);
            let q = p.alpha * p.beta * zeta + zeta * (zeta - 1.0) * (zeta - p.a) * (hzz_zeta + pc * hzeta) / h;
            assert!((q - p.q).norm() < 1e-11 * (1.0 + p.q.norm()), "{q} vs {}", p.q);
        }
    }

    #[test]
    fn conjugacy_near_origin() {
        let cfg = generic();
        let m = standard_form_map(&cfg).unwrap();
        let cuts = BranchCuts::radial(&cfg);
        let (h0, dh0) = (c(0.4, 0.9), c(-1.2, 0.3));
        let zeta0 = m.moebius.apply_finite(C64::default()).unwrap();
        let init = m.from_standard(&cfg, C64::default(), (h0, dh0), &cuts).unwrap();
        let sol = taylor_solution(&cfg, C64::default(), init.0, init.1, 64).unwrap();
        for k in 0..6 {
            let z = C64::from_polar(0.4 * sol.conv_radius, 1.1 * k as f64);
            let zeta = m.moebius.apply_finite(z).unwrap();
            let (h, dh) = integrate_standard(&m.params, zeta0, (h0, dh0), zeta, &PathOptions::default()).unwrap();
            let (f, df) = m.from_standard(&cfg, z, (h, dh), &cuts).unwrap();
            let e = sol.evaluate(z, &Default::default()).unwrap();
            assert!((f - e.value).norm() < 1e-9 * e.value.norm(), "{k}");
            assert!((df - e.derivative).norm() < 1e-9 * e.derivative.norm().max(e.value.norm()));
        }
    }

    #[test]
    fn gamma_exponent_near_zero() {
        let p = standard_form_map(&generic()).unwrap().params;
        let rho = 1.0 - p.gamma;
        let opts = PathOptions { rtol: 1e-13, min_clearance: Some(1e-5) };
        let (z1, z2) = (c(2e-4, 1e-4), c(1e-4, 0.5e-4));
        let init = (z1.powc(rho), rho * z1.powc(rho - 1.0));
        let (h, dh) = integrate_standard(&p, z1, init, z2, &opts).unwrap();
        // leading behaviour ζ^{1-γ}(1 + O(ζ))
        assert!((h / z2.powc(rho) - 1.0).norm() < 1e-2);
        assert!((z2 * dh / h - rho).norm() < 1e-2);
        // the exponent-zero branch stays close to its initial value
        let (h, _) = integrate_standard(&p, z1, (c(1.0, 0.0), c(0.0, 0.0)), z2, &opts).unwrap();
        assert!((h - 1.0).norm() < 1e-2);
    }

    #[test]
    fn standard_integration_trivial_and_reversible() {
        let p = standard_form_map(&generic()).unwrap().params;
        let opts = PathOptions::default();
        let init = (c(1.0, 0.5), c(-0.2, 0.1));
        let s = p.a * 0.3 + c(0.2, 0.4);
        assert_eq!(integrate_standard(&p, s, init, s, &opts).unwrap(), init);
        let e = s + c(0.15, -0.1);
        let there = integrate_standard(&p, s, init, e, &opts).unwrap();
        let back = integrate_standard(&p, e, there, s, &opts).unwrap();
        assert!((back.0 - init.0).norm() < 1e-10 && (back.1 - init.1).norm() < 1e-10);
        assert!(matches!(
            integrate_standard(&p, c(-0.5, 0.0), init, c(0.5, 0.0), &opts),
            Err(Error::PathTooCloseToSingularity { index: 1, .. })
        ));
    }
}
