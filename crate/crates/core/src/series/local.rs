use std::borrow::Cow;
use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::config::{check_index, SymmetricHeunConfig};
use super::recurrence::{Recurrence, ScaledEquation};
use super::{DEGENERACY_TOL, SINGULAR_CENTER_TOL};
use crate::{Error, Result, C64};

pub const DEFAULT_N_TERMS: usize = 64;
pub const MAX_N_TERMS: usize = 4096;

/// Which indicial exponent a Frobenius solution starts with: `First` uses
/// `α_j`, `Second` uses `β_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SolutionKind {
    Taylor,
    Frobenius { index: usize, branch: Branch },
}

/// Direction (radians) of the cut of `(z - z_j)^ρ` for each singular point.
/// The cut is the ray `z_j + s e^{iθ_j}`, `s ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchCuts {
    pub directions: [f64; 4],
}

impl BranchCuts {
    /// Cuts pointing radially away from the origin, along `{z_j s : s ≥ 1}`.
    pub fn radial(cfg: &SymmetricHeunConfig) -> Self {
        let mut directions = [0.0; 4];
        for (d, z) in directions.iter_mut().zip(cfg.z()) {
            *d = z.arg();
        }
        BranchCuts { directions }
    }

    /// Cuts pointing radially away from `from`.
    pub fn away_from(cfg: &SymmetricHeunConfig, from: C64) -> Self {
        let mut directions = [0.0; 4];
        for (d, z) in directions.iter_mut().zip(cfg.z()) {
            *d = (z - from).arg();
        }
        BranchCuts { directions }
    }
}

/// A truncated local series solution
/// `F(z) = (z - center)^exponent Σ_n coefficients[n] ((z - center)/scale)^n`.
///
/// Coefficients are stored in the scaled variable so that they stay O(1)
/// up to the convergence radius; use [`LocalSolution::coefficient`] for the
/// plain Taylor coefficient of `(z - center)^n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalSolution {
    pub center: C64,
    pub exponent: C64,
    pub coefficients: Vec<C64>,
    pub scale: f64,
    pub conv_radius: f64,
    pub branch_cut_direction: f64,
    pub kind: SolutionKind,
    #[serde(skip)]
    recurrence: Option<Arc<Recurrence>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// Evaluation is allowed up to `safety_factor * conv_radius`.
    pub safety_factor: f64,
    /// Upper bound on the relative tail estimate.
    pub tolerance: f64,
    /// Series are extended by doubling up to this many terms when the tail
    /// is too large; `None` keeps the stored truncation.
    pub max_terms: Option<usize>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { safety_factor: 0.95, tolerance: 1e-14, max_terms: Some(MAX_N_TERMS) }
    }
}

impl EvalOptions {
    pub fn fixed_truncation(mut self) -> Self {
        self.max_terms = None;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: C64,
    pub derivative: C64,
    /// Relative size of the last retained terms.
    pub tail: f64,
    /// Number of terms used.
    pub terms: usize,
}

/// `t^ρ` on the branch whose cut is the ray of direction `cut` leaving the
/// origin; the argument of `t` is taken in `(cut - 2π, cut]` minus the cut.
pub(crate) fn branch_pow(t: C64, rho: C64, cut: f64) -> Result<C64> {
    if rho == C64::default() {
        return Ok(C64::new(1.0, 0.0));
    }
    if t == C64::default() {
        return Err(Error::OnBranchCut);
    }
    let rotated = t * C64::from_polar(1.0, PI - cut);
    if rotated.re < 0.0 && rotated.im.abs() <= 1e-14 * rotated.norm() {
        return Err(Error::OnBranchCut);
    }
    let arg = rotated.arg() + cut - PI;
    Ok((rho * C64::new(t.norm().ln(), arg)).exp())
}

impl LocalSolution {
    /// Plain Taylor coefficient `c_n` of `(z - center)^(n + exponent)`.
    pub fn coefficient(&self, n: usize) -> C64 {
        self.coefficients[n] / self.scale.powi(n as i32)
    }

    pub fn n_terms(&self) -> usize {
        self.coefficients.len()
    }

    /// True when the solution can regenerate more coefficients (it was built
    /// here rather than deserialized).
    pub fn extendable(&self) -> bool {
        self.recurrence.is_some()
    }

    /// Returns a copy truncated or extended to exactly `n_terms` coefficients.
    pub fn with_terms(&self, n_terms: usize) -> Result<Self> {
        let mut out = self.clone();
        if n_terms <= self.coefficients.len() {
            out.coefficients.truncate(n_terms.max(1));
        } else {
            let rec = self.recurrence.as_ref().ok_or(Error::NotConverged {
                tail: f64::INFINITY,
                terms: self.coefficients.len(),
            })?;
            rec.extend(&mut out.coefficients, n_terms);
        }
        Ok(out)
    }

    fn sum(coeffs: &[C64], u: C64) -> (C64, C64, f64) {
        let n = coeffs.len();
        let mut s = C64::default();
        let mut ds = C64::default();
        for &c in coeffs.iter().rev() {
            ds = ds * u + s;
            s = s * u + c;
        }
        if u == C64::default() || n < 3 {
            return (s, ds, if n < 3 && u != C64::default() { 1.0 } else { 0.0 });
        }
        // Tail relative to the sum of term moduli so that cancellation in a
        // solution passing near a zero does not register as divergence.
        let un = u.norm();
        let mut mag = 0.0;
        let mut dmag = 0.0;
        let mut pw = 1.0;
        let mut last = [0.0f64; 2];
        let mut dlast = [0.0f64; 2];
        for (k, c) in coeffs.iter().enumerate() {
            let term = c.norm() * pw;
            mag += term;
            dmag += k as f64 * term;
            if k + 2 >= n {
                last[k + 2 - n] = term;
                dlast[k + 2 - n] = k as f64 * term;
            }
            pw *= un;
        }
        let tail_v = if mag > 0.0 { last[0].max(last[1]) / mag } else { 0.0 };
        let tail_d = if dmag > 0.0 { dlast[0].max(dlast[1]) / dmag } else { 0.0 };
        (s, ds, tail_v.max(tail_d))
    }

    /// Value and derivative at `z`.
    pub fn evaluate(&self, z: C64, opts: &EvalOptions) -> Result<Evaluation> {
        let t = z - self.center;
        let limit = opts.safety_factor * self.conv_radius;
        if !(t.norm() <= limit) {
            return Err(Error::OutsideDisc { distance: t.norm(), limit });
        }
        let pref = branch_pow(t, self.exponent, self.branch_cut_direction)?;
        let u = t / self.scale;
        let mut coeffs: Cow<[C64]> = Cow::Borrowed(&self.coefficients);
        let (s, ds, tail) = loop {
            let (s, ds, tail) = Self::sum(&coeffs, u);
            if tail <= opts.tolerance {
                break (s, ds, tail);
            }
            match (opts.max_terms, &self.recurrence) {
                (Some(cap), Some(rec)) if coeffs.len() < cap => {
                    let target = (2 * coeffs.len()).min(cap);
                    let mut grown = coeffs.into_owned();
                    rec.extend(&mut grown, target);
                    coeffs = Cow::Owned(grown);
                }
                _ => return Err(Error::NotConverged { tail, terms: coeffs.len() }),
            }
        };
        let value = pref * s;
        let mut derivative = pref * ds / self.scale;
        if self.exponent != C64::default() {
            derivative += self.exponent * value / t;
        }
        Ok(Evaluation { value, derivative, tail, terms: coeffs.len() })
    }
}

/// Taylor solution about a regular point with `F(center) = init_value`,
/// `F'(center) = init_slope`.
pub fn taylor_solution(
    cfg: &SymmetricHeunConfig,
    center: C64,
    init_value: C64,
    init_slope: C64,
    n_terms: usize,
) -> Result<LocalSolution> {
    if cfg.z().iter().any(|&zj| (center - zj).norm() <= SINGULAR_CENTER_TOL) {
        return Err(Error::CenterIsSingular(center));
    }
    let derived = cfg.derived_params();
    let radius = cfg.convergence_radius(center, None);
    let eq = ScaledEquation::new(cfg, &derived, center, None, radius);
    let rec = Recurrence::new(&eq, C64::default(), false);
    let mut coefficients = vec![init_value, init_slope * radius];
    rec.extend(&mut coefficients, n_terms.max(2));
    coefficients.truncate(n_terms.max(1));
    Ok(LocalSolution {
        center,
        exponent: C64::default(),
        coefficients,
        scale: radius,
        conv_radius: radius,
        branch_cut_direction: 0.0,
        kind: SolutionKind::Taylor,
        recurrence: Some(Arc::new(rec)),
    })
}

/// Frobenius solution `(z - z_j)^ρ (1 + Σ c_n (z - z_j)^n)` with `ρ = α_j`
/// for [`Branch::First`] and `ρ = β_j` for [`Branch::Second`].
pub fn frobenius_solution(
    cfg: &SymmetricHeunConfig,
    j: usize,
    branch: Branch,
    n_terms: usize,
    cuts: &BranchCuts,
) -> Result<LocalSolution> {
    check_index(j)?;
    let derived = cfg.derived_params();
    let (alpha, beta) = (derived.alpha[j - 1], derived.beta[j - 1]);
    let diff = alpha - beta;
    if (diff - C64::new(diff.re.round(), 0.0)).norm() <= DEGENERACY_TOL {
        return Err(Error::DegenerateExponents { index: j });
    }
    let exponent = match branch {
        Branch::First => alpha,
        Branch::Second => beta,
    };
    let center = cfg.z()[j - 1];
    let radius = cfg.convergence_radius(center, Some(j));
    let eq = ScaledEquation::new(cfg, &derived, center, Some(j - 1), radius);
    let rec = Recurrence::new(&eq, exponent, true);
    let mut coefficients = vec![C64::new(1.0, 0.0)];
    rec.extend(&mut coefficients, n_terms.max(1));
    Ok(LocalSolution {
        center,
        exponent,
        coefficients,
        scale: radius,
        conv_radius: radius,
        branch_cut_direction: cuts.directions[j - 1],
        kind: SolutionKind::Frobenius { index: j, branch },
        recurrence: Some(Arc::new(rec)),
    })
}

/// `F1 F2' - F1' F2` at `z`.
pub fn wronskian(sol1: &LocalSolution, sol2: &LocalSolution, z: C64, opts: &EvalOptions) -> Result<C64> {
    let a = sol1.evaluate(z, opts)?;
    let b = sol2.evaluate(z, opts)?;
    Ok(a.value * b.derivative - a.derivative * b.value)
}
