//! Adaptive Bulirsch–Stoer integration of second-order linear ODEs along
//! straight segments of the complex plane. Used as an oracle independent of
//! the series machinery.

use super::config::SymmetricHeunConfig;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOptions {
    /// Relative local error target per step.
    pub rtol: f64,
    /// Minimum distance between the segment and every singular point.
    /// `None` means 5% of the smallest singular-point separation.
    pub min_clearance: Option<f64>,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions { rtol: 1e-12, min_clearance: None }
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub(crate) fn segment_distance(a: C64, b: C64, p: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * s - p).norm()
}

pub(crate) fn check_clearance(start: C64, end: C64, singular: &[C64], clearance: f64) -> Result<()> {
    for (i, &zs) in singular.iter().enumerate() {
        let distance = segment_distance(start, end, zs);
        if distance < clearance {
            return Err(Error::PathTooCloseToSingularity { index: i + 1, distance, clearance });
        }
    }
    Ok(())
}

type State = [C64; 2];

fn norm(y: &State) -> f64 {
    (y[0].norm_sqr() + y[1].norm_sqr()).sqrt()
}

fn axpy(y: &State, h: C64, f: &State) -> State {
    [y[0] + h * f[0], y[1] + h * f[1]]
}

/// Integrates `y' = f(z, y)` along the straight segment from `start` to
/// `end`, where `y = (w, w')` of a second order equation.
pub fn integrate_segment<F>(f: F, start: C64, y0: State, end: C64, rtol: f64) -> Result<State>
where
    F: Fn(C64, &State) -> State,
{
    const SEQ: [usize; 9] = [2, 4, 6, 8, 10, 12, 14, 16, 18];
    let dz = end - start;
    if dz == C64::default() {
        return Ok(y0);
    }
    let mut y = y0;
    let mut s = 0.0f64;
    let mut h = 0.125f64;
    let mut table: Vec<Vec<State>> = Vec::with_capacity(SEQ.len());
    while s < 1.0 {
        h = h.min(1.0 - s);
        if h < 1e-13 {
            return Err(Error::StepUnderflow);
        }
        table.clear();
        let mut accepted = None;
        for (k, &n) in SEQ.iter().enumerate() {
            // modified midpoint with n substeps
            let sub = dz * (h / n as f64);
            let z_at = |m: usize| start + dz * (s + h * m as f64 / n as f64);
            let mut prev = y;
            let mut cur = axpy(&y, sub, &f(z_at(0), &y));
            for m in 1..n {
                let next = axpy(&prev, sub * 2.0, &f(z_at(m), &cur));
                prev = cur;
                cur = next;
            }
            let tail = f(z_at(n), &cur);
            let mid = [
                (cur[0] + prev[0] + sub * tail[0]) * 0.5,
                (cur[1] + prev[1] + sub * tail[1]) * 0.5,
            ];
            let mut row = vec![mid];
            for j in 1..=k {
                let ratio = (n as f64 / SEQ[k - j] as f64).powi(2) - 1.0;
                let a = row[j - 1];
                let b = table[k - 1][j - 1];
                row.push([a[0] + (a[0] - b[0]) / ratio, a[1] + (a[1] - b[1]) / ratio]);
            }
            if k >= 2 {
                let best = row[k];
                let diff = [best[0] - row[k - 1][0], best[1] - row[k - 1][1]];
                let scale = rtol * norm(&best).max(norm(&y)) + f64::MIN_POSITIVE;
                let err = norm(&diff) / scale;
                if err <= 1.0 {
                    accepted = Some((best, k, err));
                    break;
                }
            }
            table.push(row);
        }
        match accepted {
            Some((best, k, err)) => {
                y = best;
                s += h;
                let order = (2 * k + 1) as f64;
                let mut fac = if err > 0.0 { 0.9 * err.powf(-1.0 / order) } else { 4.0 };
                fac = fac.clamp(0.25, 4.0);
                if k >= 6 {
                    fac = fac.min(1.0);
                }
                h *= fac;
            }
            None => h *= 0.25,
        }
    }
    Ok(y)
}

/// Integrates the symmetric equation from `start` with `(F, F')` = `init`
/// to `end` along a straight segment.
pub fn integrate_path(
    cfg: &SymmetricHeunConfig,
    start: C64,
    init: (C64, C64),
    end: C64,
    opts: &PathOptions,
) -> Result<(C64, C64)> {
    let clearance = opts.min_clearance.unwrap_or(0.05 * cfg.min_separation());
    check_clearance(start, end, cfg.z(), clearance)?;
    let derived = cfg.derived_params();
    let rhs = |z: C64, y: &State| {
        let (p, r) = cfg.ode_coefficients(z, &derived);
        [y[1], -p * y[1] - r * y[0]]
    };
    let [v, d] = integrate_segment(rhs, start, [init.0, init.1], end, opts.rtol)?;
    Ok((v, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn exponential_along_complex_segment() {
        // w'' = -w, w = cos z
        let rhs = |_z: C64, y: &State| [y[1], -y[0]];
        let end = c(1.3, -0.8);
        let [w, dw] = integrate_segment(rhs, c(0.0, 0.0), [c(1.0, 0.0), c(0.0, 0.0)], end, 1e-13).unwrap();
        assert!((w - end.cos()).norm() < 1e-12);
        assert!((dw + end.sin()).norm() < 1e-12);
    }

    #[test]
    fn trivial_and_reversible() {
        let cfg = SymmetricHeunConfig::new(
            [c(1.1, 0.2), c(-0.3, 1.0), c(-1.2, -0.4), c(0.2, -1.3)],
            [c(0.3, 0.0), c(0.7, 0.1), c(1.2, 0.0), c(0.1, -0.2)],
            c(1.3, -0.7),
        )
        .unwrap();
        let init = (c(0.4, 0.1), c(-1.0, 0.3));
        let opts = PathOptions::default();
        assert_eq!(integrate_path(&cfg, c(0.1, 0.1), init, c(0.1, 0.1), &opts).unwrap(), init);
        let z = c(0.5, 0.35);
        let there = integrate_path(&cfg, c(0.0, 0.0), init, z, &opts).unwrap();
        let back = integrate_path(&cfg, z, there, c(0.0, 0.0), &opts).unwrap();
        assert!((back.0 - init.0).norm() < 1e-10 && (back.1 - init.1).norm() < 1e-10);
    }

    #[test]
    fn clearance_enforced() {
        let cfg = SymmetricHeunConfig::new(
            [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)],
            [c(0.3, 0.0); 4],
            c(0.0, 0.0),
        )
        .unwrap();
        let err = integrate_path(&cfg, c(0.0, 0.0), (c(1.0, 0.0), c(0.0, 0.0)), c(2.0, 0.0), &PathOptions::default());
        assert!(matches!(err, Err(Error::PathTooCloseToSingularity { index: 1, .. })));
    }
}
