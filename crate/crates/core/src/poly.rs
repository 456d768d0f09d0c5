//! Dense complex polynomials, coefficients stored lowest degree first.

use crate::C64;

pub(crate) fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn derivative(a: &[C64]) -> Vec<C64> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

pub(crate) fn add_scaled(acc: &mut Vec<C64>, a: &[C64], s: C64) {
    if acc.len() < a.len() {
        acc.resize(a.len(), C64::new(0.0, 0.0));
    }
    for (x, &y) in acc.iter_mut().zip(a) {
        *x += s * y;
    }
}

/// Product of the linear factors `(t + r)` for each root offset `r`.
///
/// A zero offset contributes an exact factor `t`, so recentering at a root
/// yields exactly vanishing low-order coefficients.
pub(crate) fn from_offsets(offsets: impl IntoIterator<Item = C64>) -> Vec<C64> {
    offsets
        .into_iter()
        .fold(vec![C64::new(1.0, 0.0)], |p, r| mul(&p, &[r, C64::new(1.0, 0.0)]))
}

#[cfg(test)]
pub(crate) fn eval(a: &[C64], x: C64) -> C64 {
    a.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
}
