use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Singular points, index angles and eigenvalue of the symmetric equation.
///
/// Serialized as `{"z": [[re, im] x4], "chi": [[re, im] x4], "lambda": [re, im]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig")]
pub struct SymmetricHeunConfig {
    z: [C64; 4],
    chi: [C64; 4],
    lambda: C64,
}

#[derive(Deserialize)]
struct RawConfig {
    z: [C64; 4],
    chi: [C64; 4],
    lambda: C64,
}

impl TryFrom<RawConfig> for SymmetricHeunConfig {
    type Error = Error;

    fn try_from(raw: RawConfig) -> Result<Self> {
        SymmetricHeunConfig::new(raw.z, raw.chi, raw.lambda)
    }
}

/// `α_j`, `β_j` and `q_j` for each singular point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    pub alpha: [C64; 4],
    pub beta: [C64; 4],
    pub q: [C64; 4],
}

impl SymmetricHeunConfig {
    pub fn new(z: [C64; 4], chi: [C64; 4], lambda: C64) -> Result<Self> {
        if !z.iter().chain(&chi).chain([&lambda]).all(|v| v.is_finite()) {
            return Err(Error::DegenerateConfig("non-finite input".into()));
        }
        if z.iter().any(|&v| v.norm() == 0.0) {
            return Err(Error::DegenerateConfig("singular points must be nonzero".into()));
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if (z[i] - z[j]).norm() <= 1e-12 * (1.0 + z[i].norm()) {
                    return Err(Error::DegenerateConfig(format!(
                        "z_{} and z_{} coincide",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(SymmetricHeunConfig { z, chi, lambda })
    }

    pub fn z(&self) -> &[C64; 4] {
        &self.z
    }

    pub fn chi(&self) -> &[C64; 4] {
        &self.chi
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    /// Singular point by 1-based index.
    pub fn point(&self, j: usize) -> Result<C64> {
        check_index(j)?;
        Ok(self.z[j - 1])
    }

    /// `P'(z_j) = Π_{i≠j} (z_j - z_i)`, `j` zero-based.
    pub(crate) fn p_prime_at(&self, j: usize) -> C64 {
        (0..4).filter(|&i| i != j).map(|i| self.z[j] - self.z[i]).product()
    }

    /// `α_j = cos²(χ_j)/2` and `β_j = 1/2 - α_j` (equal to `sin²(χ_j)/2`,
    /// written so that `α_j + β_j` rounds to exactly one half for real `χ_j`).
    pub fn derived_params(&self) -> DerivedParams {
        let mut out = DerivedParams { alpha: [C64::default(); 4], beta: [C64::default(); 4], q: [C64::default(); 4] };
        for j in 0..4 {
            let c = self.chi[j].cos();
            let alpha = c * c * 0.5;
            let beta = C64::new(0.5, 0.0) - alpha;
            out.alpha[j] = alpha;
            out.beta[j] = beta;
            out.q[j] = alpha * beta * self.p_prime_at(j);
        }
        out
    }

    /// The two indicial exponents `(α_j, β_j)` at `z_j` (1-based).
    pub fn indicial_exponents(&self, j: usize) -> Result<(C64, C64)> {
        check_index(j)?;
        let d = self.derived_params();
        Ok((d.alpha[j - 1], d.beta[j - 1]))
    }

    /// Smallest pairwise distance between singular points.
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..4 {
            for j in i + 1..4 {
                best = best.min((self.z[i] - self.z[j]).norm());
            }
        }
        best
    }

    /// Radius of convergence of a local solution centered at `center`:
    /// the distance to the nearest singular point other than `skip`.
    pub fn convergence_radius(&self, center: C64, skip: Option<usize>) -> f64 {
        (0..4)
            .filter(|&i| Some(i + 1) != skip)
            .map(|i| (center - self.z[i]).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// `p(z) = (1/2) Σ 1/(z - z_j)` and `r(z) = (λ + Σ q_j/(z - z_j)) / P(z)`
    /// of `F'' + p F' + r F = 0`.
    pub fn ode_coefficients(&self, z: C64, derived: &DerivedParams) -> (C64, C64) {
        let mut p = C64::default();
        let mut pot = self.lambda;
        let mut prod = C64::new(1.0, 0.0);
        for j in 0..4 {
            let d = z - self.z[j];
            p += 0.5 / d;
            pot += derived.q[j] / d;
            prod *= d;
        }
        (p, pot / prod)
    }
}

pub(crate) fn check_index(j: usize) -> Result<()> {
    if (1..=4).contains(&j) {
        Ok(())
    } else {
        Err(Error::InvalidIndex(j))
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn square() -> [C64; 4] {
        [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]
    }

    #[test]
    fn zero_angles_give_trivial_potential() {
        let cfg = SymmetricHeunConfig::new(square(), [c(0.0, 0.0); 4], c(0.0, 0.0)).unwrap();
        let d = cfg.derived_params();
        for j in 0..4 {
            assert_eq!(d.alpha[j], c(0.5, 0.0));
            assert_eq!(d.beta[j], c(0.0, 0.0));
            assert_eq!(d.q[j], c(0.0, 0.0));
        }
    }

    #[test]
    fn quarter_angles_on_square() {
        // P(z) = z^4 - 1, P'(z_j) = 4 z_j^3, α_j β_j = 1/16
        let cfg = SymmetricHeunConfig::new(square(), [c(PI / 4.0, 0.0); 4], c(1.0, 0.0)).unwrap();
        let d = cfg.derived_params();
        for j in 0..4 {
            let zj = cfg.z()[j];
            let expected = zj * zj * zj / 4.0;
            assert!((d.q[j] - expected).norm() < 1e-15, "{j}: {} vs {}", d.q[j], expected);
        }
    }

    #[test]
    fn exponents() {
        let chi = [c(0.0, 0.0), c(PI / 2.0, 0.0), c(0.3, 0.0), c(1.1, 0.2)];
        let cfg = SymmetricHeunConfig::new(square(), chi, c(0.5, 0.0)).unwrap();
        assert_eq!(cfg.indicial_exponents(1).unwrap(), (c(0.5, 0.0), c(0.0, 0.0)));
        let (a, b) = cfg.indicial_exponents(2).unwrap();
        assert!(a.norm() < 1e-16 && (b - 0.5).norm() < 1e-16);
        let total: C64 = (1..=4)
            .map(|j| {
                let (a, b) = cfg.indicial_exponents(j).unwrap();
                a + b
            })
            .sum();
        assert_eq!(total.re, 2.0);
        assert_eq!(cfg.indicial_exponents(5), Err(Error::InvalidIndex(5)));
    }

    #[test]
    fn rejects_bad_points() {
        let chi = [c(0.1, 0.0); 4];
        let mut z = square();
        z[2] = c(0.0, 0.0);
        assert!(SymmetricHeunConfig::new(z, chi, c(0.0, 0.0)).is_err());
        let mut z = square();
        z[2] = z[1];
        assert!(SymmetricHeunConfig::new(z, chi, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn json_schema() {
        let json = r#"{"z": [[1,0],[0,1],[-1,0],[0,-1]], "chi": [[0.1,0],[0.2,0],[0.3,0],[0.4,0]], "lambda": [1.5, -0.5]}"#;
        let cfg: SymmetricHeunConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.lambda(), c(1.5, -0.5));
        let back: SymmetricHeunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        let bad = r#"{"z": [[0,0],[0,1],[-1,0],[0,-1]], "chi": [[0.1,0],[0.2,0],[0.3,0],[0.4,0]], "lambda": [1.5, -0.5]}"#;
        assert!(serde_json::from_str::<SymmetricHeunConfig>(bad).is_err());
    }
}
