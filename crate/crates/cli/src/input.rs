//! Building a configuration from a JSON file or from unit-circle angles.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use heun_connect::geometry::AngleTriple;
use heun_connect::regions::z3_from_a;
use heun_connect::series::SymmetricHeunConfig;
use heun_connect::C64;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// JSON configuration `{"z": [[re, im] x4], "chi": [...], "lambda": [re, im]}`.
    #[arg(long, conflicts_with_all = ["phi", "a"])]
    pub config: Option<PathBuf>,
    /// Angles of z1 and z2 on the unit circle.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, requires = "a")]
    pub phi: Option<(f64, f64)>,
    /// Angle of z4 on the unit circle.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi4: f64,
    /// Cross-ratio value fixing z3, as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "phi")]
    pub a: Option<C64>,
    /// Real index angles χ1..χ4 for angle-built configurations.
    #[arg(long, value_parser = parse_chi, allow_hyphen_values = true, default_value = "0.3,0.9,1.3,0.2")]
    pub chi: [f64; 4],
    /// Eigenvalue λ for angle-built configurations, as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub lambda: C64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    z: [C64; 4],
    chi: [C64; 4],
    lambda: C64,
}

impl ConfigArgs {
    pub fn load(&self) -> Result<SymmetricHeunConfig, CliError> {
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            let raw: RawConfig =
                serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            return Ok(SymmetricHeunConfig::new(raw.z, raw.chi, raw.lambda)?);
        }
        let (Some((phi1, phi2)), Some(a)) = (self.phi, self.a) else {
            return Err(CliError::Parse("either --config or --phi with --a is required".into()));
        };
        let phis = AngleTriple::new(phi1, phi2, self.phi4);
        let z3 = z3_from_a(a, &phis)?;
        let z = [phis.point(1), phis.point(2), z3, phis.point(4)];
        let chi = self.chi.map(|c| C64::new(c, 0.0));
        Ok(SymmetricHeunConfig::new(z, chi, self.lambda)?)
    }
}

fn parse_reals(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    if parts.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", parts.len()));
    }
    if parts.iter().any(|v| !v.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(parts)
}

pub fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v = parse_reals(s, 2)?;
    Ok((v[0], v[1]))
}

pub fn parse_complex(s: &str) -> Result<C64, String> {
    let (re, im) = parse_pair(s)?;
    Ok(C64::new(re, im))
}

fn parse_chi(s: &str) -> Result<[f64; 4], String> {
    let v = parse_reals(s, 4)?;
    Ok([v[0], v[1], v[2], v[3]])
}

/// `n` or `n1xn2`.
pub fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let parse = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}"));
    match s.split_once('x') {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}

/// `re0,re1,im0,im1`.
pub fn parse_window(s: &str) -> Result<heun_connect::regions::AWindow, String> {
    let v = parse_reals(s, 4)?;
    Ok(heun_connect::regions::AWindow { re: (v[0], v[1]), im: (v[2], v[3]) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        assert_eq!(parse_complex("-1.5, 2").unwrap(), C64::new(-1.5, 2.0));
        assert!(parse_complex("1").is_err());
        assert!(parse_complex("1,nan").is_err());
        assert_eq!(parse_resolution("64").unwrap(), (64, 64));
        assert_eq!(parse_resolution("48x32").unwrap(), (48, 32));
        assert!(parse_resolution("4x").is_err());
        assert_eq!(parse_window("-1,1,-2,2").unwrap().im, (-2.0, 2.0));
    }
}
