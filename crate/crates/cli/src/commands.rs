use std::fs;
use std::io::BufWriter;
use std::path::Path;

use heun_connect::connection::{
    connection_matrix, multi_center_atlas, overlap_point, reconstruction_residual, single_point_atlas, Atlas,
    ConnectOptions, ConnectionMatrix,
};
use heun_connect::geometry::cross_ratio;
use heun_connect::regions::{
    condition_a_points, condition_b_points, scan_condition_a, scan_condition_ab, scan_dmn, CellLabel, RegionRaster,
};
use heun_connect::series::{DerivedParams, SymmetricHeunConfig, DEFAULT_N_TERMS};
use heun_connect::standard::{standard_form_map, StandardFormMap};
use heun_connect::{Error, Execution, C64};
use serde::{Deserialize, Serialize};

use crate::output::{emit, to_json};
use crate::{CliError, RasterOut, ScanCommand};

pub fn connect_options(n_terms: Option<usize>) -> ConnectOptions {
    match n_terms {
        Some(n) => {
            let base = ConnectOptions::default();
            ConnectOptions { n_terms: n, eval: base.eval.fixed_truncation(), ..base }
        }
        None => ConnectOptions { n_terms: DEFAULT_N_TERMS, ..ConnectOptions::default() },
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ParamsReport {
    pub config: SymmetricHeunConfig,
    pub derived: DerivedReport,
    /// Exponent pairs `(α_j, β_j)`.
    pub exponents: [(C64, C64); 4],
    pub cross_ratio: C64,
    pub standard: StandardFormMap,
    pub fuchs_defect: C64,
    pub condition_a: bool,
    pub condition_b: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DerivedReport {
    pub alpha: [C64; 4],
    pub beta: [C64; 4],
    pub q: [C64; 4],
}

impl From<DerivedParams> for DerivedReport {
    fn from(d: DerivedParams) -> Self {
        DerivedReport { alpha: d.alpha, beta: d.beta, q: d.q }
    }
}

pub fn params(cfg: &SymmetricHeunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let z = cfg.z();
    let d = cfg.derived_params();
    let standard = standard_form_map(cfg)?;
    let report = ParamsReport {
        config: cfg.clone(),
        derived: d.into(),
        exponents: std::array::from_fn(|j| (d.alpha[j], d.beta[j])),
        cross_ratio: cross_ratio(z[0], z[1], z[2], z[3])?,
        fuchs_defect: standard.params.fuchs_defect(),
        standard,
        condition_a: condition_a_points(z),
        condition_b: condition_b_points(z),
    };
    Ok(emit(&report, out)?)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConnectReport {
    pub config: SymmetricHeunConfig,
    pub k: usize,
    pub l: usize,
    pub matrix: ConnectionMatrix,
    pub determinant: C64,
    pub reconstruction_residual: f64,
}

pub fn connect(
    cfg: &SymmetricHeunConfig,
    k: usize,
    l: usize,
    at: Option<C64>,
    n_terms: Option<usize>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let opts = connect_options(n_terms);
    let at = match at {
        Some(p) => p,
        None if k == l => cfg.z()[k - 1] * 0.5,
        None => overlap_point(cfg, k, l, &opts).ok_or(Error::PointOutsideDisc { index: l })?,
    };
    let matrix = connection_matrix(cfg, k, l, at, &opts)?;
    let residual = if k == l { 0.0 } else { reconstruction_residual(cfg, &matrix, None, &opts)? };
    let report = ConnectReport {
        config: cfg.clone(),
        k,
        l,
        determinant: matrix.determinant(),
        matrix,
        reconstruction_residual: residual,
    };
    Ok(emit(&report, out)?)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AtlasReport {
    pub config: SymmetricHeunConfig,
    /// Why single-point mode was not used, when it was not.
    pub fallback: Option<String>,
    pub atlas: Atlas,
}

/// Single-point mode under Conditions A and B, multi-center mode otherwise.
pub fn build_atlas(cfg: &SymmetricHeunConfig, opts: &ConnectOptions) -> Result<(Atlas, Option<String>), Error> {
    if !condition_a_points(cfg.z()) {
        return Err(Error::ConditionViolated(heun_connect::regions::Condition::A));
    }
    let reason = if condition_b_points(cfg.z()) {
        match single_point_atlas(cfg, opts) {
            Ok(atlas) => return Ok((atlas, None)),
            Err(e @ Error::PointOutsideDisc { .. }) => format!("single-point mode unavailable: {e}"),
            Err(e) => return Err(e),
        }
    } else {
        "Condition B does not hold".to_string()
    };
    Ok((multi_center_atlas(cfg, opts)?, Some(reason)))
}

pub fn atlas(cfg: &SymmetricHeunConfig, n_terms: Option<usize>, dir: Option<&Path>, out: Option<&Path>) -> Result<(), CliError> {
    let (atlas, fallback) = build_atlas(cfg, &connect_options(n_terms))?;
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
        for (i, m) in atlas.base.iter().enumerate() {
            fs::write(dir.join(format!("base_{}.json", i + 1)), to_json(m))?;
        }
        for e in &atlas.pairwise {
            fs::write(dir.join(format!("pair_{}_{}.json", e.k, e.l)), to_json(e))?;
        }
    }
    let report = AtlasReport { config: cfg.clone(), fallback, atlas };
    if let Some(dir) = dir {
        fs::write(dir.join("summary.json"), to_json(&report))?;
    }
    Ok(emit(&report, out)?)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub kind: heun_connect::regions::ScanKind,
    pub resolution: (usize, usize),
    pub axis1_range: (f64, f64),
    pub axis2_range: (f64, f64),
    pub true_cells: usize,
    pub false_cells: usize,
    pub degenerate_cells: usize,
    pub true_components: usize,
}

pub fn scan(cmd: ScanCommand, exec: Execution) -> Result<(), CliError> {
    let (raster, target): (RegionRaster, RasterOut) = match cmd {
        ScanCommand::A { raster } => (scan_condition_a(raster.resolution, exec)?, raster),
        ScanCommand::Ab { a, raster } => (scan_condition_ab(a, raster.resolution, exec)?, raster),
        ScanCommand::Dmn { phi_resolution, window, raster } => {
            (scan_dmn(window, raster.resolution, phi_resolution, exec)?, raster)
        }
    };
    if let Some(p) = &target.csv {
        raster.write_csv(BufWriter::new(fs::File::create(p)?))?;
    }
    if let Some(p) = &target.ppm {
        raster.write_ppm(BufWriter::new(fs::File::create(p)?))?;
    }
    let report = ScanReport {
        kind: raster.kind,
        resolution: raster.resolution,
        axis1_range: raster.axis1_range,
        axis2_range: raster.axis2_range,
        true_cells: raster.count(CellLabel::True),
        false_cells: raster.count(CellLabel::False),
        degenerate_cells: raster.count(CellLabel::Degenerate),
        true_components: raster.true_components(),
    };
    Ok(emit(&report, target.out.as_deref())?)
}
