//! Feasibility predicates for placing the singular points, and rasters of
//! the regions where they hold.
//!
//! Singular points `z1, z2, z4` sit on the unit circle at angles
//! `Φ1, Φ2, Φ4`; the fourth point `z3` is recovered from the cross-ratio `a`
//! through the inverse unit-circle map. Torus scans fix `Φ4 = 0`, which is
//! allowed because both conditions depend only on angle differences.

use std::collections::VecDeque;
use std::f64::consts::TAU;
use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::geometry::{unit_circle_maps, AngleTriple};
use crate::{Error, Execution, Result, C64};

/// Minimum separation between `z3` and the other singular points (and the
/// origin) for a cross-ratio value to be usable.
pub const Z3_DISTINCT_TOL: f64 = 1e-10;

pub const MIN_RESOLUTION: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    A,
    B,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::A => write!(f, "Condition A"),
            Condition::B => write!(f, "Condition B"),
        }
    }
}

/// All three chords between `z1, z2, z4` exceed one, so the origin lies in
/// each of their convergence discs as far as these three points are
/// concerned.
pub fn condition_a(phis: &AngleTriple) -> bool {
    phis.chord(1, 2) > 1.0 && phis.chord(2, 4) > 1.0 && phis.chord(4, 1) > 1.0
}

/// `z3 = e^{iΦ4} (a - ζ0) / (a - conj(ζ0))`.
pub fn z3_from_a(a: C64, phis: &AngleTriple) -> Result<C64> {
    let maps = unit_circle_maps(phis).map_err(|_| Error::DegenerateA)?;
    let z3 = maps.inverse.apply_finite(a).ok_or(Error::DegenerateA)?;
    if !z3.is_finite() || z3.norm() <= Z3_DISTINCT_TOL {
        return Err(Error::DegenerateA);
    }
    if phis.points().iter().any(|&p| (p - z3).norm() <= Z3_DISTINCT_TOL) {
        return Err(Error::DegenerateA);
    }
    Ok(z3)
}

/// `z3` is farther from each of `z1, z2, z4` than from the origin.
pub fn condition_b(phis: &AngleTriple, a: C64) -> Result<bool> {
    let z3 = z3_from_a(a, phis)?;
    Ok(condition_b_at(phis, z3))
}

fn condition_b_at(phis: &AngleTriple, z3: C64) -> bool {
    let r3 = z3.norm();
    phis.points().iter().all(|&p| (p - z3).norm() > r3)
}

/// Condition A for arbitrary positions of `z1, z2, z4`: each pairwise
/// distance exceeds the distances of both points from the origin. On the
/// unit circle this is the chord condition of [`condition_a`].
pub fn condition_a_points(z: &[C64; 4]) -> bool {
    [(0, 1), (1, 3), (3, 0)]
        .iter()
        .all(|&(k, l)| (z[k] - z[l]).norm() > z[k].norm().max(z[l].norm()))
}

/// Condition B for arbitrary positions: `z3` is farther from each of
/// `z1, z2, z4` than from the origin.
pub fn condition_b_points(z: &[C64; 4]) -> bool {
    let r3 = z[2].norm();
    [0, 1, 3].iter().all(|&k| (z[k] - z[2]).norm() > r3)
}

/// Cell label of a raster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum CellLabel {
    False = 0,
    True = 1,
    /// The cross-ratio could not be mapped to a valid `z3`.
    Degenerate = 2,
}

impl CellLabel {
    pub fn is_true(self) -> bool {
        self == CellLabel::True
    }

    fn rgb(self) -> [u8; 3] {
        match self {
            CellLabel::True => [0xE0, 0xF0, 0xFF],
            CellLabel::False => [0x20, 0x20, 0x28],
            CellLabel::Degenerate => [0x80, 0x80, 0x80],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanKind {
    ConditionA,
    ConditionAb { a: C64 },
    Dmn { phi_resolution: usize },
}

/// Rectangle of cross-ratio values `[re.0, re.1] × [im.0, im.1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AWindow {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Default for AWindow {
    fn default() -> Self {
        AWindow { re: (-6.0, 7.0), im: (-6.0, 6.0) }
    }
}

/// Labels on a regular grid of cell centers. Cell `(i1, i2)` is stored at
/// `i2 * n1 + i1`, with `i1` along axis 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRaster {
    pub kind: ScanKind,
    pub axis1_range: (f64, f64),
    pub axis2_range: (f64, f64),
    pub resolution: (usize, usize),
    pub cells: Vec<CellLabel>,
    /// Both axes are periodic (Φ-torus scans).
    pub periodic: bool,
}

impl RegionRaster {
    pub fn cell_center(&self, i1: usize, i2: usize) -> (f64, f64) {
        let (n1, n2) = self.resolution;
        (
            axis_point(self.axis1_range, n1, i1),
            axis_point(self.axis2_range, n2, i2),
        )
    }

    pub fn get(&self, i1: usize, i2: usize) -> CellLabel {
        self.cells[i2 * self.resolution.0 + i1]
    }

    /// Index of the cell containing `(x, y)`, if inside the raster.
    pub fn locate(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let idx = |(lo, hi): (f64, f64), n: usize, v: f64| {
            let f = (v - lo) / (hi - lo);
            (0.0..1.0).contains(&f).then(|| ((f * n as f64) as usize).min(n - 1))
        };
        Some((idx(self.axis1_range, self.resolution.0, x)?, idx(self.axis2_range, self.resolution.1, y)?))
    }

    pub fn count(&self, label: CellLabel) -> usize {
        self.cells.iter().filter(|&&c| c == label).count()
    }

    /// Number of connected components of true cells under 8-connectivity,
    /// wrapping around both axes for periodic rasters.
    pub fn true_components(&self) -> usize {
        let (n1, n2) = self.resolution;
        let mut seen = vec![false; self.cells.len()];
        let mut components = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.cells.len() {
            if seen[start] || !self.cells[start].is_true() {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(idx) = queue.pop_front() {
                let (i1, i2) = ((idx % n1) as isize, (idx / n1) as isize);
                for d2 in -1..=1isize {
                    for d1 in -1..=1isize {
                        if d1 == 0 && d2 == 0 {
                            continue;
                        }
                        let (mut j1, mut j2) = (i1 + d1, i2 + d2);
                        if self.periodic {
                            j1 = j1.rem_euclid(n1 as isize);
                            j2 = j2.rem_euclid(n2 as isize);
                        } else if j1 < 0 || j2 < 0 || j1 >= n1 as isize || j2 >= n2 as isize {
                            continue;
                        }
                        let nidx = j2 as usize * n1 + j1 as usize;
                        if !seen[nidx] && self.cells[nidx].is_true() {
                            seen[nidx] = true;
                            queue.push_back(nidx);
                        }
                    }
                }
            }
        }
        components
    }

    /// CSV with header `axis1,axis2,label`, one line per cell, axis 1 fastest.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "axis1,axis2,label")?;
        let (n1, n2) = self.resolution;
        for i2 in 0..n2 {
            for i1 in 0..n1 {
                let (x, y) = self.cell_center(i1, i2);
                writeln!(out, "{:.16e},{:.16e},{}", x, y, self.get(i1, i2) as u8)?;
            }
        }
        Ok(())
    }

    /// Binary PPM (P6), one pixel per cell; the first image row holds the
    /// smallest axis-2 values.
    pub fn write_ppm<W: Write>(&self, mut out: W) -> io::Result<()> {
        let (n1, n2) = self.resolution;
        write!(out, "P6\n{n1} {n2}\n255\n")?;
        let mut buf = Vec::with_capacity(3 * self.cells.len());
        for cell in &self.cells {
            buf.extend_from_slice(&cell.rgb());
        }
        out.write_all(&buf)
    }
}

fn axis_point((lo, hi): (f64, f64), n: usize, i: usize) -> f64 {
    lo + (hi - lo) * (i as f64 + 0.5) / n as f64
}

fn check_resolution(n: usize) -> Result<()> {
    if n < MIN_RESOLUTION {
        return Err(Error::InvalidParameter(format!(
            "resolution {n} below the minimum of {MIN_RESOLUTION}"
        )));
    }
    Ok(())
}

fn torus_scan<F>(kind: ScanKind, resolution: (usize, usize), exec: Execution, label: F) -> Result<RegionRaster>
where
    F: Fn(&AngleTriple) -> CellLabel + Sync + Send,
{
    check_resolution(resolution.0)?;
    check_resolution(resolution.1)?;
    let (n1, n2) = resolution;
    let cells = exec.map_indexed(n1 * n2, |idx| {
        let phis = AngleTriple::new(
            axis_point((0.0, TAU), n1, idx % n1),
            axis_point((0.0, TAU), n2, idx / n1),
            0.0,
        );
        label(&phis)
    });
    Ok(RegionRaster {
        kind,
        axis1_range: (0.0, TAU),
        axis2_range: (0.0, TAU),
        resolution,
        cells,
        periodic: true,
    })
}

fn bool_label(b: bool) -> CellLabel {
    if b {
        CellLabel::True
    } else {
        CellLabel::False
    }
}

/// Condition A over `(Φ1, Φ2) ∈ [0, 2π)²` with `Φ4 = 0`.
pub fn scan_condition_a(resolution: (usize, usize), exec: Execution) -> Result<RegionRaster> {
    torus_scan(ScanKind::ConditionA, resolution, exec, |phis| bool_label(condition_a(phis)))
}

/// Conditions A and B simultaneously, for a fixed cross-ratio `a`.
pub fn scan_condition_ab(a: C64, resolution: (usize, usize), exec: Execution) -> Result<RegionRaster> {
    torus_scan(ScanKind::ConditionAb { a }, resolution, exec, |phis| {
        if !condition_a(phis) {
            return CellLabel::False;
        }
        match condition_b(phis, a) {
            Ok(b) => bool_label(b),
            Err(_) => CellLabel::Degenerate,
        }
    })
}

/// Φ-grid frames satisfying Condition A, precomputed for repeated Dmn
/// membership queries.
#[derive(Debug, Clone)]
pub struct DmnGrid {
    frames: Vec<Frame>,
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    phis: AngleTriple,
    zeta0: C64,
    points: [C64; 3],
}

impl DmnGrid {
    /// Inner `phi_resolution × phi_resolution` grid of cell centers on the
    /// torus, `Φ4 = 0`.
    pub fn new(phi_resolution: usize) -> Result<Self> {
        check_resolution(phi_resolution)?;
        let n = phi_resolution;
        let frames = (0..n * n)
            .filter_map(|idx| {
                let phis = AngleTriple::new(axis_point((0.0, TAU), n, idx % n), axis_point((0.0, TAU), n, idx / n), 0.0);
                if !condition_a(&phis) {
                    return None;
                }
                let zeta0 = phis.zeta0().ok()?;
                Some(Frame { phis, zeta0, points: phis.points() })
            })
            .collect();
        Ok(DmnGrid { frames })
    }

    /// Number of grid frames satisfying Condition A.
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    fn frame_label(frame: &Frame, a: C64) -> CellLabel {
        // inlined z3_from_a using the cached frame
        let den = a - frame.zeta0.conj();
        if den.norm() <= 1e-14 * (1.0 + a.norm()) {
            return CellLabel::Degenerate;
        }
        let z3 = frame.points[2] * (a - frame.zeta0) / den;
        if !z3.is_finite()
            || z3.norm() <= Z3_DISTINCT_TOL
            || frame.points.iter().any(|&p| (p - z3).norm() <= Z3_DISTINCT_TOL)
        {
            return CellLabel::Degenerate;
        }
        bool_label(condition_b_at(&frame.phis, z3))
    }

    /// `True` when some grid frame satisfies Conditions A and B for `a`;
    /// `Degenerate` when `a` yields no valid `z3` on any frame.
    pub fn contains(&self, a: C64, exec: Execution) -> CellLabel {
        let found = exec.any(self.frames.len(), |i| Self::frame_label(&self.frames[i], a).is_true());
        if found {
            return CellLabel::True;
        }
        if self.frames.iter().all(|f| Self::frame_label(f, a) == CellLabel::Degenerate) {
            CellLabel::Degenerate
        } else {
            CellLabel::False
        }
    }

    /// A frame witnessing membership of `a`, if any.
    pub fn witness(&self, a: C64) -> Option<AngleTriple> {
        self.frames
            .iter()
            .find(|f| Self::frame_label(f, a).is_true())
            .map(|f| f.phis)
    }
}

/// Existential scan of the cross-ratio plane: a cell is true when some
/// inner-grid angle pair makes Conditions A and B hold for the cell's `a`.
/// The result is a lower bound on the true domain at the given inner
/// resolution.
pub fn scan_dmn(
    window: AWindow,
    a_resolution: (usize, usize),
    phi_resolution: usize,
    exec: Execution,
) -> Result<RegionRaster> {
    check_resolution(a_resolution.0)?;
    check_resolution(a_resolution.1)?;
    if !(window.re.0 < window.re.1 && window.im.0 < window.im.1) {
        return Err(Error::InvalidParameter("a-window ranges must be increasing".into()));
    }
    let grid = DmnGrid::new(phi_resolution)?;
    let (n1, n2) = a_resolution;
    let cells = exec.map_indexed(n1 * n2, |idx| {
        let a = C64::new(axis_point(window.re, n1, idx % n1), axis_point(window.im, n2, idx / n1));
        grid.contains(a, Execution::Sequential)
    });
    Ok(RegionRaster {
        kind: ScanKind::Dmn { phi_resolution },
        axis1_range: window.re,
        axis2_range: window.im,
        resolution: a_resolution,
        cells,
        periodic: false,
    })
}
