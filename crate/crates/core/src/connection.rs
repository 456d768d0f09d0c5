//! Fundamental pairs and the connection matrices between them.
//!
//! A [`ConnectionMatrix`] `C` from basis `source` to basis `target`
//! satisfies `F(z; source) = C F(z; target)` where `F` is the column vector
//! of the two solutions of a pair. Frobenius pairs are normalised by
//! `c_0 = 1`, so matrices are defined relative to that normalisation.
//!
//! Every matrix carries the branch-cut directions it was computed with;
//! products of matrices with different cut conventions are rejected.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::geometry::circumcircle;
use crate::regions::{condition_a_points, condition_b_points, Condition};
use crate::series::{
    frobenius_solution, taylor_solution, Branch, BranchCuts, EvalOptions, LocalSolution, SymmetricHeunConfig,
    DEFAULT_N_TERMS,
};
use crate::{Error, Execution, Result, C64};

/// Evaluation points must lie inside each disc with this relative margin.
pub const DISC_MARGIN: f64 = 0.02;

/// Relative size of the target-pair Wronskian below which a connection is
/// refused.
pub const SINGULAR_DENOMINATOR_TOL: f64 = 1e-12;

type Mat = [[C64; 2]; 2];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const IDENTITY: Mat = [[ONE, ZERO], [ZERO, ONE]];

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn mat_det(a: &Mat) -> C64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn mat_inv(a: &Mat) -> Mat {
    let d = mat_det(a);
    [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
}

/// Frobenius norm of `a - b`.
pub fn frobenius_distance(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn frobenius_norm(a: &Mat) -> f64 {
    frobenius_distance(a, &[[ZERO; 2]; 2])
}

/// Which fundamental pair a matrix row or column refers to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Basis {
    /// Taylor pair with initial data `(1, 0)` and `(0, 1)` at `at`.
    Canonical { at: C64 },
    /// Frobenius pair at `z_index` (first and second exponent).
    Frobenius { index: usize },
}

impl Basis {
    fn disc_index(&self) -> usize {
        match *self {
            Basis::Canonical { .. } => 0,
            Basis::Frobenius { index } => index,
        }
    }
}

/// Branch-cut directions shared by all matrices of one computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Convention {
    pub cut_directions: [f64; 4],
    /// Bit pattern of the directions; equal fingerprints mean equal cuts.
    pub fingerprint: String,
}

impl Convention {
    pub fn new(cuts: &BranchCuts) -> Self {
        let fingerprint = cuts
            .directions
            .iter()
            .map(|d| format!("{:016x}", d.to_bits()))
            .collect::<Vec<_>>()
            .join("-");
        Convention { cut_directions: cuts.directions, fingerprint }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectOptions {
    pub n_terms: usize,
    pub eval: EvalOptions,
    /// `None` selects cuts running radially away from the origin.
    pub cuts: Option<BranchCuts>,
}

impl Default for ConnectOptions {
    fn default() -> Self {
        ConnectOptions { n_terms: DEFAULT_N_TERMS, eval: EvalOptions::default(), cuts: None }
    }
}

impl ConnectOptions {
    pub fn cuts(&self, cfg: &SymmetricHeunConfig) -> BranchCuts {
        self.cuts.unwrap_or_else(|| BranchCuts::radial(cfg))
    }
}

/// Two local solutions sharing a center.
#[derive(Debug, Clone)]
pub struct FundamentalPair {
    pub basis: Basis,
    pub sol1: LocalSolution,
    pub sol2: LocalSolution,
}

impl FundamentalPair {
    pub fn center(&self) -> C64 {
        self.sol1.center
    }

    pub fn conv_radius(&self) -> f64 {
        self.sol1.conv_radius
    }

    /// Radius inside which evaluation points for connection matrices are
    /// accepted.
    pub fn admissible_radius(&self, opts: &EvalOptions) -> f64 {
        opts.safety_factor.min(1.0 - DISC_MARGIN) * self.conv_radius()
    }

    pub fn contains(&self, z: C64, opts: &EvalOptions) -> bool {
        (z - self.center()).norm() < self.admissible_radius(opts)
    }

    fn check_inside(&self, z: C64, opts: &EvalOptions) -> Result<()> {
        if self.contains(z, opts) {
            Ok(())
        } else {
            Err(Error::PointOutsideDisc { index: self.basis.disc_index() })
        }
    }

    /// `[[F1, F1'], [F2, F2']]` at `z`.
    pub fn rows(&self, z: C64, opts: &EvalOptions) -> Result<Mat> {
        let a = self.sol1.evaluate(z, opts)?;
        let b = self.sol2.evaluate(z, opts)?;
        Ok([[a.value, a.derivative], [b.value, b.derivative]])
    }

    pub fn values(&self, z: C64, opts: &EvalOptions) -> Result<[C64; 2]> {
        Ok([self.sol1.evaluate(z, opts)?.value, self.sol2.evaluate(z, opts)?.value])
    }

    pub fn wronskian(&self, z: C64, opts: &EvalOptions) -> Result<C64> {
        Ok(mat_det(&self.rows(z, opts)?))
    }
}

/// Taylor pair at the regular point `at` with unit Wronskian there.
pub fn canonical_pair(cfg: &SymmetricHeunConfig, at: C64, n_terms: usize) -> Result<FundamentalPair> {
    Ok(FundamentalPair {
        basis: Basis::Canonical { at },
        sol1: taylor_solution(cfg, at, ONE, ZERO, n_terms)?,
        sol2: taylor_solution(cfg, at, ZERO, ONE, n_terms)?,
    })
}

/// Frobenius pair at `z_k`, exponents `(α_k, β_k)`.
pub fn frobenius_pair(cfg: &SymmetricHeunConfig, k: usize, n_terms: usize, cuts: &BranchCuts) -> Result<FundamentalPair> {
    Ok(FundamentalPair {
        basis: Basis::Frobenius { index: k },
        sol1: frobenius_solution(cfg, k, Branch::First, n_terms, cuts)?,
        sol2: frobenius_solution(cfg, k, Branch::Second, n_terms, cuts)?,
    })
}

fn pair_for(cfg: &SymmetricHeunConfig, basis: Basis, opts: &ConnectOptions) -> Result<FundamentalPair> {
    match basis {
        Basis::Canonical { at } => canonical_pair(cfg, at, opts.n_terms),
        Basis::Frobenius { index } => frobenius_pair(cfg, index, opts.n_terms, &opts.cuts(cfg)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionMatrix {
    /// Row-major entries.
    pub entries: Mat,
    pub source: Basis,
    pub target: Basis,
    /// Point at which the pairs were matched.
    pub eval_point: C64,
    /// Matching points of every factor, in product order.
    pub provenance: Vec<C64>,
    pub convention: Convention,
    /// Relative difference between the closed-form entries and the product
    /// `C(source, at) C(target, at)^{-1}`, when both were computed.
    pub dual_path_discrepancy: Option<f64>,
}

impl ConnectionMatrix {
    pub fn identity(basis: Basis, at: C64, convention: Convention) -> Self {
        ConnectionMatrix {
            entries: IDENTITY,
            source: basis,
            target: basis,
            eval_point: at,
            provenance: vec![at],
            convention,
            dual_path_discrepancy: Some(0.0),
        }
    }

    pub fn determinant(&self) -> C64 {
        mat_det(&self.entries)
    }

    /// Matrix from `target` back to `source`.
    pub fn inverse(&self) -> Self {
        ConnectionMatrix {
            entries: mat_inv(&self.entries),
            source: self.target,
            target: self.source,
            eval_point: self.eval_point,
            provenance: self.provenance.iter().rev().copied().collect(),
            convention: self.convention.clone(),
            dual_path_discrepancy: self.dual_path_discrepancy,
        }
    }

    /// `self · next`, connecting `self.source` to `next.target`.
    pub fn compose(&self, next: &ConnectionMatrix) -> Result<Self> {
        if self.convention.fingerprint != next.convention.fingerprint {
            return Err(Error::ConventionMismatch);
        }
        if self.target != next.source {
            return Err(Error::BasisMismatch);
        }
        let mut provenance = self.provenance.clone();
        provenance.extend(&next.provenance);
        Ok(ConnectionMatrix {
            entries: mat_mul(&self.entries, &next.entries),
            source: self.source,
            target: next.target,
            eval_point: self.eval_point,
            provenance,
            convention: self.convention.clone(),
            dual_path_discrepancy: None,
        })
    }

    /// `C v` for a vector of target-basis values.
    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let e = &self.entries;
        [e[0][0] * v[0] + e[0][1] * v[1], e[1][0] * v[0] + e[1][1] * v[1]]
    }
}

/// `Ĉ(z_k, at)`: rows `[F_i(at; z_k), F_i'(at; z_k)]`, expressing the
/// Frobenius pair at `z_k` in the canonical pair at `at`.
pub fn connect_to_point(cfg: &SymmetricHeunConfig, k: usize, at: C64, opts: &ConnectOptions) -> Result<ConnectionMatrix> {
    let cuts = opts.cuts(cfg);
    let pk = frobenius_pair(cfg, k, opts.n_terms, &cuts)?;
    canonical_pair(cfg, at, opts.n_terms)?;
    pk.check_inside(at, &opts.eval)?;
    Ok(ConnectionMatrix {
        entries: pk.rows(at, &opts.eval)?,
        source: pk.basis,
        target: Basis::Canonical { at },
        eval_point: at,
        provenance: vec![at],
        convention: Convention::new(&cuts),
        dual_path_discrepancy: None,
    })
}

fn connection_between(
    pk: &FundamentalPair,
    pl: &FundamentalPair,
    at: C64,
    convention: Convention,
    opts: &EvalOptions,
) -> Result<ConnectionMatrix> {
    pk.check_inside(at, opts)?;
    pl.check_inside(at, opts)?;
    let v = pk.rows(at, opts)?;
    let u = pl.rows(at, opts)?;
    let w = mat_det(&u);
    let scale = (u[0][0].norm() + u[0][1].norm()) * (u[1][0].norm() + u[1][1].norm());
    if !(w.norm() >= SINGULAR_DENOMINATOR_TOL * scale) {
        return Err(Error::SingularDenominator(w.norm()));
    }
    // F_i(z; k) = C_i1 F_1(z; l) + C_i2 F_2(z; l), matched with derivatives at `at`
    let (u1, du1, u2, du2) = (u[0][0], u[0][1], u[1][0], u[1][1]);
    let mut entries = [[ZERO; 2]; 2];
    for i in 0..2 {
        let (vi, dvi) = (v[i][0], v[i][1]);
        entries[i][0] = (vi * du2 - dvi * u2) / w;
        entries[i][1] = (u1 * dvi - du1 * vi) / w;
    }
    let product = mat_mul(&v, &mat_inv(&u));
    let discrepancy = frobenius_distance(&entries, &product) / frobenius_norm(&entries).max(f64::MIN_POSITIVE);
    Ok(ConnectionMatrix {
        entries,
        source: pk.basis,
        target: pl.basis,
        eval_point: at,
        provenance: vec![at],
        convention,
        dual_path_discrepancy: Some(discrepancy),
    })
}

/// `Ĉ(z_k, z_l)` matched at the regular point `at` inside both discs.
pub fn connection_matrix(
    cfg: &SymmetricHeunConfig,
    k: usize,
    l: usize,
    at: C64,
    opts: &ConnectOptions,
) -> Result<ConnectionMatrix> {
    let cuts = opts.cuts(cfg);
    let pk = frobenius_pair(cfg, k, opts.n_terms, &cuts)?;
    if k == l {
        return Ok(ConnectionMatrix::identity(pk.basis, at, Convention::new(&cuts)));
    }
    let pl = frobenius_pair(cfg, l, opts.n_terms, &cuts)?;
    connection_between(&pk, &pl, at, Convention::new(&cuts), &opts.eval)
}

/// Ten deterministic points on circles of radius `0.3 ρ` and `0.6 ρ`
/// around `center`.
pub fn sample_points(center: C64, rho: f64) -> Vec<C64> {
    (0..5)
        .flat_map(|j| {
            let t = TAU * j as f64 / 5.0 + 0.3;
            [
                center + C64::from_polar(0.3 * rho, t),
                center + C64::from_polar(0.6 * rho, t + TAU / 10.0),
            ]
        })
        .collect()
}

/// Distance from `p` to the branch cut of a Frobenius pair.
fn cut_distance(pair: &FundamentalPair, p: C64) -> f64 {
    match pair.basis {
        Basis::Canonical { .. } => f64::INFINITY,
        Basis::Frobenius { .. } => {
            let dir = C64::from_polar(1.0, pair.sol1.branch_cut_direction);
            let t = p - pair.center();
            let along = (t * dir.conj()).re;
            if along <= 0.0 {
                t.norm()
            } else {
                (t - dir * along).norm()
            }
        }
    }
}

/// Radius of the largest cut-free circle around `p` inside the evaluation
/// discs of both pairs. On such a circle both pairs are single-valued, so
/// the matrix relation holds there whenever it holds at `p`.
fn overlap_room(a: &FundamentalPair, b: &FundamentalPair, p: C64, opts: &EvalOptions) -> f64 {
    [a, b]
        .iter()
        .map(|s| (opts.safety_factor * s.conv_radius() - (p - s.center()).norm()).min(cut_distance(s, p)))
        .fold(f64::INFINITY, f64::min)
}

fn residual_between(
    src: &FundamentalPair,
    dst: &FundamentalPair,
    m: &ConnectionMatrix,
    around: C64,
    opts: &EvalOptions,
) -> Result<f64> {
    let rho = overlap_room(src, dst, around, opts);
    if rho <= 0.0 {
        return Err(Error::PointOutsideDisc { index: src.basis.disc_index() });
    }
    let mut worst: f64 = 0.0;
    for z in sample_points(around, rho) {
        let fk = src.values(z, opts)?;
        let pred = m.apply(dst.values(z, opts)?);
        let num = ((fk[0] - pred[0]).norm_sqr() + (fk[1] - pred[1]).norm_sqr()).sqrt();
        let den = (fk[0].norm_sqr() + fk[1].norm_sqr()).sqrt();
        worst = worst.max(num / den);
    }
    Ok(worst)
}

/// Largest relative reconstruction error `|F(z; source) - C F(z; target)|
/// / |F(z; source)|` over [`sample_points`] around `around` (default: the
/// matching point of the matrix).
pub fn reconstruction_residual(
    cfg: &SymmetricHeunConfig,
    m: &ConnectionMatrix,
    around: Option<C64>,
    opts: &ConnectOptions,
) -> Result<f64> {
    let opts = ConnectOptions { cuts: Some(BranchCuts { directions: m.convention.cut_directions }), ..*opts };
    let src = pair_for(cfg, m.source, &opts)?;
    let dst = pair_for(cfg, m.target, &opts)?;
    residual_between(&src, &dst, m, around.unwrap_or(m.eval_point), &opts.eval)
}

/// A point inside both admissible discs of `z_k` and `z_l` with the largest
/// room to the disc boundaries and the branch cuts, found on a 41 × 41 grid
/// over the bounding box of the lens.
pub fn overlap_point(cfg: &SymmetricHeunConfig, k: usize, l: usize, opts: &ConnectOptions) -> Option<C64> {
    let cuts = opts.cuts(cfg);
    let pk = frobenius_pair(cfg, k, 2, &cuts).ok()?;
    let pl = frobenius_pair(cfg, l, 2, &cuts).ok()?;
    let room = |p: C64| {
        [&pk, &pl]
            .iter()
            .map(|s| (s.admissible_radius(&opts.eval) - (p - s.center()).norm()).min(cut_distance(s, p)))
            .fold(f64::INFINITY, f64::min)
    };
    let (rk, rl) = (pk.admissible_radius(&opts.eval), pl.admissible_radius(&opts.eval));
    let (zk, zl) = (pk.center(), pl.center());
    let lo = C64::new((zk.re - rk).max(zl.re - rl), (zk.im - rk).max(zl.im - rl));
    let hi = C64::new((zk.re + rk).min(zl.re + rl), (zk.im + rk).min(zl.im + rl));
    if lo.re >= hi.re || lo.im >= hi.im {
        return None;
    }
    const N: usize = 40;
    let mut best: Option<(f64, C64)> = None;
    for i in 0..=N {
        for j in 0..=N {
            let p = C64::new(
                lo.re + (hi.re - lo.re) * i as f64 / N as f64,
                lo.im + (hi.im - lo.im) * j as f64 / N as f64,
            );
            let r = room(p);
            if r > 0.0 && best.is_none_or(|(b, _)| r > b) {
                best = Some((r, p));
            }
        }
    }
    best.map(|(_, p)| p)
}

/// `‖Ĉ(z_k,z_l) Ĉ(z_l,z_m) - Ĉ(z_k,z_m)‖_F`, each factor matched at its own
/// point. Small only when the three points see consistent branches.
#[allow(clippy::too_many_arguments)]
pub fn chain_check(
    cfg: &SymmetricHeunConfig,
    k: usize,
    l: usize,
    m: usize,
    at_kl: C64,
    at_lm: C64,
    at_km: C64,
    opts: &ConnectOptions,
) -> Result<f64> {
    let ckl = connection_matrix(cfg, k, l, at_kl, opts)?;
    let clm = connection_matrix(cfg, l, m, at_lm, opts)?;
    let ckm = connection_matrix(cfg, k, m, at_km, opts)?;
    Ok(frobenius_distance(&ckl.compose(&clm)?.entries, &ckm.entries))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum AtlasMode {
    SinglePoint { at: C64 },
    MultiCenter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasEntry {
    pub k: usize,
    pub l: usize,
    pub matrix: ConnectionMatrix,
    /// Singular points visited from `z_k` to `z_l`.
    pub route: Vec<usize>,
    /// Triples whose circumcenters served as matching points.
    pub centers: Vec<[usize; 3]>,
    /// Reconstruction residual on the overlap of the two discs, when one
    /// could be sampled.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atlas {
    pub mode: AtlasMode,
    /// `Ĉ(z_k, at)` for `k = 1..4` (single-point mode only).
    pub base: Vec<ConnectionMatrix>,
    /// `Ĉ(z_k, z_l)` for `k < l`.
    pub pairwise: Vec<AtlasEntry>,
    pub max_residual: f64,
    /// Largest `‖Ĉ(k,l) Ĉ(l,m) - Ĉ(k,m)‖_F` over ordered triples of
    /// distinct indices.
    pub chain_residual: f64,
    /// Largest `‖Ĉ(k,l) Ĉ(l,k) - I‖_F`.
    pub inverse_residual: f64,
}

const PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
const TRIPLES: [[usize; 3]; 4] = [[1, 2, 4], [1, 2, 3], [1, 3, 4], [2, 3, 4]];

fn frobenius_pairs(cfg: &SymmetricHeunConfig, opts: &ConnectOptions) -> Result<Vec<FundamentalPair>> {
    let cuts = opts.cuts(cfg);
    (1..=4).map(|k| frobenius_pair(cfg, k, opts.n_terms, &cuts)).collect()
}

fn lookup(entries: &[AtlasEntry], k: usize, l: usize) -> Mat {
    if k == l {
        return IDENTITY;
    }
    let e = entries.iter().find(|e| (e.k, e.l) == (k.min(l), k.max(l))).expect("all pairs present");
    if k < l {
        e.matrix.entries
    } else {
        mat_inv(&e.matrix.entries)
    }
}

fn identity_residuals(entries: &[AtlasEntry]) -> (f64, f64) {
    let mut chain: f64 = 0.0;
    let mut inverse: f64 = 0.0;
    for k in 1..=4 {
        for l in 1..=4 {
            if k == l {
                continue;
            }
            inverse = inverse.max(frobenius_distance(&mat_mul(&lookup(entries, k, l), &lookup(entries, l, k)), &IDENTITY));
            for m in 1..=4 {
                if m != k && m != l {
                    let lhs = mat_mul(&lookup(entries, k, l), &lookup(entries, l, m));
                    chain = chain.max(frobenius_distance(&lhs, &lookup(entries, k, m)));
                }
            }
        }
    }
    (chain, inverse)
}

/// Complete connection data through one regular point, the origin, which
/// must lie in all four convergence discs.
pub fn single_point_atlas(cfg: &SymmetricHeunConfig, opts: &ConnectOptions) -> Result<Atlas> {
    if !condition_a_points(cfg.z()) {
        return Err(Error::ConditionViolated(Condition::A));
    }
    if !condition_b_points(cfg.z()) {
        return Err(Error::ConditionViolated(Condition::B));
    }
    let at = ZERO;
    let pairs = frobenius_pairs(cfg, opts)?;
    for p in &pairs {
        p.check_inside(at, &opts.eval)?;
    }
    let convention = Convention::new(&opts.cuts(cfg));
    let base = (1..=4)
        .map(|k| connect_to_point(cfg, k, at, opts))
        .collect::<Result<Vec<_>>>()?;
    let results = Execution::default().map_indexed(PAIRS.len(), |i| {
        let (k, l) = PAIRS[i];
        let (pk, pl) = (&pairs[k - 1], &pairs[l - 1]);
        let matrix = connection_between(pk, pl, at, convention.clone(), &opts.eval)?;
        let residual = residual_between(pk, pl, &matrix, at, &opts.eval)?;
        Ok(AtlasEntry { k, l, matrix, route: vec![k, l], centers: vec![], residual: Some(residual) })
    });
    let pairwise = results.into_iter().collect::<Result<Vec<_>>>()?;
    finish(AtlasMode::SinglePoint { at }, base, pairwise)
}

fn finish(mode: AtlasMode, base: Vec<ConnectionMatrix>, pairwise: Vec<AtlasEntry>) -> Result<Atlas> {
    let max_residual = pairwise.iter().filter_map(|e| e.residual).fold(0.0, f64::max);
    let (chain_residual, inverse_residual) = identity_residuals(&pairwise);
    Ok(Atlas { mode, base, pairwise, max_residual, chain_residual, inverse_residual })
}

/// Triple whose circumcenter lies inside the three admissible discs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibleTriple {
    pub triple: [usize; 3],
    pub center: C64,
}

/// Triples of singular points whose circumcenters are usable matching
/// points for all three pairs of the triple.
pub fn admissible_triples(cfg: &SymmetricHeunConfig, pairs: &[FundamentalPair], opts: &EvalOptions) -> Vec<AdmissibleTriple> {
    TRIPLES
        .iter()
        .filter_map(|&t| {
            let c = circumcircle(cfg.z()[t[0] - 1], cfg.z()[t[1] - 1], cfg.z()[t[2] - 1]).ok()?;
            t.iter()
                .all(|&i| pairs[i - 1].contains(c.center, opts))
                .then_some(AdmissibleTriple { triple: t, center: c.center })
        })
        .collect()
}

/// Pairwise connection matrices chained through the circumcenters of
/// admissible triples.
pub fn multi_center_atlas(cfg: &SymmetricHeunConfig, opts: &ConnectOptions) -> Result<Atlas> {
    if !condition_a_points(cfg.z()) {
        return Err(Error::ConditionViolated(Condition::A));
    }
    let pairs = frobenius_pairs(cfg, opts)?;
    let convention = Convention::new(&opts.cuts(cfg));
    let triples = admissible_triples(cfg, &pairs, &opts.eval);
    if triples.is_empty() {
        return Err(Error::CenterOutsideDiscs(TRIPLES[0]));
    }
    // direct edges: first admissible triple that yields a usable matrix
    let mut edges: Vec<(usize, usize, ConnectionMatrix, [usize; 3])> = Vec::new();
    for &(k, l) in &PAIRS {
        for t in triples.iter().filter(|t| t.triple.contains(&k) && t.triple.contains(&l)) {
            if let Ok(m) = connection_between(&pairs[k - 1], &pairs[l - 1], t.center, convention.clone(), &opts.eval) {
                edges.push((k, l, m, t.triple));
                break;
            }
        }
    }
    let edge = |a: usize, b: usize| edges.iter().find(|e| (e.0, e.1) == (a.min(b), a.max(b)));
    let mut pairwise = Vec::with_capacity(PAIRS.len());
    for &(k, l) in &PAIRS {
        let route = shortest_route(k, l, |a, b| edge(a, b).is_some()).ok_or(Error::NoChain(k, l))?;
        let mut matrix: Option<ConnectionMatrix> = None;
        let mut centers = Vec::new();
        for w in route.windows(2) {
            let e = edge(w[0], w[1]).expect("route uses existing edges");
            let step = if w[0] < w[1] { e.2.clone() } else { e.2.inverse() };
            centers.push(e.3);
            matrix = Some(match matrix {
                None => step,
                Some(acc) => acc.compose(&step)?,
            });
        }
        let matrix = matrix.expect("route has at least one step");
        let around = if route.len() == 2 { Some(matrix.eval_point) } else { overlap_point(cfg, k, l, opts) };
        let residual = around.and_then(|p| residual_between(&pairs[k - 1], &pairs[l - 1], &matrix, p, &opts.eval).ok());
        pairwise.push(AtlasEntry { k, l, matrix, route, centers, residual });
    }
    finish(AtlasMode::MultiCenter, Vec::new(), pairwise)
}

fn shortest_route(from: usize, to: usize, linked: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    let mut prev = [0usize; 5];
    let mut seen = [false; 5];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(a) = queue.pop_front() {
        if a == to {
            let mut route = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur];
                route.push(cur);
            }
            route.reverse();
            return Some(route);
        }
        for b in 1..=4 {
            if !seen[b] && linked(a, b) {
                seen[b] = true;
                prev[b] = a;
                queue.push_back(b);
            }
        }
    }
    None
}
