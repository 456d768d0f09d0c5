//! Complex-plane geometry: circumcircles of point triples, Möbius maps on the
//! extended plane, the cross-ratio and the unit-circle frame.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Relative threshold on the circumcircle denominator, in units of the
/// squared largest pairwise distance.
pub const COLLINEAR_TOL: f64 = 1e-13;

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Extended {
    Finite(C64),
    Infinity,
}

impl Extended {
    pub fn finite(self) -> Option<C64> {
        match self {
            Extended::Finite(z) => Some(z),
            Extended::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinity)
    }
}

impl From<C64> for Extended {
    fn from(z: C64) -> Self {
        Extended::Finite(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: C64,
    pub radius: f64,
}

fn coincident(a: C64, b: C64) -> bool {
    let scale = 1.0 + a.norm().max(b.norm());
    (a - b).norm() <= 4.0 * f64::EPSILON * scale
}

fn pairwise_distinct(pts: &[C64]) -> bool {
    pts.iter()
        .enumerate()
        .all(|(i, &a)| pts[i + 1..].iter().all(|&b| !coincident(a, b)))
}

/// Circle through three points.
///
/// The center is `Σ z̄_k z_k (z_l - z_m) / Σ z̄_k (z_l - z_m)` (cyclic sums),
/// evaluated in coordinates translated to `zk` for conditioning; the radius is
/// `|z_k - z_l| |z_l - z_m| |z_m - z_k|` over the modulus of the same
/// denominator.
pub fn circumcircle(zk: C64, zl: C64, zm: C64) -> Result<Circle> {
    if !pairwise_distinct(&[zk, zl, zm]) {
        return Err(Error::Coincident);
    }
    let wl = zl - zk;
    let wm = zm - zk;
    let den = wl.conj() * wm - wm.conj() * wl;
    let scale = wl.norm().max(wm.norm()).max((zl - zm).norm());
    if den.norm() < COLLINEAR_TOL * scale * scale {
        return Err(Error::Collinear);
    }
    let num = wl.norm_sqr() * wm - wm.norm_sqr() * wl;
    let center = zk + num / den;
    let radius = wl.norm() * (zm - zl).norm() * wm.norm() / den.norm();
    Ok(Circle { center, radius })
}

/// A fractional-linear map `z ↦ (a z + b) / (c z + d)` with `ad - bc ≠ 0`.
///
/// Coefficients are stored unnormalized; use [`MoebiusMap::approx_eq`] for
/// projective comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub a_coef: C64,
    pub b_coef: C64,
    pub c_coef: C64,
    pub d_coef: C64,
}

impl MoebiusMap {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        let det = a * d - b * c;
        if !(scale > 0.0) || !det.is_finite() || det.norm() <= 1e-14 * scale * scale {
            return Err(Error::SingularMap);
        }
        Ok(MoebiusMap { a_coef: a, b_coef: b, c_coef: c, d_coef: d })
    }

    pub fn identity() -> Self {
        MoebiusMap { a_coef: ONE, b_coef: ZERO, c_coef: ZERO, d_coef: ONE }
    }

    pub fn determinant(&self) -> C64 {
        self.a_coef * self.d_coef - self.b_coef * self.c_coef
    }

    fn coeffs(&self) -> [C64; 4] {
        [self.a_coef, self.b_coef, self.c_coef, self.d_coef]
    }

    /// Total map on the extended plane.
    pub fn apply(&self, z: Extended) -> Extended {
        let (a, b, c, d) = (self.a_coef, self.b_coef, self.c_coef, self.d_coef);
        match z {
            Extended::Infinity => {
                if c == ZERO {
                    Extended::Infinity
                } else {
                    Extended::Finite(a / c)
                }
            }
            Extended::Finite(z) => {
                let den = c * z + d;
                if den == ZERO {
                    Extended::Infinity
                } else {
                    Extended::Finite((a * z + b) / den)
                }
            }
        }
    }

    /// Applies the map to a finite point, returning `None` at the pole.
    pub fn apply_finite(&self, z: C64) -> Option<C64> {
        self.apply(Extended::Finite(z)).finite()
    }

    /// Derivative `dζ/dz = det / (c z + d)^2`.
    pub fn derivative(&self, z: C64) -> C64 {
        let den = self.c_coef * z + self.d_coef;
        self.determinant() / (den * den)
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap {
            a_coef: self.d_coef,
            b_coef: -self.b_coef,
            c_coef: -self.c_coef,
            d_coef: self.a_coef,
        }
    }

    /// `self ∘ inner`, i.e. apply `inner` first.
    pub fn compose(&self, inner: &MoebiusMap) -> Self {
        let [a2, b2, c2, d2] = self.coeffs();
        let [a1, b1, c1, d1] = inner.coeffs();
        MoebiusMap {
            a_coef: a2 * a1 + b2 * c1,
            b_coef: a2 * b1 + b2 * d1,
            c_coef: c2 * a1 + d2 * c1,
            d_coef: c2 * b1 + d2 * d1,
        }
    }

    /// Projective equality: the coefficient vectors are proportional up to
    /// relative tolerance `tol`.
    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        let p = self.coeffs();
        let q = other.coeffs();
        let norm = |v: &[C64; 4]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let (np, nq) = (norm(&p), norm(&q));
        // Rank-one test on the 2×4 matrix [p; q]: all 2×2 minors vanish.
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                worst = worst.max((p[i] * q[j] - p[j] * q[i]).norm());
            }
        }
        worst <= tol * np * nq
    }
}

fn det3(m: [[C64; 3]; 3]) -> C64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// The unique Möbius map sending `src[i]` to `dst[i]`, built from the 3×3
/// determinant formulas for its coefficients.
pub fn moebius_from_triples(src: [C64; 3], dst: [C64; 3]) -> Result<MoebiusMap> {
    if !pairwise_distinct(&src) || !pairwise_distinct(&dst) {
        return Err(Error::DegenerateTriple);
    }
    let rows = |f: &dyn Fn(C64, C64) -> [C64; 3]| {
        [f(src[0], dst[0]), f(src[1], dst[1]), f(src[2], dst[2])]
    };
    let a = det3(rows(&|z, w| [z * w, w, ONE]));
    let b = det3(rows(&|z, w| [z * w, z, w]));
    let c = det3(rows(&|z, w| [z, w, ONE]));
    let d = det3(rows(&|z, w| [z * w, z, ONE]));
    MoebiusMap::new(a, b, c, d)
}

/// The map `ζ = (z2 - z4)/(z2 - z1) · (z - z1)/(z - z4)` sending
/// `z1, z2, z4` to `0, 1, ∞`.
pub fn canonical_map(z1: C64, z2: C64, z4: C64) -> Result<MoebiusMap> {
    if !pairwise_distinct(&[z1, z2, z4]) {
        return Err(Error::DegenerateTriple);
    }
    let k = z2 - z4;
    let m = z2 - z1;
    MoebiusMap::new(k, -k * z1, m, -m * z4)
}

/// Cross-ratio `((z2 - z4)(z3 - z1)) / ((z2 - z1)(z3 - z4))`, the image of
/// `z3` under [`canonical_map`]`(z1, z2, z4)`.
pub fn cross_ratio(z1: C64, z2: C64, z3: C64, z4: C64) -> Result<C64> {
    let pts = [z1, z2, z3, z4];
    if !pts.iter().all(|z| z.is_finite()) || !pairwise_distinct(&pts) {
        return Err(Error::DegeneratePoints);
    }
    Ok((z2 - z4) * (z3 - z1) / ((z2 - z1) * (z3 - z4)))
}

/// Angles `Φ1, Φ2, Φ4` placing `z1, z2, z4` on the unit circle, reduced to
/// `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleTriple {
    pub phi1: f64,
    pub phi2: f64,
    pub phi4: f64,
}

impl AngleTriple {
    pub fn new(phi1: f64, phi2: f64, phi4: f64) -> Self {
        let reduce = |p: f64| {
            let r = p.rem_euclid(TAU);
            // rem_euclid can round up to exactly TAU for tiny negative inputs
            if r >= TAU {
                0.0
            } else {
                r
            }
        };
        AngleTriple { phi1: reduce(phi1), phi2: reduce(phi2), phi4: reduce(phi4) }
    }

    /// Angle by position: 1, 2 or 4.
    pub fn phi(&self, k: usize) -> f64 {
        match k {
            1 => self.phi1,
            2 => self.phi2,
            4 => self.phi4,
            _ => panic!("angle index must be 1, 2 or 4, got {k}"),
        }
    }

    pub fn point(&self, k: usize) -> C64 {
        C64::from_polar(1.0, self.phi(k))
    }

    pub fn points(&self) -> [C64; 3] {
        [self.point(1), self.point(2), self.point(4)]
    }

    /// `sin((Φk - Φl)/2)`.
    pub fn s(&self, k: usize, l: usize) -> f64 {
        ((self.phi(k) - self.phi(l)) / 2.0).sin()
    }

    /// `cos((Φk - Φl)/2)`.
    pub fn c(&self, k: usize, l: usize) -> f64 {
        ((self.phi(k) - self.phi(l)) / 2.0).cos()
    }

    /// Chord length `|e^{iΦk} - e^{iΦl}| = 2|sin((Φk - Φl)/2)|`.
    pub fn chord(&self, k: usize, l: usize) -> f64 {
        2.0 * self.s(k, l).abs()
    }

    fn nondegenerate(&self) -> bool {
        const TOL: f64 = 1e-12;
        self.chord(1, 2) > TOL && self.chord(2, 4) > TOL && self.chord(4, 1) > TOL
    }

    /// Image of the origin under the forward unit-circle map,
    /// `ζ0 = (c14 + i s14) s42 / s12`.
    pub fn zeta0(&self) -> Result<C64> {
        if !self.nondegenerate() {
            return Err(Error::DegenerateAngles);
        }
        let ratio = self.s(4, 2) / self.s(1, 2);
        Ok(C64::new(self.c(1, 4) * ratio, self.s(1, 4) * ratio))
    }
}

/// Forward and inverse maps of the unit-circle frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitCircleMaps {
    /// `z ↦ conj(ζ0) (z - e^{iΦ1}) / (z - e^{iΦ4})`.
    pub forward: MoebiusMap,
    /// `ζ ↦ e^{iΦ4} (ζ - ζ0) / (ζ - conj(ζ0))`.
    pub inverse: MoebiusMap,
    /// `forward(0)`.
    pub zeta0: C64,
}

/// Maps between `e^{iΦ1}, e^{iΦ2}, e^{iΦ4}` and `0, 1, ∞`.
///
/// The forward map sends the origin to `zeta0`; the prefactor of the forward
/// map is `conj(zeta0)`.
pub fn unit_circle_maps(phis: &AngleTriple) -> Result<UnitCircleMaps> {
    let zeta0 = phis.zeta0()?;
    let e1 = phis.point(1);
    let e4 = phis.point(4);
    let z0c = zeta0.conj();
    let forward = MoebiusMap::new(z0c, -z0c * e1, ONE, -e4)?;
    let inverse = MoebiusMap::new(e4, -e4 * zeta0, ONE, -z0c)?;
    Ok(UnitCircleMaps { forward, inverse, zeta0 })
}

/// Map sending `points[i]` onto the unit-circle points `e^{iΦ}` (in the
/// order Φ1, Φ2, Φ4), with coefficients written out explicitly in terms of
/// the phases.
pub fn unit_circle_coeffs(phis: &AngleTriple, points: [C64; 3]) -> Result<MoebiusMap> {
    if !phis.nondegenerate() {
        return Err(Error::DegenerateAngles);
    }
    if !pairwise_distinct(&points) {
        return Err(Error::DegenerateTriple);
    }
    let [z1, z2, z4] = points;
    let [e1, e2, e4] = phis.points();
    let (d12, d14, d24) = (z1 - z2, z1 - z4, z2 - z4);
    let a = d12 * e1 * e2 - d14 * e1 * e4 + d24 * e2 * e4;
    let b = -z4 * d12 * e1 * e2 + z2 * d14 * e1 * e4 - z1 * d24 * e2 * e4;
    let c = -d12 * e4 + d14 * e2 - d24 * e1;
    let d = z4 * d12 * e4 - z2 * d14 * e2 + z1 * d24 * e1;
    MoebiusMap::new(a, b, c, d)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    /// Intersection of two perpendicular bisectors as a real 2×2 solve.
    fn bisector_center(p: C64, q: C64, r: C64) -> C64 {
        // |x - p|^2 = |x - q|^2  =>  2 (q - p)·x = |q|^2 - |p|^2
        let (a11, a12, b1) = (2.0 * (q.re - p.re), 2.0 * (q.im - p.im), q.norm_sqr() - p.norm_sqr());
        let (a21, a22, b2) = (2.0 * (r.re - p.re), 2.0 * (r.im - p.im), r.norm_sqr() - p.norm_sqr());
        let det = a11 * a22 - a12 * a21;
        c((b1 * a22 - a12 * b2) / det, (a11 * b2 - b1 * a21) / det)
    }

    #[test]
    fn circumcircle_examples() {
        let circ = circumcircle(c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)).unwrap();
        assert!(close(circ.center, ZERO, 1e-15));
        assert!((circ.radius - 1.0).abs() < 1e-15);

        let (p, q, r) = (c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0));
        let expected = bisector_center(p, q, r);
        assert!(close(expected, c(0.5, 0.5), 1e-15));
        let circ = circumcircle(p, q, r).unwrap();
        assert!(close(circ.center, expected, 1e-15));
        assert!((circ.radius - 0.5f64.sqrt()).abs() < 1e-15);

        assert_eq!(circumcircle(ZERO, ONE, c(2.0, 0.0)), Err(Error::Collinear));
        assert_eq!(circumcircle(ZERO, ONE, ONE), Err(Error::Coincident));
    }

    #[test]
    fn circumcircle_conjugation() {
        let (p, q, r) = (c(0.3, -1.2), c(2.0, 0.4), c(-0.7, 0.9));
        let a = circumcircle(p, q, r).unwrap();
        let b = circumcircle(p.conj(), q.conj(), r.conj()).unwrap();
        assert!(close(b.center, a.center.conj(), 1e-14));
        assert!((a.radius - b.radius).abs() < 1e-14);
    }

    #[test]
    fn triples_map() {
        let tri = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)];
        let m = moebius_from_triples(tri, tri).unwrap();
        assert!(m.approx_eq(&MoebiusMap::identity(), 1e-14));

        let m = moebius_from_triples([ZERO, ONE, c(2.0, 0.0)], [ZERO, ONE, c(4.0, 0.0)]).unwrap();
        assert!(close(m.apply_finite(c(2.0, 0.0)).unwrap(), c(4.0, 0.0), 1e-14));
        assert!(close(m.apply_finite(ONE).unwrap(), ONE, 1e-14));
        assert!(close(m.apply_finite(ZERO).unwrap(), ZERO, 1e-14));

        assert_eq!(
            moebius_from_triples([ZERO, ONE, ONE], [ZERO, ONE, c(2.0, 0.0)]),
            Err(Error::DegenerateTriple)
        );
    }

    #[test]
    fn apply_on_extended_plane() {
        let id = MoebiusMap::identity();
        assert_eq!(id.apply(c(5.0, 2.0).into()), Extended::Finite(c(5.0, 2.0)));
        assert_eq!(id.apply(Extended::Infinity), Extended::Infinity);

        let m = canonical_map(ZERO, ONE, c(3.0, 0.0)).unwrap();
        assert!(close(m.apply_finite(c(2.0, 0.0)).unwrap(), c(4.0, 0.0), 1e-15));
        let pole = -m.d_coef / m.c_coef;
        assert_eq!(m.apply(pole.into()), Extended::Infinity);
        assert_eq!(m.apply(Extended::Infinity), Extended::Finite(m.a_coef / m.c_coef));
    }

    #[test]
    fn inverse_and_compose() {
        assert!(MoebiusMap::identity().inverse().approx_eq(&MoebiusMap::identity(), 0.0));
        let m = MoebiusMap::new(c(1.0, 2.0), c(-0.5, 0.1), c(0.3, 0.3), c(2.0, -1.0)).unwrap();
        assert!(m.compose(&m.inverse()).approx_eq(&MoebiusMap::identity(), 1e-15));

        // inverse of the canonical map against the explicit ζ -> z formula
        let (z1, z2, z4) = (c(0.4, 1.0), c(-1.3, 0.2), c(0.9, -0.8));
        let inv = canonical_map(z1, z2, z4).unwrap().inverse();
        let explicit =
            MoebiusMap::new(z4 * (z2 - z1), -z1 * (z2 - z4), z2 - z1, -(z2 - z4)).unwrap();
        assert!(inv.approx_eq(&explicit, 1e-15));
    }

    #[test]
    fn canonical_map_examples() {
        let (z1, z2, z4) = (c(0.4, 1.0), c(-1.3, 0.2), c(0.9, -0.8));
        let m = canonical_map(z1, z2, z4).unwrap();
        assert!(close(m.apply_finite(z1).unwrap(), ZERO, 1e-15));
        assert!(close(m.apply_finite(z2).unwrap(), ONE, 1e-15));
        assert_eq!(m.apply(z4.into()), Extended::Infinity);

        let m = canonical_map(ZERO, ONE, c(3.0, 0.0)).unwrap();
        assert_eq!(m.apply_finite(ZERO).unwrap(), ZERO);

        // (1, i, -1): ζ(0) = ((i + 1)/(i - 1)) (1 / -1) = i
        let m = canonical_map(ONE, c(0.0, 1.0), c(-1.0, 0.0)).unwrap();
        assert!(close(m.apply_finite(ZERO).unwrap(), c(0.0, 1.0), 1e-15));
    }

    #[test]
    fn cross_ratio_examples() {
        let a = cross_ratio(ZERO, ONE, c(2.0, 0.0), c(3.0, 0.0)).unwrap();
        assert!(close(a, c(4.0, 0.0), 1e-15));

        let (z1, z2, z3, z4) = (c(0.4, 1.0), c(-1.3, 0.2), c(2.0, 2.0), c(0.9, -0.8));
        let via_map = canonical_map(z1, z2, z4).unwrap().apply_finite(z3).unwrap();
        assert!(close(cross_ratio(z1, z2, z3, z4).unwrap(), via_map, 1e-14));
        assert_eq!(cross_ratio(z1, z1, z3, z4), Err(Error::DegeneratePoints));
    }

    #[test]
    fn unit_circle_frame_example() {
        let phis = AngleTriple::new(2.0 * PI / 3.0, 4.0 * PI / 3.0, 0.0);
        let maps = unit_circle_maps(&phis).unwrap();
        assert!(close(maps.zeta0, c(0.5, 3f64.sqrt() / 2.0), 1e-15));
        // the origin maps onto zeta0 (not its conjugate)
        assert!(close(maps.forward.apply_finite(ZERO).unwrap(), maps.zeta0, 1e-14));
        assert!(close(maps.forward.apply_finite(phis.point(1)).unwrap(), ZERO, 1e-15));
        assert!(close(maps.forward.apply_finite(phis.point(2)).unwrap(), ONE, 1e-14));
        assert_eq!(maps.forward.apply(phis.point(4).into()), Extended::Infinity);
        assert!(maps.forward.compose(&maps.inverse).approx_eq(&MoebiusMap::identity(), 1e-14));
        let [e1, e2, e4] = phis.points();
        assert!(maps.forward.approx_eq(&canonical_map(e1, e2, e4).unwrap(), 1e-14));
    }

    #[test]
    fn unit_circle_degenerate() {
        let phis = AngleTriple::new(1.0, 1.0, 0.0);
        assert_eq!(phis.zeta0(), Err(Error::DegenerateAngles));
        assert!(unit_circle_maps(&phis).is_err());
        assert_eq!(
            unit_circle_coeffs(&phis, [ZERO, ONE, c(2.0, 0.0)]),
            Err(Error::DegenerateAngles)
        );
    }

    #[test]
    fn angles_reduce() {
        let t = AngleTriple::new(-PI / 2.0, 3.0 * TAU + 0.25, 0.0);
        assert!((t.phi1 - 1.5 * PI).abs() < 1e-15);
        assert!((t.phi2 - 0.25).abs() < 1e-12);
        assert!((t.chord(1, 4) - 2f64.sqrt()).abs() < 1e-15);
    }
}
