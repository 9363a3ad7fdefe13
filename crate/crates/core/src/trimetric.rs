//! The triangular ratio metric
//!
//! ```text
//! s_D(u, v) = |u - v| / inf_{w in dD} (|u - w| + |w - v|),   s_D(u, u) = 0
//! ```
//!
//! on the unit disk, the upper half-plane, disks and convex polygons.
//!
//! For the unit disk the infimum is found as the minimum over `vartheta` of
//! `|2 - e^{-i vartheta} z1 - e^{i vartheta} conj(z2)|`, whose square is a
//! trigonometric polynomial of degree 2. For a convex domain the same value
//! is the supremum of `th(rho_H / 2)` over supporting half-planes `H`;
//! [`s_via_supporting_halfplanes`] evaluates that route for polygons.
//! [`s_bruteforce`] samples the boundary directly and serves as the oracle.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, invalid, Result};
use crate::geometry::{angular_distance, ensure_finite, normalize_angle, point_serde, unit, ComplexPoint};
use crate::hyperbolic::{check_in_unit_disk, tanh_half_rho_halfplane, DiskDomain};
use crate::minimize::{golden_section, newton_bisect, poly_roots};

/// Local minima of the boundary sum within this of the global minimum are
/// all reported as contacts.
pub const CONTACT_VALUE_TOL: f64 = 1e-10;
/// Two contact angles closer than this are the same contact.
pub const CONTACT_ANGLE_TOL: f64 = 1e-8;

const GRID: usize = 64;
const ANGLE_TOL: f64 = 1e-13;
const COLLINEAR_TOL: f64 = 1e-12;
/// Quartic roots this close to the unit circle are treated as critical angles.
const ROOT_RADIUS_TOL: f64 = 1e-4;
const CANDIDATE_MERGE: f64 = 1e-10;

/// A convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<ComplexPoint>,
}

impl ConvexPolygon {
    /// Validates at least 3 finite vertices in counterclockwise order with no
    /// reflex turn (cross products of unit edge directions `>= -1e-12`) and a
    /// total turning of exactly one revolution.
    pub fn new(vertices: Vec<ComplexPoint>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(invalid(format!(
                "a polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        for &v in &vertices {
            ensure_finite("vertex", v)?;
        }
        let n = vertices.len();
        let mut turning = 0.0;
        for i in 0..n {
            let e0 = vertices[(i + 1) % n] - vertices[i];
            let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
            if e0.norm() == 0.0 || e1.norm() == 0.0 {
                return Err(invalid("polygon has repeated vertices"));
            }
            let d0 = e0 / e0.norm();
            let d1 = e1 / e1.norm();
            let cross = d0.re * d1.im - d0.im * d1.re;
            if cross < -COLLINEAR_TOL {
                return Err(invalid(
                    "polygon is not convex or not counterclockwise",
                ));
            }
            turning += (d1 * d0.conj()).arg();
        }
        if (turning - TAU).abs() > 1e-9 {
            return Err(invalid(
                "polygon vertices must wind once counterclockwise",
            ));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[ComplexPoint] {
        &self.vertices
    }

    /// Edges as `(start, end)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (ComplexPoint, ComplexPoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| (b - a).norm()).sum()
    }

    /// Strict interior test.
    pub fn contains(&self, z: ComplexPoint) -> bool {
        self.edges().all(|(a, b)| cross(b - a, z - a) > 0.0)
    }

    /// The boundary point at arclength `s` measured from the first vertex.
    pub fn point_at(&self, s: f64) -> ComplexPoint {
        let mut s = s.rem_euclid(self.perimeter());
        for (a, b) in self.edges() {
            let len = (b - a).norm();
            if s <= len {
                return a + (b - a) * (s / len);
            }
            s -= len;
        }
        self.vertices[0]
    }

    /// Closest boundary point to `z`.
    pub fn nearest_boundary_point(&self, z: ComplexPoint) -> ComplexPoint {
        let mut best = (f64::INFINITY, self.vertices[0]);
        for (a, b) in self.edges() {
            let d = b - a;
            let t = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
            let w = a + d * t;
            let dist = (z - w).norm();
            if dist < best.0 {
                best = (dist, w);
            }
        }
        best.1
    }
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// The domains on which `s_D` is computed.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricDomain {
    UnitDisk,
    UpperHalfPlane,
    Disk(DiskDomain),
    ConvexPolygon(ConvexPolygon),
}

impl MetricDomain {
    pub fn contains(&self, z: ComplexPoint) -> bool {
        match self {
            MetricDomain::UnitDisk => z.norm() < 1.0,
            MetricDomain::UpperHalfPlane => z.im > 0.0,
            MetricDomain::Disk(d) => d.contains(z),
            MetricDomain::ConvexPolygon(p) => p.contains(z),
        }
    }

    fn check(&self, z: ComplexPoint) -> Result<()> {
        ensure_finite("point", z)?;
        if self.contains(z) {
            Ok(())
        } else {
            Err(domain(format!("{z} is not inside the domain")))
        }
    }
}

/// Minimizer of `|u - w| + |w - v|` over the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryInfResult {
    /// The infimum of `|u - w| + |w - v|`.
    pub value: f64,
    #[serde(with = "point_serde")]
    pub witness: ComplexPoint,
    /// Argument of the witness for circular boundaries.
    pub witness_angle: Option<f64>,
}

/// A triangular ratio value with the boundary point realizing it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangularRatio {
    pub value: f64,
    pub contact: BoundaryInfResult,
}

/// `s_H(u, v) = |u - v| / |u - conj(v)|` in the upper half-plane.
pub fn s_halfplane(u: ComplexPoint, v: ComplexPoint) -> Result<f64> {
    tanh_half_rho_halfplane(u, v)
}

fn grid() -> &'static [Complex64; GRID] {
    static TABLE: OnceLock<[Complex64; GRID]> = OnceLock::new();
    TABLE.get_or_init(|| std::array::from_fn(|k| unit(k as f64 * TAU / GRID as f64)))
}

/// `g(t) = (1 - e^{-it} z1) + (1 - e^{it} conj(z2))` and its first two
/// derivatives in `t`, for `e = e^{it}`.
#[inline]
fn boundary_curve(z1: Complex64, z2c: Complex64, e: Complex64) -> (Complex64, Complex64, Complex64) {
    let p = e.conj() * z1;
    let q = e * z2c;
    let g = (1.0 - p) + (1.0 - q);
    let dg = Complex64::i() * (p - q);
    let ddg = p + q;
    (g, dg, ddg)
}

/// `d/dt |g|^2` and `d^2/dt^2 |g|^2`.
#[inline]
fn slope(z1: Complex64, z2c: Complex64, t: f64) -> (f64, f64) {
    let (g, dg, ddg) = boundary_curve(z1, z2c, unit(t));
    let d1 = 2.0 * (g.conj() * dg).re;
    let d2 = 2.0 * (dg.norm_sqr() + (g.conj() * ddg).re);
    (d1, d2)
}

/// `|2 - e^{-it} z1 - e^{it} conj(z2)|`, the modulus of the proof ellipse
/// `zeta_1(t) + conj(zeta_2(t))`.
#[inline]
pub fn boundary_denominator(z1: ComplexPoint, z2: ComplexPoint, t: f64) -> f64 {
    boundary_curve(z1, z2.conj(), unit(t)).0.norm()
}

/// A local minimum of the boundary denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BoundaryMinimum {
    pub angle: f64,
    pub value: f64,
}

/// All local minima of `t -> |2 - e^{-it} z1 - e^{it} conj(z2)|` over one
/// period, sorted by angle in `[0, 2pi)`.
///
/// The squared modulus is a trigonometric polynomial of degree 2. With
/// `x = e^{it}`, `S = z1 + z2`, `P = z1 z2` its critical points are the
/// unit-circle roots of `conj(P) x^4 - conj(S) x^3 + S x - P`. Near the
/// circle two minima and a maximum can sit inside one grid cell, so the
/// roots are the primary candidates and grid sign changes a backup.
pub(crate) fn denominator_minima(z1: ComplexPoint, z2: ComplexPoint) -> Vec<BoundaryMinimum> {
    let z2c = z2.conj();
    let table = grid();
    let h = TAU / GRID as f64;
    let slopes: [f64; GRID] = std::array::from_fn(|k| {
        let (g, dg, _) = boundary_curve(z1, z2c, table[k]);
        2.0 * (g.conj() * dg).re
    });

    let mut candidates: Vec<f64> = Vec::with_capacity(8);
    let (s, p) = (z1 + z2, z1 * z2);
    for x in poly_roots(&[-p, s, Complex64::new(0.0, 0.0), -s.conj(), p.conj()]) {
        if (x.norm() - 1.0).abs() < ROOT_RADIUS_TOL {
            candidates.push(polish_critical(z1, z2c, x.arg()));
        }
    }
    for k in 0..GRID {
        let (s0, s1) = (slopes[k], slopes[(k + 1) % GRID]);
        if s0 < 0.0 && s1 >= 0.0 {
            let lo = k as f64 * h;
            candidates.push(newton_bisect(|t| slope(z1, z2c, t), lo, lo + h, ANGLE_TOL));
        }
    }

    let mut minima: Vec<BoundaryMinimum> = Vec::with_capacity(candidates.len());
    for t in candidates {
        let angle = normalize_angle(t);
        let (_, curvature) = slope(z1, z2c, angle);
        if curvature < -1e-12 {
            continue;
        }
        if minima.iter().any(|m| angular_distance(m.angle, angle) < CANDIDATE_MERGE) {
            continue;
        }
        minima.push(BoundaryMinimum {
            angle,
            value: boundary_denominator(z1, z2, angle),
        });
    }

    if minima.is_empty() {
        // Flat to rounding (z1 = z2 = 0 and near-degenerate pairs).
        let (k, _) = (0..GRID)
            .map(|k| (k, boundary_curve(z1, z2c, table[k]).0.norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let c = k as f64 * h;
        let (t, value) = golden_section(|t| boundary_denominator(z1, z2, t), c - h, c + h, ANGLE_TOL);
        minima.push(BoundaryMinimum {
            angle: normalize_angle(t),
            value,
        });
    }
    minima.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    minima
}

/// Newton on the derivative from `t`, kept only while the steps stay small.
fn polish_critical(z1: Complex64, z2c: Complex64, mut t: f64) -> f64 {
    for _ in 0..20 {
        let (d1, d2) = slope(z1, z2c, t);
        if d2 == 0.0 {
            break;
        }
        let step = d1 / d2;
        if !step.is_finite() || step.abs() > 1e-3 {
            break;
        }
        t -= step;
        if step.abs() <= ANGLE_TOL {
            break;
        }
    }
    t
}

/// Global minimizers of the boundary denominator: every local minimum within
/// `CONTACT_VALUE_TOL` of the best, deduplicated, sorted by angle. The best
/// value itself is the fold-min of the returned values.
pub(crate) fn global_contacts(z1: ComplexPoint, z2: ComplexPoint) -> Vec<BoundaryMinimum> {
    let minima = denominator_minima(z1, z2);
    let best = minima
        .iter()
        .map(|m| m.value)
        .fold(f64::INFINITY, f64::min);
    let mut out: Vec<BoundaryMinimum> = Vec::with_capacity(minima.len());
    for m in minima {
        if m.value > best + CONTACT_VALUE_TOL {
            continue;
        }
        if out
            .iter()
            .any(|o| angular_distance(o.angle, m.angle) < CONTACT_ANGLE_TOL)
        {
            continue;
        }
        out.push(m);
    }
    out
}

/// `s_U(z1, z2)` with its contact point on the unit circle.
///
/// The value uses the global minimum of the boundary sum; among several
/// contacts the one with the smallest angle in `[0, 2pi)` is reported. For `z1 = z2` the value is 0 and the contact is the boundary
/// point nearest to `z1` (angle 0 when `z1 = 0`).
pub fn s_unit_disk(z1: ComplexPoint, z2: ComplexPoint) -> Result<TriangularRatio> {
    check_in_unit_disk(z1)?;
    check_in_unit_disk(z2)?;
    if z1 == z2 {
        let angle = if z1.norm() == 0.0 { 0.0 } else { normalize_angle(z1.arg()) };
        return Ok(TriangularRatio {
            value: 0.0,
            contact: BoundaryInfResult {
                value: 2.0 * (1.0 - z1.norm()),
                witness: unit(angle),
                witness_angle: Some(angle),
            },
        });
    }
    let contacts = global_contacts(z1, z2);
    let best = contacts.iter().map(|m| m.value).fold(f64::INFINITY, f64::min);
    let contact = contacts[0];
    Ok(TriangularRatio {
        value: (z1 - z2).norm() / best,
        contact: BoundaryInfResult {
            value: best,
            witness: unit(contact.angle),
            witness_angle: Some(contact.angle),
        },
    })
}

/// `s_K(u, v)` in a disk, by rescaling to the unit disk.
pub fn s_disk(d: &DiskDomain, u: ComplexPoint, v: ComplexPoint) -> Result<f64> {
    let dom = MetricDomain::Disk(*d);
    dom.check(u)?;
    dom.check(v)?;
    let to_unit = |z: ComplexPoint| (z - d.center) / d.radius;
    let (mut a, mut b) = (to_unit(u), to_unit(v));
    // rescaling can push a point within rounding of the circle onto it
    for z in [&mut a, &mut b] {
        if z.norm() >= 1.0 {
            *z /= z.norm() * (1.0 + f64::EPSILON);
        }
    }
    Ok(s_unit_disk(a, b)?.value)
}

/// Minimum of `|u - w| + |w - v|` over `w` on the segment `[a, b]`, with the
/// minimizer. `u`, `v` lie strictly to the left of `a -> b`.
///
/// Reflect `v` across the edge line; the straight path from `u` to the
/// reflection crosses the line at the line minimizer, and the sum is convex
/// along the line, so clamping to the segment gives the segment minimizer.
fn edge_minimum(a: ComplexPoint, b: ComplexPoint, u: ComplexPoint, v: ComplexPoint) -> (f64, ComplexPoint) {
    let d = b - a;
    let len = d.norm();
    let dir = d / len;
    let du = cross(dir, u - a);
    let dv = cross(dir, v - a);
    let v_reflected = a + dir * dir * (v - a).conj();
    let crossing = u + (v_reflected - u) * (du / (du + dv));
    let t = ((crossing - a) * dir.conj()).re.clamp(0.0, len);
    let w = a + dir * t;
    ((u - w).norm() + (w - v).norm(), w)
}

/// `s_P(u, v)` for a convex polygon by per-edge reflection.
pub fn s_convex_polygon(p: &ConvexPolygon, u: ComplexPoint, v: ComplexPoint) -> Result<TriangularRatio> {
    let dom = MetricDomain::ConvexPolygon(p.clone());
    dom.check(u)?;
    dom.check(v)?;
    if u == v {
        let w = p.nearest_boundary_point(u);
        return Ok(TriangularRatio {
            value: 0.0,
            contact: BoundaryInfResult {
                value: 2.0 * (u - w).norm(),
                witness: w,
                witness_angle: None,
            },
        });
    }
    let (sum, w) = p
        .edges()
        .map(|(a, b)| edge_minimum(a, b, u, v))
        .fold((f64::INFINITY, p.vertices[0]), |best, cur| {
            if cur.0 < best.0 {
                cur
            } else {
                best
            }
        });
    Ok(TriangularRatio {
        value: (u - v).norm() / sum,
        contact: BoundaryInfResult {
            value: sum,
            witness: w,
            witness_angle: None,
        },
    })
}

/// `sup_H th(rho_H(u, v) / 2)` over the half-planes bounded by the edge lines
/// of a convex polygon. For each line this is `|u - v| / |u - v*|` with `v*`
/// the mirror image of `v`.
pub fn s_via_supporting_halfplanes(p: &ConvexPolygon, u: ComplexPoint, v: ComplexPoint) -> Result<f64> {
    let dom = MetricDomain::ConvexPolygon(p.clone());
    dom.check(u)?;
    dom.check(v)?;
    if u == v {
        return Ok(0.0);
    }
    let best = p
        .edges()
        .map(|(a, b)| {
            let dir = (b - a) / (b - a).norm();
            let v_reflected = a + dir * dir * (v - a).conj();
            (u - v).norm() / (u - v_reflected).norm()
        })
        .fold(0.0, f64::max);
    Ok(best)
}

/// Minimum number of boundary samples accepted by [`s_bruteforce`].
pub const BRUTEFORCE_MIN_SAMPLES: usize = 100;

/// Oracle: samples `n` boundary points, keeps the smallest
/// `|u - w| + |w - v|`, then refines between the neighbouring samples by
/// golden-section search to `1e-12` in the boundary parameter.
///
/// Circles are sampled uniformly in angle, polygons uniformly in arclength.
/// The half-plane boundary is sampled on the window
/// `[min(Re u, Re v) - 1, max(Re u, Re v) + 1]` of the real axis.
pub fn s_bruteforce(domain: &MetricDomain, u: ComplexPoint, v: ComplexPoint, n: usize) -> Result<f64> {
    if n < BRUTEFORCE_MIN_SAMPLES {
        return Err(invalid(format!(
            "at least {BRUTEFORCE_MIN_SAMPLES} samples required, got {n}"
        )));
    }
    domain.check(u)?;
    domain.check(v)?;
    if u == v {
        return Ok(0.0);
    }
    let sum = |w: ComplexPoint| (u - w).norm_sqr().sqrt() + (w - v).norm_sqr().sqrt();

    let infimum = match domain {
        MetricDomain::UnitDisk => circle_infimum(Complex64::new(0.0, 0.0), 1.0, n, &sum),
        MetricDomain::Disk(d) => circle_infimum(d.center, d.radius, n, &sum),
        MetricDomain::UpperHalfPlane => {
            let lo = u.re.min(v.re) - 1.0;
            let hi = u.re.max(v.re) + 1.0;
            let at = |x: f64| sum(Complex64::new(x, 0.0));
            let step = (hi - lo) / (n - 1) as f64;
            let (k, best) = argmin((0..n).map(|k| at(lo + k as f64 * step)));
            let c = lo + k as f64 * step;
            let (_, refined) = golden_section(at, c - step, c + step, 1e-12);
            best.min(refined)
        }
        MetricDomain::ConvexPolygon(p) => {
            let per = p.perimeter();
            let step = per / n as f64;
            let at = |s: f64| sum(p.point_at(s));
            let (k, best) = argmin(polygon_samples(p, n).map(sum));
            let c = k as f64 * step;
            let (_, refined) = golden_section(at, c - step, c + step, 1e-12);
            best.min(refined)
        }
    };
    Ok((u - v).norm() / infimum)
}

fn argmin(values: impl Iterator<Item = f64>) -> (usize, f64) {
    values
        .enumerate()
        .fold((0, f64::INFINITY), |best, (k, x)| if x < best.1 { (k, x) } else { best })
}

fn circle_infimum(center: ComplexPoint, radius: f64, n: usize, sum: &impl Fn(ComplexPoint) -> f64) -> f64 {
    let h = TAU / n as f64;
    let rot = unit(h);
    // e^{ikh} by repeated rotation, re-seeded every 256 steps
    let mut e = Complex64::new(1.0, 0.0);
    let mut best = (0usize, f64::INFINITY);
    for k in 0..n {
        if k % 256 == 0 {
            e = unit(k as f64 * h);
        }
        let val = sum(center + e * radius);
        if val < best.1 {
            best = (k, val);
        }
        e *= rot;
    }
    let c = best.0 as f64 * h;
    let (_, refined) = golden_section(|t| sum(center + unit(t) * radius), c - h, c + h, 1e-12);
    best.1.min(refined)
}

/// `n` boundary points at arclength `k * perimeter / n`.
fn polygon_samples(p: &ConvexPolygon, n: usize) -> impl Iterator<Item = ComplexPoint> + '_ {
    let step = p.perimeter() / n as f64;
    let edges: Vec<(ComplexPoint, ComplexPoint, f64)> =
        p.edges().map(|(a, b)| (a, b, (b - a).norm())).collect();
    let mut edge = 0usize;
    let mut start = 0.0;
    (0..n).map(move |k| {
        let s = k as f64 * step;
        while edge + 1 < edges.len() && s > start + edges[edge].2 {
            start += edges[edge].2;
            edge += 1;
        }
        let (a, b, len) = edges[edge];
        a + (b - a) * ((s - start) / len).min(1.0)
    })
}
