//! Closed forms of `th(rho_D(u, v) / 2)` for the disk, the upper half-plane,
//! general disks and the tangent half-planes of the unit circle.
//!
//! Domain membership is strict and uses no tolerance.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::geometry::{ensure_finite, normalize_angle, unit, ComplexPoint};

/// The half-plane `{ z : Re(1 - e^{-i vartheta} z) > 0 }` bounded by the
/// tangent line of the unit circle at `e^{i vartheta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentHalfPlane {
    vartheta: f64,
}

impl TangentHalfPlane {
    pub fn new(vartheta: f64) -> Self {
        Self {
            vartheta: normalize_angle(vartheta),
        }
    }

    pub fn vartheta(&self) -> f64 {
        self.vartheta
    }

    pub fn contains(&self, z: ComplexPoint) -> bool {
        (1.0 - unit(-self.vartheta) * z).re > 0.0
    }
}

/// The open disk `K(z0, R)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskDomain {
    pub center: ComplexPoint,
    pub radius: f64,
}

impl DiskDomain {
    pub fn new(center: ComplexPoint, radius: f64) -> Result<Self> {
        ensure_finite("center", center)?;
        if !(radius.is_finite() && radius > 0.0) {
            return Err(crate::error::invalid(format!(
                "disk radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn unit() -> Self {
        Self {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    pub fn contains(&self, z: ComplexPoint) -> bool {
        (z - self.center).norm() < self.radius
    }
}

pub(crate) fn check_in_unit_disk(z: ComplexPoint) -> Result<()> {
    ensure_finite("point", z)?;
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("{z} is not inside the open unit disk")))
    }
}

pub(crate) fn check_in_upper_half_plane(z: ComplexPoint) -> Result<()> {
    ensure_finite("point", z)?;
    if z.im > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{z} is not in the upper half-plane")))
    }
}

/// `|u - v| / |1 - u conj(v)|`.
pub fn tanh_half_rho_unit_disk(u: ComplexPoint, v: ComplexPoint) -> Result<f64> {
    check_in_unit_disk(u)?;
    check_in_unit_disk(v)?;
    Ok((u - v).norm() / (1.0 - u * v.conj()).norm())
}

/// `|u - v| / |u - conj(v)|`.
pub fn tanh_half_rho_halfplane(u: ComplexPoint, v: ComplexPoint) -> Result<f64> {
    check_in_upper_half_plane(u)?;
    check_in_upper_half_plane(v)?;
    Ok((u - v).norm() / (u - v.conj()).norm())
}

/// `R |u - v| / |R^2 - (u - z0)(conj(v) - conj(z0))|`.
pub fn tanh_half_rho_disk(d: &DiskDomain, u: ComplexPoint, v: ComplexPoint) -> Result<f64> {
    for z in [u, v] {
        ensure_finite("point", z)?;
        if !d.contains(z) {
            return Err(domain(format!(
                "{z} is not inside the disk |z - {}| < {}",
                d.center, d.radius
            )));
        }
    }
    let r = d.radius;
    let den = (r * r - (u - d.center) * (v - d.center).conj()).norm();
    Ok(r * (u - v).norm() / den)
}

/// `|z1 - z2| / |2 - e^{-i vartheta} z1 - e^{i vartheta} conj(z2)|`.
pub fn tanh_half_rho_tangent(h: &TangentHalfPlane, z1: ComplexPoint, z2: ComplexPoint) -> Result<f64> {
    for z in [z1, z2] {
        ensure_finite("point", z)?;
        if !h.contains(z) {
            return Err(domain(format!(
                "{z} is not in the tangent half-plane at angle {}",
                h.vartheta
            )));
        }
    }
    // 2 - x - conj(y) for x = e^{-i vartheta} z1, y = e^{-i vartheta} z2,
    // grouped so that swapping the points conjugates it exactly
    let e = unit(-h.vartheta);
    let (x, y) = (e * z1, e * z2);
    let den = Complex64::new(2.0 - (x.re + y.re), y.im - x.im).norm();
    Ok((z1 - z2).norm() / den)
}

/// `rho = 2 artanh(t)` for `0 <= t < 1`.
pub fn rho_from_tanh_half(t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t) {
        return Err(domain(format!("th(rho/2) must lie in [0, 1), got {t}")));
    }
    Ok(2.0 * t.atanh())
}
