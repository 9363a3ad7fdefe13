//! Maximal inscribed focal ellipses in the unit disk.
//!
//! The largest ellipse with foci `z1`, `z2` inside `U` has distance sum equal
//! to `inf_{|w| = 1} (|w - z1| + |w - z2|)` and touches the unit circle at the
//! minimizers. At a contact `w` the inward normal bisects the angle between
//! `w -> z1` and `w -> z2`.
//!
//! The auxiliary curve `zeta_1(t) + conj(zeta_2(t))` with
//! `zeta_k(t) = 1 - e^{-it} z_k` is itself an ellipse; its closest point to the
//! origin has modulus `r` equal to the same infimum and is reached at the
//! contact angle `psi`.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::geometry::{angular_distance, ensure_finite, normalize_angle, point_serde, unit, ComplexPoint};
use crate::hyperbolic::check_in_unit_disk;
use crate::trimetric::{global_contacts, s_unit_disk};

/// Points `w` with `|w - focus1| + |w - focus2| = distance_sum`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FocalEllipse {
    #[serde(with = "point_serde")]
    pub focus1: ComplexPoint,
    #[serde(with = "point_serde")]
    pub focus2: ComplexPoint,
    pub distance_sum: f64,
}

impl FocalEllipse {
    pub fn center(&self) -> ComplexPoint {
        (self.focus1 + self.focus2) * 0.5
    }

    pub fn semi_major(&self) -> f64 {
        0.5 * self.distance_sum
    }

    pub fn semi_minor(&self) -> f64 {
        let a = self.semi_major();
        let c = 0.5 * (self.focus1 - self.focus2).norm();
        (a * a - c * c).max(0.0).sqrt()
    }

    /// Boundary point at eccentric anomaly `t`.
    pub fn point(&self, t: f64) -> ComplexPoint {
        let d = self.focus2 - self.focus1;
        let axis = if d.norm() > 0.0 { d / d.norm() } else { unit(0.0) };
        self.center() + axis * ComplexPoint::new(self.semi_major() * t.cos(), self.semi_minor() * t.sin())
    }

    /// `n` boundary points at equally spaced eccentric anomalies.
    pub fn sample(&self, n: usize) -> Vec<ComplexPoint> {
        (0..n)
            .map(|k| self.point(k as f64 * std::f64::consts::TAU / n as f64))
            .collect()
    }
}

/// The maximal focal ellipse inside `U` and the angles where it touches the
/// unit circle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InscribedEllipse {
    pub ellipse: FocalEllipse,
    /// Contact angles in `[0, 2pi)`, ascending.
    pub contacts: Vec<f64>,
    /// Set when the foci coincide. The ellipse is then a circle; for foci at
    /// the origin it touches along the whole circle and only angle 0 is listed.
    pub degenerate: bool,
}

/// Maximal ellipse with foci `z1`, `z2` contained in the unit disk.
pub fn maximal_inscribed_ellipse(z1: ComplexPoint, z2: ComplexPoint) -> Result<InscribedEllipse> {
    check_in_unit_disk(z1)?;
    check_in_unit_disk(z2)?;
    if z1 == z2 {
        let contact = s_unit_disk(z1, z2)?.contact;
        return Ok(InscribedEllipse {
            ellipse: FocalEllipse {
                focus1: z1,
                focus2: z2,
                distance_sum: contact.value,
            },
            contacts: vec![contact.witness_angle.unwrap_or(0.0)],
            degenerate: true,
        });
    }
    let contacts = global_contacts(z1, z2);
    let distance_sum = contacts
        .iter()
        .map(|m| m.value)
        .fold(f64::INFINITY, f64::min);
    Ok(InscribedEllipse {
        ellipse: FocalEllipse {
            focus1: z1,
            focus2: z2,
            distance_sum,
        },
        contacts: contacts.iter().map(|m| m.angle).collect(),
        degenerate: false,
    })
}

/// `|angle(n, w -> u) - angle(n, w -> v)|` for the inward normal `n = -w` at a
/// boundary point `w`. Zero exactly when the reflection law holds at `w`.
pub fn bisector_residual(w: ComplexPoint, u: ComplexPoint, v: ComplexPoint) -> Result<f64> {
    ensure_finite("w", w)?;
    check_in_unit_disk(u)?;
    check_in_unit_disk(v)?;
    if (w.norm() - 1.0).abs() > 1e-10 {
        return Err(domain(format!("{w} is not on the unit circle")));
    }
    if w == u || w == v {
        return Err(domain("boundary point coincides with a focus"));
    }
    let normal = -w;
    let angle_to = |p: ComplexPoint| ((p - w) * normal.conj()).arg().abs();
    Ok((angle_to(u) - angle_to(v)).abs())
}

/// `zeta_k(t) = 1 - e^{-it} z_k`.
pub fn zeta(z: ComplexPoint, t: f64) -> ComplexPoint {
    1.0 - unit(-t) * z
}

/// Point of the proof ellipse `zeta_1(t) + conj(zeta_2(t))`.
pub fn proof_ellipse_point(z1: ComplexPoint, z2: ComplexPoint, t: f64) -> ComplexPoint {
    zeta(z1, t) + zeta(z2, t).conj()
}

/// Closest approach of the proof ellipse to the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProofEllipseData {
    /// `min_t |zeta_1(t) + conj(zeta_2(t))|`.
    pub r: f64,
    /// Argument of the closest point `r e^{i eta}`.
    pub eta: f64,
    /// Minimizing parameter, smallest in `[0, 2pi)` on ties.
    pub psi: f64,
}

/// `r`, `eta` and `psi` for the proof ellipse of `(z1, z2)`. When
/// `z1 = z2 = 0` the curve is the single point 2.
pub fn proof_ellipse(z1: ComplexPoint, z2: ComplexPoint) -> Result<ProofEllipseData> {
    check_in_unit_disk(z1)?;
    check_in_unit_disk(z2)?;
    if z1.norm() == 0.0 && z2.norm() == 0.0 {
        return Ok(ProofEllipseData {
            r: 2.0,
            eta: 0.0,
            psi: 0.0,
        });
    }
    let contacts = global_contacts(z1, z2);
    let psi = contacts[0].angle;
    let point = proof_ellipse_point(z1, z2, psi);
    Ok(ProofEllipseData {
        r: contacts.iter().map(|m| m.value).fold(f64::INFINITY, f64::min),
        eta: normalize_angle(point.arg()),
        psi,
    })
}

/// `|arg zeta_1(psi) - arg conj(zeta_2(psi))|` folded to `[0, pi]`.
pub fn same_argument_residual(z1: ComplexPoint, z2: ComplexPoint, psi: f64) -> Result<f64> {
    ensure_finite("z1", z1)?;
    ensure_finite("z2", z2)?;
    let a = zeta(z1, psi);
    let b = zeta(z2, psi).conj();
    if a.norm() <= f64::EPSILON || b.norm() <= f64::EPSILON {
        return Err(domain("a focus lies on the unit circle at the given angle"));
    }
    Ok(angular_distance(a.arg(), b.arg()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> ComplexPoint {
        Complex64::new(re, im)
    }

    #[test]
    fn ellipse_examples() {
        let e = maximal_inscribed_ellipse(c(0.5, 0.0), c(-0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(e.ellipse.distance_sum, 2.0, epsilon = 1e-14);
        assert_eq!(e.contacts.len(), 2);
        assert_abs_diff_eq!(e.contacts[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.contacts[1], PI, epsilon = 1e-12);
        assert_abs_diff_eq!(e.ellipse.semi_major(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.ellipse.semi_minor(), 0.75f64.sqrt(), epsilon = 1e-14);
        assert!(!e.degenerate);

        let e = maximal_inscribed_ellipse(c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(e.ellipse.distance_sum, 2.0);
        assert_eq!(e.contacts, vec![0.0]);
        assert!(e.degenerate);

        let e = maximal_inscribed_ellipse(c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(e.ellipse.distance_sum, 1.5, epsilon = 1e-15);
        assert_eq!(e.contacts, vec![0.0]);

        assert!(maximal_inscribed_ellipse(c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn ellipse_stays_in_closed_disk() {
        for &(z1, z2) in &[(c(0.5, 0.0), c(-0.5, 0.0)), (c(0.3, 0.6), c(-0.2, -0.1)), (c(0.95, 0.0), c(0.0, 0.9))] {
            let e = maximal_inscribed_ellipse(z1, z2).unwrap();
            let max = e.ellipse.sample(720).iter().map(|p| p.norm()).fold(0.0, f64::max);
            assert!(max <= 1.0 + 1e-9, "{max}");
        }
    }

    #[test]
    fn bisector_examples() {
        let w = c(1.0, 0.0);
        assert_abs_diff_eq!(bisector_residual(w, c(0.0, 0.5), c(0.0, -0.5)).unwrap(), 0.0, epsilon = 1e-15);
        assert_eq!(bisector_residual(w, c(0.0, 0.0), c(0.5, 0.0)).unwrap(), 0.0);
        assert!(bisector_residual(c(0.5, 0.0), c(0.0, 0.0), c(0.1, 0.0)).is_err());
        assert!(bisector_residual(c(2.0, 0.0), c(0.0, 0.0), c(0.1, 0.0)).is_err());
    }

    #[test]
    fn proof_ellipse_examples() {
        let d = proof_ellipse(c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(d.r, 1.5, epsilon = 1e-15);
        assert_eq!(d.psi, 0.0);
        assert_abs_diff_eq!(d.eta, 0.0);

        let d = proof_ellipse(c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!((d.r, d.psi, d.eta), (2.0, 0.0, 0.0));

        let d = proof_ellipse(c(0.5, 0.0), c(-0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(d.r, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.psi, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn same_argument_examples() {
        assert_eq!(same_argument_residual(c(0.0, 0.0), c(0.5, 0.0), 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            same_argument_residual(c(0.0, 0.5), c(0.0, -0.5), 0.0).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert!(same_argument_residual(c(1.0, 0.0), c(0.0, 0.0), 0.0).is_err());
    }
}
