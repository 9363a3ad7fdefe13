//! Complex-plane primitives and the canonical automorphism of the unit disk.
//!
//! The automorphism is `f(z) = (z + a) / (1 + a z)` with `0 <= a < 1`. It maps
//! the unit disk `U` onto itself, fixes `+1` and `-1`, and sends `-1/a` to
//! infinity. The preimage under `f` of the supporting line of `U` at `e^{i phi}`
//! is a generalized circle tangent to the unit circle at `e^{i theta}`, where
//! `e^{i theta} = f^{-1}(e^{i phi})`, and passing through `-1/a`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, invalid, Result};

/// A point of the plane. All operations reject non-finite coordinates.
pub type ComplexPoint = Complex64;

/// Tolerance on `cos(phi) - a` below which a supporting line is classified
/// as having a straight-line preimage.
pub const TANGENCY_EPS: f64 = 1e-12;

/// Slack allowed when checking `|z| <= 1` for boundary points.
const BOUNDARY_SLACK: f64 = 1e-12;

pub(crate) fn ensure_finite(what: &str, z: ComplexPoint) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{what} is not finite: {z}")))
    }
}

pub(crate) fn ensure_finite_real(what: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{what} is not finite: {x}")))
    }
}

/// Reduces an angle to `[0, 2pi)`. Values that round to `2pi` map to `0`.
pub fn normalize_angle(x: f64) -> f64 {
    let t = x.rem_euclid(TAU);
    if TAU - t < 1e-13 {
        0.0
    } else {
        t
    }
}

/// Distance between two angles measured along the circle, in `[0, pi]`.
pub fn angular_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(TAU);
    d.min(TAU - d)
}

/// `e^{i t}`.
#[inline]
pub fn unit(t: f64) -> ComplexPoint {
    Complex64::from_polar(1.0, t)
}

/// Serde adapter writing a point as `{"re": .., "im": ..}`.
pub mod point_serde {
    use super::ComplexPoint;
    use serde::ser::SerializeStruct;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &ComplexPoint, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ComplexPoint", 2)?;
        st.serialize_field("re", &z.re)?;
        st.serialize_field("im", &z.im)?;
        st.end()
    }
}

/// Serde adapter for a list of points, see [`point_serde`].
pub mod points_serde {
    use super::ComplexPoint;
    use serde::ser::SerializeSeq;
    use serde::{Serialize, Serializer};

    struct Wrap<'a>(&'a ComplexPoint);

    impl Serialize for Wrap<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            super::point_serde::serialize(self.0, s)
        }
    }

    pub fn serialize<S: Serializer>(zs: &[ComplexPoint], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(zs.len()))?;
        for z in zs {
            seq.serialize_element(&Wrap(z))?;
        }
        seq.end()
    }
}

/// How the preimage of a supporting line meets the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TangencyKind {
    /// A circle containing the unit disk.
    Internal,
    /// A circle lying outside the unit disk.
    External,
    /// A straight line.
    Line,
}

impl TangencyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TangencyKind::Internal => "internal",
            TangencyKind::External => "external",
            TangencyKind::Line => "line",
        }
    }
}

/// A line or a circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneralizedCircle {
    Line {
        point: ComplexPoint,
        /// Unit modulus.
        unit_direction: ComplexPoint,
    },
    Circle {
        center: ComplexPoint,
        /// Strictly positive.
        radius: f64,
    },
}

impl GeneralizedCircle {
    /// Euclidean distance from `z` to the curve.
    pub fn distance_to(&self, z: ComplexPoint) -> f64 {
        match *self {
            GeneralizedCircle::Line {
                point,
                unit_direction,
            } => {
                let d = (z - point) * unit_direction.conj();
                d.im.abs()
            }
            GeneralizedCircle::Circle { center, radius } => ((z - center).norm() - radius).abs(),
        }
    }
}

/// The canonical automorphism `z -> (z + a) / (1 + a z)` of the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoebiusMap {
    a: f64,
}

impl MoebiusMap {
    pub fn new(a: f64) -> Result<Self> {
        ensure_finite_real("a", a)?;
        if !(0.0..1.0).contains(&a) {
            return Err(invalid(format!("a must lie in [0, 1), got {a}")));
        }
        Ok(Self { a })
    }

    pub fn identity() -> Self {
        Self { a: 0.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    fn check_closed_disk(z: ComplexPoint) -> Result<()> {
        if z.norm() > 1.0 + BOUNDARY_SLACK {
            return Err(domain(format!("{z} lies outside the closed unit disk")));
        }
        Ok(())
    }

    /// `f(z) = (z + a) / (1 + a z)` for `|z| <= 1`.
    pub fn apply(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        ensure_finite("z", z)?;
        Self::check_closed_disk(z)?;
        Ok((z + self.a) / (1.0 + z * self.a))
    }

    /// `f^{-1}(w) = (w - a) / (1 - a w)` for `|w| <= 1`.
    pub fn inverse(&self, w: ComplexPoint) -> Result<ComplexPoint> {
        ensure_finite("w", w)?;
        Self::check_closed_disk(w)?;
        Ok((w - self.a) / (1.0 - w * self.a))
    }

    /// `f(z1) - f(z2) = (1 - a^2)(z1 - z2) / ((1 + a z1)(1 + a z2))`, free of
    /// the cancellation in subtracting two nearby images.
    pub fn image_difference(&self, z1: ComplexPoint, z2: ComplexPoint) -> Result<ComplexPoint> {
        for z in [z1, z2] {
            ensure_finite("z", z)?;
            Self::check_closed_disk(z)?;
        }
        let a = self.a;
        Ok((1.0 - a * a) * (z1 - z2) / ((1.0 + z1 * a) * (1.0 + z2 * a)))
    }

    /// The angle `theta` in `[0, 2pi)` with `e^{i theta} = f^{-1}(e^{i phi})`.
    pub fn theta_from_phi(&self, phi: f64) -> Result<f64> {
        ensure_finite_real("phi", phi)?;
        let w = unit(phi);
        let z = (w - self.a) / (1.0 - w * self.a);
        Ok(normalize_angle(z.arg()))
    }

    /// Classifies the preimage of the supporting line at `e^{i phi}`.
    ///
    /// The line passes through the pole image `1/a` iff `cos(phi) = a`; the
    /// preimage is then a straight line. For `a = 0` the map is the identity
    /// and every preimage is the supporting line itself.
    pub fn classify_tangency(&self, phi: f64) -> TangencyKind {
        if self.a == 0.0 {
            return TangencyKind::Line;
        }
        let gap = phi.cos() - self.a;
        if gap > TANGENCY_EPS {
            TangencyKind::Internal
        } else if gap < -TANGENCY_EPS {
            TangencyKind::External
        } else {
            TangencyKind::Line
        }
    }

    /// Radius `R` of the preimage circle for an internal tangency at `e^{i theta}`:
    /// `R = (1 + 2a cos(theta) + a^2) / (2a (a + cos(theta)))`.
    ///
    /// The circle has center `(1 - R) e^{i theta}` and passes through `-1/a`.
    pub fn circle_radius(&self, theta: f64) -> Result<f64> {
        ensure_finite_real("theta", theta)?;
        if self.a == 0.0 {
            return Err(domain("a = 0 has no preimage circle"));
        }
        let c = theta.cos();
        if c <= -self.a {
            return Err(domain(format!(
                "cos(theta) = {c} <= -a = {}: no internal tangency circle",
                -self.a
            )));
        }
        Ok(signed_radius(self.a, c))
    }

    /// Preimage `Gamma_theta` of the supporting line at `e^{i phi}` together with
    /// its tangency angle `theta`.
    pub fn preimage_of_supporting_line(&self, phi: f64) -> Result<(GeneralizedCircle, f64)> {
        ensure_finite_real("phi", phi)?;
        let theta = self.theta_from_phi(phi)?;
        let touch = unit(theta);
        let line = GeneralizedCircle::Line {
            point: touch,
            unit_direction: touch * Complex64::i(),
        };
        if self.classify_tangency(phi) == TangencyKind::Line {
            return Ok((line, theta));
        }
        // Signed radius: positive for internal tangency, negative for external.
        // In both cases the center is (1 - R) e^{i theta}.
        let r = signed_radius(self.a, theta.cos());
        Ok((
            GeneralizedCircle::Circle {
                center: touch * (1.0 - r),
                radius: r.abs(),
            },
            theta,
        ))
    }
}

fn signed_radius(a: f64, cos_theta: f64) -> f64 {
    (1.0 + 2.0 * a * cos_theta + a * a) / (2.0 * a * (a + cos_theta))
}
