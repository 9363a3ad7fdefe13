//! General automorphisms `g(z) = e^{i beta} (z - z0) / (1 - conj(z0) z)` of
//! the unit disk and their reduction to the canonical map.
//!
//! With `z0 = a e^{i gamma}`, substituting `z = e^{i gamma} x` gives
//! `g(z) = e^{i(beta + gamma)} (x - a) / (1 - a x)`, and
//! `(x - a) / (1 - a x) = -f_a(-x)` for `f_a(x) = (x + a) / (1 + a x)`. So
//!
//! ```text
//! g(z) = e^{i post} f_a(e^{i pre} z),  pre = pi - gamma,  post = beta + gamma + pi.
//! ```
//!
//! Rotations are isometries of `s_U`, so the distortion of `g` equals that of
//! `f_a` on the pre-rotated pair.

use std::f64::consts::PI;

use serde::Serialize;
use trimetric_core::geometry::{normalize_angle, unit};
use trimetric_core::{ComplexPoint, MoebiusMap};

use crate::error::{usage, CliError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskAutomorphism {
    pub z0: ComplexPoint,
    pub beta: f64,
}

/// `g = rot(post) . f_a . rot(pre)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalForm {
    pub a: f64,
    pub pre_rotation: f64,
    pub post_rotation: f64,
}

impl DiskAutomorphism {
    pub fn new(z0: ComplexPoint, beta: f64) -> Result<Self, CliError> {
        if !(z0.re.is_finite() && z0.im.is_finite() && beta.is_finite()) {
            return Err(usage("automorphism parameters must be finite"));
        }
        if z0.norm() >= 1.0 {
            return Err(usage(format!("z0 = {z0} must lie inside the unit disk")));
        }
        Ok(Self { z0, beta })
    }

    /// The canonical map `f_a` itself, `z0 = -a`.
    pub fn canonical(a: f64) -> Result<Self, CliError> {
        Self::new(ComplexPoint::new(-a, 0.0), 0.0)
    }

    pub fn apply(&self, z: ComplexPoint) -> ComplexPoint {
        unit(self.beta) * (z - self.z0) / (1.0 - self.z0.conj() * z)
    }

    pub fn reduce(&self) -> CanonicalForm {
        let a = self.z0.norm();
        let gamma = if a == 0.0 { 0.0 } else { self.z0.arg() };
        CanonicalForm {
            a,
            pre_rotation: normalize_angle(PI - gamma),
            post_rotation: normalize_angle(self.beta + gamma + PI),
        }
    }
}

impl CanonicalForm {
    pub fn apply(&self, z: ComplexPoint) -> trimetric_core::Result<ComplexPoint> {
        let m = MoebiusMap::new(self.a)?;
        Ok(unit(self.post_rotation) * m.apply(unit(self.pre_rotation) * z)?)
    }
}
