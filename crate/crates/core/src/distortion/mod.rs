//! Distortion of `s_U` under `f(z) = (z + a) / (1 + a z)`.
//!
//! For `w_k = f(z_k)` the ratio `s_U(w1, w2) / s_U(z1, z2)` lies in
//! `[1 / (1 + a), 1 + a]`. If `e^{i phi}` is a contact point of the maximal
//! focal ellipse of `(w1, w2)`, the upper bound improves to
//! `1 + a (cos(phi) - a) / (1 - a cos(phi))` when `cos(phi) >= a`, and to `1`
//! otherwise.
//!
//! [`proof_terms`] evaluates the intermediate quantities of the internal
//! tangency argument (the preimage circle radius `R`, the proof ellipse
//! minimum `r`, and the complex numbers `A`, `B`) so each inequality can be
//! checked numerically.

mod sharpness;
mod suite;

pub use sharpness::{sharpness_search, SharpnessResult, TracePoint};
pub use suite::{
    child_seed, run_proof_suite, run_suite, sample_point, ProofSuiteOutcome, StratumSummary,
    SuiteConfig, SuiteOutcome, TrialViolation, DEFAULT_STRATA,
};

use serde::Serialize;

use crate::ellipse::{maximal_inscribed_ellipse, proof_ellipse, zeta};
use crate::error::{invalid, Error, Result};
use crate::geometry::{ensure_finite, point_serde, unit, ComplexPoint, MoebiusMap, TangencyKind};
use crate::hyperbolic::{check_in_unit_disk, tanh_half_rho_disk, DiskDomain};
use crate::trimetric::s_unit_disk;

/// Default violation tolerance on ratios.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Slack allowed for `bound_cor3 <= 1 + a`.
pub const REFINED_SLACK: f64 = 1e-12;

/// `1 + a (cos(phi) - a) / (1 - a cos(phi))` if `cos(phi) >= a`, else `1`.
pub fn refined_constant(a: f64, phi: f64) -> f64 {
    let c = phi.cos();
    if c >= a {
        1.0 + a * (c - a) / (1.0 - a * c)
    } else {
        1.0
    }
}

/// A contact point of the image pair's maximal ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContactBound {
    pub phi: f64,
    pub tangency: TangencyKind,
    pub refined_constant: f64,
}

/// Which inequality a trial broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    /// `ratio > 1 + a + tol`
    UpperBound,
    /// `ratio < 1 / (1 + a) - tol`
    LowerBound,
    /// `ratio > bound_cor3 + tol`
    RefinedBound,
    /// `bound_cor3 > 1 + a + 1e-12`
    RefinedExceedsUpper,
    /// all contacts external or line and `ratio > 1 + tol`
    ExternalCase,
}

/// One distortion trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionReport {
    pub a: f64,
    #[serde(with = "point_serde")]
    pub z1: ComplexPoint,
    #[serde(with = "point_serde")]
    pub z2: ComplexPoint,
    #[serde(with = "point_serde")]
    pub w1: ComplexPoint,
    #[serde(with = "point_serde")]
    pub w2: ComplexPoint,
    pub s_before: f64,
    pub s_after: f64,
    pub ratio: f64,
    /// `1 + a`
    pub bound_thm1: f64,
    /// `1 / (1 + a)`
    pub bound_lower: f64,
    /// Largest refined constant over all contacts of `(w1, w2)`.
    pub bound_cor3: f64,
    /// Smallest contact angle of `(w1, w2)`.
    pub phi: f64,
    pub tangency: TangencyKind,
    pub contacts: Vec<ContactBound>,
    /// Bound minus ratio, for the bound the producing check targets.
    pub margin: f64,
    /// `ratio - 1 / (1 + a)`.
    pub margin_lower: f64,
    pub violations: Vec<Violation>,
}

impl DistortionReport {
    /// Every contact of the image pair has a non-internal preimage.
    pub fn external_case(&self) -> bool {
        self.contacts
            .iter()
            .all(|c| c.tangency != TangencyKind::Internal)
    }

    fn flag(&mut self, v: Violation, hit: bool) {
        if hit && !self.violations.contains(&v) {
            self.violations.push(v);
        }
    }

    /// Flags the two-sided bound `1/(1+a) <= ratio <= 1+a`.
    pub fn check_bounds(&mut self, tol: f64) {
        self.flag(Violation::UpperBound, self.ratio > self.bound_thm1 + tol);
        self.flag(Violation::LowerBound, self.ratio < self.bound_lower - tol);
    }

    /// Flags the refined bound and its consistency with `1 + a`.
    pub fn check_refined(&mut self, tol: f64) {
        self.flag(Violation::RefinedBound, self.ratio > self.bound_cor3 + tol);
        self.flag(
            Violation::RefinedExceedsUpper,
            self.bound_cor3 > self.bound_thm1 + REFINED_SLACK,
        );
        self.flag(
            Violation::ExternalCase,
            self.external_case() && self.ratio > 1.0 + tol,
        );
    }
}

fn check_pair(z1: ComplexPoint, z2: ComplexPoint) -> Result<()> {
    ensure_finite("z1", z1)?;
    ensure_finite("z2", z2)?;
    check_in_unit_disk(z1).map_err(|e| invalid(e.to_string()))?;
    check_in_unit_disk(z2).map_err(|e| invalid(e.to_string()))?;
    if z1 == z2 {
        return Err(invalid("z1 and z2 must differ"));
    }
    Ok(())
}

/// Computes every field of a report without flagging anything.
pub fn evaluate(a: f64, z1: ComplexPoint, z2: ComplexPoint) -> Result<DistortionReport> {
    let m = MoebiusMap::new(a)?;
    check_pair(z1, z2)?;
    let w1 = m.apply(z1)?;
    let w2 = m.apply(z2)?;
    let before = s_unit_disk(z1, z2)?;
    let image = maximal_inscribed_ellipse(w1, w2)?;
    let s_after = m.image_difference(z1, z2)?.norm() / image.ellipse.distance_sum;
    let contacts: Vec<ContactBound> = image
        .contacts
        .iter()
        .map(|&phi| ContactBound {
            phi,
            tangency: m.classify_tangency(phi),
            refined_constant: refined_constant(a, phi),
        })
        .collect();
    let bound_cor3 = contacts
        .iter()
        .map(|c| c.refined_constant)
        .fold(f64::NEG_INFINITY, f64::max);
    let phi = contacts[0].phi;
    let ratio = s_after / before.value;
    Ok(DistortionReport {
        a,
        z1,
        z2,
        w1,
        w2,
        s_before: before.value,
        s_after,
        ratio,
        bound_thm1: 1.0 + a,
        bound_lower: 1.0 / (1.0 + a),
        bound_cor3,
        phi,
        tangency: contacts[0].tangency,
        contacts,
        margin: 1.0 + a - ratio,
        margin_lower: ratio - 1.0 / (1.0 + a),
        violations: Vec::new(),
    })
}

/// Evaluates a pair and flags violations of `1/(1+a) <= ratio <= 1+a`.
pub fn distortion_trial(a: f64, z1: ComplexPoint, z2: ComplexPoint, tol: f64) -> Result<DistortionReport> {
    let mut r = evaluate(a, z1, z2)?;
    r.check_bounds(tol);
    Ok(r)
}

/// Evaluates a pair against the refined contact-dependent bound. The margin
/// is measured against `bound_cor3`.
pub fn refined_trial(a: f64, z1: ComplexPoint, z2: ComplexPoint, tol: f64) -> Result<DistortionReport> {
    let mut r = evaluate(a, z1, z2)?;
    r.margin = r.bound_cor3 - r.ratio;
    r.check_refined(tol);
    Ok(r)
}

/// Intermediate quantities of the internal-tangency estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProofTermReport {
    /// Contact angle of the image pair.
    pub phi: f64,
    /// `e^{i theta} = f^{-1}(e^{i phi})`.
    pub theta: f64,
    /// Contact angle of the original pair.
    pub psi: f64,
    pub eta: f64,
    /// Radius of the preimage circle of the supporting line at `e^{i phi}`.
    #[serde(rename = "R")]
    pub big_r: f64,
    /// `|zeta_1(psi) + conj(zeta_2(psi))|`.
    pub r: f64,
    pub a_mod: f64,
    pub b_mod: f64,
    pub a_minus_b_mod: f64,
    /// `|A|`
    pub lhs_c: f64,
    /// `R r / (2R - 1)`
    pub rhs_c: f64,
    /// `|B|`
    pub lhs_d: f64,
    /// `r / (2 (2R - 1))`
    pub rhs_d: f64,
    /// `| |(1 - R) e^{i theta} + 1/a| - R |`
    pub r1_residual: f64,
    /// `(1 + 1/a) / 2`
    pub r_lower: f64,
    /// `2R / (2R - 1)`
    pub constant: f64,
    pub one_plus_a: f64,
    /// `th(rho / 2)` of `(z1, z2)` in the preimage disk of the tangent half-plane.
    pub tanh_preimage_disk: f64,
    pub s_after: f64,
}

impl ProofTermReport {
    /// Names of the inequalities that fail at tolerance `tol`.
    pub fn failures(&self, tol: f64) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.r1_residual > tol {
            out.push("R1_residual");
        }
        if self.big_r < self.r_lower - tol {
            out.push("R_lower_bound");
        }
        if self.constant > self.one_plus_a + tol {
            out.push("constant_le_1_plus_a");
        }
        if self.lhs_c < self.rhs_c - tol {
            out.push("A_lower_bound");
        }
        if self.lhs_d > self.rhs_d + tol {
            out.push("B_upper_bound");
        }
        if self.a_minus_b_mod < 0.5 * self.r - tol {
            out.push("A_minus_B_lower_bound");
        }
        out
    }
}

/// Evaluates the internal-tangency estimate for `(z1, z2)`.
///
/// Fails with [`Error::NotApplicable`] when the image contact has an external
/// or straight-line preimage.
pub fn proof_terms(a: f64, z1: ComplexPoint, z2: ComplexPoint) -> Result<ProofTermReport> {
    let m = MoebiusMap::new(a)?;
    check_pair(z1, z2)?;
    let w1 = m.apply(z1)?;
    let w2 = m.apply(z2)?;
    let image = maximal_inscribed_ellipse(w1, w2)?;
    let phi = image.contacts[0];
    let kind = m.classify_tangency(phi);
    if kind != TangencyKind::Internal {
        return Err(Error::NotApplicable(format!(
            "image contact at phi = {phi} has {} tangency",
            kind.as_str()
        )));
    }
    let theta = m.theta_from_phi(phi)?;
    let big_r = m.circle_radius(theta)?;
    let pe = proof_ellipse(z1, z2)?;
    let (psi, r) = (pe.psi, pe.r);

    let k = 2.0 * big_r - 1.0;
    let at_theta = zeta(z1, theta) + zeta(z2, theta).conj();
    let at_psi = zeta(z1, psi) + zeta(z2, psi).conj();
    let big_a = at_theta * ((big_r - 1.0) / k) + at_psi / k;
    let big_b = zeta(z1, psi) * zeta(z2, psi).conj() / k;

    let center = unit(theta) * (1.0 - big_r);
    let disk = DiskDomain::new(center, big_r)?;
    let tanh_preimage_disk = tanh_half_rho_disk(&disk, z1, z2)?;

    Ok(ProofTermReport {
        phi,
        theta,
        psi,
        eta: pe.eta,
        big_r,
        r,
        a_mod: big_a.norm(),
        b_mod: big_b.norm(),
        a_minus_b_mod: (big_a - big_b).norm(),
        lhs_c: big_a.norm(),
        rhs_c: big_r * r / k,
        lhs_d: big_b.norm(),
        rhs_d: r / (2.0 * k),
        r1_residual: ((center + 1.0 / a).norm() - big_r).abs(),
        r_lower: 0.5 * (1.0 + 1.0 / a),
        constant: 2.0 * big_r / k,
        one_plus_a: 1.0 + a,
        tanh_preimage_disk,
        s_after: m.image_difference(z1, z2)?.norm() / image.ellipse.distance_sum,
    })
}
