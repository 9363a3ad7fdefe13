use std::f64::consts::TAU;

use clap::ValueEnum;
use serde::Serialize;
use trimetric_core::distortion::{
    refined_constant, refined_trial, run_suite, sharpness_search, DistortionReport, SharpnessResult,
    StratumSummary, SuiteConfig, DEFAULT_STRATA,
};
use trimetric_core::ellipse::{maximal_inscribed_ellipse, proof_ellipse, InscribedEllipse, ProofEllipseData};
use trimetric_core::hyperbolic::{tanh_half_rho_disk, tanh_half_rho_halfplane, tanh_half_rho_unit_disk, DiskDomain};
use trimetric_core::trimetric::{
    s_convex_polygon, s_disk, s_halfplane, s_unit_disk, s_via_supporting_halfplanes, BoundaryInfResult,
    ConvexPolygon,
};
use trimetric_core::{ComplexPoint, MoebiusMap, TangencyKind};

use crate::args::{ComputeArgs, DomainKind, Format, ScanArgs, SharpnessArgs, VerifyArgs};
use crate::automorphism::{CanonicalForm, DiskAutomorphism};
use crate::error::{usage, CliError};
use crate::point::Point;
use crate::report::{num, to_csv, to_json, Document};

/// Encoded report plus whether a mathematical violation was found.
#[derive(Debug)]
pub struct Output {
    pub bytes: Vec<u8>,
    pub violation: bool,
}

#[derive(Serialize)]
struct Config<'a, A> {
    command: &'static str,
    #[serde(flatten)]
    args: &'a A,
}

fn check_a(a: f64, allow_zero: bool) -> Result<(), CliError> {
    let lo_ok = if allow_zero { a >= 0.0 } else { a > 0.0 };
    if a.is_finite() && lo_ok && a < 1.0 {
        Ok(())
    } else if allow_zero {
        Err(usage(format!("--a must lie in [0, 1), got {a}")))
    } else {
        Err(usage(format!("--a must lie in (0, 1), got {a}")))
    }
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(usage(format!("--tol must be positive, got {tol}")))
    }
}

// ---------------------------------------------------------------- compute

#[derive(Debug, Serialize)]
struct MappedDistortion {
    z0: Point,
    beta: f64,
    canonical: CanonicalForm,
    /// `g(z1)`, `g(z2)` for the map as given.
    w1: Point,
    w2: Point,
    /// Report for the canonical map on the pre-rotated pair.
    report: DistortionReport,
}

#[derive(Debug, Serialize)]
struct ComputeResult {
    domain: DomainKind,
    z1: Point,
    z2: Point,
    s: f64,
    contact: Option<BoundaryInfResult>,
    tanh_half_rho: Option<f64>,
    /// Polygon only: the supremum over the edge half-planes.
    supporting_half_plane_sup: Option<f64>,
    ellipse: Option<InscribedEllipse>,
    proof_ellipse: Option<ProofEllipseData>,
    distortion: Option<MappedDistortion>,
}

#[derive(Debug, Serialize)]
struct ComputeSummary {
    s: f64,
    psi: Option<f64>,
    ratio: Option<f64>,
    bound: Option<f64>,
}

/// Boundary contact in the upper half-plane: the segment from `u` to
/// `conj(v)` crosses the real axis at the minimizer.
fn halfplane_contact(u: ComplexPoint, v: ComplexPoint) -> BoundaryInfResult {
    let w = u + (v.conj() - u) * (u.im / (u.im + v.im));
    BoundaryInfResult {
        value: (u - v.conj()).norm(),
        witness: ComplexPoint::new(w.re, 0.0),
        witness_angle: None,
    }
}

pub fn compute(args: &ComputeArgs, format: Format) -> Result<Output, CliError> {
    check_tol(args.tol)?;
    let (u, v) = (args.z1.0, args.z2.0);
    if args.domain != DomainKind::UnitDisk && (args.a.is_some() || args.z0.is_some()) {
        return Err(usage("--a and --z0 apply to --domain unit-disk only"));
    }
    if args.domain != DomainKind::Polygon && args.vertices.is_some() {
        return Err(usage("--vertices applies to --domain polygon only"));
    }

    let mut result = ComputeResult {
        domain: args.domain,
        z1: args.z1,
        z2: args.z2,
        s: 0.0,
        contact: None,
        tanh_half_rho: None,
        supporting_half_plane_sup: None,
        ellipse: None,
        proof_ellipse: None,
        distortion: None,
    };
    match args.domain {
        DomainKind::UnitDisk => {
            let s = s_unit_disk(u, v)?;
            result.s = s.value;
            result.contact = Some(s.contact);
            result.tanh_half_rho = Some(tanh_half_rho_unit_disk(u, v)?);
            result.ellipse = Some(maximal_inscribed_ellipse(u, v)?);
            result.proof_ellipse = Some(proof_ellipse(u, v)?);
        }
        DomainKind::HalfPlane => {
            result.s = s_halfplane(u, v)?;
            result.contact = Some(halfplane_contact(u, v));
            result.tanh_half_rho = Some(tanh_half_rho_halfplane(u, v)?);
        }
        DomainKind::Disk => {
            let d = DiskDomain::new(args.center.0, args.radius)?;
            result.s = s_disk(&d, u, v)?;
            result.tanh_half_rho = Some(tanh_half_rho_disk(&d, u, v)?);
            let to_unit = |z: ComplexPoint| (z - d.center) / d.radius;
            if let Ok(t) = s_unit_disk(to_unit(u), to_unit(v)) {
                result.contact = Some(BoundaryInfResult {
                    value: t.contact.value * d.radius,
                    witness: d.center + t.contact.witness * d.radius,
                    witness_angle: t.contact.witness_angle,
                });
            }
        }
        DomainKind::Polygon => {
            let vertices = args.vertices.clone().map(|v| v.0).unwrap_or_default();
            let p = ConvexPolygon::new(vertices)?;
            let s = s_convex_polygon(&p, u, v)?;
            result.s = s.value;
            result.contact = Some(s.contact);
            result.supporting_half_plane_sup = Some(s_via_supporting_halfplanes(&p, u, v)?);
        }
    }

    let map = match (args.a, args.z0) {
        (Some(a), _) => {
            check_a(a, true)?;
            Some(DiskAutomorphism::canonical(a)?)
        }
        (None, Some(z0)) => Some(DiskAutomorphism::new(z0.0, args.beta)?),
        (None, None) => None,
    };
    let mut violations = Vec::new();
    if let Some(g) = map {
        let c = g.reduce();
        let rot = trimetric_core::geometry::unit(c.pre_rotation);
        let report = refined_trial(c.a, rot * u, rot * v, args.tol)?;
        violations.extend(report.violations.iter().copied());
        result.distortion = Some(MappedDistortion {
            z0: Point(g.z0),
            beta: g.beta,
            canonical: c,
            w1: Point(g.apply(u)),
            w2: Point(g.apply(v)),
            report,
        });
    }

    let summary = ComputeSummary {
        s: result.s,
        psi: result.proof_ellipse.map(|p| p.psi),
        ratio: result.distortion.as_ref().map(|d| d.report.ratio),
        bound: result.distortion.as_ref().map(|d| d.report.bound_thm1),
    };
    let violation = !violations.is_empty();
    let bytes = match format {
        Format::Json => to_json(&Document {
            config: Config {
                command: "compute",
                args,
            },
            results: &result,
            summary,
            violations,
        })?,
        Format::Csv => {
            let c = result.contact;
            let d = result.distortion.as_ref().map(|d| &d.report);
            to_csv(
                &[
                    "domain",
                    "s",
                    "contact_value",
                    "witness_re",
                    "witness_im",
                    "witness_angle",
                    "tanh_half_rho",
                    "psi",
                    "ratio",
                    "bound_cor3",
                ],
                [vec![
                    result.domain.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default(),
                    num(result.s),
                    num(c.map(|c| c.value)),
                    num(c.map(|c| c.witness.re)),
                    num(c.map(|c| c.witness.im)),
                    num(c.and_then(|c| c.witness_angle)),
                    num(result.tanh_half_rho),
                    num(summary.psi),
                    num(d.map(|d| d.ratio)),
                    num(d.map(|d| d.bound_cor3)),
                ]],
            )?
        }
    };
    Ok(Output { bytes, violation })
}

// ----------------------------------------------------------------- verify

#[derive(Debug, Serialize)]
struct VerifySummary {
    total_trials: usize,
    violations: usize,
    max_ratio_over_bound: f64,
    worst_upper_margin: f64,
    worst_lower_margin: f64,
    worst_refined_margin: f64,
    max_external_ratio: Option<f64>,
    proof_checked: usize,
    passed: bool,
}

pub fn verify(args: &VerifyArgs, format: Format) -> Result<Output, CliError> {
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    check_tol(args.tol)?;
    if !(args.min_gap > 0.0 && args.min_gap < 1.0) {
        return Err(usage(format!("--min-gap must lie in (0, 1), got {}", args.min_gap)));
    }
    let strata = match args.a {
        Some(a) => {
            check_a(a, true)?;
            vec![a]
        }
        None => DEFAULT_STRATA.to_vec(),
    };
    let mut cfg = SuiteConfig::new(strata, args.trials, args.seed);
    cfg.tol = args.tol;
    cfg.min_gap = args.min_gap;
    cfg.proof_terms = !args.no_proof_terms;
    let outcome = run_suite(&cfg)?;

    let fold = |f: fn(&StratumSummary) -> f64| outcome.strata.iter().map(f).fold(f64::INFINITY, f64::min);
    let summary = VerifySummary {
        total_trials: outcome.total_trials(),
        violations: outcome.violations.len(),
        max_ratio_over_bound: outcome.max_ratio_over_bound(),
        worst_upper_margin: fold(|s| s.worst_upper_margin),
        worst_lower_margin: fold(|s| s.worst_lower_margin),
        worst_refined_margin: fold(|s| s.worst_refined_margin),
        max_external_ratio: outcome
            .strata
            .iter()
            .filter_map(|s| s.max_external_ratio)
            .reduce(f64::max),
        proof_checked: outcome.strata.iter().map(|s| s.proof_checked).sum(),
        passed: outcome.violations.is_empty(),
    };
    let violation = !outcome.violations.is_empty();
    let bytes = match format {
        Format::Json => to_json(&Document {
            config: &cfg,
            results: &outcome.strata,
            summary,
            violations: &outcome.violations,
        })?,
        Format::Csv => to_csv(
            &[
                "a",
                "trials",
                "max_ratio",
                "min_ratio",
                "worst_upper_margin",
                "worst_lower_margin",
                "worst_refined_margin",
                "max_external_ratio",
                "internal",
                "external",
                "line",
                "proof_checked",
                "violations",
            ],
            outcome.strata.iter().map(|s| {
                vec![
                    num(s.a),
                    s.trials.to_string(),
                    num(s.max_ratio),
                    num(s.min_ratio),
                    num(s.worst_upper_margin),
                    num(s.worst_lower_margin),
                    num(s.worst_refined_margin),
                    num(s.max_external_ratio),
                    s.internal.to_string(),
                    s.external.to_string(),
                    s.line.to_string(),
                    s.proof_checked.to_string(),
                    s.violations.to_string(),
                ]
            }),
        )?,
    };
    Ok(Output { bytes, violation })
}

// -------------------------------------------------------------- sharpness

#[derive(Debug, Serialize)]
struct SharpnessSummary {
    best_ratio: f64,
    bound: f64,
    gap: f64,
    improvements: usize,
    restarts: usize,
}

#[derive(Debug, Serialize)]
struct BoundExceeded<'a> {
    best_ratio: f64,
    bound: f64,
    result: &'a SharpnessResult,
}

pub fn sharpness(args: &SharpnessArgs, format: Format) -> Result<Output, CliError> {
    check_a(args.a, false)?;
    let r = sharpness_search(args.a, args.budget, args.seed).map_err(|e| usage(e.to_string()))?;
    let bound = 1.0 + args.a;
    let mut violations = Vec::new();
    if r.best_ratio > bound + 1e-9 {
        violations.push(BoundExceeded {
            best_ratio: r.best_ratio,
            bound,
            result: &r,
        });
    }
    let summary = SharpnessSummary {
        best_ratio: r.best_ratio,
        bound,
        gap: r.gap,
        improvements: r.trace.len(),
        restarts: r.restarts,
    };
    let violation = !violations.is_empty();
    let bytes = match format {
        Format::Json => to_json(&Document {
            config: Config {
                command: "sharpness",
                args,
            },
            results: &r,
            summary,
            violations,
        })?,
        Format::Csv => to_csv(
            &["a", "budget", "seed", "best_ratio", "gap", "z1_re", "z1_im", "z2_re", "z2_im", "evaluations", "restarts"],
            [vec![
                num(r.a),
                r.budget.to_string(),
                r.seed.to_string(),
                num(r.best_ratio),
                num(r.gap),
                num(r.z1.re),
                num(r.z1.im),
                num(r.z2.re),
                num(r.z2.im),
                r.evaluations.to_string(),
                r.restarts.to_string(),
            ]],
        )?,
    };
    Ok(Output { bytes, violation })
}

// ------------------------------------------------------------------- scan

#[derive(Debug, Clone, Copy, Serialize)]
struct ScanRow {
    phi: f64,
    cos_phi: f64,
    tangency: TangencyKind,
    refined_constant: f64,
    theta: f64,
    #[serde(rename = "R")]
    big_r: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ScanSummary {
    steps: usize,
    max_constant: f64,
    argmax_phi: f64,
    internal: usize,
    external: usize,
    line: usize,
}

pub fn scan(args: &ScanArgs, format: Format) -> Result<Output, CliError> {
    check_a(args.a, false)?;
    if args.steps == 0 {
        return Err(usage("--steps must be at least 1"));
    }
    let m = MoebiusMap::new(args.a)?;
    let rows = (0..args.steps)
        .map(|k| {
            let phi = k as f64 * TAU / args.steps as f64;
            let tangency = m.classify_tangency(phi);
            let theta = m.theta_from_phi(phi)?;
            let big_r = match tangency {
                TangencyKind::Internal => Some(m.circle_radius(theta)?),
                _ => None,
            };
            Ok(ScanRow {
                phi,
                cos_phi: phi.cos(),
                tangency,
                refined_constant: refined_constant(args.a, phi),
                theta,
                big_r,
            })
        })
        .collect::<trimetric_core::Result<Vec<_>>>()?;

    let (argmax_phi, max_constant) = rows
        .iter()
        .fold((0.0, f64::NEG_INFINITY), |best, r| {
            if r.refined_constant > best.1 {
                (r.phi, r.refined_constant)
            } else {
                best
            }
        });
    let count = |t: TangencyKind| rows.iter().filter(|r| r.tangency == t).count();
    let violations: Vec<ScanRow> = rows
        .iter()
        .filter(|r| r.refined_constant < 1.0 || r.refined_constant > 1.0 + args.a + 1e-12)
        .copied()
        .collect();
    let summary = ScanSummary {
        steps: args.steps,
        max_constant,
        argmax_phi,
        internal: count(TangencyKind::Internal),
        external: count(TangencyKind::External),
        line: count(TangencyKind::Line),
    };
    let violation = !violations.is_empty();
    let bytes = match format {
        Format::Json => to_json(&Document {
            config: Config { command: "scan", args },
            results: &rows,
            summary,
            violations,
        })?,
        Format::Csv => to_csv(
            &["phi", "cos_phi", "tangency", "refined_constant", "theta", "R"],
            rows.iter().map(|r| {
                vec![
                    num(r.phi),
                    num(r.cos_phi),
                    r.tangency.as_str().to_string(),
                    num(r.refined_constant),
                    num(r.theta),
                    num(r.big_r),
                ]
            }),
        )?,
    };
    Ok(Output { bytes, violation })
}
