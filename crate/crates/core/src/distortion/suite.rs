//! Seeded randomized verification of the distortion bounds.
//!
//! Trial `j` of stratum `k` draws its points from a ChaCha8 stream seeded with
//! `child_seed(child_seed(master, k), j)`, so results do not depend on the
//! order in which trials execute. Trials run on the ambient rayon pool and are
//! aggregated in index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{evaluate, proof_terms, DistortionReport, ProofTermReport};
use crate::error::{invalid, Error, Result};
use crate::geometry::{unit, ComplexPoint, TangencyKind};

/// `a` in `{0.05, 0.10, ..., 0.95}`.
pub const DEFAULT_STRATA: [f64; 19] = [
    0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.65, 0.70, 0.75,
    0.80, 0.85, 0.90, 0.95,
];

/// Trials whose `s_U(z1, z2)` falls below this are redrawn.
pub const MIN_S_BEFORE: f64 = 1e-12;

/// SplitMix64 finalizer applied to `master + (index + 1) * golden gamma`.
pub fn child_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A point of `U` with uniform argument and `1 - |z|` log-uniform on
/// `[min_gap, 1]`.
pub fn sample_point<R: Rng + ?Sized>(rng: &mut R, min_gap: f64) -> ComplexPoint {
    let lo = min_gap.log10();
    let gap = 10f64.powf(rng.random_range(lo..=0.0));
    let t = rng.random_range(0.0..std::f64::consts::TAU);
    unit(t) * (1.0 - gap).max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub strata: Vec<f64>,
    pub trials_per_stratum: usize,
    pub seed: u64,
    pub tol: f64,
    /// Smallest `1 - |z|` drawn.
    pub min_gap: f64,
    /// Also evaluate the internal-tangency proof terms on every internal trial.
    pub proof_terms: bool,
}

impl SuiteConfig {
    pub fn new(strata: Vec<f64>, trials_per_stratum: usize, seed: u64) -> Self {
        Self {
            strata,
            trials_per_stratum,
            seed,
            tol: super::DEFAULT_TOL,
            min_gap: 1e-6,
            proof_terms: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials_per_stratum == 0 {
            return Err(invalid("at least one trial per stratum is required"));
        }
        if self.strata.is_empty() {
            return Err(invalid("no strata given"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(invalid("tolerance must be positive"));
        }
        if !(self.min_gap > 0.0 && self.min_gap < 1.0) {
            return Err(invalid("min_gap must lie in (0, 1)"));
        }
        for &a in &self.strata {
            crate::geometry::MoebiusMap::new(a)?;
        }
        Ok(())
    }
}

/// A violating trial together with its coordinates in the run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialViolation {
    pub stratum: usize,
    pub trial: usize,
    pub report: DistortionReport,
    /// Failed proof-term inequalities, if any.
    pub proof_failures: Vec<&'static str>,
}

/// Aggregates for one value of `a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumSummary {
    pub a: f64,
    pub trials: usize,
    /// Redraws caused by `s_before < 1e-12`.
    pub redraws: usize,
    pub max_ratio: f64,
    pub max_ratio_trial: usize,
    pub min_ratio: f64,
    /// `min (1 + a - ratio)`
    pub worst_upper_margin: f64,
    /// `min (ratio - 1/(1+a))`
    pub worst_lower_margin: f64,
    /// `min (bound_cor3 - ratio)`
    pub worst_refined_margin: f64,
    /// `max ratio` over trials whose contacts are all external or line.
    pub max_external_ratio: Option<f64>,
    pub internal: usize,
    pub external: usize,
    pub line: usize,
    pub proof_checked: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub strata: Vec<StratumSummary>,
    pub violations: Vec<TrialViolation>,
}

impl SuiteOutcome {
    pub fn total_trials(&self) -> usize {
        self.strata.iter().map(|s| s.trials).sum()
    }

    pub fn max_ratio_over_bound(&self) -> f64 {
        self.strata
            .iter()
            .map(|s| s.max_ratio - (1.0 + s.a))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

struct TrialOutcome {
    ratio: f64,
    upper_margin: f64,
    lower_margin: f64,
    refined_margin: f64,
    external: bool,
    tangency: TangencyKind,
    redraws: usize,
    proof_checked: bool,
    violation: Option<Box<(DistortionReport, Vec<&'static str>)>>,
}

fn draw_pair(rng: &mut ChaCha8Rng, a: f64, min_gap: f64) -> Result<(DistortionReport, usize)> {
    let mut redraws = 0;
    loop {
        let z1 = sample_point(rng, min_gap);
        let z2 = sample_point(rng, min_gap);
        if z1 != z2 {
            let report = evaluate(a, z1, z2)?;
            if report.s_before >= MIN_S_BEFORE {
                return Ok((report, redraws));
            }
        }
        redraws += 1;
    }
}

fn run_trial(cfg: &SuiteConfig, stratum: usize, trial: usize) -> Result<TrialOutcome> {
    let a = cfg.strata[stratum];
    let seed = child_seed(child_seed(cfg.seed, stratum as u64), trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut report, redraws) = draw_pair(&mut rng, a, cfg.min_gap)?;
    report.check_bounds(cfg.tol);
    report.check_refined(cfg.tol);

    let mut proof_failures = Vec::new();
    let mut proof_checked = false;
    if cfg.proof_terms && report.tangency == TangencyKind::Internal {
        match proof_terms(a, report.z1, report.z2) {
            Ok(p) => {
                proof_checked = true;
                proof_failures = p.failures(1e-10);
            }
            Err(Error::NotApplicable(_)) => {}
            Err(e) => return Err(e),
        }
    }

    let external = report.external_case();
    let outcome = TrialOutcome {
        ratio: report.ratio,
        upper_margin: report.bound_thm1 - report.ratio,
        lower_margin: report.ratio - report.bound_lower,
        refined_margin: report.bound_cor3 - report.ratio,
        external,
        tangency: report.tangency,
        redraws,
        proof_checked,
        violation: None,
    };
    if report.violations.is_empty() && proof_failures.is_empty() {
        Ok(outcome)
    } else {
        Ok(TrialOutcome {
            violation: Some(Box::new((report, proof_failures))),
            ..outcome
        })
    }
}

/// Runs `trials_per_stratum` trials for every `a` in the configuration.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    cfg.validate()?;
    let mut strata = Vec::with_capacity(cfg.strata.len());
    let mut violations = Vec::new();
    for (k, &a) in cfg.strata.iter().enumerate() {
        let outcomes: Vec<TrialOutcome> = (0..cfg.trials_per_stratum)
            .into_par_iter()
            .map(|j| run_trial(cfg, k, j))
            .collect::<Result<_>>()?;

        let mut s = StratumSummary {
            a,
            trials: outcomes.len(),
            redraws: 0,
            max_ratio: f64::NEG_INFINITY,
            max_ratio_trial: 0,
            min_ratio: f64::INFINITY,
            worst_upper_margin: f64::INFINITY,
            worst_lower_margin: f64::INFINITY,
            worst_refined_margin: f64::INFINITY,
            max_external_ratio: None,
            internal: 0,
            external: 0,
            line: 0,
            proof_checked: 0,
            violations: 0,
        };
        for (j, o) in outcomes.into_iter().enumerate() {
            s.redraws += o.redraws;
            if o.ratio > s.max_ratio {
                s.max_ratio = o.ratio;
                s.max_ratio_trial = j;
            }
            s.min_ratio = s.min_ratio.min(o.ratio);
            s.worst_upper_margin = s.worst_upper_margin.min(o.upper_margin);
            s.worst_lower_margin = s.worst_lower_margin.min(o.lower_margin);
            s.worst_refined_margin = s.worst_refined_margin.min(o.refined_margin);
            if o.external {
                s.max_external_ratio = Some(s.max_external_ratio.map_or(o.ratio, |m| m.max(o.ratio)));
            }
            match o.tangency {
                TangencyKind::Internal => s.internal += 1,
                TangencyKind::External => s.external += 1,
                TangencyKind::Line => s.line += 1,
            }
            s.proof_checked += o.proof_checked as usize;
            if let Some(v) = o.violation {
                let (report, proof_failures) = *v;
                s.violations += 1;
                violations.push(TrialViolation {
                    stratum: k,
                    trial: j,
                    report,
                    proof_failures,
                });
            }
        }
        strata.push(s);
    }
    Ok(SuiteOutcome { strata, violations })
}

/// Result of [`run_proof_suite`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofSuiteOutcome {
    pub instances: usize,
    /// Draws rejected because the image contact was not internal.
    pub skipped: usize,
    pub max_r1_residual: f64,
    /// `min (R - (1 + 1/a)/2)`
    pub worst_r_margin: f64,
    /// `min (1 + a - 2R/(2R-1))`
    pub worst_constant_margin: f64,
    /// `min (|A| - R r/(2R-1))`
    pub worst_c_margin: f64,
    /// `min (r/(2(2R-1)) - |B|)`
    pub worst_d_margin: f64,
    /// `min (|A - B| - r/2)`
    pub worst_ab_margin: f64,
    /// `max |th(rho_{D_phi}(z1, z2)/2) - s_U(w1, w2)|`
    pub max_invariance_gap: f64,
    pub failures: Vec<(usize, ProofTermReport, Vec<&'static str>)>,
}

/// Collects `instances` internal-tangency pairs (cycling through the strata
/// of `cfg`) and checks every proof-term inequality at tolerance `tol`.
pub fn run_proof_suite(cfg: &SuiteConfig, instances: usize, tol: f64) -> Result<ProofSuiteOutcome> {
    cfg.validate()?;
    let found: Vec<(ProofTermReport, usize)> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let a = cfg.strata[i % cfg.strata.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(child_seed(cfg.seed ^ 0x5052_4F4F_4654_524D, i as u64));
            let mut skipped = 0;
            loop {
                let z1 = sample_point(&mut rng, cfg.min_gap);
                let z2 = sample_point(&mut rng, cfg.min_gap);
                if z1 == z2 {
                    continue;
                }
                match proof_terms(a, z1, z2) {
                    Ok(p) => return Ok((p, skipped)),
                    Err(Error::NotApplicable(_)) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        })
        .collect::<Result<_>>()?;

    let mut out = ProofSuiteOutcome {
        instances: found.len(),
        skipped: 0,
        max_r1_residual: 0.0,
        worst_r_margin: f64::INFINITY,
        worst_constant_margin: f64::INFINITY,
        worst_c_margin: f64::INFINITY,
        worst_d_margin: f64::INFINITY,
        worst_ab_margin: f64::INFINITY,
        max_invariance_gap: 0.0,
        failures: Vec::new(),
    };
    for (i, (p, skipped)) in found.into_iter().enumerate() {
        out.skipped += skipped;
        out.max_r1_residual = out.max_r1_residual.max(p.r1_residual);
        out.worst_r_margin = out.worst_r_margin.min(p.big_r - p.r_lower);
        out.worst_constant_margin = out.worst_constant_margin.min(p.one_plus_a - p.constant);
        out.worst_c_margin = out.worst_c_margin.min(p.lhs_c - p.rhs_c);
        out.worst_d_margin = out.worst_d_margin.min(p.rhs_d - p.lhs_d);
        out.worst_ab_margin = out.worst_ab_margin.min(p.a_minus_b_mod - 0.5 * p.r);
        out.max_invariance_gap = out
            .max_invariance_gap
            .max((p.tanh_preimage_disk - p.s_after).abs());
        let f = p.failures(tol);
        if !f.is_empty() {
            out.failures.push((i, p, f));
        }
    }
    Ok(out)
}
