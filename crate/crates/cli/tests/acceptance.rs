//! Acceptance gate. Runs every criterion at its stated scale and tolerance,
//! prints one PASS/FAIL line per criterion and exits non-zero if any fails.

use std::f64::consts::TAU;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use trimetric_core::distortion::{
    child_seed, run_proof_suite, run_suite, sample_point, sharpness_search, SuiteConfig, SuiteOutcome, Violation,
    DEFAULT_STRATA,
};
use trimetric_core::ellipse::{bisector_residual, maximal_inscribed_ellipse};
use trimetric_core::geometry::unit;
use trimetric_core::hyperbolic::{tanh_half_rho_disk, tanh_half_rho_unit_disk, DiskDomain};
use trimetric_core::trimetric::{
    s_bruteforce, s_convex_polygon, s_unit_disk, s_via_supporting_halfplanes, ConvexPolygon, MetricDomain,
};
use trimetric_core::{ComplexPoint, MoebiusMap};

const SEED: u64 = 20_240_601;

struct Verdict {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn verdict(name: &'static str, pass: bool, detail: String) -> Verdict {
    Verdict { name, pass, detail }
}

fn count(outcome: &SuiteOutcome, kinds: &[Violation]) -> usize {
    outcome
        .violations
        .iter()
        .filter(|v| v.report.violations.iter().any(|k| kinds.contains(k)))
        .count()
}

fn suite_criteria() -> Vec<Verdict> {
    let cfg = SuiteConfig::new(DEFAULT_STRATA.to_vec(), 100_000, SEED);
    let start = Instant::now();
    let outcome = run_suite(&cfg).expect("suite runs");
    let elapsed = start.elapsed();

    let upper = count(&outcome, &[Violation::UpperBound]);
    let lower = count(&outcome, &[Violation::LowerBound]);
    let refined = count(
        &outcome,
        &[Violation::RefinedBound, Violation::RefinedExceedsUpper, Violation::ExternalCase],
    );
    let worst = |f: fn(&trimetric_core::distortion::StratumSummary) -> f64| {
        outcome.strata.iter().map(f).fold(f64::INFINITY, f64::min)
    };
    let max_external = outcome
        .strata
        .iter()
        .filter_map(|s| s.max_external_ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    let external: usize = outcome.strata.iter().map(|s| s.external + s.line).sum();
    vec![
        verdict(
            "upper bound suite",
            upper == 0 && elapsed <= Duration::from_secs(60),
            format!(
                "{} trials over {} strata, {upper} violations of ratio <= 1+a+1e-9, worst margin {:.3e}, {:.1} s",
                outcome.total_trials(),
                outcome.strata.len(),
                worst(|s| s.worst_upper_margin),
                elapsed.as_secs_f64()
            ),
        ),
        verdict(
            "lower bound suite",
            lower == 0,
            format!(
                "{lower} violations of ratio >= 1/(1+a)-1e-9, worst margin {:.3e}",
                worst(|s| s.worst_lower_margin)
            ),
        ),
        verdict(
            "refined bound suite",
            refined == 0 && max_external <= 1.0 + 1e-9,
            format!(
                "{refined} violations, worst refined margin {:.3e}, {external} external/line trials with max ratio {max_external:.15}",
                worst(|s| s.worst_refined_margin)
            ),
        ),
    ]
}

fn sharpness_criterion() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for a in [0.1, 0.5, 0.9] {
        let r = sharpness_search(a, 100_000, 42).expect("search runs");
        pass &= r.best_ratio >= 1.0 + a - 1e-3 && r.best_ratio <= 1.0 + a + 1e-9;
        parts.push(format!("a={a}: {:.12} (gap {:.1e})", r.best_ratio, r.gap));
    }
    verdict("sharpness", pass, parts.join(", "))
}

fn oracle_pair(rng: &mut ChaCha8Rng) -> ComplexPoint {
    if rng.random_bool(0.5) {
        sample_point(rng, 1e-3)
    } else {
        unit(rng.random_range(0.0..TAU)) * (0.999 * rng.random::<f64>().sqrt())
    }
}

fn oracle_criterion() -> Verdict {
    let worst = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(child_seed(SEED, i));
            let (u, v) = (oracle_pair(&mut rng), oracle_pair(&mut rng));
            let fast = s_unit_disk(u, v).unwrap().value;
            let brute = s_bruteforce(&MetricDomain::UnitDisk, u, v, 100_000).unwrap();
            (fast - brute).abs()
        })
        .reduce(|| 0.0, f64::max);
    verdict(
        "oracle equivalence",
        worst <= 1e-9,
        format!("10000 pairs, n = 100000, max |difference| = {worst:.3e}"),
    )
}

fn random_polygon(rng: &mut ChaCha8Rng) -> ConvexPolygon {
    let n = rng.random_range(3..16);
    let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
    angles.sort_by(f64::total_cmp);
    let (p, q, r) = (rng.random_range(0.3..3.0), rng.random_range(0.3..3.0), rng.random_range(-1.0..1.0));
    let shift = ComplexPoint::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    let vertices = angles
        .iter()
        .map(|&t| shift + ComplexPoint::new(p * t.cos() + r * t.sin(), q * t.sin()))
        .collect();
    ConvexPolygon::new(vertices).expect("convex by construction")
}

fn interior_point(rng: &mut ChaCha8Rng, poly: &ConvexPolygon) -> ComplexPoint {
    let v = poly.vertices();
    let w: Vec<f64> = v.iter().map(|_| rng.random_range(0.01..1.0f64).powi(3)).collect();
    let total: f64 = w.iter().sum();
    v.iter().zip(&w).map(|(p, w)| p * (w / total)).sum()
}

fn polygon_criterion() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xA5A5);
    let mut worst = 0.0f64;
    let mut instances = 0;
    while instances < 1_000 {
        let poly = random_polygon(&mut rng);
        let (u, v) = (interior_point(&mut rng, &poly), interior_point(&mut rng, &poly));
        if !(poly.contains(u) && poly.contains(v)) {
            continue;
        }
        let direct = s_convex_polygon(&poly, u, v).unwrap().value;
        let dual = s_via_supporting_halfplanes(&poly, u, v).unwrap();
        worst = worst.max((direct - dual).abs());
        instances += 1;
    }
    verdict(
        "polygon half-plane cross-check",
        worst <= 1e-8,
        format!("{instances} polygons, max |infimum form - supremum form| = {worst:.3e}"),
    )
}

fn proof_criterion() -> Verdict {
    let cfg = SuiteConfig::new(DEFAULT_STRATA.to_vec(), 1, SEED);
    let out = run_proof_suite(&cfg, 10_000, 1e-10).expect("proof suite runs");
    verdict(
        "proof-term suite",
        out.failures.is_empty() && out.instances == 10_000 && out.max_r1_residual <= 1e-10,
        format!(
            "{} internal instances, {} failures, circle residual {:.1e}, margins: R {:.2e}, constant {:.2e}, |A| {:.2e}, |B| {:.2e}, |A-B| {:.2e}",
            out.instances,
            out.failures.len(),
            out.max_r1_residual,
            out.worst_r_margin,
            out.worst_constant_margin,
            out.worst_c_margin,
            out.worst_d_margin,
            out.worst_ab_margin
        ),
    )
}

fn geometry_criterion() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x6E0);
    let (mut reduction, mut invariance, mut bisector) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let (u, v) = (oracle_pair(&mut rng), oracle_pair(&mut rng));
        if u == v {
            continue;
        }
        let disk = tanh_half_rho_unit_disk(u, v).unwrap();
        reduction = reduction.max((tanh_half_rho_disk(&DiskDomain::unit(), u, v).unwrap() - disk).abs());

        let m = MoebiusMap::new(rng.random_range(0.0..0.99)).unwrap();
        let mapped = tanh_half_rho_unit_disk(m.apply(u).unwrap(), m.apply(v).unwrap()).unwrap();
        invariance = invariance.max((mapped - disk).abs());

        let (z1, z2) = (sample_point(&mut rng, 1e-6), sample_point(&mut rng, 1e-6));
        if z1 != z2 {
            for t in maximal_inscribed_ellipse(z1, z2).unwrap().contacts {
                bisector = bisector.max(bisector_residual(unit(t), z1, z2).unwrap());
            }
        }
    }
    verdict(
        "geometry identities",
        reduction <= 1e-14 && invariance <= 1e-12 && bisector <= 1e-8,
        format!("disk reduction {reduction:.1e}, invariance {invariance:.1e}, bisector residual {bisector:.1e}"),
    )
}

fn determinism_criterion() -> Verdict {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_trimetric"))
            .args(["verify", "--a", "0.5", "--trials", "10000", "--seed", "7"])
            .env("TRIMETRIC_THREADS", threads)
            .output()
            .expect("binary runs")
    };
    let runs: Vec<_> = ["1", "1", "4", "0"].iter().map(|t| run(t)).collect();
    let ok = runs.iter().all(|o| o.status.code() == Some(0) && !o.stdout.is_empty());
    let identical = runs.windows(2).all(|w| w[0].stdout == w[1].stdout);
    verdict(
        "determinism",
        ok && identical,
        format!(
            "verify --a 0.5 --trials 10000 --seed 7 with TRIMETRIC_THREADS = 1, 1, 4, 0: {} bytes, identical = {identical}",
            runs[0].stdout.len()
        ),
    )
}

fn main() {
    let mut verdicts = suite_criteria();
    verdicts.push(sharpness_criterion());
    verdicts.push(oracle_criterion());
    verdicts.push(polygon_criterion());
    verdicts.push(proof_criterion());
    verdicts.push(geometry_criterion());
    verdicts.push(determinism_criterion());

    let mut failed = 0;
    for v in &verdicts {
        println!("{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", verdicts.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
