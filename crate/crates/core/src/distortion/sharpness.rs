//! Multistart direct search for pairs maximizing `s_U(f(z1), f(z2)) / s_U(z1, z2)`.
//!
//! Restart `k` starts from a point drawn with seed `child_seed(seed, k)` and
//! runs Nelder-Mead over the four real coordinates of `(z1, z2)` for at most
//! [`EVALS_PER_RESTART`] evaluations. The budget counts objective
//! evaluations; a smaller budget runs a prefix of the same evaluation
//! sequence, so the best ratio is nondecreasing in the budget.
//!
//! Starts cycle through three families: a short segment near the origin,
//! a conjugate-symmetric pair near `+1`, and a uniform random pair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::suite::{child_seed, MIN_S_BEFORE};
use crate::error::{invalid, Result};
use crate::geometry::{point_serde, unit, ComplexPoint, MoebiusMap};
use crate::minimize::nelder_mead;
use crate::trimetric::s_unit_disk;

/// Evaluation cap of a single restart.
pub const EVALS_PER_RESTART: usize = 2_000;
/// Smallest accepted budget.
pub const MIN_BUDGET: usize = 1_000;

/// Best ratio after a given number of evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub evaluations: usize,
    pub best_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessResult {
    pub a: f64,
    pub budget: usize,
    pub seed: u64,
    pub best_ratio: f64,
    #[serde(with = "point_serde")]
    pub z1: ComplexPoint,
    #[serde(with = "point_serde")]
    pub z2: ComplexPoint,
    /// `1 + a - best_ratio`
    pub gap: f64,
    pub evaluations: usize,
    pub restarts: usize,
    /// Improvements of the running best, in evaluation order.
    pub trace: Vec<TracePoint>,
}

/// `R^2 -> U`, `p -> p / sqrt(1 + |p|^2)`.
fn to_disk(x: f64, y: f64) -> ComplexPoint {
    ComplexPoint::new(x, y) / (1.0 + x * x + y * y).sqrt()
}

/// Inverse of [`to_disk`].
fn from_disk(z: ComplexPoint) -> (f64, f64) {
    let k = 1.0 / (1.0 - z.norm_sqr()).sqrt();
    (z.re * k, z.im * k)
}

fn start_pair(rng: &mut ChaCha8Rng, family: usize) -> (ComplexPoint, ComplexPoint, f64) {
    match family {
        0 => {
            let center = unit(rng.random_range(0.0..std::f64::consts::TAU)) * rng.random_range(0.0..0.3);
            let half = 10f64.powf(rng.random_range(-3.0..-1.0));
            let dir = unit(rng.random_range(0.0..std::f64::consts::TAU));
            (center + dir * half, center - dir * half, half)
        }
        1 => {
            let eps = 10f64.powf(rng.random_range(-3.0..-0.5));
            let delta = eps * rng.random_range(0.05..1.0);
            let z = ComplexPoint::new(1.0 - eps, delta);
            (z, z.conj(), 0.5 * delta)
        }
        _ => {
            let mut draw = || unit(rng.random_range(0.0..std::f64::consts::TAU)) * rng.random::<f64>().sqrt() * 0.95;
            (draw(), draw(), 0.1)
        }
    }
}

/// Searches for the largest distortion ratio of `f(z) = (z + a)/(1 + a z)`.
pub fn sharpness_search(a: f64, budget: usize, seed: u64) -> Result<SharpnessResult> {
    let m = MoebiusMap::new(a)?;
    if a == 0.0 {
        return Err(invalid("a must be positive for a sharpness search"));
    }
    if budget < MIN_BUDGET {
        return Err(invalid(format!("budget must be at least {MIN_BUDGET}, got {budget}")));
    }

    let ratio_at = |z1: ComplexPoint, z2: ComplexPoint| -> Option<f64> {
        if z1 == z2 {
            return None;
        }
        let before = s_unit_disk(z1, z2).ok()?.value;
        if before < MIN_S_BEFORE {
            return None;
        }
        let image = s_unit_disk(m.apply(z1).ok()?, m.apply(z2).ok()?).ok()?;
        let after = m.image_difference(z1, z2).ok()?.norm() / image.contact.value;
        Some(after / before)
    };

    let mut best = (f64::NEG_INFINITY, ComplexPoint::new(0.0, 0.0), ComplexPoint::new(0.0, 0.0));
    let mut trace = Vec::new();
    let mut evaluations = 0usize;
    let mut restarts = 0usize;

    while evaluations < budget {
        let mut rng = ChaCha8Rng::seed_from_u64(child_seed(seed, restarts as u64));
        let (z1, z2, scale) = start_pair(&mut rng, restarts % 3);
        restarts += 1;

        let (x1, y1) = from_disk(z1);
        let (x2, y2) = from_disk(z2);
        let cap = EVALS_PER_RESTART.min(budget - evaluations);
        let objective = |p: &[f64; 4]| {
            evaluations += 1;
            let (z1, z2) = (to_disk(p[0], p[1]), to_disk(p[2], p[3]));
            match ratio_at(z1, z2) {
                Some(r) => {
                    if r > best.0 {
                        best = (r, z1, z2);
                        trace.push(TracePoint {
                            evaluations,
                            best_ratio: r,
                        });
                    }
                    -r
                }
                None => f64::INFINITY,
            }
        };
        let step = [scale; 4];
        nelder_mead(objective, [x1, y1, x2, y2], step, cap, 1e-15);
    }

    let (best_ratio, z1, z2) = best;
    Ok(SharpnessResult {
        a,
        budget,
        seed,
        best_ratio,
        z1,
        z2,
        gap: 1.0 + a - best_ratio,
        evaluations,
        restarts,
        trace,
    })
}
