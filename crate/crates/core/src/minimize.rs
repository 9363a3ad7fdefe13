//! Small derivative-free and bracketed 1-D solvers used by the metric code.

use num_complex::Complex64;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping when the
/// bracket is narrower than `tol`. Returns `(x_min, f_min)`.
pub(crate) fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // 200 iterations shrink any bracket by 0.618^200 ~ 1e-42.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Root of `g` in `[lo, hi]` given `g(lo) < 0 < g(hi)`, by Newton steps that
/// fall back to bisection whenever they leave the bracket or stall.
pub(crate) fn newton_bisect(
    g: impl Fn(f64) -> (f64, f64),
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> f64 {
    let mut x = 0.5 * (lo + hi);
    let mut dx_old = hi - lo;
    let mut dx = dx_old;
    let (mut gx, mut dgx) = g(x);
    for _ in 0..100 {
        let newton_leaves = ((x - hi) * dgx - gx) * ((x - lo) * dgx - gx) > 0.0;
        let newton_slow = (2.0 * gx).abs() > (dx_old * dgx).abs();
        dx_old = dx;
        if newton_leaves || newton_slow {
            dx = 0.5 * (hi - lo);
            x = lo + dx;
        } else {
            dx = gx / dgx;
            x -= dx;
        }
        if dx.abs() <= tol {
            break;
        }
        (gx, dgx) = g(x);
        if gx == 0.0 {
            break;
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= tol {
            x = 0.5 * (lo + hi);
            break;
        }
    }
    x
}

/// Nelder-Mead simplex minimization of `f` started from `x0` with initial
/// edge lengths `step`. Stops after `max_evals` evaluations or when the
/// simplex values agree to `ftol`. Every evaluation is reported through
/// `on_eval` in order. Returns the best point and value.
pub(crate) fn nelder_mead<const N: usize>(
    mut f: impl FnMut(&[f64; N]) -> f64,
    x0: [f64; N],
    step: [f64; N],
    max_evals: usize,
    ftol: f64,
) -> ([f64; N], f64, usize) {
    let mut evals = 0usize;
    let mut eval = |x: &[f64; N], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    let v0 = eval(&x0, &mut evals);
    simplex.push((x0, v0));
    for i in 0..N {
        if evals >= max_evals {
            break;
        }
        let mut x = x0;
        x[i] += step[i];
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    if simplex.len() < N + 1 {
        let best = simplex
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .copied()
            .unwrap();
        return (best.0, best.1, evals);
    }

    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[N].1);
        if (worst - best).abs() <= ftol * (best.abs() + ftol) {
            break;
        }
        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for j in 0..N {
                centroid[j] += x[j] / N as f64;
            }
        }
        let along = |t: f64| {
            let mut y = [0.0; N];
            for j in 0..N {
                y[j] = centroid[j] + t * (simplex[N].0[j] - centroid[j]);
            }
            y
        };

        let xr = along(-1.0);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            if evals >= max_evals {
                simplex[N] = (xr, fr);
                break;
            }
            let xe = along(-2.0);
            let fe = eval(&xe, &mut evals);
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
            continue;
        }
        if evals >= max_evals {
            break;
        }
        let (xc, fc) = if fr < simplex[N].1 {
            let xc = along(-0.5);
            (xc, eval(&xc, &mut evals))
        } else {
            let xc = along(0.5);
            (xc, eval(&xc, &mut evals))
        };
        if fc < simplex[N].1.min(fr) {
            simplex[N] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        let x_best = simplex[0].0;
        for vertex in simplex.iter_mut().skip(1) {
            if evals >= max_evals {
                break;
            }
            let mut y = [0.0; N];
            for j in 0..N {
                y[j] = x_best[j] + 0.5 * (vertex.0[j] - x_best[j]);
            }
            let v = eval(&y, &mut evals);
            *vertex = (y, v);
        }
    }
    let best = simplex
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .copied()
        .unwrap();
    (best.0, best.1, evals)
}

/// All complex roots of `c[0] + c[1] x + ... + c[n] x^n` by Aberth-Ehrlich
/// iteration. Leading coefficients below `1e-12` of the largest are dropped.
pub(crate) fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut c: Vec<Complex64> = coeffs.iter().map(|&x| x / scale).collect();
    while c.len() > 1 && c.last().unwrap().norm() < 1e-12 {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let c: Vec<Complex64> = c.iter().map(|&x| x / lead).collect();
    let eval = |x: Complex64| {
        let mut p = c[n];
        let mut dp = Complex64::new(0.0, 0.0);
        for k in (0..n).rev() {
            dp = dp * x + p;
            p = p * x + c[k];
        }
        (p, dp)
    };

    // Cauchy bound for the starting radius
    let radius = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * radius, 0.4 + k as f64 * std::f64::consts::TAU / n as f64))
        .collect();
    // Cubic convergence: a handful of sweeps once the roots separate. Steps
    // stall at rounding level, so stop well above it; callers polish.
    let zero = Complex64::new(0.0, 0.0);
    for _ in 0..100 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(roots[i]);
            if p == zero {
                continue;
            }
            let ratio = p / dp;
            let mut repulsion = zero;
            for j in 0..n {
                let d = roots[i] - roots[j];
                if j != i && d != zero {
                    repulsion += d.inv();
                }
            }
            let step = ratio / (1.0 - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                roots[i] -= step;
                worst = worst.max(step.l1_norm() / roots[i].l1_norm().max(1.0));
            }
        }
        if worst < 1e-12 {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_roots() {
        // (x - 1)(x + 2)(x - i)(x + 0.5i)
        let roots_true = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -0.5),
        ];
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for r in roots_true {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        let found = poly_roots(&coeffs);
        assert_eq!(found.len(), 4);
        for r in roots_true {
            assert!(found.iter().any(|f| (f - r).norm() < 1e-12), "{r} not in {found:?}");
        }
        // degree drops when the leading coefficient vanishes
        let found = poly_roots(&[Complex64::new(-4.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert_eq!(found.len(), 2);
        assert!(found.iter().all(|f| (f.norm() - 2.0).abs() < 1e-12));
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 1.0).abs() < 1e-12);
    }

    #[test]
    fn newton_bisect_finds_root() {
        let r = newton_bisect(|x| (x - x.cos(), 1.0 + x.sin()), 0.0, 1.0, 1e-14);
        assert!((r.cos() - r).abs() < 1e-13, "{r}");
        let r = newton_bisect(|x| (x * x - 2.0, 2.0 * x), 0.0, 2.0, 1e-15);
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let (x, fx, evals) = nelder_mead(
            |p: &[f64; 2]| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2),
            [-1.2, 1.0],
            [0.5, 0.5],
            5000,
            1e-16,
        );
        assert!(evals <= 5000);
        assert!(fx < 1e-10, "{fx}");
        assert!((x[0] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn nelder_mead_respects_budget() {
        let mut count = 0;
        let _ = nelder_mead(
            |p: &[f64; 3]| {
                count += 1;
                p.iter().map(|v| v * v).sum()
            },
            [1.0, 2.0, 3.0],
            [0.1, 0.1, 0.1],
            37,
            0.0,
        );
        assert!(count <= 37);
    }
}
