//! Small numerical kernels shared across modules: deterministic pairwise
//! summation, factorials, golden-section polish for circle extrema, and an
//! adaptive Simpson rule for ray integrals.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pairwise (tree) summation in a fixed order determined by index.
/// Deterministic regardless of thread count and more accurate than a
/// running sum for the long quadrature sums used here.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        let mut acc = Complex64::new(0.0, 0.0);
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Real-valued counterpart of [`pairwise_sum`].
pub fn pairwise_sum_real(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_real(&values[..mid]) + pairwise_sum_real(&values[mid..])
}

/// k! as f64; exact through 22! and correctly rounded far beyond any order
/// used by the toolkit (orders are capped well below 170).
pub fn factorial(k: usize) -> f64 {
    assert!(k <= 170, "factorial overflows f64 beyond 170!");
    let mut acc = 1.0;
    for i in 2..=k {
        acc *= i as f64;
    }
    acc
}

/// Golden-section search for a local maximum of `f` on [a, b].
pub fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, iters: usize) -> (f64, f64) {
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Scans `samples` uniformly spaced angles on [0, 2pi), then polishes the
/// best bracket by golden section. Returns (theta, extremal value).
/// `maximize = false` searches for the minimum.
pub fn circle_extremum(g: impl Fn(f64) -> f64, samples: usize, maximize: bool) -> (f64, f64) {
    assert!(samples >= 4);
    let step = std::f64::consts::TAU / samples as f64;
    let mut best_j = 0usize;
    let mut best = if maximize {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    };
    for j in 0..samples {
        let v = g(step * j as f64);
        let better = if maximize { v > best } else { v < best };
        if better {
            best = v;
            best_j = j;
        }
    }
    let lo = step * (best_j as f64 - 1.0);
    let hi = step * (best_j as f64 + 1.0);
    let signed = |theta: f64| {
        let v = g(theta.rem_euclid(std::f64::consts::TAU));
        if maximize {
            v
        } else {
            -v
        }
    };
    let (theta, v) = golden_max(signed, lo, hi, 40);
    let polished = if maximize { v } else { -v };
    let better = if maximize { polished > best } else { polished < best };
    if better {
        (theta.rem_euclid(std::f64::consts::TAU), polished)
    } else {
        (step * best_j as f64, best)
    }
}

/// Adaptive Simpson integration of `f` over [a, b] to the requested
/// relative tolerance. Subintervals are accepted on a local relative
/// criterion, so for nonnegative integrands (the only kind used here) the
/// accepted local errors sum to at most rel_tol times the integral.
/// A non-finite integrand value propagates out as an error.
pub fn adaptive_simpson(
    f: &impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    for (x, v) in [(a, fa), (m, fm), (b, fb)] {
        if !v.is_finite() {
            return Err(Error::NonFiniteWeight { r: x });
        }
    }
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    rel_tol: f64,
    depth: usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    if !flm.is_finite() || !frm.is_finite() {
        let r = if flm.is_finite() { rm } else { lm };
        return Err(Error::NonFiniteWeight { r });
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let refined = left + right;
    let delta = refined - whole;
    if depth == 0 || delta.abs() <= 15.0 * rel_tol * refined.abs().max(1e-300) {
        return Ok(refined + delta / 15.0);
    }
    Ok(simpson_rec(f, a, m, fa, flm, fm, left, rel_tol, depth - 1)?
        + simpson_rec(f, m, b, fm, frm, fb, right, rel_tol, depth - 1)?)
}
