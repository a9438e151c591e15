//! Growth bounds along radial rays: the derivative-of-max estimate, the
//! boundary limsup ratio, and the two-sided Jensen chain.
//!
//! Everything here reduces F to one ray z0 + t e^{i theta} b, t in [0, R),
//! and compares ln of an L-normalized derivative against a base term at the
//! ray foot plus an integral of the weight. The weight's radial derivative
//! comes from the registry closed form when present and central differences
//! otherwise.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::circle_max;
use crate::dirderiv::{dirderiv_sequence, QuadratureSpec};
use crate::error::{Error, Result};
use crate::funcs::AnalyticMap;
use crate::geometry::{herm, Direction, Point, C64};
use crate::lfield::LField;
use crate::numerics::{adaptive_simpson, factorial, pairwise_sum_real};
use crate::zeros::slice_zeros;

/// Angles used whenever a bound takes a max over theta.
const THETA_GRID: usize = 64;

/// Relative tolerance of the ray integrals.
const INT_REL_TOL: f64 = 1e-10;

/// A ray z0 + t e^{i theta} b, t in [0, exit), living inside the ball.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadialRay {
    pub z0: Vec<[f64; 2]>,
    pub theta: f64,
    pub b: Vec<[f64; 2]>,
    pub exit: f64,
}

impl RadialRay {
    fn z0_point(&self) -> Point {
        Point::new(self.z0.iter().map(|p| C64::new(p[0], p[1])).collect())
    }
}

/// Exit radius of the ray: the positive root of |z0 + t e^{i theta} b| = 1.
pub fn ray_exit(z0: &Point, b: &Direction, theta: f64) -> Result<f64> {
    if !(z0.norm() < 1.0) {
        return Err(Error::OutsideBall { norm: z0.norm() });
    }
    let a = b.norm() * b.norm();
    let zb = herm(z0.coords(), b.coords());
    let beta = (C64::from_polar(1.0, -theta) * zb).re;
    let gamma = z0.norm_sq() - 1.0;
    let disc = beta * beta - a * gamma;
    Ok((-beta + disc.sqrt()) / a)
}

/// Builds the ray, computing its exit radius.
pub fn ray(z0: &Point, b: &Direction, theta: f64) -> Result<RadialRay> {
    let exit = ray_exit(z0, b, theta)?;
    Ok(RadialRay {
        z0: z0.to_pairs(),
        theta,
        b: b.to_pairs(),
        exit,
    })
}

/// Both sides of the growth inequality along one ray, per radius.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthReport {
    pub r_grid: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    /// rhs - lhs per radius; the bound holds where these are nonnegative.
    pub margins: Vec<f64>,
    pub limsup: Option<f64>,
    /// Sampled sup of (-L'_t)+ / L^2 near the boundary, the hypothesis
    /// behind the limsup bound.
    pub hypothesis_sup: Option<f64>,
}

/// Radial derivative of the weight along the ray, closed form first.
fn weight_radial_deriv(
    l: &LField,
    z0: &Point,
    b: &Direction,
    theta: f64,
    t: f64,
    exit: f64,
) -> f64 {
    if let Some(d) = l.ray_derivative(z0, b, theta, t) {
        return d;
    }
    // Central differences; near the foot of the ray the window is widened
    // so both probes stay inside [0, exit).
    let h = (1e-6 * t.min(exit - t)).max(1e-9 * exit);
    let dir = C64::from_polar(1.0, theta);
    let at = |s: f64| l.eval(&z0.translate(dir * s, b));
    let lo = (t - h).max(0.0);
    (at(t + h) - at(lo)) / (t + h - lo)
}

fn weight_at(l: &LField, z0: &Point, b: &Direction, theta: f64, t: f64) -> f64 {
    l.eval(&z0.translate(C64::from_polar(t, theta), b))
}

/// Integral of the weight along the ray, 0 to r.
pub fn weight_integral(
    l: &LField,
    z0: &Point,
    b: &Direction,
    theta: f64,
    r: f64,
) -> Result<f64> {
    adaptive_simpson(&|t| Ok(weight_at(l, z0, b, theta, t)), 0.0, r, INT_REL_TOL)
}

/// The growth integrand (N+1) L + N (-L'_t)+ / L at ray parameter t.
fn growth_integrand(
    l: &LField,
    z0: &Point,
    b: &Direction,
    theta: f64,
    exit: f64,
    n_idx: usize,
    t: f64,
) -> Result<f64> {
    let lv = weight_at(l, z0, b, theta, t);
    if !(lv > 0.0 && lv.is_finite()) {
        return Err(Error::NonFiniteWeight { r: t });
    }
    let lp = weight_radial_deriv(l, z0, b, theta, t, exit);
    Ok((n_idx as f64 + 1.0) * lv + n_idx as f64 * (-lp).max(0.0) / lv)
}

/// ln of the max L-normalized derivative of order <= n_idx at the ray foot.
fn base_term(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    z0: &Point,
    n_idx: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let derivs = dirderiv_sequence(f, z0, b, C64::new(0.0, 0.0), n_idx, spec, Some(l))?;
    let l0 = l.eval(z0);
    let mut best = 0.0f64;
    let mut denom = 1.0;
    for (k, d) in derivs.iter().enumerate() {
        best = best.max(d.norm() / denom);
        denom *= l0 * (k as f64 + 1.0);
    }
    Ok(best.ln())
}

/// Right-hand side of the growth bound at radius r along the ray: the base
/// term at z0 plus the integral of (N+1) L + N (-L'_t)+ / L. The integral
/// runs as `quad_points` adaptive panels summed pairwise.
#[allow(clippy::too_many_arguments)]
pub fn growth_rhs(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    ray: &RadialRay,
    r: f64,
    n_idx: usize,
    quad_points: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(r >= 0.0 && r < ray.exit) {
        return Err(Error::BadRadii {
            r1: r,
            r2: ray.exit,
            context: "growth_rhs needs 0 <= r < ray exit",
        });
    }
    let z0 = ray.z0_point();
    let base = base_term(f, l, b, &z0, n_idx, spec)?;
    let panels = quad_points.max(1);
    let mut parts = Vec::with_capacity(panels);
    for i in 0..panels {
        let a = r * i as f64 / panels as f64;
        let c = r * (i + 1) as f64 / panels as f64;
        parts.push(adaptive_simpson(
            &|t| growth_integrand(l, &z0, b, ray.theta, ray.exit, n_idx, t),
            a,
            c,
            INT_REL_TOL,
        )?);
    }
    Ok(base + pairwise_sum_real(&parts))
}

/// Checks the growth bound along the ray at each radius of `r_grid`:
/// the ln-normalized order-p derivative against growth_rhs.
#[allow(clippy::too_many_arguments)]
pub fn growth_verify(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    ray: &RadialRay,
    r_grid: &[f64],
    p: usize,
    n_idx: usize,
    spec: &QuadratureSpec,
) -> Result<GrowthReport> {
    let z0 = ray.z0_point();
    let rows: Vec<Result<(f64, f64)>> = r_grid
        .par_iter()
        .map(|&r| {
            let t = C64::from_polar(r, ray.theta);
            let derivs = dirderiv_sequence(f, &z0, b, t, p, spec, Some(l))?;
            let lv = weight_at(l, &z0, b, ray.theta, r);
            let lhs = (derivs[p].norm() / (factorial(p) * lv.powi(p as i32))).ln();
            let rhs = growth_rhs(f, l, b, ray, r, n_idx, 8, spec)?;
            Ok((lhs, rhs))
        })
        .collect();
    let mut lhs = Vec::with_capacity(r_grid.len());
    let mut rhs = Vec::with_capacity(r_grid.len());
    let mut margins = Vec::with_capacity(r_grid.len());
    for row in rows {
        let (a, b) = row?;
        lhs.push(a);
        rhs.push(b);
        margins.push(b - a);
    }
    Ok(GrowthReport {
        r_grid: r_grid.to_vec(),
        lhs,
        rhs,
        margins,
        limsup: None,
        hypothesis_sup: None,
    })
}

/// The geometric radius sequence r_k = R (1 - 2^-k), k = 1..=k_max, used
/// to probe the boundary.
pub fn limsup_sequence(exit: f64, k_max: usize) -> Vec<f64> {
    (1..=k_max.min(24))
        .map(|k| exit * (1.0 - 0.5f64.powi(k as i32)))
        .collect()
}

/// The ratio ln|F| / int_0^r L along the ray at each radius.
pub fn ratio_curve(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    ray: &RadialRay,
    r_sequence: &[f64],
) -> Result<Vec<f64>> {
    let z0 = ray.z0_point();
    let ratios: Vec<Result<f64>> = r_sequence
        .par_iter()
        .map(|&r| {
            let z = z0.translate(C64::from_polar(r, ray.theta), b);
            let num = f.eval(&z).norm().ln();
            let den = weight_integral(l, &z0, b, ray.theta, r)?;
            Ok(num / den)
        })
        .collect();
    ratios.into_iter().collect()
}

/// Estimate of limsup ln|F| / int_0^r L along the ray: the running max of
/// the ratio over the last quarter of the radius sequence.
pub fn limsup_ratio(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    ray: &RadialRay,
    r_sequence: &[f64],
) -> Result<f64> {
    if r_sequence.is_empty() {
        return Err(Error::Config {
            field: "r_sequence".into(),
            message: "limsup_ratio needs at least one radius".into(),
        });
    }
    let ratios = ratio_curve(f, l, b, ray, r_sequence)?;
    let tail_start = (3 * ratios.len()) / 4;
    Ok(ratios[tail_start..]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Sampled sup of (-L'_t)+ / L^2 over the tail of the radius sequence; the
/// limsup bound assumes this tends to zero toward the boundary.
pub fn hypothesis_decay_sup(
    l: &LField,
    b: &Direction,
    ray: &RadialRay,
    r_sequence: &[f64],
) -> f64 {
    let z0 = ray.z0_point();
    let tail_start = (3 * r_sequence.len()) / 4;
    r_sequence[tail_start..]
        .iter()
        .map(|&t| {
            let lv = weight_at(l, &z0, b, ray.theta, t);
            let lp = weight_radial_deriv(l, &z0, b, ray.theta, t, ray.exit);
            (-lp).max(0.0) / (lv * lv)
        })
        .fold(0.0, f64::max)
}

/// Two-sided Jensen chain around z0 at radius r: the zero-counting
/// integral, the circle max of ln|F|, and the growth upper bound, for F
/// normalized to F(z0) = 1.
///
/// The counting integral int_0^r n(t)/t dt is assembled exactly: a
/// log-spaced scan of the counting function locates the jump brackets and
/// bisection pins each jump radius, after which the integral of the step
/// function is a finite sum of logarithms.
pub fn jensen_chain(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    z0: &Point,
    r: f64,
    n_idx: usize,
    spec: &QuadratureSpec,
) -> Result<(f64, f64, f64)> {
    let f0 = f.eval(z0);
    let deviation = (f0 - C64::new(1.0, 0.0)).norm();
    if deviation > 1e-10 {
        return Err(Error::NotNormalized { deviation });
    }
    let mut min_exit = f64::INFINITY;
    let mut rays = Vec::with_capacity(THETA_GRID);
    for i in 0..THETA_GRID {
        let theta = std::f64::consts::TAU * i as f64 / THETA_GRID as f64;
        let ry = ray(z0, b, theta)?;
        min_exit = min_exit.min(ry.exit);
        rays.push(ry);
    }
    if !(r > 0.0 && r < min_exit) {
        return Err(Error::BadRadii {
            r1: r,
            r2: min_exit,
            context: "jensen_chain needs 0 < r < every ray exit",
        });
    }
    let lower = jensen_lower(f, z0, b, r)?;
    let mid = circle_max(f, z0, b, C64::new(0.0, 0.0), r).ln();
    let uppers: Vec<Result<f64>> = rays
        .par_iter()
        .map(|ry| growth_rhs(f, l, b, ry, r, n_idx, 8, spec))
        .collect();
    let mut upper = f64::NEG_INFINITY;
    for u in uppers {
        upper = upper.max(u?);
    }
    Ok((lower, mid, upper))
}

/// The Jensen integral int_0^r n(t, z0, 0, 1/F) / t dt, evaluated exactly
/// from the located zeros: the counting function is a step function whose
/// integral against dt/t is sum_j m_j ln(r / |a_j|).
fn jensen_lower(f: &AnalyticMap, z0: &Point, b: &Direction, r: f64) -> Result<f64> {
    let set = slice_zeros(f, z0, b, C64::new(0.0, 0.0), r, 1e-9)?;
    let terms: Vec<f64> = set
        .zeros
        .iter()
        .filter(|z| z.location.norm() < r)
        .map(|z| z.multiplicity as f64 * (r / z.location.norm()).ln())
        .collect();
    Ok(pairwise_sum_real(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{registry_get, Params};
    use crate::lfield::lfield_registry;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn one_dir() -> Direction {
        Direction::new(vec![c(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn exit_radius_examples() {
        let b = one_dir();
        let r = ray_exit(&Point::origin(1), &b, 1.234).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
        let z = Point::new(vec![c(0.5, 0.0)]);
        assert!((ray_exit(&z, &b, 0.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((ray_exit(&z, &b, std::f64::consts::PI).unwrap() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn exit_radius_lower_bound_holds() {
        // R >= (1 - |z0|) / |b| for any angle.
        let b = Direction::new(vec![c(0.6, 0.3), c(-0.2, 0.7)]).unwrap();
        let z = Point::new(vec![c(0.3, -0.2), c(0.1, 0.4)]);
        for i in 0..24 {
            let theta = std::f64::consts::TAU * i as f64 / 24.0;
            let r = ray_exit(&z, &b, theta).unwrap();
            assert!(r >= (1.0 - z.norm()) / b.norm() - 1e-14);
            let end = z.translate(C64::from_polar(r, theta), &b);
            assert!((end.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_weight_integral_is_linear() {
        let f = registry_get("constant", &Params::new().complex("value", c(2.0, 0.0)))
            .unwrap();
        let l = LField::from_fn("three", 4.0, |_| 3.0).unwrap();
        let b = one_dir();
        let ry = ray(&Point::origin(1), &b, 0.0).unwrap();
        let rhs = growth_rhs(&f, &l, &b, &ry, 0.5, 0, 8, &QuadratureSpec::default())
            .unwrap();
        // base = ln 2, integral = 3 * 0.5.
        assert!((rhs - (2.0f64.ln() + 1.5)).abs() < 1e-9, "rhs = {rhs}");
    }

    #[test]
    fn reciprocal_weight_integral_matches_closed_form() {
        let f = registry_get(
            "exp_linear",
            &Params::new().cvec("c", vec![c(1.0, 0.0)]),
        )
        .unwrap();
        let beta = 2.0;
        let b = one_dir();
        let l = lfield_registry(
            "reciprocal_one_minus_r",
            &Params::new().real("c", beta),
            beta,
            &b,
        )
        .unwrap();
        let ry = ray(&Point::origin(1), &b, 0.0).unwrap();
        for n_idx in [0usize, 2] {
            for r in [0.3, 0.7, 0.9] {
                let rhs =
                    growth_rhs(&f, &l, &b, &ry, r, n_idx, 8, &QuadratureSpec::default())
                        .unwrap();
                let base = 1.0f64.max(1.0 / l.eval(&Point::origin(1))).ln();
                let integral = (n_idx as f64 + 1.0) * beta * (1.0 / (1.0 - r)).ln();
                assert!(
                    (rhs - (base + integral)).abs() < 1e-10 * (1.0 + integral),
                    "n={n_idx} r={r}: {rhs} vs {}",
                    base + integral
                );
            }
        }
    }

    #[test]
    fn decreasing_weight_pays_the_derivative_term() {
        // Along theta = pi from (0.3, -0.3) with b = (1, 0), |z2 - z1|
        // shrinks, the weight decreases, and the (-L')+ term kicks in.
        let b = Direction::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let l = lfield_registry("remark4_weight", &Params::new(), 1.5, &b).unwrap();
        let z0 = Point::new(vec![c(0.3, 0.0), c(-0.3, 0.0)]);
        let ry = ray(&z0, &b, std::f64::consts::PI).unwrap();
        let n_idx = 2usize;
        let r = 0.5f64;
        let plain: f64 =
            weight_integral(&l, &z0, &b, std::f64::consts::PI, r).unwrap();
        let mut with_term = 0.0;
        for i in 0..8 {
            let a = r * i as f64 / 8.0;
            let b_end = r * (i + 1) as f64 / 8.0;
            with_term += adaptive_simpson(
                &|t| growth_integrand(&l, &z0, &b, std::f64::consts::PI, ry.exit, n_idx, t),
                a,
                b_end,
                1e-10,
            )
            .unwrap();
        }
        // Closed form: L = 2(0.6 - t) + 1 on [0, 0.5]; (N+1) int L = 3 *
        // (2.2 r - r^2) / ... spelled out below; N int 2/L = N (ln 2.2 -
        // ln(2.2 - 2r)).
        let exact_plain = 2.2 * r - r * r;
        let exact = (n_idx as f64 + 1.0) * exact_plain
            + n_idx as f64 * ((2.2f64).ln() - (2.2 - 2.0 * r).ln());
        assert!((plain - exact_plain).abs() < 1e-8, "plain = {plain}");
        assert!((with_term - exact).abs() < 1e-7, "with_term = {with_term}");
        assert!(with_term > (n_idx as f64 + 1.0) * plain + 0.1);
    }

    #[test]
    fn growth_bound_holds_for_exponential() {
        let f = registry_get(
            "exp_linear",
            &Params::new().cvec("c", vec![c(2.0, 0.0)]),
        )
        .unwrap();
        let beta = 2.0;
        let b = one_dir();
        let l = lfield_registry(
            "reciprocal_one_minus_r",
            &Params::new().real("c", beta),
            beta,
            &b,
        )
        .unwrap();
        let ry = ray(&Point::origin(1), &b, 0.0).unwrap();
        let mut grid: Vec<f64> = (1..=12).map(|i| ry.exit * i as f64 / 13.0).collect();
        grid.push(0.999 * ry.exit);
        for p in [0usize, 1] {
            let rep =
                growth_verify(&f, &l, &b, &ry, &grid, p, 1, &QuadratureSpec::default())
                    .unwrap();
            assert!(
                rep.margins.iter().all(|m| *m >= -1e-6),
                "margins {:?}",
                rep.margins
            );
            // rhs is monotone in r: same base term, growing integral.
            for w in rep.rhs.windows(2) {
                assert!(w[1] >= w[0] - 1e-12);
            }
        }
    }

    #[test]
    fn constant_function_margin_grows() {
        let f = registry_get("constant", &Params::new().complex("value", c(0.5, 0.0)))
            .unwrap();
        let l = LField::from_fn("two", 4.0, |_| 2.0).unwrap();
        let b = one_dir();
        let ry = ray(&Point::origin(1), &b, 0.0).unwrap();
        let grid = [0.1, 0.3, 0.5, 0.7, 0.9];
        let rep = growth_verify(&f, &l, &b, &ry, &grid, 0, 0, &QuadratureSpec::default())
            .unwrap();
        for w in rep.margins.windows(2) {
            assert!(w[1] > w[0]);
        }
        assert!(rep.margins[0] > 0.0);
    }

    #[test]
    fn limsup_vanishes_for_bounded_log_growth() {
        // ln|exp(c z)| is bounded on the ray while the weight integral
        // diverges, so the ratio tail collapses to zero.
        let f = registry_get(
            "exp_linear",
            &Params::new().cvec("c", vec![c(1.5, 0.0)]),
        )
        .unwrap();
        let beta = 2.0;
        let b = one_dir();
        let l = lfield_registry(
            "reciprocal_one_minus_r",
            &Params::new().real("c", beta),
            beta,
            &b,
        )
        .unwrap();
        let ry = ray(&Point::origin(1), &b, 0.0).unwrap();
        let rs = limsup_sequence(ry.exit, 20);
        let ratio = limsup_ratio(&f, &l, &b, &ry, &rs).unwrap();
        assert!(ratio.abs() < 0.1, "ratio = {ratio}");
        assert!(hypothesis_decay_sup(&l, &b, &ry, &rs) < 1.0);
    }

    #[test]
    fn limsup_of_constant_is_tiny() {
        let f = registry_get("constant", &Params::new().complex("value", c(0.5, 0.0)))
            .unwrap();
        let beta = 2.0;
        let b = one_dir();
        let l = lfield_registry(
            "reciprocal_one_minus_r",
            &Params::new().real("c", beta),
            beta,
            &b,
        )
        .unwrap();
        let ry = ray(&Point::origin(1), &b, 0.0).unwrap();
        let rs = limsup_sequence(ry.exit, 20);
        let ratio = limsup_ratio(&f, &l, &b, &ry, &rs).unwrap();
        assert!(ratio.abs() < 0.05, "ratio = {ratio}");
    }

    #[test]
    fn one_variable_ratio_approaches_gamma_over_beta() {
        // f = 1/(1-t)^gamma with l = beta/(1-|t|): ln max|f| on |t| = r is
        // gamma ln(1/(1-r)) and int l = beta ln(1/(1-r)).
        let gamma = 3.0;
        let beta = 2.0;
        let f = AnalyticMap::from_fn("recip_power", 1, move |z| {
            (C64::new(1.0, 0.0) - z[0]).powf(-gamma)
        });
        let b = one_dir();
        let l = lfield_registry(
            "reciprocal_one_minus_r",
            &Params::new().real("c", beta),
            beta,
            &b,
        )
        .unwrap();
        let ry = ray(&Point::origin(1), &b, 0.0).unwrap();
        let rs = limsup_sequence(ry.exit, 22);
        let ratio = limsup_ratio(&f, &l, &b, &ry, &rs).unwrap();
        let expect = gamma / beta;
        assert!(
            (ratio - expect).abs() < 0.02 * expect,
            "ratio = {ratio}, want {expect}"
        );
    }

    #[test]
    fn jensen_chain_matches_closed_forms() {
        let b = one_dir();
        let beta = 2.0;
        let l = lfield_registry(
            "reciprocal_one_minus_r",
            &Params::new().real("c", beta),
            1.5,
            &b,
        )
        .unwrap();
        let spec = QuadratureSpec::default();
        for (a, r) in [(c(0.25, 0.0), 0.5), (c(0.0, 0.4), 0.8), (c(0.25, 0.0), 0.8)] {
            let f = registry_get("normalized_zero", &Params::new().complex("a", a))
                .unwrap();
            let (lower, mid, upper) =
                jensen_chain(&f, &l, &b, &Point::origin(1), r, 1, &spec).unwrap();
            let want_lower = (r / a.norm()).ln();
            let want_mid = ((r + a.norm()) / a.norm()).ln();
            assert!(
                (lower - want_lower).abs() < 1e-6 * want_lower.max(1.0),
                "lower = {lower}, want {want_lower}"
            );
            assert!(
                (mid - want_mid).abs() < 1e-6 * want_mid.max(1.0),
                "mid = {mid}, want {want_mid}"
            );
            assert!(lower <= mid + 1e-9 && mid <= upper + 1e-9);
        }
    }

    #[test]
    fn jensen_zero_free_lower_is_zero() {
        let f = registry_get(
            "exp_linear",
            &Params::new().cvec("c", vec![c(1.0, 0.0)]),
        )
        .unwrap();
        let b = one_dir();
        let l = LField::from_fn("two", 4.0, |_| 2.0).unwrap();
        let (lower, mid, upper) = jensen_chain(
            &f,
            &l,
            &b,
            &Point::origin(1),
            0.6,
            0,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_eq!(lower, 0.0);
        assert!(lower <= mid && mid <= upper);
    }

    #[test]
    fn jensen_small_radius_sees_no_zero() {
        let f = registry_get("normalized_zero", &Params::new().complex("a", c(0.25, 0.0)))
            .unwrap();
        let b = one_dir();
        let l = LField::from_fn("two", 4.0, |_| 2.0).unwrap();
        let (lower, mid, _) = jensen_chain(
            &f,
            &l,
            &b,
            &Point::origin(1),
            0.2,
            1,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_eq!(lower, 0.0);
        let want_mid = ((0.2 + 0.25) / 0.25f64).ln();
        assert!((mid - want_mid).abs() < 1e-6);
    }

    #[test]
    fn unnormalized_base_is_rejected() {
        let f = registry_get(
            "exp_linear",
            &Params::new().cvec("c", vec![c(1.0, 0.0)]),
        )
        .unwrap();
        let b = one_dir();
        let l = LField::from_fn("two", 4.0, |_| 2.0).unwrap();
        let z0 = Point::new(vec![c(0.3, 0.0)]);
        let err = jensen_chain(&f, &l, &b, &z0, 0.2, 0, &QuadratureSpec::default())
            .unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
    }
}
