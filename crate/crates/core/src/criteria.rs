//! Numerical verifiers for the behavioral characterizations of bounded
//! index: the local derivative-maximum criterion, two-circle max-modulus
//! bounds with the index bound they imply, the Hayman-type derivative
//! bound, the max <= P * min circle criterion, and the theoretical
//! constants from the proofs.
//!
//! Circle maxima and minima are estimated by dense uniform sampling (720
//! angles) polished by golden-section search around the best bracket;
//! slice maxima are smooth, so the two-stage search is cheap and accurate.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirderiv::{dirderiv_profile, dirderiv_sequence, QuadratureSpec};
use crate::error::{Error, Result};
use crate::funcs::AnalyticMap;
use crate::geometry::{slice_domain, Direction, Point, C64};
use crate::index::tie_tolerance;
use crate::lfield::LField;
use crate::numerics::{circle_extremum, factorial};
use crate::sampling::{BallGridSpec, SliceGrid};

/// Angle samples used before golden-section polish on any circle scan.
const CIRCLE_SAMPLES: usize = 720;

/// Modulus statistics of a slice circle: the max modulus, the maximal term
/// of the power series at that radius, and the central index.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CircleModulusStats {
    pub r: f64,
    pub max_mod: f64,
    pub max_term: f64,
    pub central_index: usize,
}

/// Outcome of one criterion run: the verdict, the constants found, and the
/// worst sample behind them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub passed: bool,
    pub constants: BTreeMap<String, f64>,
    pub worst: Option<WorstSample>,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WorstSample {
    pub z0: Vec<[f64; 2]>,
    pub t0: [f64; 2],
    pub value: f64,
}

impl CriterionReport {
    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants.get(name).copied()
    }
}

/// Max modulus of the slice g(t) = F(z0 + tb) on |t - t0| = r, by dense
/// sampling plus polish.
pub fn circle_max(f: &AnalyticMap, z0: &Point, b: &Direction, t0: C64, r: f64) -> f64 {
    let (_, v) = circle_extremum(
        |theta| {
            let t = t0 + C64::from_polar(r, theta);
            f.eval(&z0.translate(t, b)).norm()
        },
        CIRCLE_SAMPLES,
        true,
    );
    v
}

/// Min modulus on the same circle.
pub fn circle_min(f: &AnalyticMap, z0: &Point, b: &Direction, t0: C64, r: f64) -> f64 {
    let (_, v) = circle_extremum(
        |theta| {
            let t = t0 + C64::from_polar(r, theta);
            f.eval(&z0.translate(t, b)).norm()
        },
        CIRCLE_SAMPLES,
        false,
    );
    v
}

/// Max modulus, maximal series term |b_m| r^m, and central index of the
/// slice at circle radius r around t0. The central index is the largest
/// order attaining the maximal term (within relative tolerance 1e-12).
pub fn circle_stats(
    f: &AnalyticMap,
    z0: &Point,
    b: &Direction,
    t0: C64,
    r: f64,
    series_orders: usize,
    spec: &QuadratureSpec,
) -> Result<CircleModulusStats> {
    let domain = slice_domain(z0, b)?;
    let clearance = domain.clearance(t0);
    if !(r > 0.0) || r >= clearance {
        return Err(Error::CircleEscapesDomain {
            radius: r,
            clearance,
        });
    }
    let max_mod = circle_max(f, z0, b, t0, r);
    let mut qspec = *spec;
    qspec.max_order = qspec.max_order.max(series_orders);
    let derivs = dirderiv_sequence(f, z0, b, t0, series_orders, &qspec, None)?;
    let mut max_term = 0.0f64;
    let mut central_index = 0usize;
    let mut r_pow = 1.0;
    let mut terms = Vec::with_capacity(series_orders + 1);
    for (m, d) in derivs.iter().enumerate() {
        let term = d.norm() / factorial(m) * r_pow;
        terms.push(term);
        max_term = max_term.max(term);
        r_pow *= r;
    }
    for (m, term) in terms.iter().enumerate() {
        if *term >= max_term * (1.0 - 1e-12) {
            central_index = m;
        }
    }
    Ok(CircleModulusStats {
        r,
        max_mod,
        max_term,
        central_index,
    })
}

/// Disc sampling used by the local-maximum criterion: center plus rings at
/// these fractions of the disc radius, each with this many angles.
const DISC_FRACTIONS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
const DISC_ANGLES: usize = 48;

struct PairVerdict {
    min_ratio: f64,
    k0: usize,
}

fn thm5_pair(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    z0: &Point,
    t0: C64,
    eta: f64,
    n0_cap: usize,
    spec: &QuadratureSpec,
) -> Result<PairVerdict> {
    let l0 = l.eval(&z0.translate(t0, b));
    if !(l0 > 0.0) {
        return Err(Error::NonPositiveL { value: l0 });
    }
    let disc_radius = eta / l0;
    let domain = slice_domain(z0, b)?;
    let center = dirderiv_profile(f, z0, b, t0, n0_cap, spec, Some(l))?;
    let mut disc_max = vec![0.0f64; n0_cap + 1];
    let mut disc_noise = vec![0.0f64; n0_cap + 1];
    let mut visit = |t: C64| -> Result<()> {
        // For weights violating the growth condition the eta/L disc can
        // poke out of the ball, where F is not defined; the max runs over
        // the part of the disc inside the slice domain.
        if domain.clearance(t) <= 1e-9 * domain.radius {
            return Ok(());
        }
        let p = dirderiv_profile(f, z0, b, t, n0_cap, spec, Some(l))?;
        for (k, d) in p.derivs.iter().enumerate() {
            disc_max[k] = disc_max[k].max(d.norm());
            disc_noise[k] = disc_noise[k].max(p.noise_floor(k));
        }
        Ok(())
    };
    visit(t0)?;
    for (ring, frac) in DISC_FRACTIONS.iter().enumerate() {
        let r = frac * disc_radius;
        for a in 0..DISC_ANGLES {
            let theta =
                std::f64::consts::TAU * (a as f64 + 0.5 * ring as f64) / DISC_ANGLES as f64;
            visit(t0 + C64::from_polar(r, theta))?;
        }
    }
    // Only orders whose center derivative stands well above its roundoff
    // floor can participate: an unresolved denominator makes the ratio a
    // quotient of noise, which could undercut the true minimum. Among the
    // resolved orders, each ratio carries quadrature error, so the argmin
    // is selected interval-style: smallest k whose lower bound clears the
    // smallest upper bound. A pure exponential slice, where every ratio
    // agrees exactly, then resolves to k0 = 0 regardless of roundoff.
    let mut ratios = vec![f64::INFINITY; n0_cap + 1];
    let mut lo = vec![f64::INFINITY; n0_cap + 1];
    let mut hi = vec![f64::INFINITY; n0_cap + 1];
    for k in 0..=n0_cap {
        let denom = center.derivs[k].norm();
        if disc_max[k] <= 0.0 || !center.resolved(k, 1e3) {
            continue;
        }
        let unc = center.noise_floor(k) / denom + disc_noise[k] / disc_max[k];
        let r = disc_max[k] / denom;
        ratios[k] = r;
        lo[k] = r * (1.0 - 8.0 * unc).max(0.0);
        hi[k] = r * (1.0 + 8.0 * unc + 1e-9);
    }
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let min_hi = hi.iter().copied().fold(f64::INFINITY, f64::min);
    let k0 = (0..=n0_cap).find(|&k| lo[k] <= min_hi).unwrap_or(0);
    Ok(PairVerdict { min_ratio, k0 })
}

/// Local-maximum criterion: on each slice pair (z0, t0) of the grid, finds
/// the derivative order k0 <= n0_cap whose max over the eta/L disc exceeds
/// its center value by the least factor. Passes when every pair admits a
/// finite factor; reports P1 = the largest such minimal factor and n0 =
/// the largest k0 used.
pub fn thm5_verify(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    eta: f64,
    grid: &SliceGrid,
    n0_cap: usize,
    spec: &QuadratureSpec,
) -> Result<CriterionReport> {
    if !(eta > 0.0 && eta <= l.beta()) {
        return Err(Error::EtaOutOfRange {
            eta,
            beta: l.beta(),
        });
    }
    let pairs: Vec<(&Point, C64)> = grid.pairs().collect();
    let results: Vec<Result<PairVerdict>> = pairs
        .par_iter()
        .map(|(z0, t0)| thm5_pair(f, l, b, z0, *t0, eta, n0_cap, spec))
        .collect();
    let mut p1 = 0.0f64;
    let mut n0 = 0usize;
    let mut passed = true;
    let mut worst: Option<WorstSample> = None;
    for (res, (z0, t0)) in results.into_iter().zip(&pairs) {
        let v = res?;
        if !v.min_ratio.is_finite() {
            passed = false;
        }
        n0 = n0.max(v.k0);
        if v.min_ratio > p1 || worst.is_none() {
            p1 = p1.max(v.min_ratio);
            worst = Some(WorstSample {
                z0: z0.to_pairs(),
                t0: [t0.re, t0.im],
                value: v.min_ratio,
            });
        }
    }
    let mut constants = BTreeMap::new();
    constants.insert("P1".into(), p1);
    constants.insert("n0".into(), n0 as f64);
    constants.insert("eta".into(), eta);
    Ok(CriterionReport {
        criterion: "local_max".into(),
        passed,
        constants,
        worst,
        samples: pairs.len(),
    })
}

/// Ratio of slice max moduli on the concentric circles of radius r2/L and
/// r1/L around t0; at least 1 by the maximum principle.
pub fn thm8_ratio(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    r1: f64,
    r2: f64,
    z0: &Point,
    t0: C64,
) -> Result<f64> {
    if !(r1 > 0.0 && r1 < r2 && r2 <= l.beta()) {
        return Err(Error::BadRadii {
            r1,
            r2,
            context: "need 0 < r1 < r2 <= beta",
        });
    }
    let center = z0.translate(t0, b);
    let l0 = l.eval(&center);
    if !(l0 > 0.0) {
        return Err(Error::NonPositiveL { value: l0 });
    }
    let domain = slice_domain(z0, b)?;
    let clearance = domain.clearance(t0);
    let outer = r2 / l0;
    if outer >= clearance {
        return Err(Error::CircleEscapesDomain {
            radius: outer,
            clearance,
        });
    }
    let m1 = circle_max(f, z0, b, t0, r1 / l0);
    let m2 = circle_max(f, z0, b, t0, outer);
    if m1 == 0.0 {
        // Analyticity forces F = 0 on the whole slice.
        return Ok(1.0);
    }
    Ok(m2 / m1)
}

/// The index bound implied by a two-circle constant P1 at radii
/// 0 < r1 < 1 < r2: -ln(1 - r1)/ln r2 + ln P1 / ln r2.
pub fn thm8_index_bound(r1: f64, r2: f64, p1: f64) -> Result<f64> {
    if !(r1 > 0.0 && r1 < 1.0) || !(r2 > 1.0) {
        return Err(Error::BadRadii {
            r1,
            r2,
            context: "need 0 < r1 < 1 < r2",
        });
    }
    if !(p1 >= 1.0) {
        return Err(Error::BadParams {
            name: "thm8_index_bound".into(),
            reason: format!("P1 must be >= 1, got {p1}"),
        });
    }
    Ok(-(1.0 - r1).ln() / r2.ln() + p1.ln() / r2.ln())
}

/// Hayman-type criterion: |d^(p+1)F/db^(p+1)| / L^(p+1) <= C * max_{k<=p}
/// |d^k F/db^k| / L^k at every grid point (no factorials on either side).
/// Also reports the smallest C that would pass for this p.
pub fn hayman_verify(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    p: usize,
    c_bound: f64,
    grid: &BallGridSpec,
    spec: &QuadratureSpec,
) -> Result<CriterionReport> {
    if !(c_bound > 0.0) {
        return Err(Error::BadParams {
            name: "hayman_verify".into(),
            reason: format!("C must be positive, got {c_bound}"),
        });
    }
    let points = grid.points(f.dimension());
    let results: Vec<Result<(f64, f64)>> = points
        .par_iter()
        .map(|z| {
            let derivs =
                dirderiv_sequence(f, z, b, C64::new(0.0, 0.0), p + 1, spec, Some(l))?;
            let lz = l.eval(z);
            if !(lz > 0.0) {
                return Err(Error::NonPositiveL { value: lz });
            }
            let mut rhs = 0.0f64;
            let mut l_pow = 1.0;
            for d in derivs.iter().take(p + 1) {
                rhs = rhs.max(d.norm() / l_pow);
                l_pow *= lz;
            }
            let lhs = derivs[p + 1].norm() / l_pow;
            Ok((lhs, rhs))
        })
        .collect();
    let mut passed = true;
    let mut min_c = 0.0f64;
    let mut worst: Option<WorstSample> = None;
    for (res, z) in results.into_iter().zip(&points) {
        let (lhs, rhs) = res?;
        let bound = c_bound * rhs;
        if lhs > bound + tie_tolerance(bound) {
            passed = false;
        }
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        if ratio > min_c || worst.is_none() {
            min_c = min_c.max(ratio);
            worst = Some(WorstSample {
                z0: z.to_pairs(),
                t0: [0.0, 0.0],
                value: ratio,
            });
        }
    }
    let mut constants = BTreeMap::new();
    constants.insert("p".into(), p as f64);
    constants.insert("C".into(), c_bound);
    constants.insert("min_C".into(), min_c);
    Ok(CriterionReport {
        criterion: "hayman".into(),
        passed,
        constants,
        worst,
        samples: points.len(),
    })
}

/// Scans log-spaced circle radii r in (0, R] (L-scaled around t0) for the
/// one minimizing max|g| / min|g|; returns (r_star, ratio). The criterion
/// guarantees a bounded ratio at some radius for bounded-index functions;
/// the scan reports the best found and never claims nonexistence.
pub fn thm11_maxmin(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    big_r: f64,
    z0: &Point,
    t0: C64,
    r_scan: usize,
    _spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if !(big_r > 0.0 && big_r <= l.beta()) {
        return Err(Error::BadRadii {
            r1: 0.0,
            r2: big_r,
            context: "need 0 < R <= beta",
        });
    }
    assert!(r_scan >= 2);
    let center = z0.translate(t0, b);
    let l0 = l.eval(&center);
    if !(l0 > 0.0) {
        return Err(Error::NonPositiveL { value: l0 });
    }
    let domain = slice_domain(z0, b)?;
    let clearance = domain.clearance(t0);
    let mut best: Option<(f64, f64)> = None;
    let mut any_admissible = false;
    for j in 0..r_scan {
        // Log-spaced from R/100 up to R.
        let frac = j as f64 / (r_scan - 1) as f64;
        let r = big_r * 0.01f64.powf(1.0 - frac);
        let t_radius = r / l0;
        if t_radius >= clearance {
            continue;
        }
        any_admissible = true;
        let hi = circle_max(f, z0, b, t0, t_radius);
        let lo = circle_min(f, z0, b, t0, t_radius);
        if hi <= 0.0 {
            continue;
        }
        if lo <= 1e-300 * hi {
            continue;
        }
        let ratio = hi / lo;
        if best.map_or(true, |(_, cur)| ratio < cur) {
            best = Some((r, ratio));
        }
    }
    if !any_admissible {
        return Err(Error::CircleEscapesDomain {
            radius: big_r / l0,
            clearance,
        });
    }
    best.ok_or(Error::AllCirclesDegenerate)
}

/// The proof constants of the local-maximum criterion:
/// q = [2 eta (N+1) lambda2^(N+1) lambda1^(-N)] + 1 and
/// P1 = (2 lambda2^N lambda1^(-N))^q * lambda2^N.
pub fn theoretical_constants(
    n: usize,
    lambda1: f64,
    lambda2: f64,
    eta: f64,
) -> Result<(u32, f64)> {
    if !(lambda1 > 0.0 && lambda1 <= lambda2 && eta > 0.0) {
        return Err(Error::BadLambdas {
            lambda1,
            lambda2,
            eta,
        });
    }
    let np = n as i32;
    let q_real = 2.0 * eta * (n as f64 + 1.0) * lambda2.powi(np + 1) * lambda1.powi(-np);
    let q = q_real.floor() as u32 + 1;
    let base = 2.0 * lambda2.powi(np) * lambda1.powi(-np);
    let p1 = base.powi(q as i32) * lambda2.powi(np);
    Ok((q, p1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{registry_get, Params};
    use crate::lfield::{base_weight, lfield_registry};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn one_dir() -> Direction {
        Direction::new(vec![c(1.0, 0.0)]).unwrap()
    }

    fn l_reciprocal(b: &Direction) -> LField {
        lfield_registry(
            "reciprocal_one_minus_r",
            &Params::new().real("c", 2.0).real("alpha", 1.0),
            1.8,
            b,
        )
        .unwrap()
    }

    #[test]
    fn circle_stats_of_coordinate_function() {
        let f = registry_get("linear", &Params::new().cvec("c", vec![c(1.0, 0.0)]))
            .unwrap();
        let b = one_dir();
        let s = circle_stats(
            &f,
            &Point::origin(1),
            &b,
            c(0.0, 0.0),
            0.5,
            30,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((s.max_mod - 0.5).abs() < 1e-9);
        assert!((s.max_term - 0.5).abs() < 1e-9);
        assert_eq!(s.central_index, 1);
    }

    #[test]
    fn circle_stats_of_constant() {
        let f = registry_get("constant", &Params::new().complex("value", c(0.0, 3.0)))
            .unwrap();
        let b = one_dir();
        let s = circle_stats(
            &f,
            &Point::origin(1),
            &b,
            c(0.0, 0.0),
            0.3,
            30,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((s.max_mod - 3.0).abs() < 1e-9);
        assert_eq!(s.central_index, 0);
        assert!(s.max_term <= s.max_mod + 1e-12);
    }

    #[test]
    fn central_index_matches_term_oracle() {
        // exp slice: coefficient m is s^m/m! with s = 4, so the maximal
        // term of sum |s|^m r^m / m! sits where the factorial overtakes.
        let f = registry_get("exp_linear", &Params::new().cvec("c", vec![c(4.0, 0.0)]))
            .unwrap();
        let b = one_dir();
        let r = 0.45;
        let s = circle_stats(
            &f,
            &Point::origin(1),
            &b,
            c(0.0, 0.0),
            r,
            30,
            &QuadratureSpec::default(),
        )
        .unwrap();
        let x: f64 = 4.0 * r;
        let mut best = 0.0f64;
        let mut terms = Vec::new();
        for m in 0..=30usize {
            let term = x.powi(m as i32) / factorial(m);
            terms.push(term);
            best = best.max(term);
        }
        let mut want = 0usize;
        for (m, term) in terms.iter().enumerate() {
            if *term >= best * (1.0 - 1e-12) {
                want = m;
            }
        }
        assert_eq!(s.central_index, want);
        assert!((s.max_term - best).abs() < 1e-9 * best);
        assert!(s.max_term <= s.max_mod * (1.0 + 1e-9));
    }

    #[test]
    fn max_term_never_exceeds_max_mod() {
        let f = registry_get(
            "exp_linear",
            &Params::new().cvec("c", vec![c(1.5, 0.8), c(-0.6, 0.2)]),
        )
        .unwrap();
        let b = Direction::new(vec![c(1.0, 0.0), c(0.3, -0.4)]).unwrap();
        let z0 = Point::new(vec![c(0.1, 0.1), c(-0.2, 0.05)]);
        for r in [0.05, 0.15, 0.3] {
            let s = circle_stats(
                &f,
                &z0,
                &b,
                c(0.0, 0.0),
                r,
                30,
                &QuadratureSpec::default(),
            )
            .unwrap();
            assert!(
                s.max_term <= s.max_mod * (1.0 + 1e-9),
                "r = {r}: term {} mod {}",
                s.max_term,
                s.max_mod
            );
        }
    }

    #[test]
    fn local_max_criterion_trivial_for_constant() {
        let f = registry_get("constant", &Params::new()).unwrap();
        let b = one_dir();
        let l = l_reciprocal(&b);
        let grid = SliceGrid::through_points(
            &[Point::origin(1), Point::new(vec![c(0.3, 0.2)])],
            &b,
            3,
        );
        let rep = thm5_verify(&f, &l, &b, 1.0, &grid, 6, &QuadratureSpec::default())
            .unwrap();
        assert!(rep.passed);
        assert!((rep.constant("P1").unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(rep.constant("n0").unwrap(), 0.0);
    }

    #[test]
    fn local_max_criterion_on_quadratic_exponential() {
        let f = registry_get("remark4", &Params::new()).unwrap();
        let b = Direction::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let l = lfield_registry("remark4_weight", &Params::new(), 1.5, &b).unwrap();
        let pts: Vec<Point> = (0..8)
            .map(|i| crate::sampling::ball_point(2, 40 + i))
            .collect();
        let grid = SliceGrid::through_points(&pts, &b, 2);
        let rep = thm5_verify(&f, &l, &b, 1.0, &grid, 6, &QuadratureSpec::default())
            .unwrap();
        // The slice is a pure exponential: the disc ratio is the same at
        // every order, so k0 = 0 wins and stays below e^(2|w| eta / L) < e.
        assert!(rep.passed);
        assert_eq!(rep.constant("n0").unwrap(), 0.0);
        let p1 = rep.constant("P1").unwrap();
        assert!(p1 >= 1.0 && p1 < 2.8, "P1 = {p1}");
    }

    #[test]
    fn local_max_ratio_explodes_near_high_multiplicity_zero() {
        // (1 + 512 z * 2^-8)^8 factor vanishes to order 8 at z = -0.5; with
        // the order cap at 4 the minimal disc ratio grows as the base point
        // approaches the zero.
        let f = registry_get(
            "truncated_product",
            &Params::new()
                .int("j_max", 8)
                .cvec("c", vec![c(512.0, 0.0)])
                .cvec("d", vec![c(0.1, 0.0)]),
        )
        .unwrap();
        let b = one_dir();
        let l = lfield_registry(
            "reciprocal_one_minus_r",
            &Params::new().real("c", 4.0),
            1.8,
            &b,
        )
        .unwrap();
        let spec = QuadratureSpec::default();
        let mut ratios = Vec::new();
        for delta in [1e-1, 1e-2, 1e-3] {
            let grid = SliceGrid::through_points(
                &[Point::new(vec![c(-0.5 + delta, 0.0)])],
                &b,
                1,
            );
            let rep = thm5_verify(&f, &l, &b, 1.0, &grid, 4, &spec).unwrap();
            ratios.push(rep.constant("P1").unwrap());
        }
        // The growth saturates at the smallest delta, where the center
        // derivative sinks toward the quadrature noise floor; the signal
        // is the strict monotone explosion.
        assert!(ratios[1] > 100.0 * ratios[0], "{ratios:?}");
        assert!(ratios[2] > ratios[1], "{ratios:?}");
    }

    #[test]
    fn two_circle_ratio_matches_closed_forms() {
        let b = one_dir();
        let l = l_reciprocal(&b);
        let z0 = Point::origin(1);
        let t0 = c(0.0, 0.0);
        let constant = registry_get("constant", &Params::new()).unwrap();
        let r = thm8_ratio(&constant, &l, &b, 0.5, 1.5, &z0, t0).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
        let coord = registry_get("linear", &Params::new().cvec("c", vec![c(1.0, 0.0)]))
            .unwrap();
        let r = thm8_ratio(&coord, &l, &b, 0.5, 1.5, &z0, t0).unwrap();
        assert!((r - 3.0).abs() < 1e-9);
        let expf = registry_get("exp_linear", &Params::new().cvec("c", vec![c(2.0, 0.0)]))
            .unwrap();
        let r = thm8_ratio(&expf, &l, &b, 0.5, 1.5, &z0, t0).unwrap();
        let want = (2.0 * (1.5 - 0.5) / 2.0f64).exp();
        assert!((r - want).abs() < 1e-6 * want);
    }

    #[test]
    fn two_circle_ratio_respects_maximum_principle() {
        let b = one_dir();
        let l = l_reciprocal(&b);
        let z0 = Point::new(vec![c(0.2, -0.1)]);
        for name in ["linear", "exp_linear"] {
            let f = registry_get(name, &Params::new().cvec("c", vec![c(0.7, 0.4)]))
                .unwrap();
            let r = thm8_ratio(&f, &l, &b, 0.3, 1.2, &z0, c(0.05, 0.0)).unwrap();
            assert!(r >= 1.0 - 1e-12, "{name}: {r}");
        }
        assert!(matches!(
            thm8_ratio(&registry_get("constant", &Params::new()).unwrap(), &l, &b, 1.5, 0.5, &z0, c(0.0, 0.0)),
            Err(Error::BadRadii { .. })
        ));
    }

    #[test]
    fn index_bound_plugins() {
        let e = std::f64::consts::E;
        let v = thm8_index_bound(0.5, e, 1.0).unwrap();
        assert!((v - 2.0f64.ln()).abs() < 1e-12);
        let v = thm8_index_bound(0.5, e, (2.0f64).exp()).unwrap();
        assert!((v - (2.0f64.ln() + 2.0)).abs() < 1e-12);
        assert!(thm8_index_bound(1.5, e, 1.0).is_err());
        assert!(thm8_index_bound(0.5, 0.9, 1.0).is_err());
        assert!(thm8_index_bound(0.5, e, 0.5).is_err());
    }

    #[test]
    fn hayman_trivial_cases_pass() {
        let b = one_dir();
        let l = l_reciprocal(&b);
        let grid = BallGridSpec::small(64, 5);
        let spec = QuadratureSpec::default();
        let constant = registry_get("constant", &Params::new()).unwrap();
        let rep = hayman_verify(&constant, &l, &b, 0, 1.0, &grid, &spec).unwrap();
        assert!(rep.passed);
        assert!(rep.constant("min_C").unwrap() < 1e-10);
        let coord = registry_get("linear", &Params::new().cvec("c", vec![c(1.0, 0.0)]))
            .unwrap();
        let rep = hayman_verify(&coord, &l, &b, 1, 1.0, &grid, &spec).unwrap();
        assert!(rep.passed, "order-2 derivative vanishes identically");
    }

    #[test]
    fn hayman_minimal_constant_for_quadratic_exponential() {
        // p = 0: lhs/rhs = 2|w|/(2|w| + 1) < 1 everywhere.
        let f = registry_get("remark4", &Params::new()).unwrap();
        let b = Direction::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let l = lfield_registry("remark4_weight", &Params::new(), 1.5, &b).unwrap();
        let grid = BallGridSpec::small(128, 9);
        let spec = QuadratureSpec {
            radius_policy: crate::dirderiv::RadiusPolicy::EtaOverL(1.0),
            ..Default::default()
        };
        let rep = hayman_verify(&f, &l, &b, 0, 1.0, &grid, &spec).unwrap();
        assert!(rep.passed);
        let min_c = rep.constant("min_C").unwrap();
        assert!(min_c < 1.0, "min_C = {min_c}");
        assert!(min_c > 0.1, "ratio should be nontrivial, got {min_c}");
    }

    #[test]
    fn maxmin_scan_finds_small_ratio_away_from_zero() {
        // g(t) = (t - 0.5)/(-0.5): on |t| = r the modulus ranges over
        // [(0.5 - r)/0.5, (0.5 + r)/0.5] for r < 0.5, so the ratio
        // (0.5 + r)/|0.5 - r| shrinks toward 1 as r -> 0.
        let f = registry_get("normalized_zero", &Params::new().complex("a", c(0.5, 0.0)))
            .unwrap();
        let b = one_dir();
        let flat = base_weight("one", 1.5).unwrap();
        let (r_star, ratio) = thm11_maxmin(
            &f,
            &flat,
            &b,
            0.8,
            &Point::origin(1),
            c(0.0, 0.0),
            64,
            &QuadratureSpec::default(),
        )
        .unwrap();
        let want = (r_star + 0.5) / (0.5 - r_star).abs();
        assert!((ratio - want).abs() < 1e-6 * want, "r* {r_star} ratio {ratio}");
        assert!(r_star < 0.05);
        assert!(ratio < 1.05);
    }

    #[test]
    fn maxmin_of_constant_is_one_and_zero_function_degenerates() {
        let b = one_dir();
        let flat = base_weight("one", 1.5).unwrap();
        let constant = registry_get("constant", &Params::new()).unwrap();
        let (_, ratio) = thm11_maxmin(
            &constant,
            &flat,
            &b,
            0.8,
            &Point::origin(1),
            c(0.0, 0.0),
            16,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((ratio - 1.0).abs() < 1e-12);
        let zero = registry_get("constant", &Params::new().complex("value", c(0.0, 0.0)))
            .unwrap();
        assert!(matches!(
            thm11_maxmin(
                &zero,
                &flat,
                &b,
                0.8,
                &Point::origin(1),
                c(0.0, 0.0),
                16,
                &QuadratureSpec::default(),
            ),
            Err(Error::AllCirclesDegenerate)
        ));
    }

    #[test]
    fn theoretical_constant_plugins() {
        assert_eq!(theoretical_constants(0, 1.0, 1.0, 1.0).unwrap(), (3, 8.0));
        assert_eq!(theoretical_constants(1, 1.0, 1.0, 0.5).unwrap(), (3, 8.0));
        assert!(theoretical_constants(1, 2.0, 1.0, 0.5).is_err());
        assert!(theoretical_constants(1, 1.0, 2.0, 0.0).is_err());
        // P1 grows with lambda2.
        let (_, a) = theoretical_constants(1, 1.0, 1.1, 1.0).unwrap();
        let (_, bb) = theoretical_constants(1, 1.0, 1.3, 1.0).unwrap();
        assert!(bb > a);
    }
}
