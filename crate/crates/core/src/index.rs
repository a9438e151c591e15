//! Pointwise and global estimation of the L-index in a direction, via the
//! defining inequality on normalized derivatives, plus slice indices and
//! sufficient-set sampling strategies (hyperplane sections and sphere
//! families).
//!
//! At a point z the normalized sequence is a_m = |d^m F / d b^m| (z) /
//! (m! L(z)^m); a candidate m0 certifies the index locally when
//! a_m <= max_{k <= m0} a_k for every order m. The quantifier over all m
//! is truncated at a cap that every witness reports. The cap shrinks where
//! quadrature cannot resolve high orders: the Fourier coefficient behind
//! a_m carries absolute noise of a few eps times the circle maximum of the
//! slice function, so in the normalized frame the floor is
//! eps * max|g| / (rho L)^m. Orders whose floor exceeds a small fraction
//! of the certain part of the sequence are dropped, not compared; with the
//! eta/L radius policy rho * L ~ eta and the floor stays flat in m, which
//! is why that policy is the default for index work.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirderiv::{dirderiv_profile, QuadratureSpec, EPS_EFF};
use crate::error::{Error, Result};
use crate::funcs::{AnalyticMap, SliceFunction};
use crate::geometry::{herm, Direction, Point, C64};
use crate::lfield::LField;
use crate::numerics::factorial;
use crate::sampling::{ball_point, sphere_point, BallGridSpec, SliceGrid};

/// Fraction of the certain sequence scale below which an order carries no
/// usable information and is dropped from the truncated quantifier.
const TRUST_FRACTION: f64 = 1e-6;

/// Tie tolerance for the defining inequality: quadrature noise must not
/// flip verdicts on analytic identities, and exact ties hold.
pub fn tie_tolerance(rhs: f64) -> f64 {
    1e-12 * (rhs + 1.0)
}

/// A local index value, or the admission that no candidate at the current
/// truncation certifies one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "snake_case")]
pub enum IndexOutcome {
    Determined(usize),
    NotDetermined,
}

impl IndexOutcome {
    pub fn determined(self) -> Option<usize> {
        match self {
            IndexOutcome::Determined(m) => Some(m),
            IndexOutcome::NotDetermined => None,
        }
    }

    pub fn is_determined(self) -> bool {
        matches!(self, IndexOutcome::Determined(_))
    }
}

impl std::fmt::Display for IndexOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IndexOutcome::Determined(m) => write!(f, "{m}"),
            IndexOutcome::NotDetermined => write!(f, "not determined"),
        }
    }
}

/// One inequality row: lhs = a_order, rhs = max of the certified prefix.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MarginRecord {
    pub order: usize,
    pub lhs: f64,
    pub rhs: f64,
}

/// The outcome of a local index scan at one point. `truncation` is the
/// highest order actually quantified over; when it is below the requested
/// cap, the roundoff model cut it (the data carries no information there).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexWitness {
    pub point: Vec<[f64; 2]>,
    pub n_local: IndexOutcome,
    pub margins: Vec<MarginRecord>,
    pub truncation: usize,
}

/// Normalized derivative data at one point: values, their noise floors,
/// and the scales behind both.
#[derive(Clone, Debug)]
pub struct NormalizedSequence {
    /// a_m = |d^m F/db^m| / (m! L^m), m = 0..=m_max.
    pub a: Vec<f64>,
    /// Roundoff floor per order in the same frame.
    pub noise: Vec<f64>,
    pub rho: f64,
    pub l_value: f64,
    pub circle_max: f64,
}

/// Computes the normalized derivative sequence at z along b, with the
/// per-order roundoff floor eps_eff * circle_max / (rho L)^m.
pub fn normalized_sequence(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    z: &Point,
    m_max: usize,
    spec: &QuadratureSpec,
) -> Result<NormalizedSequence> {
    let t0 = C64::new(0.0, 0.0);
    let prof = dirderiv_profile(f, z, b, t0, m_max, spec, Some(l))?;
    let l_value = l.eval(z);
    if !(l_value > 0.0) {
        return Err(Error::NonPositiveL { value: l_value });
    }
    let scale = prof.rho * l_value;
    let mut a = Vec::with_capacity(m_max + 1);
    let mut noise = Vec::with_capacity(m_max + 1);
    let mut denom = 1.0;
    for (m, d) in prof.derivs.iter().enumerate() {
        a.push(d.norm() / (factorial(m) * l_value.powi(m as i32)));
        noise.push(EPS_EFF * prof.circle_max / denom);
        denom *= scale;
    }
    Ok(NormalizedSequence {
        a,
        noise,
        rho: prof.rho,
        l_value,
        circle_max: prof.circle_max,
    })
}

impl NormalizedSequence {
    /// Highest order worth quantifying over: the largest prefix whose noise
    /// floors all stay below a small fraction of the certain sequence
    /// scale. None when even order zero is unresolvable.
    pub fn trusted_truncation(&self) -> Option<usize> {
        let certain = self
            .a
            .iter()
            .zip(&self.noise)
            .map(|(a, n)| (a - 4.0 * n).max(0.0))
            .fold(0.0f64, f64::max);
        if certain == 0.0 {
            // Nothing distinguishable from zero; the all-zero sequence is
            // still meaningfully comparable (everything ties at 0).
            return Some(self.a.len() - 1);
        }
        let cap = TRUST_FRACTION * certain;
        let mut last = None;
        for (m, n) in self.noise.iter().enumerate() {
            if *n <= cap {
                last = Some(m);
            } else {
                break;
            }
        }
        last
    }
}

/// Does the prefix max over 0..=m0 dominate every order of `a`? Returns
/// (holds, worst margin, worst order), the margin scanned over orders
/// beyond m0 (the prefix itself holds by construction).
pub fn check_from_normalized(a: &[f64], m0: usize) -> (bool, f64, usize) {
    assert!(m0 < a.len());
    let rhs = a[..=m0].iter().fold(0.0f64, |acc, v| acc.max(*v));
    let tol = tie_tolerance(rhs);
    let mut holds = true;
    let mut worst = f64::INFINITY;
    let mut worst_order = m0;
    for (m, &lhs) in a.iter().enumerate().skip(m0 + 1) {
        let margin = rhs - lhs;
        if margin < worst {
            worst = margin;
            worst_order = m;
        }
        if lhs > rhs + tol {
            holds = false;
        }
    }
    (holds, worst, worst_order)
}

/// The defining inequality at a point for a fixed candidate m0, quantified
/// over derivative orders up to m_max: is every normalized derivative
/// dominated by the max of the first m0 + 1 of them?
///
/// Orders whose roundoff floor exceeds the comparison scale are excluded
/// from the quantifier rather than compared; a margin computed from pure
/// noise would otherwise flip verdicts on analytic identities near the
/// boundary, where the admissible circle radius collapses.
pub fn check_inequality3(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    z: &Point,
    m0: usize,
    m_max: usize,
    spec: &QuadratureSpec,
) -> Result<(bool, f64, usize)> {
    assert!(m0 <= m_max);
    let seq = normalized_sequence(f, l, b, z, m_max, spec)?;
    let m_eff = seq.trusted_truncation().unwrap_or(0);
    Ok(check_from_normalized(&seq.a[..=m_eff], m0.min(m_eff)))
}

fn margins_for(a: &[f64], m0: usize, up_to: usize) -> Vec<MarginRecord> {
    let rhs = a[..=m0.min(up_to)]
        .iter()
        .fold(0.0f64, |acc, v| acc.max(*v));
    (0..=up_to)
        .map(|m| MarginRecord {
            order: m,
            lhs: a[m],
            rhs,
        })
        .collect()
}

/// The minimal m0 certifying the inequality at z, over orders up to the
/// trusted truncation (at most m_max).
pub fn local_index(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    z: &Point,
    m_max: usize,
    spec: &QuadratureSpec,
) -> Result<IndexWitness> {
    let seq = normalized_sequence(f, l, b, z, m_max, spec)?;
    let point = z.to_pairs();
    let Some(m_eff) = seq.trusted_truncation() else {
        return Ok(IndexWitness {
            point,
            n_local: IndexOutcome::NotDetermined,
            margins: Vec::new(),
            truncation: 0,
        });
    };
    let a = &seq.a[..=m_eff];
    for m0 in 0..=m_eff {
        let (holds, _, _) = check_from_normalized(a, m0);
        if holds {
            return Ok(IndexWitness {
                point,
                n_local: IndexOutcome::Determined(m0),
                margins: margins_for(a, m0, m_eff),
                truncation: m_eff,
            });
        }
    }
    Ok(IndexWitness {
        point,
        n_local: IndexOutcome::NotDetermined,
        margins: margins_for(a, m_eff, m_eff),
        truncation: m_eff,
    })
}

/// Sampling-based lower estimate for the global index in direction b.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GlobalIndexEstimate {
    pub n_global: IndexOutcome,
    /// Witnesses attaining the max (capped to keep reports small).
    pub witnesses: Vec<IndexWitness>,
    pub grid: BallGridSpec,
    pub attained_at: Option<Vec<[f64; 2]>>,
    pub points_evaluated: usize,
    /// Points where no candidate certified at the trusted truncation.
    pub not_determined: usize,
    /// The smallest trusted truncation seen over the grid.
    pub min_truncation: usize,
}

const WITNESS_CAP: usize = 8;

/// Max of local_index over a ball grid; a lower bound on the true global
/// index, reported with the attaining point. Grid points evaluate in
/// parallel; reduction follows grid order, so results are independent of
/// thread count.
pub fn global_index_estimate(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    grid: &BallGridSpec,
    m_max: usize,
    spec: &QuadratureSpec,
) -> Result<GlobalIndexEstimate> {
    let points = grid.points(f.dimension());
    let results: Vec<Result<IndexWitness>> = points
        .par_iter()
        .map(|z| local_index(f, l, b, z, m_max, spec))
        .collect();
    let mut best: Option<usize> = None;
    let mut attained_at = None;
    let mut witnesses: Vec<IndexWitness> = Vec::new();
    let mut not_determined = 0usize;
    let mut min_truncation = m_max;
    let points_evaluated = results.len();
    for res in results {
        let w = res?;
        min_truncation = min_truncation.min(w.truncation);
        match w.n_local {
            IndexOutcome::NotDetermined => {
                not_determined += 1;
                if witnesses.len() < WITNESS_CAP {
                    witnesses.push(w);
                }
            }
            IndexOutcome::Determined(m) => {
                if best.map_or(true, |cur| m > cur) {
                    best = Some(m);
                    attained_at = Some(w.point.clone());
                    witnesses.retain(|x| x.n_local == IndexOutcome::NotDetermined);
                    witnesses.push(w);
                } else if best == Some(m) && witnesses.len() < WITNESS_CAP {
                    witnesses.push(w);
                }
            }
        }
    }
    witnesses.truncate(WITNESS_CAP);
    let n_global = match best {
        Some(m) => IndexOutcome::Determined(m),
        None => IndexOutcome::NotDetermined,
    };
    Ok(GlobalIndexEstimate {
        n_global,
        witnesses,
        grid: grid.clone(),
        attained_at,
        points_evaluated,
        not_determined,
        min_truncation,
    })
}

/// Which sufficient set to sample: a hyperplane section (pivot coordinate,
/// coordinate sum, or a general linear form) or a family of spheres
/// approaching the boundary.
#[derive(Clone, Debug, PartialEq)]
pub enum SufficientSetKind {
    HyperplaneJ0 { j0: usize },
    HyperplaneSum,
    HyperplaneC { c: Vec<C64> },
    Spheres { p_max: u32 },
}

/// Builds slice base points on the chosen sufficient set, paired with
/// t-grids per slice. Hyperplane bases arise by projecting ball samples
/// along b onto the hyperplane; sphere bases sample |z| = 1 - 2^-p.
pub fn sufficient_set_grid(
    kind: &SufficientSetKind,
    b: &Direction,
    dim: usize,
    count: usize,
    t_per_slice: usize,
    seed: u64,
) -> Result<SliceGrid> {
    let bases: Vec<Point> = match kind {
        SufficientSetKind::HyperplaneJ0 { j0 } => {
            if *j0 >= dim || b.coords()[*j0].norm() == 0.0 {
                return Err(Error::ZeroComponent { j0: *j0 });
            }
            (0..count)
                .map(|i| {
                    let z = ball_point(dim, seed + 1 + i as u64);
                    let t = z.coords()[*j0] / b.coords()[*j0];
                    z.translate(-t, b)
                })
                .collect()
        }
        SufficientSetKind::HyperplaneSum => {
            let s: C64 = b.coords().iter().sum();
            if s.norm() == 0.0 {
                return Err(Error::DegenerateDirection);
            }
            (0..count)
                .map(|i| {
                    let z = ball_point(dim, seed + 1 + i as u64);
                    let t = z.coords().iter().sum::<C64>() / s;
                    z.translate(-t, b)
                })
                .collect()
        }
        SufficientSetKind::HyperplaneC { c } => {
            if c.len() != dim {
                return Err(Error::BadParams {
                    name: "hyperplane_c".into(),
                    reason: format!("form has {} coordinates, expected {dim}", c.len()),
                });
            }
            let denom = herm(b.coords(), c);
            if denom.norm() == 0.0 {
                return Err(Error::DegenerateDirection);
            }
            (0..count)
                .map(|i| {
                    let z = ball_point(dim, seed + 1 + i as u64);
                    let t = herm(z.coords(), c) / denom;
                    z.translate(-t, b)
                })
                .collect()
        }
        SufficientSetKind::Spheres { p_max } => {
            if *p_max == 0 {
                return Err(Error::BadParams {
                    name: "spheres".into(),
                    reason: "need at least one radius".into(),
                });
            }
            let per = (count / *p_max as usize).max(1);
            let mut pts = Vec::with_capacity(per * *p_max as usize);
            let mut offset = seed + 1;
            for p in 1..=*p_max {
                let r = 1.0 - 0.5f64.powi(p as i32);
                for i in 0..per {
                    pts.push(sphere_point(dim, offset + i as u64, r));
                }
                offset += per as u64;
            }
            pts
        }
    };
    Ok(SliceGrid::through_points(&bases, b, t_per_slice))
}

/// Max over a t-grid of the minimal m0 for the one-variable inequality on
/// the slice g(t) = F(z0 + t b) with the induced weight l(t) = L(z0 + tb).
pub fn slice_index(
    g: &SliceFunction,
    l: &LField,
    t_grid: &[C64],
    m_max: usize,
    spec: &QuadratureSpec,
) -> Result<IndexOutcome> {
    let mut best = 0usize;
    for &t0 in t_grid {
        let prof = dirderiv_profile(&g.map, &g.z0, &g.b, t0, m_max, spec, Some(l))?;
        let lt = l.eval(&g.point_at(t0));
        if !(lt > 0.0) {
            return Err(Error::NonPositiveL { value: lt });
        }
        let a: Vec<f64> = prof
            .derivs
            .iter()
            .enumerate()
            .map(|(m, d)| d.norm() / (factorial(m) * lt.powi(m as i32)))
            .collect();
        let mut found = None;
        for m0 in 0..=m_max {
            if check_from_normalized(&a, m0).0 {
                found = Some(m0);
                break;
            }
        }
        match found {
            Some(m0) => best = best.max(m0),
            None => return Ok(IndexOutcome::NotDetermined),
        }
    }
    Ok(IndexOutcome::Determined(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{registry_get, slice, Params};
    use crate::lfield::{base_weight, lfield_registry};
    use crate::sampling::ball_point;

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
    fn constant_function_has_index_zero() {
        let f = registry_get("constant", &Params::new()).unwrap();
        let b = one_dir();
        let l = l_reciprocal(&b);
        let z = Point::new(vec![c(0.2, 0.1)]);
        let w = local_index(&f, &l, &b, &z, 20, &QuadratureSpec::default()).unwrap();
        assert_eq!(w.n_local, IndexOutcome::Determined(0));
        // Orders beyond 0 all vanish, so every margin equals the rhs.
        let (holds, worst, order) =
            check_inequality3(&f, &l, &b, &z, 0, 20, &QuadratureSpec::default()).unwrap();
        assert!(holds);
        assert!(order >= 1);
        assert!(worst > 0.0);
    }

    #[test]
    fn coordinate_function_needs_m0_one_at_origin() {
        // F = z1 at z = 0 with L(0) = 2: a_0 = 0, a_1 = 1/2, higher vanish.
        // m0 = 0 fails with margin -1/2 at order 1; m0 = 1 certifies.
        let f = registry_get("linear", &Params::new().cvec("c", vec![c(1.0, 0.0)]))
            .unwrap();
        let b = one_dir();
        let l = l_reciprocal(&b);
        let z = Point::origin(1);
        let spec = QuadratureSpec::default();
        let (holds, worst, order) = check_inequality3(&f, &l, &b, &z, 0, 20, &spec).unwrap();
        assert!(!holds);
        assert_eq!(order, 1);
        assert!((worst + 0.5).abs() < 1e-9, "worst margin {worst}");
        let w = local_index(&f, &l, &b, &z, 20, &spec).unwrap();
        assert_eq!(w.n_local, IndexOutcome::Determined(1));
    }

    #[test]
    fn prefix_max_is_monotone_in_m0() {
        let a = vec![0.1, 2.0, 0.5, 3.0, 0.2, 0.0];
        for m0 in 0..a.len() {
            if check_from_normalized(&a, m0).0 {
                for later in m0..a.len() {
                    assert!(check_from_normalized(&a, later).0);
                }
            }
        }
        // Ties hold: a constant sequence certifies at m0 = 0.
        let flat = vec![1.0; 8];
        assert!(check_from_normalized(&flat, 0).0);
    }

    #[test]
    fn quadratic_exponential_with_its_weight_has_index_zero() {
        // F = exp(-z1^2 + z2^2), b = (1,1), L = 2|z2 - z1| + 1. Along this
        // direction the slice is a pure exponential with rate 2(z2 - z1),
        // so a_m = (2|w|/(2|w|+1))^m / m! * a_0 <= a_0 at every point.
        let f = registry_get("remark4", &Params::new()).unwrap();
        let b = Direction::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let l = lfield_registry("remark4_weight", &Params::new(), 1.5, &b).unwrap();
        let spec = QuadratureSpec {
            radius_policy: crate::dirderiv::RadiusPolicy::EtaOverL(1.0),
            ..Default::default()
        };
        for i in 0..64u64 {
            let z = ball_point(2, 1 + i);
            let w = local_index(&f, &l, &b, &z, 20, &spec).unwrap();
            assert_eq!(
                w.n_local,
                IndexOutcome::Determined(0),
                "at {:?} (truncation {})",
                z.coords(),
                w.truncation
            );
        }
    }

    #[test]
    fn global_estimate_maxes_over_grid() {
        let f = registry_get("linear", &Params::new().cvec("c", vec![c(1.0, 0.0)]))
            .unwrap();
        let b = one_dir();
        let l = l_reciprocal(&b);
        let grid = BallGridSpec::small(128, 7);
        let est =
            global_index_estimate(&f, &l, &b, &grid, 20, &QuadratureSpec::default()).unwrap();
        // z1 with L = 2/(1 - |z|) has local index 1 near the origin and 0
        // where |z1| dominates; the grid max is 1.
        assert_eq!(est.n_global, IndexOutcome::Determined(1));
        assert_eq!(est.points_evaluated, 128);
        assert_eq!(est.not_determined, 0);
        assert!(est.attained_at.is_some());
        assert!(!est.witnesses.is_empty());
        for w in &est.witnesses {
            assert_eq!(w.n_local, est.n_global);
        }
    }

    #[test]
    fn weight_rescaling_keeps_the_verdict() {
        // Replacing L by 1.5 L keeps boundedness of the estimate.
        let f = registry_get("linear", &Params::new().cvec("c", vec![c(1.0, 0.0)]))
            .unwrap();
        let b = one_dir();
        let l = l_reciprocal(&b);
        let inner = l.clone();
        let scaled = LField::from_fn("scaled", l.beta(), move |z| 1.5 * inner.eval_coords(z))
            .unwrap();
        let grid = BallGridSpec::small(64, 3);
        let spec = QuadratureSpec::default();
        let a = global_index_estimate(&f, &l, &b, &grid, 20, &spec).unwrap();
        let bb = global_index_estimate(&f, &scaled, &b, &grid, 20, &spec).unwrap();
        assert_eq!(a.n_global.is_determined(), bb.n_global.is_determined());
    }

    #[test]
    fn direction_rescaling_keeps_the_verdict() {
        let f = registry_get("linear", &Params::new().cvec("c", vec![c(1.0, 0.0)]))
            .unwrap();
        let b = one_dir();
        let l = l_reciprocal(&b);
        let grid = BallGridSpec::small(64, 3);
        let spec = QuadratureSpec::default();
        let base = global_index_estimate(&f, &l, &b, &grid, 20, &spec).unwrap();
        for theta in [c(2.0, 0.0), c(0.0, 1.0)] {
            let mb = b.scale(theta).unwrap();
            let est = global_index_estimate(&f, &l, &mb, &grid, 20, &spec).unwrap();
            assert_eq!(
                base.n_global.is_determined(),
                est.n_global.is_determined(),
                "direction scaled by {theta}"
            );
        }
    }

    #[test]
    fn hyperplane_grids_lie_on_their_hyperplanes() {
        let b = Direction::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let g1 = sufficient_set_grid(
            &SufficientSetKind::HyperplaneJ0 { j0: 0 },
            &b,
            2,
            50,
            3,
            11,
        )
        .unwrap();
        for e in &g1.entries {
            assert!(e.z0.coords()[0].norm() == 0.0);
        }
        let g2 = sufficient_set_grid(&SufficientSetKind::HyperplaneSum, &b, 2, 50, 3, 11)
            .unwrap();
        for e in &g2.entries {
            assert!(e.z0.coords().iter().sum::<C64>().norm() < 1e-12);
        }
        let cvec = vec![c(1.0, 0.0), c(0.5, -0.5)];
        let g3 = sufficient_set_grid(
            &SufficientSetKind::HyperplaneC { c: cvec.clone() },
            &b,
            2,
            50,
            3,
            11,
        )
        .unwrap();
        for e in &g3.entries {
            assert!(herm(e.z0.coords(), &cvec).norm() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_form_is_degenerate() {
        // <b, c> = 0 leaves the slice family inside one hyperplane and
        // cannot cover the ball.
        let b = Direction::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let cvec = vec![c(1.0, 0.0), c(-1.0, 0.0)];
        let res = sufficient_set_grid(
            &SufficientSetKind::HyperplaneC { c: cvec },
            &b,
            2,
            10,
            3,
            1,
        );
        assert!(matches!(res, Err(Error::DegenerateDirection)));
    }

    #[test]
    fn sphere_family_radii_approach_one() {
        let b = one_dir();
        let g = sufficient_set_grid(&SufficientSetKind::Spheres { p_max: 4 }, &b, 1, 64, 3, 5)
            .unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for e in &g.entries {
            let r = e.z0.norm();
            seen.insert((r * 1e6).round() as i64);
            assert!(r < 1.0);
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn slice_index_of_identity_slice_is_one() {
        // g(t) = t with l(t) = 2/(1 - |t|): the same computation as the
        // coordinate function at the origin, one variable down.
        let f = registry_get("linear", &Params::new().cvec("c", vec![c(1.0, 0.0)]))
            .unwrap();
        let b = one_dir();
        let l = l_reciprocal(&b);
        let g = slice(&f, &Point::origin(1), &b).unwrap();
        let out = slice_index(&g, &l, &[c(0.0, 0.0)], 20, &QuadratureSpec::default())
            .unwrap();
        assert_eq!(out, IndexOutcome::Determined(1));
    }

    #[test]
    fn pure_exponential_slice_formal_check() {
        // g(t) = exp(1 + 2 z1 + 2t) against the flat weight: the normalized
        // sequence is 2^m/m! times |g|, whose max sits at orders 1 and 2,
        // so the minimal certifying m0 is 1. Frozen against an exact
        // rational evaluation of 2^m/m!.
        let f = registry_get(
            "exp_linear",
            &Params::new().cvec("c", vec![c(2.0, 0.0)]),
        )
        .unwrap();
        let flat = base_weight("one", 1.5).unwrap();
        let b = one_dir();
        let z0 = Point::new(vec![c(0.25, 0.0)]);
        let g = slice(&f, &z0, &b).unwrap();
        let ts = [c(0.0, 0.0), c(0.2, 0.1), c(-0.3, 0.05)];
        let out = slice_index(&g, &flat, &ts, 20, &QuadratureSpec::default()).unwrap();
        assert_eq!(out, IndexOutcome::Determined(1));
    }
}
