//! Slice zeros and everything built on them: the argument-principle
//! counting function n(r, z0, t0, 1/F), zero localization by winding-number
//! subdivision, the exceptional disc sets G_r, and the two halves of the
//! logarithmic-derivative / zero-counting criterion.
//!
//! All contour work sees F only through point evaluations. Derivatives of
//! the slice g(t) = F(z0 + tb) on a counting circle come from the truncated
//! Taylor series recovered from the same circle samples, so the residue of
//! the count from the nearest integer is an honest error indicator.
//!
//! The subdivision contour circumscribes the requested disc region, so its
//! corners can overhang the slice domain by a factor up to sqrt(2); every
//! registry function extends analytically there, which is all the winding
//! integrals need.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{CriterionReport, WorstSample};
use crate::dirderiv::{dirderiv_sequence, QuadratureSpec};
use crate::error::{Error, Result};
use crate::funcs::AnalyticMap;
use crate::geometry::{slice_domain, Direction, Point, C64};
use crate::lfield::LField;
use crate::sampling::SliceGrid;

/// Nodes per argument-principle circle inside the subdivision and polish
/// loops; the public counting op uses the caller's quadrature spec.
const BOX_NODES: usize = 128;

/// Subdivision depth cap; exceeding it means a zero cluster refuses to
/// separate faster than the budget allows.
const MAX_DEPTH: usize = 40;

/// Boxes are never split below this half-width; anything still together at
/// that scale is reported as a single zero with the cluster's multiplicity.
const CLUSTER_FLOOR: f64 = 1e-10;

/// Candidate split-point fractions. Zeros of test functions sit on
/// symmetry axes often enough that the midpoint split needs alternatives;
/// candidates are ranked by how far their lines stay from zeros.
const SPLIT_OFFSETS: [(f64, f64); 4] =
    [(0.5, 0.5), (0.513, 0.487), (0.487, 0.529), (0.529, 0.513)];

/// One located zero of a slice function.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SliceZero {
    pub location: C64,
    pub multiplicity: usize,
    /// |g| at the reported location.
    pub residual: f64,
}

/// Zeros of g(t) = F(z0 + tb) inside the disc |t - center| <= radius.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SliceZeroSet {
    pub zeros: Vec<SliceZero>,
    pub center: C64,
    pub radius: f64,
    pub residual_tolerance: f64,
}

impl SliceZeroSet {
    pub fn total_multiplicity(&self) -> usize {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

/// The union of discs {|t - a_k| <= r / L(z0 + a_k b)} around the zeros of
/// one slice.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExceptionalSet {
    pub r: f64,
    pub zeros: SliceZeroSet,
}

pub fn exceptional_set(zeros: SliceZeroSet, r: f64) -> ExceptionalSet {
    ExceptionalSet { r, zeros }
}

/// True iff t lies within r / L(z0 + a_k b) of some zero a_k of the slice.
pub fn exceptional_contains(
    e: &ExceptionalSet,
    z0: &Point,
    b: &Direction,
    t: C64,
    l: &LField,
) -> bool {
    e.zeros.zeros.iter().any(|zk| {
        let lv = l.eval(&z0.translate(zk.location, b));
        lv > 0.0 && (t - zk.location).norm() <= e.r / lv
    })
}

/// Moments s_p = (1/2 pi i) oint (t - t0)^p g'(t)/g(t) dt, p = 0..=p_max,
/// over |t - t0| = r, from one ring of samples. g' is the derivative of the
/// Taylor series recovered from the ring, so both factors share truncation
/// behavior. s_0 is the zero count, s_1 the zero-location sum.
fn circle_moments(
    g: &dyn Fn(C64) -> C64,
    t0: C64,
    r: f64,
    p_max: usize,
    nodes: usize,
) -> Result<Vec<C64>> {
    let m = nodes;
    let mut samples = Vec::with_capacity(m);
    let mut min_idx = 0usize;
    let mut min_mod = f64::INFINITY;
    let mut max_mod = 0.0f64;
    for j in 0..m {
        let theta = std::f64::consts::TAU * j as f64 / m as f64;
        let v = g(t0 + C64::from_polar(r, theta));
        let a = v.norm();
        if a < min_mod {
            min_mod = a;
            min_idx = j;
        }
        max_mod = max_mod.max(a);
        samples.push(v);
    }
    if !(max_mod > 0.0) {
        return Err(Error::ZeroOnCircle);
    }
    // Min-modulus scan for a zero hugging the circle: polish the modulus
    // dip between the neighbors of the smallest sample and compare it with
    // the scale right next to it. A genuine near-circle zero collapses the
    // dip by orders of magnitude; mere dynamic range across the circle
    // (high-multiplicity factors elsewhere) does not.
    let theta_at = |j: isize| {
        std::f64::consts::TAU * j as f64 / m as f64
    };
    let (_, neg_dip) = crate::numerics::golden_max(
        |theta| -(g(t0 + C64::from_polar(r, theta))).norm(),
        theta_at(min_idx as isize - 1),
        theta_at(min_idx as isize + 1),
        60,
    );
    let local = (-2isize..=2)
        .map(|o| samples[(min_idx as isize + o).rem_euclid(m as isize) as usize].norm())
        .fold(0.0f64, f64::max);
    if local == 0.0 || -neg_dip < 1e-7 * local {
        return Err(Error::ZeroOnCircle);
    }
    // Taylor coefficients scaled by r^k, then the derivative resampled on
    // the ring. The DFT is O(M^2), deterministic, and cheap at 128 nodes.
    let mut coeff = vec![C64::new(0.0, 0.0); m];
    for (k, c) in coeff.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (j, s) in samples.iter().enumerate() {
            let phase = -std::f64::consts::TAU * (k * j % m) as f64 / m as f64;
            acc += s * C64::from_polar(1.0, phase);
        }
        *c = acc / m as f64;
    }
    let mut moments = vec![C64::new(0.0, 0.0); p_max + 1];
    for j in 0..m {
        let theta = std::f64::consts::TAU * j as f64 / m as f64;
        let mut deriv = C64::new(0.0, 0.0);
        for (k, c) in coeff.iter().enumerate().skip(1) {
            let phase = std::f64::consts::TAU * ((k - 1) * j % m) as f64 / m as f64;
            deriv += c * k as f64 * C64::from_polar(1.0, phase);
        }
        deriv /= r;
        let logd = deriv / samples[j];
        let ring = C64::from_polar(r, theta);
        let mut w = ring;
        for mom in moments.iter_mut() {
            *mom += logd * w / m as f64;
            w *= ring;
        }
    }
    Ok(moments)
}

/// Zero count of the slice in the open disc |t - t0| < r, rounded from the
/// argument-principle integral; errors instead of rounding through more
/// than 0.25.
fn count_in_disc(g: &dyn Fn(C64) -> C64, t0: C64, r: f64, nodes: usize) -> Result<usize> {
    let s = circle_moments(g, t0, r, 0, nodes)?;
    let nearest = s[0].re.round();
    let residue = (s[0] - C64::new(nearest, 0.0)).norm();
    if !(residue < 0.25) || nearest < 0.0 {
        return Err(Error::NonIntegerResidue {
            value: s[0].re,
        });
    }
    Ok(nearest as usize)
}

/// Counting function of slice zeros: the number of zeros of F(z0 + tb),
/// with multiplicity, in the open disc |t - t0| < r.
pub fn counting_function(
    f: &AnalyticMap,
    z0: &Point,
    b: &Direction,
    t0: C64,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<usize> {
    spec.validate()?;
    let domain = slice_domain(z0, b)?;
    let clearance = domain.clearance(t0);
    if !(r > 0.0) || r >= clearance {
        return Err(Error::CircleEscapesDomain {
            radius: r,
            clearance,
        });
    }
    let g = |t: C64| f.eval(&z0.translate(t, b));
    count_in_disc(&g, t0, r, spec.nodes)
}

/// Winding number of g over the rectangle boundary, by phase marching with
/// recursive midpoint insertion wherever a step turns more than pi/2. A
/// sample landing on a zero, or a step that never settles, reports
/// ZeroOnCircle so the caller can shift the contour.
fn winding_rect(g: &dyn Fn(C64) -> C64, x0: f64, x1: f64, y0: f64, y1: f64) -> Result<usize> {
    let corners = [
        C64::new(x0, y0),
        C64::new(x1, y0),
        C64::new(x1, y1),
        C64::new(x0, y1),
    ];
    let mut total = 0.0f64;
    for e in 0..4 {
        let a = corners[e];
        let b = corners[(e + 1) % 4];
        let mut prev_t = a;
        let mut prev_v = g(a);
        if prev_v.norm() == 0.0 {
            return Err(Error::ZeroOnCircle);
        }
        const EDGE_STEPS: usize = 16;
        for s in 1..=EDGE_STEPS {
            let t = a + (b - a) * (s as f64 / EDGE_STEPS as f64);
            let v = g(t);
            total += march_step(g, prev_t, prev_v, t, v, 0)?;
            prev_t = t;
            prev_v = v;
        }
    }
    let winding = total / std::f64::consts::TAU;
    let nearest = winding.round();
    if (winding - nearest).abs() > 0.25 || nearest < 0.0 {
        return Err(Error::NonIntegerResidue { value: winding });
    }
    Ok(nearest as usize)
}

/// Phase change of g along [ta, tb], splitting until each piece turns less
/// than pi/2.
fn march_step(
    g: &dyn Fn(C64) -> C64,
    ta: C64,
    va: C64,
    tb: C64,
    vb: C64,
    depth: usize,
) -> Result<f64> {
    if vb.norm() == 0.0 {
        return Err(Error::ZeroOnCircle);
    }
    let dphi = (vb / va).arg();
    if dphi.abs() <= std::f64::consts::FRAC_PI_2 {
        return Ok(dphi);
    }
    if depth >= 36 {
        return Err(Error::ZeroOnCircle);
    }
    let tm = (ta + tb) / 2.0;
    let vm = g(tm);
    Ok(march_step(g, ta, va, tm, vm, depth + 1)?
        + march_step(g, tm, vm, tb, vb, depth + 1)?)
}

struct Leaf {
    center: C64,
    half: f64,
    count: usize,
}

/// Smallest |g| along the segment [a, b]: coarse scan plus golden polish.
/// A line through a zero scores around eps times the local scale, far
/// below any line that merely passes near one, so split candidates ranked
/// by this are safe to integrate over. This matters for even-multiplicity
/// zeros sitting exactly on a midline: their winding splits evenly across
/// the two sides, which no integer consistency check can catch.
fn line_min(g: &dyn Fn(C64) -> C64, a: C64, b: C64) -> f64 {
    const SCAN: usize = 25;
    let at = |s: f64| (g(a + (b - a) * s)).norm();
    let mut best_s = 0.0;
    let mut best = f64::INFINITY;
    for i in 0..=SCAN {
        let s = i as f64 / SCAN as f64;
        let v = at(s);
        if v < best {
            best = v;
            best_s = s;
        }
    }
    let lo = (best_s - 1.0 / SCAN as f64).max(0.0);
    let hi = (best_s + 1.0 / SCAN as f64).min(1.0);
    let (_, neg) = crate::numerics::golden_max(|s| -at(s), lo, hi, 60);
    best.min(-neg)
}

/// Recursive subdivision of a rectangle into leaves that isolate one zero
/// (or one unsplittable cluster) each.
#[allow(clippy::too_many_arguments)]
fn subdivide(
    g: &dyn Fn(C64) -> C64,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    count: usize,
    depth: usize,
    leaf_half: f64,
    out: &mut Vec<Leaf>,
) -> Result<()> {
    let half = 0.5 * (x1 - x0).max(y1 - y0);
    let center = C64::new(0.5 * (x0 + x1), 0.5 * (y0 + y1));
    if count == 0 {
        return Ok(());
    }
    if count == 1 || half <= leaf_half {
        out.push(Leaf { center, half, count });
        return Ok(());
    }
    if depth >= MAX_DEPTH {
        return Err(Error::BudgetExceeded {
            detail: format!(
                "zero subdivision depth {MAX_DEPTH} at box {:.3e}+{:.3e}i",
                center.re, center.im
            ),
        });
    }
    let mut ranked: Vec<(f64, f64, f64)> = SPLIT_OFFSETS
        .iter()
        .map(|&(fx, fy)| {
            let xs = x0 + fx * (x1 - x0);
            let ys = y0 + fy * (y1 - y0);
            let v = line_min(g, C64::new(xs, y0), C64::new(xs, y1));
            let h = line_min(g, C64::new(x0, ys), C64::new(x1, ys));
            (v.min(h), xs, ys)
        })
        .collect();
    ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("line minima are finite"));
    let mut last_err = None;
    'offsets: for &(_, xs, ys) in ranked.iter() {
        let quads = [
            (x0, xs, y0, ys),
            (xs, x1, y0, ys),
            (x0, xs, ys, y1),
            (xs, x1, ys, y1),
        ];
        let mut counts = [0usize; 4];
        for (i, &(a, b, c, d)) in quads.iter().enumerate() {
            match winding_rect(g, a, b, c, d) {
                Ok(n) => counts[i] = n,
                Err(e) => {
                    last_err = Some(e);
                    continue 'offsets;
                }
            }
        }
        // A zero sitting on a split line without tripping the march shows
        // up as a count leak; shift and retry.
        if counts.iter().sum::<usize>() != count {
            last_err = Some(Error::ZeroOnCircle);
            continue 'offsets;
        }
        for (i, &(a, b, c, d)) in quads.iter().enumerate() {
            subdivide(g, a, b, c, d, counts[i], depth + 1, leaf_half, out)?;
        }
        return Ok(());
    }
    Err(last_err.unwrap_or(Error::ZeroOnCircle))
}

/// Shrinking-circle polish of one leaf: recenter on the zero centroid from
/// the first moment, shrink, and stop once the circle is tiny or the
/// location stops moving.
fn polish_leaf(g: &dyn Fn(C64) -> C64, leaf: &Leaf, tol: f64) -> SliceZero {
    let mut center = leaf.center;
    let mut radius = leaf.half * std::f64::consts::SQRT_2 * 1.05 + 1e-14;
    let target = leaf.count;
    let floor = (tol * 1e-3).max(1e-13);
    for _ in 0..64 {
        let mut moments = None;
        for scale in [1.0, 1.07, 0.93, 1.13] {
            if let Ok(ms) = circle_moments(g, center, radius * scale, 1, BOX_NODES) {
                let n = ms[0].re.round();
                if (ms[0].re - n).abs() < 0.25 && n >= 0.0 {
                    moments = Some((n as usize, ms[1]));
                    break;
                }
            }
        }
        let Some((n, s1)) = moments else { break };
        if n == 0 {
            // The zero slipped out while shrinking; widen and retry.
            radius *= 2.0;
            continue;
        }
        if n > target {
            // A neighboring zero crept inside the polish circle.
            radius *= 0.7;
            continue;
        }
        let mu = center + s1 / n as f64;
        let step = (mu - center).norm();
        center = mu;
        if radius <= floor {
            break;
        }
        radius = (2.0 * step).max(radius / 3.0);
    }
    SliceZero {
        location: center,
        multiplicity: target,
        residual: g(center).norm(),
    }
}

/// Locates every zero of g(t) = F(z0 + tb) in the disc |t - center| <=
/// radius, with multiplicities, by winding-number subdivision of the
/// circumscribed square.
pub fn slice_zeros(
    f: &AnalyticMap,
    z0: &Point,
    b: &Direction,
    center: C64,
    radius: f64,
    tol: f64,
) -> Result<SliceZeroSet> {
    let domain = slice_domain(z0, b)?;
    let clearance = domain.clearance(center);
    if !(radius > 0.0) || radius >= clearance {
        return Err(Error::CircleEscapesDomain { radius, clearance });
    }
    let g = |t: C64| f.eval(&z0.translate(t, b));
    let leaf_half = tol.max(CLUSTER_FLOOR);
    let total = winding_rect(
        &g,
        center.re - radius,
        center.re + radius,
        center.im - radius,
        center.im + radius,
    )?;
    let mut leaves = Vec::new();
    subdivide(
        &g,
        center.re - radius,
        center.re + radius,
        center.im - radius,
        center.im + radius,
        total,
        0,
        leaf_half,
        &mut leaves,
    )?;
    let mut zeros: Vec<SliceZero> = leaves
        .par_iter()
        .map(|leaf| polish_leaf(&g, leaf, tol))
        .collect();
    zeros.retain(|z| (z.location - center).norm() <= radius * (1.0 + 1e-12));
    zeros.sort_by(|a, b| {
        (a.location.re, a.location.im)
            .partial_cmp(&(b.location.re, b.location.im))
            .expect("zero locations are finite")
    });
    Ok(SliceZeroSet {
        zeros,
        center,
        radius,
        residual_tolerance: tol,
    })
}

/// Per-slice zero sets for the grid, with the search disc filling the slice
/// domain up to a thin safety margin.
pub fn grid_zero_sets(
    f: &AnalyticMap,
    b: &Direction,
    grid: &SliceGrid,
    tol: f64,
) -> Result<Vec<SliceZeroSet>> {
    let sets: Vec<Result<SliceZeroSet>> = grid
        .entries
        .par_iter()
        .map(|e| {
            let radius = e.domain.radius * 0.995;
            slice_zeros(f, &e.z0, b, e.domain.center, radius, tol)
        })
        .collect();
    sets.into_iter().collect()
}

/// Logarithmic-derivative criterion: outside the exceptional discs of
/// radius r/L the quantity |dF/db| / (|F| L) admits a uniform bound P.
/// Reports the empirical P over grid points surviving the exclusion.
pub fn thm12_logderiv(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    r: f64,
    grid: &SliceGrid,
    spec: &QuadratureSpec,
) -> Result<CriterionReport> {
    let beta = l.beta();
    if !(r > 0.0 && r <= beta) {
        return Err(Error::EtaOutOfRange { eta: r, beta });
    }
    let zero_sets = grid_zero_sets(f, b, grid, 1e-9)?;
    let mut p_hat = 0.0f64;
    let mut worst: Option<WorstSample> = None;
    let mut survivors = 0usize;
    let mut survivors_beta = 0usize;
    let mut excluded = 0usize;
    let mut passed = true;
    let mut samples = 0usize;
    for (entry, zs) in grid.entries.iter().zip(&zero_sets) {
        let e_r = exceptional_set(zs.clone(), r);
        let e_beta = exceptional_set(zs.clone(), beta);
        for &t in &entry.ts {
            samples += 1;
            if !exceptional_contains(&e_beta, &entry.z0, b, t, l) {
                survivors_beta += 1;
            }
            if exceptional_contains(&e_r, &entry.z0, b, t, l) {
                excluded += 1;
                continue;
            }
            survivors += 1;
            let z = entry.z0.translate(t, b);
            let fv = f.eval(&z).norm();
            let d1 = dirderiv_sequence(f, &entry.z0, b, t, 1, spec, Some(l))?[1].norm();
            if fv <= 1e-300 {
                // A surviving point this close to a zero means the zero
                // search missed it; no finite P certifies anything here.
                passed = false;
                continue;
            }
            let val = d1 / (fv * l.eval(&z));
            if val > p_hat {
                p_hat = val;
                worst = Some(WorstSample {
                    z0: entry.z0.to_pairs(),
                    t0: [t.re, t.im],
                    value: val,
                });
            }
        }
    }
    if survivors_beta == 0 {
        return Err(Error::EmptyComplement);
    }
    let mut constants = BTreeMap::new();
    constants.insert("P".into(), p_hat);
    constants.insert("survivors".into(), survivors as f64);
    constants.insert("excluded".into(), excluded as f64);
    Ok(CriterionReport {
        criterion: "thm12_logderiv".into(),
        passed: passed && p_hat.is_finite(),
        constants,
        worst,
        samples,
    })
}

/// Zero-counting criterion: n(r / L(z0 + t0 b), z0, t0, 1/F) is bounded
/// over the grid; reports the empirical bound and per-slice maxima.
pub fn thm12_counting(
    f: &AnalyticMap,
    l: &LField,
    b: &Direction,
    r: f64,
    grid: &SliceGrid,
    spec: &QuadratureSpec,
) -> Result<CriterionReport> {
    let beta = l.beta();
    if !(r > 0.0 && r <= beta) {
        return Err(Error::EtaOutOfRange { eta: r, beta });
    }
    let per_pair: Vec<Result<Option<(usize, usize, C64, usize)>>> = grid
        .entries
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, entry)| {
            entry.ts.iter().map(move |&t| {
                let lz = l.eval(&entry.z0.translate(t, b));
                if !(lz > 0.0) {
                    return Err(Error::NonPositiveL { value: lz });
                }
                let rho = r / lz;
                if entry.domain.clearance(t) <= rho {
                    return Ok(None);
                }
                let n = counting_function(f, &entry.z0, b, t, rho, spec)?;
                Ok(Some((i, n, t, 0)))
            })
        })
        .collect();
    let mut n_tilde = 0usize;
    let mut per_slice: BTreeMap<usize, usize> = BTreeMap::new();
    let mut skipped = 0usize;
    let mut samples = 0usize;
    let mut worst: Option<WorstSample> = None;
    for item in per_pair {
        samples += 1;
        match item? {
            None => skipped += 1,
            Some((i, n, t, _)) => {
                let slot = per_slice.entry(i).or_insert(0);
                *slot = (*slot).max(n);
                if n >= n_tilde {
                    n_tilde = n;
                    worst = Some(WorstSample {
                        z0: grid.entries[i].z0.to_pairs(),
                        t0: [t.re, t.im],
                        value: n as f64,
                    });
                }
            }
        }
    }
    let mut constants = BTreeMap::new();
    constants.insert("n_tilde".into(), n_tilde as f64);
    constants.insert("skipped".into(), skipped as f64);
    for (i, n) in &per_slice {
        constants.insert(format!("slice_{i:02}"), *n as f64);
    }
    Ok(CriterionReport {
        criterion: "thm12_counting".into(),
        passed: true,
        constants,
        worst,
        samples,
    })
}
