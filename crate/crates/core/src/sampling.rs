//! Deterministic low-discrepancy sampling of the unit ball, its boundary
//! shells, and slice-local t-grids.
//!
//! All grids are Halton-indexed; the experiment seed enters as a start
//! offset into the sequence, so identical (config, seed) pairs reproduce
//! identical grids on any thread count.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::{Direction, Point, SliceDomain, C64};

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Radical-inverse (Halton) value of `index` in the given prime base,
/// always in (0, 1) for index >= 1.
pub fn halton(index: u64, base: u64) -> f64 {
    let mut i = index;
    let mut f = 1.0;
    let mut r = 0.0;
    let b = base as f64;
    while i > 0 {
        f /= b;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Box-Muller transform of two (0,1) coordinates into two standard normals.
fn gauss_pair(u1: f64, u2: f64) -> (f64, f64) {
    let r = (-2.0 * u1.ln()).sqrt();
    let a = std::f64::consts::TAU * u2;
    (r * a.cos(), r * a.sin())
}

/// Isotropic direction on the unit sphere of C^dim (= R^{2 dim}), read from
/// Halton coordinates at `index`.
fn unit_vector(dim: usize, index: u64) -> Vec<C64> {
    assert!(2 * dim <= PRIMES.len() - 1, "dimension too large for sampler");
    let mut coords = Vec::with_capacity(dim);
    let mut norm_sq = 0.0;
    for j in 0..dim {
        let u1 = halton(index, PRIMES[2 * j]);
        let u2 = halton(index, PRIMES[2 * j + 1]);
        let (x, y) = gauss_pair(u1, u2);
        norm_sq += x * x + y * y;
        coords.push(Complex64::new(x, y));
    }
    let norm = norm_sq.sqrt().max(1e-300);
    coords.iter().map(|c| c / norm).collect()
}

/// The `index`-th ball sample: isotropic direction with the radial law
/// u^{1/(2 dim)} that makes the sequence volume-uniform.
pub fn ball_point(dim: usize, index: u64) -> Point {
    let dir = unit_vector(dim, index);
    let u = halton(index, PRIMES[2 * dim]);
    let radius = u.powf(1.0 / (2.0 * dim as f64));
    Point::new(dir.into_iter().map(|c| c * radius).collect())
}

/// The `index`-th point on the sphere |z| = radius.
pub fn sphere_point(dim: usize, index: u64, radius: f64) -> Point {
    let dir = unit_vector(dim, index);
    Point::new(dir.into_iter().map(|c| c * radius).collect())
}

/// Volume sample of the ball plus boundary-approach shells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallGridSpec {
    pub interior: usize,
    pub shells: Vec<(f64, usize)>,
    pub start: u64,
}

impl BallGridSpec {
    /// Default experiment grid: 4096 interior points and 512-point shells
    /// at |z| = 0.9 and 0.99, scaled by `scale` (the CLI --grid-scale).
    pub fn standard(scale: f64, seed: u64) -> Self {
        let n = |base: usize| ((base as f64 * scale).round() as usize).max(1);
        BallGridSpec {
            interior: n(4096),
            shells: vec![(0.9, n(512)), (0.99, n(512))],
            start: seed,
        }
    }

    /// A small grid for inner estimation loops.
    pub fn small(count: usize, seed: u64) -> Self {
        BallGridSpec {
            interior: count,
            shells: vec![],
            start: seed,
        }
    }

    pub fn points(&self, dim: usize) -> Vec<Point> {
        let mut pts = Vec::with_capacity(self.interior + self.shells.iter().map(|s| s.1).sum::<usize>());
        for i in 0..self.interior {
            pts.push(ball_point(dim, self.start + 1 + i as u64));
        }
        let mut offset = self.start + 1 + self.interior as u64;
        for &(radius, count) in &self.shells {
            for i in 0..count {
                pts.push(sphere_point(dim, offset + i as u64, radius));
            }
            offset += count as u64;
        }
        pts
    }
}

/// One slice base point together with t-samples inside its domain.
#[derive(Clone, Debug)]
pub struct SliceEntry {
    pub z0: Point,
    pub domain: SliceDomain,
    pub ts: Vec<C64>,
}

/// A collection of slices; the common grid currency for lambda estimation,
/// criteria verification, and zero scans.
#[derive(Clone, Debug)]
pub struct SliceGrid {
    pub entries: Vec<SliceEntry>,
}

impl SliceGrid {
    /// Builds slices through ball points. Each entry carries `t_per_slice`
    /// samples: t = 0 (the point itself), the domain center, and rings at
    /// fixed fractions of the domain radius with golden-angle rotation.
    pub fn through_points(points: &[Point], b: &Direction, t_per_slice: usize) -> Self {
        let entries = points
            .iter()
            .enumerate()
            .filter_map(|(i, z)| {
                let domain = crate::geometry::slice_domain(z, b).ok()?;
                let ts = t_samples(&domain, t_per_slice, i as u64, true);
                Some(SliceEntry {
                    z0: z.clone(),
                    domain,
                    ts,
                })
            })
            .collect();
        SliceGrid { entries }
    }

    /// Flattened (z0, t) pairs in deterministic order.
    pub fn pairs(&self) -> impl Iterator<Item = (&Point, C64)> {
        self.entries
            .iter()
            .flat_map(|e| e.ts.iter().map(move |&t| (&e.z0, t)))
    }

    pub fn len_pairs(&self) -> usize {
        self.entries.iter().map(|e| e.ts.len()).sum()
    }
}

/// Deterministic t-samples within a slice domain. With `include_zero` the
/// first sample is t = 0 (valid whenever the base point itself lies in the
/// ball). Ring fractions stay strictly below 1.
pub fn t_samples(domain: &SliceDomain, count: usize, salt: u64, include_zero: bool) -> Vec<C64> {
    const FRACTIONS: [f64; 3] = [0.45, 0.75, 0.92];
    let mut ts = Vec::with_capacity(count);
    if include_zero && count > 0 {
        ts.push(Complex64::new(0.0, 0.0));
    }
    if ts.len() < count {
        ts.push(domain.center);
    }
    let mut k = 0usize;
    while ts.len() < count {
        let frac = FRACTIONS[k % FRACTIONS.len()];
        let angle = std::f64::consts::TAU
            * ((salt as f64 * GOLDEN + k as f64 * GOLDEN * GOLDEN).fract());
        ts.push(domain.center + Complex64::from_polar(domain.radius * frac, angle));
        k += 1;
    }
    ts
}
