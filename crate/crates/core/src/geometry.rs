//! Unit-ball geometry: points, directions, and the one-dimensional slice
//! domains cut out by complex lines z0 + t*b.
//!
//! Everything downstream reduces questions about F on the ball to questions
//! about g(t) = F(z0 + t*b) on a disc in the t-plane, so the disc returned by
//! [`slice_domain`] is the single most load-bearing formula here: for the
//! Hermitian product <z,b> = sum z_j * conj(b_j),
//!
//! ```text
//! S_z = { t : |t - c| < rho },  c = -<z,b>/|b|^2,
//! rho^2 = (1 - |z|^2 + |<z,b>|^2/|b|^2) / |b|^2.
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermitian inner product `sum_j x_j * conj(y_j)`.
pub fn herm(x: &[C64], y: &[C64]) -> C64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// A point of C^n. Coordinates are finite; the dimension is a runtime value.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<C64>,
}

impl Point {
    pub fn new(coords: Vec<C64>) -> Self {
        assert!(!coords.is_empty(), "points need at least one coordinate");
        debug_assert!(coords.iter().all(|c| c.re.is_finite() && c.im.is_finite()));
        Point { coords }
    }

    pub fn origin(dim: usize) -> Self {
        Point::new(vec![C64::new(0.0, 0.0); dim])
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// The point z + t*b.
    pub fn translate(&self, t: C64, b: &Direction) -> Point {
        debug_assert_eq!(self.dim(), b.dim());
        Point::new(
            self.coords
                .iter()
                .zip(b.coords())
                .map(|(z, bj)| z + t * bj)
                .collect(),
        )
    }

    /// Plain [re, im] pairs for report payloads.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.coords.iter().map(|c| [c.re, c.im]).collect()
    }
}

/// A nonzero vector of C^n fixing the slicing direction b.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    coords: Vec<C64>,
    norm: f64,
}

impl Direction {
    pub fn new(coords: Vec<C64>) -> Result<Self> {
        assert!(!coords.is_empty(), "directions need at least one coordinate");
        let norm = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroDirection);
        }
        Ok(Direction { coords, norm })
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// The direction theta*b (theta != 0).
    pub fn scale(&self, theta: C64) -> Result<Direction> {
        if theta == C64::new(0.0, 0.0) {
            return Err(Error::ZeroTheta);
        }
        Direction::new(self.coords.iter().map(|c| c * theta).collect())
    }

    /// The direction b1 + b2; errs when the sum degenerates to zero.
    pub fn add(&self, other: &Direction) -> Result<Direction> {
        debug_assert_eq!(self.dim(), other.dim());
        Direction::new(
            self.coords
                .iter()
                .zip(other.coords())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.coords.iter().map(|c| [c.re, c.im]).collect()
    }
}

/// Strict membership test for the open unit ball.
pub fn in_ball(z: &Point) -> bool {
    z.norm_sq() < 1.0
}

/// The open disc of t-values for which z0 + t*b stays inside the ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceDomain {
    pub center: C64,
    pub radius: f64,
}

impl SliceDomain {
    pub fn contains(&self, t: C64) -> bool {
        (t - self.center).norm() < self.radius
    }

    /// Distance from t0 to the domain boundary (negative outside).
    pub fn clearance(&self, t0: C64) -> f64 {
        self.radius - (t0 - self.center).norm()
    }
}

/// Computes S_z for the line z + t*b.
///
/// For |z| < 1 the disc is always nonempty. Base points produced by
/// hyperplane decompositions may lie outside the ball; the same formula is
/// exact there too, and the error is reserved for lines that miss the ball
/// entirely (radius^2 <= 0).
pub fn slice_domain(z: &Point, b: &Direction) -> Result<SliceDomain> {
    debug_assert_eq!(z.dim(), b.dim());
    let bb = b.norm() * b.norm();
    let zb = herm(z.coords(), b.coords());
    let radius_sq = (1.0 - z.norm_sq() + zb.norm_sqr() / bb) / bb;
    if radius_sq <= 0.0 {
        return Err(Error::OutsideBall { norm: z.norm() });
    }
    Ok(SliceDomain {
        center: -zb / bb,
        radius: radius_sq.sqrt(),
    })
}

/// Splits z = z0 + t*b with the j0-th coordinate of z0 forced to zero:
/// t = z_{j0} / b_{j0}.
pub fn hyperplane_decompose(z: &Point, b: &Direction, j0: usize) -> Result<(Point, C64)> {
    debug_assert_eq!(z.dim(), b.dim());
    if j0 >= b.dim() {
        return Err(Error::ZeroComponent { j0 });
    }
    let bj = b.coords()[j0];
    if bj == C64::new(0.0, 0.0) {
        return Err(Error::ZeroComponent { j0 });
    }
    let t = z.coords()[j0] / bj;
    let mut coords: Vec<C64> = z
        .coords()
        .iter()
        .zip(b.coords())
        .map(|(zj, bj)| zj - t * bj)
        .collect();
    coords[j0] = C64::new(0.0, 0.0);
    Ok((Point::new(coords), t))
}

/// Splits z = z0 + t*b with the coordinates of z0 summing to zero:
/// t = (sum z_j) / (sum b_j).
pub fn hyperplane_decompose_sum(z: &Point, b: &Direction) -> Result<(Point, C64)> {
    debug_assert_eq!(z.dim(), b.dim());
    let bsum: C64 = b.coords().iter().sum();
    if bsum == C64::new(0.0, 0.0) {
        return Err(Error::DegenerateDirection);
    }
    let zsum: C64 = z.coords().iter().sum();
    let t = zsum / bsum;
    let coords: Vec<C64> = z
        .coords()
        .iter()
        .zip(b.coords())
        .map(|(zj, bj)| zj - t * bj)
        .collect();
    Ok((Point::new(coords), t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn slice_domain_at_origin_is_disc_of_radius_one_over_norm() {
        let b = Direction::new(vec![c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        let d = slice_domain(&Point::origin(2), &b).unwrap();
        assert_eq!(d.center, c(0.0, 0.0));
        assert!((d.radius - 0.2).abs() < 1e-15);
    }

    #[test]
    fn slice_domain_matches_half_line_case() {
        // z = (0.5, 0), b = (1, 0): membership reads |0.5 + t| < 1.
        let z = Point::new(vec![c(0.5, 0.0), c(0.0, 0.0)]);
        let b = Direction::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let d = slice_domain(&z, &b).unwrap();
        assert!((d.center - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((d.radius - 1.0).abs() < 1e-15);
    }

    #[test]
    fn slice_domain_accepts_outside_base_when_line_meets_ball() {
        // z0 = (0, 1.2) with b = e_2: the line is the z2-axis, disc radius 1.
        let z = Point::new(vec![c(0.0, 0.0), c(1.2, 0.0)]);
        let b = Direction::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let d = slice_domain(&z, &b).unwrap();
        assert!((d.center - c(-1.2, 0.0)).norm() < 1e-12);
        assert!((d.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slice_domain_rejects_line_missing_ball() {
        let z = Point::new(vec![c(2.0, 0.0), c(0.0, 0.0)]);
        let b = Direction::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(
            slice_domain(&z, &b),
            Err(Error::OutsideBall { .. })
        ));
    }

    #[test]
    fn zero_direction_is_rejected() {
        assert_eq!(
            Direction::new(vec![c(0.0, 0.0)]).unwrap_err(),
            Error::ZeroDirection
        );
    }

    #[test]
    fn coordinate_decomposition_zeroes_the_pivot() {
        let z = Point::new(vec![c(0.3, 0.1), c(0.2, 0.0)]);
        let b = Direction::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let (z0, t) = hyperplane_decompose(&z, &b, 0).unwrap();
        assert_eq!(z0.coords()[0], c(0.0, 0.0));
        assert!((t - c(0.3, 0.1)).norm() < 1e-15);
        assert!((z0.coords()[1] - c(-0.1, -0.1)).norm() < 1e-15);
        // Reconstruction z0 + t*b = z.
        let back = z0.translate(t, &b);
        assert!((back.coords()[0] - z.coords()[0]).norm() < 1e-15);
        assert!((back.coords()[1] - z.coords()[1]).norm() < 1e-15);
    }

    #[test]
    fn coordinate_decomposition_rejects_zero_pivot() {
        let z = Point::new(vec![c(0.3, 0.0), c(0.2, 0.0)]);
        let b = Direction::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(
            hyperplane_decompose(&z, &b, 0),
            Err(Error::ZeroComponent { j0: 0 })
        ));
    }

    #[test]
    fn sum_decomposition_zeroes_the_coordinate_sum() {
        let z = Point::new(vec![c(0.25, -0.1), c(0.1, 0.3)]);
        let b = Direction::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let (z0, t) = hyperplane_decompose_sum(&z, &b).unwrap();
        let s: C64 = z0.coords().iter().sum();
        assert!(s.norm() < 1e-15);
        let back = z0.translate(t, &b);
        assert!((back.coords()[0] - z.coords()[0]).norm() < 1e-15);
        assert!((back.coords()[1] - z.coords()[1]).norm() < 1e-15);
    }

    #[test]
    fn sum_decomposition_rejects_cancelling_direction() {
        let z = Point::new(vec![c(0.2, 0.0), c(0.1, 0.0)]);
        let b = Direction::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(
            hyperplane_decompose_sum(&z, &b).unwrap_err(),
            Error::DegenerateDirection
        );
    }

    #[test]
    fn clearance_is_signed() {
        let d = SliceDomain {
            center: c(0.0, 0.0),
            radius: 1.0,
        };
        assert!(d.clearance(c(0.5, 0.0)) > 0.0);
        assert!(d.clearance(c(1.5, 0.0)) < 0.0);
        assert!(d.contains(c(0.0, 0.9)));
        assert!(!d.contains(c(0.0, 1.0)));
    }
}
