//! Positive continuous weights L on the unit ball and the lambda
//! machinery of the class Q_{b,beta}.
//!
//! The growth condition in play is L(z) > beta |b| / (1 - |z|) with
//! beta > 1; weights violating it are still usable (the Remark-4 example
//! does exactly that) and [`check_condition2`] reports where it fails.
//! Class membership is probed through the two-sided ratio bounds
//!
//! ```text
//! lambda1(eta) = inf L(z + t b) / L(z + t0 b),
//! lambda2(eta) = sup L(z + t b) / L(z + t0 b),
//! |t - t0| <= eta / L(z + t0 b),
//! ```
//!
//! estimated over a slice grid with concentric-circle disc sampling.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{in_ball, Direction, Point, C64};
use crate::sampling::{ball_point, sphere_point, SliceGrid};

type WeightFn = dyn Fn(&[C64]) -> f64 + Send + Sync;
/// Closed-form derivative of r -> L(z0 + r e^{i theta} b); arguments are
/// (z0 coords, b coords, theta, r).
type RayDerivFn = dyn Fn(&[C64], &[C64], f64, f64) -> f64 + Send + Sync;

/// A weight field with its class parameter beta.
#[derive(Clone)]
pub struct LField {
    name: String,
    beta: f64,
    eval: Arc<WeightFn>,
    ray_deriv: Option<Arc<RayDerivFn>>,
}

impl std::fmt::Debug for LField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LField")
            .field("name", &self.name)
            .field("beta", &self.beta)
            .field("ray_deriv", &self.ray_deriv.is_some())
            .finish()
    }
}

impl LField {
    pub fn from_fn(
        name: impl Into<String>,
        beta: f64,
        eval: impl Fn(&[C64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(beta > 1.0) {
            return Err(Error::Config {
                field: "beta".into(),
                message: format!("beta must exceed 1, got {beta}"),
            });
        }
        Ok(LField {
            name: name.into(),
            beta,
            eval: Arc::new(eval),
            ray_deriv: None,
        })
    }

    pub fn with_ray_deriv(
        mut self,
        f: impl Fn(&[C64], &[C64], f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.ray_deriv = Some(Arc::new(f));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eval(&self, z: &Point) -> f64 {
        let v = (self.eval)(z.coords());
        debug_assert!(v > 0.0 && v.is_finite(), "weight must be positive, got {v}");
        v
    }

    pub fn eval_coords(&self, z: &[C64]) -> f64 {
        (self.eval)(z)
    }

    /// Closed-form radial derivative along a ray, when the weight has one.
    pub fn ray_derivative(&self, z0: &Point, b: &Direction, theta: f64, r: f64) -> Option<f64> {
        self.ray_deriv
            .as_ref()
            .map(|f| f(z0.coords(), b.coords(), theta, r))
    }
}

/// d|z0 + r e^{i theta} b| / dr; the ray hits the origin only on a measure-
/// zero set, where the one-sided value |b| is used.
fn norm_ray_derivative(z0: &[C64], b: &[C64], theta: f64, r: f64) -> f64 {
    let v: Vec<C64> = b
        .iter()
        .map(|bj| bj * C64::from_polar(1.0, theta))
        .collect();
    let w: Vec<C64> = z0.iter().zip(&v).map(|(zj, vj)| zj + vj * r).collect();
    let norm: f64 = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-14 {
        return v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    }
    let num: f64 = w.iter().zip(&v).map(|(wj, vj)| (wj * vj.conj()).re).sum();
    num / norm
}

pub const LFIELD_NAMES: [&str; 4] = [
    "constant",
    "reciprocal_one_minus_r",
    "remark4_weight",
    "lemma4",
];

/// Instantiates a registry weight. `b` is needed only by the `lemma4`
/// constructor (the scale factor carries |b|); other entries ignore it.
pub fn lfield_registry(
    name: &str,
    params: &crate::funcs::Params,
    beta: f64,
    b: &Direction,
) -> Result<LField> {
    let r = crate::funcs::ParamReader { name, params };
    match name {
        "constant" => {
            let c = r.real_or("c", 1.0)?;
            if !(c > 0.0) {
                return Err(Error::BadParams {
                    name: name.into(),
                    reason: format!("`c` must be positive, got {c}"),
                });
            }
            Ok(LField::from_fn(format!("constant({c})"), beta, move |_| c)?
                .with_ray_deriv(|_, _, _, _| 0.0))
        }
        "reciprocal_one_minus_r" => {
            let c = r.real_or("c", 2.0)?;
            let alpha = r.real_or("alpha", 1.0)?;
            if !(c > 0.0) || !(alpha >= 1.0) {
                return Err(Error::BadParams {
                    name: name.into(),
                    reason: format!("need c > 0 and alpha >= 1, got c = {c}, alpha = {alpha}"),
                });
            }
            let eval = move |z: &[C64]| {
                let s: f64 = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                c / (1.0 - s).powf(alpha)
            };
            Ok(
                LField::from_fn(format!("{c}/(1-|z|)^{alpha}"), beta, eval)?.with_ray_deriv(
                    move |z0, b, theta, rr| {
                        let v: Vec<C64> = b
                            .iter()
                            .map(|bj| bj * C64::from_polar(1.0, theta))
                            .collect();
                        let w: Vec<C64> =
                            z0.iter().zip(&v).map(|(zj, vj)| zj + vj * rr).collect();
                        let s: f64 = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                        let sp = norm_ray_derivative(z0, b, theta, rr);
                        c * alpha * (1.0 - s).powf(-alpha - 1.0) * sp
                    },
                ),
            )
        }
        "remark4_weight" => {
            let eval = |z: &[C64]| 2.0 * (z[1] - z[0]).norm() + 1.0;
            Ok(
                LField::from_fn("2|z2-z1|+1", beta, eval)?.with_ray_deriv(
                    |z0, b, theta, rr| {
                        // |u + r v| with u = z0_2 - z0_1, v = e^{i theta}(b2 - b1).
                        let u = z0[1] - z0[0];
                        let v = (b[1] - b[0]) * C64::from_polar(1.0, theta);
                        let w = u + v * rr;
                        let n = w.norm();
                        let d = if n < 1e-14 {
                            v.norm()
                        } else {
                            (w * v.conj()).re / n
                        };
                        2.0 * d
                    },
                ),
            )
        }
        "lemma4" => {
            let base_name = r.str_or("base", "one")?;
            let alpha = r.real_or("alpha", 1.0)?;
            let samples = r.int_or("samples", 20_000)? as usize;
            let base = base_weight(&base_name, beta)?;
            lemma4_construct(&base, b, beta, alpha, samples, 0)
        }
        other => Err(Error::UnknownFunction {
            name: other.to_string(),
        }),
    }
}

/// Continuous positive base functions for the lemma4 constructor.
pub fn base_weight(name: &str, beta: f64) -> Result<LField> {
    match name {
        "one" => Ok(LField::from_fn("one", beta, |_| 1.0)?.with_ray_deriv(|_, _, _, _| 0.0)),
        "one_plus_z1_sq" => Ok(LField::from_fn("1+|z1|^2", beta, |z: &[C64]| {
            1.0 + z[0].norm_sqr()
        })?
        .with_ray_deriv(|z0, b, theta, rr| {
            let v = b[0] * C64::from_polar(1.0, theta);
            let w = z0[0] + v * rr;
            2.0 * (w * v.conj()).re
        })),
        "remark4_weight" => {
            lfield_registry("remark4_weight", &crate::funcs::Params::new(), beta, &dummy_dir())
        }
        other => Err(Error::UnknownFunction {
            name: format!("lemma4 base `{other}`"),
        }),
    }
}

fn dummy_dir() -> Direction {
    Direction::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap()
}

/// Builds the admissible weight (beta |b| / m) * base(z) / (1 - |z|)^alpha,
/// where m is the sampled minimum of `base` over the closed ball.
pub fn lemma4_construct(
    base: &LField,
    b: &Direction,
    beta: f64,
    alpha: f64,
    samples: usize,
    start: u64,
) -> Result<LField> {
    assert!(alpha >= 1.0, "lemma4 needs alpha >= 1");
    let dim = b.dim();
    let interior = (samples * 9) / 10;
    let boundary = samples - interior;
    let mut min_val = f64::INFINITY;
    for i in 0..interior {
        let p = ball_point(dim, start + 1 + i as u64);
        min_val = min_val.min(base.eval_coords(p.coords()));
    }
    for i in 0..boundary {
        let p = sphere_point(dim, start + 1 + (interior + i) as u64, 1.0);
        min_val = min_val.min(base.eval_coords(p.coords()));
    }
    if !(min_val > 0.0) || !min_val.is_finite() {
        return Err(Error::NonPositiveL { value: min_val });
    }
    let factor = beta * b.norm() / min_val;
    let base_eval = base.clone();
    let eval = move |z: &[C64]| {
        let s: f64 = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        factor * base_eval.eval_coords(z) / (1.0 - s).powf(alpha)
    };
    let name = format!("lemma4({}, alpha={alpha})", base.name());
    let out = LField::from_fn(name, beta, eval)?;
    if let Some(base_rd) = base.ray_deriv.clone() {
        let base_eval2 = base.eval.clone();
        Ok(out.with_ray_deriv(move |z0, bc, theta, rr| {
            let v: Vec<C64> = bc
                .iter()
                .map(|bj| bj * C64::from_polar(1.0, theta))
                .collect();
            let w: Vec<C64> = z0.iter().zip(&v).map(|(zj, vj)| zj + vj * rr).collect();
            let s: f64 = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            let sp = norm_ray_derivative(z0, bc, theta, rr);
            let bval = (base_eval2)(&w);
            let bder = base_rd(z0, bc, theta, rr);
            factor
                * ((1.0 - s).powf(-alpha) * bder
                    + bval * alpha * (1.0 - s).powf(-alpha - 1.0) * sp)
        }))
    } else {
        Ok(out)
    }
}

/// One grid point where the growth condition fails.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Condition2Violation {
    pub z: Vec<[f64; 2]>,
    pub norm: f64,
    pub l_value: f64,
    pub bound: f64,
    /// l_value - bound; <= 0 means the strict inequality fails.
    pub margin: f64,
}

/// Checks L(z) > beta |b| / (1 - |z|) pointwise; returns the failures.
pub fn check_condition2(l: &LField, b: &Direction, points: &[Point]) -> Vec<Condition2Violation> {
    let beta = l.beta();
    points
        .iter()
        .filter_map(|z| {
            let norm = z.norm();
            let bound = beta * b.norm() / (1.0 - norm);
            let l_value = l.eval(z);
            if l_value > bound {
                None
            } else {
                Some(Condition2Violation {
                    z: z.to_pairs(),
                    norm,
                    l_value,
                    bound,
                    margin: l_value - bound,
                })
            }
        })
        .collect()
}

/// Disc sampling density for lambda estimation: C concentric circles with
/// M points each, plus the center.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DiscSampling {
    pub circles: usize,
    pub angles: usize,
}

impl Default for DiscSampling {
    fn default() -> Self {
        DiscSampling {
            circles: 4,
            angles: 32,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LambdaWitness {
    pub z0: Vec<[f64; 2]>,
    pub t0: [f64; 2],
    pub t: [f64; 2],
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LambdaEstimate {
    pub eta: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub samples: usize,
    pub min_witness: LambdaWitness,
    pub max_witness: LambdaWitness,
}

/// Estimates lambda1/lambda2 at the given eta over a slice grid.
pub fn estimate_lambda(
    l: &LField,
    b: &Direction,
    eta: f64,
    grid: &SliceGrid,
    disc: &DiscSampling,
) -> Result<LambdaEstimate> {
    if !(0.0..=l.beta()).contains(&eta) {
        return Err(Error::EtaOutOfRange {
            eta,
            beta: l.beta(),
        });
    }
    let mut lambda1 = f64::INFINITY;
    let mut lambda2 = f64::NEG_INFINITY;
    let mut min_w = None;
    let mut max_w = None;
    let mut samples = 0usize;
    for (z0, t0) in grid.pairs() {
        let at0 = z0.translate(t0, b);
        if !in_ball(&at0) {
            continue;
        }
        let l0 = l.eval(&at0);
        let rho = eta / l0;
        let mut consider = |t: C64| {
            let at = z0.translate(t, b);
            if !in_ball(&at) {
                return;
            }
            let ratio = l.eval(&at) / l0;
            samples += 1;
            if ratio < lambda1 {
                lambda1 = ratio;
                min_w = Some(LambdaWitness {
                    z0: z0.to_pairs(),
                    t0: [t0.re, t0.im],
                    t: [t.re, t.im],
                    ratio,
                });
            }
            if ratio > lambda2 {
                lambda2 = ratio;
                max_w = Some(LambdaWitness {
                    z0: z0.to_pairs(),
                    t0: [t0.re, t0.im],
                    t: [t.re, t.im],
                    ratio,
                });
            }
        };
        consider(t0);
        for i in 1..=disc.circles {
            let r = rho * i as f64 / disc.circles as f64;
            for m in 0..disc.angles {
                let angle = std::f64::consts::TAU * m as f64 / disc.angles as f64;
                consider(t0 + C64::from_polar(r, angle));
            }
        }
    }
    let (min_w, max_w) = match (min_w, max_w) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::Config {
                field: "lambda.grid".into(),
                message: "no admissible (z, t0) sample".into(),
            })
        }
    };
    Ok(LambdaEstimate {
        eta,
        lambda1,
        lambda2,
        samples,
        min_witness: min_w,
        max_witness: max_w,
    })
}

/// The weight |theta| L for the direction theta b; beta is unchanged.
pub fn scale_direction(l: &LField, theta: C64) -> Result<LField> {
    if theta == C64::new(0.0, 0.0) {
        return Err(Error::ZeroTheta);
    }
    let scale = theta.norm();
    let inner = l.eval.clone();
    let name = format!("{scale}*{}", l.name());
    let out = LField::from_fn(name, l.beta(), move |z| scale * inner(z))?;
    if let Some(rd) = l.ray_deriv.clone() {
        Ok(out.with_ray_deriv(move |z0, b, theta_r, r| scale * rd(z0, b, theta_r, r)))
    } else {
        Ok(out)
    }
}

/// The combined weight min(lambda2^{b1}(eta), lambda2^{b2}(eta)) * L for the
/// direction b1 + b2, after checking the stronger growth precondition
/// L(z)(1 - |z|) > beta * max(|b1|, |b2|, |b1 + b2|) on the given points.
pub fn combine_directions(
    l: &LField,
    b1: &Direction,
    b2: &Direction,
    eta_cap: f64,
    points: &[Point],
    disc: &DiscSampling,
) -> Result<LField> {
    let bsum = b1.add(b2)?;
    let needed = l.beta() * b1.norm().max(b2.norm()).max(bsum.norm());
    for z in points {
        let lhs = l.eval(z) * (1.0 - z.norm());
        if lhs <= needed {
            return Err(Error::PreconditionViolated {
                norm: z.norm(),
                lhs,
                rhs: needed,
            });
        }
    }
    let eta = eta_cap.min(l.beta());
    let grid1 = SliceGrid::through_points(points, b1, 3);
    let grid2 = SliceGrid::through_points(points, b2, 3);
    let l2a = estimate_lambda(l, b1, eta, &grid1, disc)?.lambda2;
    let l2b = estimate_lambda(l, b2, eta, &grid2, disc)?.lambda2;
    let factor = l2a.min(l2b);
    let inner = l.eval.clone();
    let name = format!("combine[{factor:.6}]*{}", l.name());
    let out = LField::from_fn(name, l.beta(), move |z| factor * inner(z))?;
    if let Some(rd) = l.ray_deriv.clone() {
        Ok(out.with_ray_deriv(move |z0, b, theta_r, r| factor * rd(z0, b, theta_r, r)))
    } else {
        Ok(out)
    }
}
