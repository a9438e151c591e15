//! Directional derivatives along slices via Cauchy-integral quadrature.
//!
//! For g(t) = F(z0 + t*b) the k-th derivative at t0 is recovered from one
//! circle of samples: with M uniform nodes t_j = t0 + rho e^{i theta_j},
//!
//! ```text
//! c_k = (1/M) sum_j g(t_j) e^{-ik theta_j},   g^(k)(t0) = k! * c_k / rho^k,
//! ```
//!
//! which is the trapezoid rule applied to the Cauchy integral and is
//! spectrally accurate for analytic g. One circle serves every order up to
//! `max_order`, so a full derivative sequence costs exactly `nodes`
//! evaluations of F.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcs::AnalyticMap;
use crate::geometry::{in_ball, slice_domain, Direction, Point, C64};
use crate::lfield::LField;
use crate::numerics::{factorial, pairwise_sum};

/// Minimum clearance between the quadrature circle and the slice-domain
/// boundary, as a fraction of the domain radius.
const MIN_CLEARANCE_FRACTION: f64 = 1e-6;

/// How the quadrature circle radius is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RadiusPolicy {
    /// A fixed radius in the t-plane.
    Fixed(f64),
    /// A fraction of the clearance from t0 to the slice-domain boundary.
    ClearanceFraction(f64),
    /// min(eta / L(z0 + t0 b), 0.9 * clearance); requires a weight.
    EtaOverL(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default = "default_policy")]
    pub radius_policy: RadiusPolicy,
    #[serde(default = "default_max_order")]
    pub max_order: usize,
}

fn default_nodes() -> usize {
    256
}

fn default_policy() -> RadiusPolicy {
    RadiusPolicy::ClearanceFraction(0.5)
}

fn default_max_order() -> usize {
    20
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes: default_nodes(),
            radius_policy: default_policy(),
            max_order: default_max_order(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_nodes(nodes: usize) -> Self {
        QuadratureSpec {
            nodes,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.nodes.is_power_of_two() || self.nodes < 8 {
            return Err(Error::Config {
                field: "quadrature.nodes".into(),
                message: format!("must be a power of two >= 8, got {}", self.nodes),
            });
        }
        match self.radius_policy {
            RadiusPolicy::Fixed(r) if !(r > 0.0 && r.is_finite()) => Err(Error::Config {
                field: "quadrature.radius_policy".into(),
                message: format!("fixed radius must be positive, got {r}"),
            }),
            RadiusPolicy::ClearanceFraction(f) if !(f > 0.0 && f < 1.0) => Err(Error::Config {
                field: "quadrature.radius_policy".into(),
                message: format!("clearance fraction must lie in (0, 1), got {f}"),
            }),
            RadiusPolicy::EtaOverL(eta) if !(eta > 0.0 && eta.is_finite()) => Err(Error::Config {
                field: "quadrature.radius_policy".into(),
                message: format!("eta must be positive, got {eta}"),
            }),
            _ => Ok(()),
        }
    }
}

/// The radius rule used when a weight is in play:
/// min(eta / L(z0 + t0 b), 0.9 * clearance(t0)).
pub fn radius_select(
    l: &LField,
    z0: &Point,
    b: &Direction,
    t0: C64,
    eta: f64,
) -> Result<f64> {
    let at = z0.translate(t0, b);
    if !in_ball(&at) {
        return Err(Error::OutsideBall { norm: at.norm() });
    }
    let domain = slice_domain(z0, b)?;
    let clearance = domain.clearance(t0);
    Ok((eta / l.eval(&at)).min(0.9 * clearance))
}

fn resolve_radius(
    spec: &QuadratureSpec,
    z0: &Point,
    b: &Direction,
    t0: C64,
    clearance: f64,
    l: Option<&LField>,
) -> Result<f64> {
    match spec.radius_policy {
        RadiusPolicy::Fixed(r) => Ok(r),
        RadiusPolicy::ClearanceFraction(f) => Ok(f * clearance),
        RadiusPolicy::EtaOverL(eta) => {
            let l = l.ok_or_else(|| Error::Config {
                field: "quadrature.radius_policy".into(),
                message: "eta_over_l radius policy requires a weight field".into(),
            })?;
            radius_select(l, z0, b, t0, eta)
        }
    }
}

/// Effective roundoff per quadrature Fourier coefficient, relative to the
/// circle maximum; a small multiple of machine epsilon calibrated against
/// closed forms.
pub const EPS_EFF: f64 = 32.0 * f64::EPSILON;

/// A derivative sequence together with the circle data behind it, enough
/// for callers to model the roundoff floor of each order.
#[derive(Clone, Debug)]
pub struct QuadratureProfile {
    /// g^(0..=k_max)(t0).
    pub derivs: Vec<C64>,
    /// Radius of the quadrature circle actually used.
    pub rho: f64,
    /// max_j |g(t_j)| over the circle nodes; the absolute noise in each
    /// Fourier coefficient is a small multiple of eps times this.
    pub circle_max: f64,
}

impl QuadratureProfile {
    /// Absolute roundoff floor of derivs[k]: any value at or below this is
    /// indistinguishable from zero given eps-perturbed circle samples, for
    /// this or any other contour method.
    pub fn noise_floor(&self, k: usize) -> f64 {
        EPS_EFF * factorial(k) * self.circle_max / self.rho.powi(k as i32)
    }

    /// Is derivs[k] resolved well above its floor?
    pub fn resolved(&self, k: usize, factor: f64) -> bool {
        self.derivs[k].norm() > factor * self.noise_floor(k)
    }
}

/// All slice derivatives g^(0..=k_max)(t0) from a single quadrature circle,
/// plus the circle scale needed for error modelling.
pub fn dirderiv_profile(
    f: &AnalyticMap,
    z0: &Point,
    b: &Direction,
    t0: C64,
    k_max: usize,
    spec: &QuadratureSpec,
    l: Option<&LField>,
) -> Result<QuadratureProfile> {
    spec.validate()?;
    if k_max > spec.max_order {
        return Err(Error::OrderTooHigh {
            order: k_max,
            max_order: spec.max_order,
        });
    }
    let domain = slice_domain(z0, b)?;
    let clearance = domain.clearance(t0);
    let floor = MIN_CLEARANCE_FRACTION * domain.radius;
    if clearance <= floor {
        return Err(Error::CircleEscapesDomain {
            radius: 0.0,
            clearance,
        });
    }
    let rho = resolve_radius(spec, z0, b, t0, clearance, l)?;
    if !(rho > 0.0) || clearance - rho < floor {
        return Err(Error::CircleEscapesDomain {
            radius: rho,
            clearance,
        });
    }
    let m = spec.nodes;
    let mut samples = Vec::with_capacity(m);
    let mut phases = Vec::with_capacity(m);
    let mut circle_max = 0.0f64;
    for j in 0..m {
        let theta = std::f64::consts::TAU * j as f64 / m as f64;
        let w = Complex64::from_polar(1.0, theta);
        phases.push(w);
        let v = f.eval(&z0.translate(t0 + rho * w, b));
        circle_max = circle_max.max(v.norm());
        samples.push(v);
    }
    let mut out = Vec::with_capacity(k_max + 1);
    // twist_j carries e^{-ik theta_j}, advanced once per order.
    let mut twist: Vec<C64> = vec![Complex64::new(1.0, 0.0); m];
    let mut terms = vec![Complex64::new(0.0, 0.0); m];
    let mut rho_pow = 1.0;
    for k in 0..=k_max {
        for j in 0..m {
            terms[j] = samples[j] * twist[j];
        }
        let coeff = pairwise_sum(&terms) / m as f64;
        out.push((coeff / rho_pow) * factorial(k));
        rho_pow *= rho;
        for j in 0..m {
            twist[j] *= phases[j].conj();
        }
    }
    Ok(QuadratureProfile {
        derivs: out,
        rho,
        circle_max,
    })
}

/// All slice derivatives g^(0..=k_max)(t0) from a single quadrature circle.
pub fn dirderiv_sequence(
    f: &AnalyticMap,
    z0: &Point,
    b: &Direction,
    t0: C64,
    k_max: usize,
    spec: &QuadratureSpec,
    l: Option<&LField>,
) -> Result<Vec<C64>> {
    Ok(dirderiv_profile(f, z0, b, t0, k_max, spec, l)?.derivs)
}

/// Single derivative of order k; same circle cost as the full sequence.
pub fn dirderiv(
    f: &AnalyticMap,
    z0: &Point,
    b: &Direction,
    t0: C64,
    k: usize,
    spec: &QuadratureSpec,
    l: Option<&LField>,
) -> Result<C64> {
    Ok(dirderiv_sequence(f, z0, b, t0, k, spec, l)?[k])
}

/// Derivative sequence at an ambient point (the slice through z itself,
/// evaluated at t0 = 0).
pub fn derivs_at_point(
    f: &AnalyticMap,
    z: &Point,
    b: &Direction,
    k_max: usize,
    spec: &QuadratureSpec,
    l: Option<&LField>,
) -> Result<Vec<C64>> {
    dirderiv_sequence(f, z, b, Complex64::new(0.0, 0.0), k_max, spec, l)
}
