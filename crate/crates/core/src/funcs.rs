//! Analytic test functions on the unit ball and their slices.
//!
//! An [`AnalyticMap`] is an evaluation closure plus optional closed-form
//! directional derivatives; the registry provides the named instances that
//! experiments and cross-checks are built from. Inner products written
//! <z,c> are Hermitian (sum z_j * conj(c_j)); the exponent of `exp_linear`
//! is the plain bilinear sum c_j z_j.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{herm, slice_domain, Direction, Point, SliceDomain, C64};

type EvalFn = dyn Fn(&[C64]) -> C64 + Send + Sync;
type DerivFn = dyn Fn(&[C64], &[C64], usize) -> Option<C64> + Send + Sync;

/// An analytic function of n complex variables.
#[derive(Clone)]
pub struct AnalyticMap {
    name: String,
    dim: usize,
    eval: Arc<EvalFn>,
    closed: Option<Arc<DerivFn>>,
}

impl std::fmt::Debug for AnalyticMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalyticMap")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("closed_form", &self.closed.is_some())
            .finish()
    }
}

impl AnalyticMap {
    pub fn from_fn(
        name: impl Into<String>,
        dim: usize,
        eval: impl Fn(&[C64]) -> C64 + Send + Sync + 'static,
    ) -> Self {
        AnalyticMap {
            name: name.into(),
            dim,
            eval: Arc::new(eval),
            closed: None,
        }
    }

    /// Attaches a closed-form directional derivative
    /// (z, b, k) -> d^k F / d b^k (z), returning None where the form
    /// does not apply.
    pub fn with_closed_form(
        mut self,
        f: impl Fn(&[C64], &[C64], usize) -> Option<C64> + Send + Sync + 'static,
    ) -> Self {
        self.closed = Some(Arc::new(f));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn has_closed_form(&self) -> bool {
        self.closed.is_some()
    }

    pub fn eval(&self, z: &Point) -> C64 {
        debug_assert_eq!(z.dim(), self.dim);
        (self.eval)(z.coords())
    }

    pub fn eval_coords(&self, z: &[C64]) -> C64 {
        debug_assert_eq!(z.len(), self.dim);
        (self.eval)(z)
    }

    pub fn closed_form_dirderiv(&self, z: &Point, b: &Direction, k: usize) -> Option<C64> {
        let f = self.closed.as_ref()?;
        f(z.coords(), b.coords(), k)
    }
}

/// The restriction g(t) = F(z0 + t*b) with its natural domain S_{z0}.
#[derive(Clone, Debug)]
pub struct SliceFunction {
    pub map: AnalyticMap,
    pub z0: Point,
    pub b: Direction,
    pub domain: SliceDomain,
}

impl SliceFunction {
    pub fn point_at(&self, t: C64) -> Point {
        self.z0.translate(t, &self.b)
    }

    pub fn eval(&self, t: C64) -> C64 {
        self.map.eval(&self.point_at(t))
    }
}

/// Builds the slice of F through z0 in direction b.
pub fn slice(map: &AnalyticMap, z0: &Point, b: &Direction) -> Result<SliceFunction> {
    let domain = slice_domain(z0, b)?;
    Ok(SliceFunction {
        map: map.clone(),
        z0: z0.clone(),
        b: b.clone(),
        domain,
    })
}

/// Registry parameter values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Complex(C64),
    ComplexVec(Vec<C64>),
    Str(String),
}

/// Named parameters for registry constructors.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params(pub BTreeMap<String, ParamValue>);

impl Params {
    pub fn new() -> Self {
        Params(BTreeMap::new())
    }

    pub fn set(mut self, key: &str, value: ParamValue) -> Self {
        self.0.insert(key.to_string(), value);
        self
    }

    pub fn int(self, key: &str, v: i64) -> Self {
        self.set(key, ParamValue::Int(v))
    }

    pub fn real(self, key: &str, v: f64) -> Self {
        self.set(key, ParamValue::Real(v))
    }

    pub fn complex(self, key: &str, v: C64) -> Self {
        self.set(key, ParamValue::Complex(v))
    }

    pub fn cvec(self, key: &str, v: Vec<C64>) -> Self {
        self.set(key, ParamValue::ComplexVec(v))
    }

    pub fn str(self, key: &str, v: &str) -> Self {
        self.set(key, ParamValue::Str(v.to_string()))
    }
}

/// Typed parameter access with registry-name context in errors.
pub struct ParamReader<'a> {
    pub name: &'a str,
    pub params: &'a Params,
}

impl<'a> ParamReader<'a> {
    fn bad(&self, reason: String) -> Error {
        Error::BadParams {
            name: self.name.to_string(),
            reason,
        }
    }

    pub fn int_or(&self, key: &str, default: i64) -> Result<i64> {
        match self.params.0.get(key) {
            None => Ok(default),
            Some(ParamValue::Int(v)) => Ok(*v),
            Some(ParamValue::Real(v)) if v.fract() == 0.0 => Ok(*v as i64),
            Some(other) => Err(self.bad(format!("`{key}` must be an integer, got {other:?}"))),
        }
    }

    pub fn real_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.0.get(key) {
            None => Ok(default),
            Some(ParamValue::Real(v)) => Ok(*v),
            Some(ParamValue::Int(v)) => Ok(*v as f64),
            Some(other) => Err(self.bad(format!("`{key}` must be a real number, got {other:?}"))),
        }
    }

    pub fn complex_or(&self, key: &str, default: C64) -> Result<C64> {
        match self.params.0.get(key) {
            None => Ok(default),
            Some(ParamValue::Complex(v)) => Ok(*v),
            Some(ParamValue::Real(v)) => Ok(C64::new(*v, 0.0)),
            Some(ParamValue::Int(v)) => Ok(C64::new(*v as f64, 0.0)),
            Some(other) => Err(self.bad(format!("`{key}` must be complex, got {other:?}"))),
        }
    }

    pub fn complex_req(&self, key: &str) -> Result<C64> {
        if !self.params.0.contains_key(key) {
            return Err(self.bad(format!("missing required parameter `{key}`")));
        }
        self.complex_or(key, C64::new(0.0, 0.0))
    }

    pub fn cvec_req(&self, key: &str) -> Result<Vec<C64>> {
        match self.params.0.get(key) {
            Some(ParamValue::ComplexVec(v)) if !v.is_empty() => Ok(v.clone()),
            Some(ParamValue::Complex(v)) => Ok(vec![*v]),
            Some(other) => Err(self.bad(format!(
                "`{key}` must be a nonempty complex vector, got {other:?}"
            ))),
            None => Err(self.bad(format!("missing required parameter `{key}`"))),
        }
    }

    pub fn str_or(&self, key: &str, default: &str) -> Result<String> {
        match self.params.0.get(key) {
            None => Ok(default.to_string()),
            Some(ParamValue::Str(s)) => Ok(s.clone()),
            Some(other) => Err(self.bad(format!("`{key}` must be a string, got {other:?}"))),
        }
    }
}

pub const REGISTRY_NAMES: [&str; 7] = [
    "constant",
    "linear",
    "exp_linear",
    "remark4",
    "slice_poly",
    "truncated_product",
    "normalized_zero",
];

/// Instantiates a registry function by name.
pub fn registry_get(name: &str, params: &Params) -> Result<AnalyticMap> {
    let r = ParamReader { name, params };
    match name {
        "constant" => {
            let value = r.complex_or("value", C64::new(1.0, 0.0))?;
            let dim = r.int_or("dim", 1)? as usize;
            Ok(
                AnalyticMap::from_fn("constant", dim, move |_| value).with_closed_form(
                    move |_, _, k| Some(if k == 0 { value } else { C64::new(0.0, 0.0) }),
                ),
            )
        }
        "linear" => {
            let c = r.cvec_req("c")?;
            let c0 = r.complex_or("c0", C64::new(0.0, 0.0))?;
            let dim = c.len();
            let c_eval = c.clone();
            Ok(AnalyticMap::from_fn("linear", dim, move |z| {
                herm(z, &c_eval) + c0
            })
            .with_closed_form(move |z, b, k| {
                Some(match k {
                    0 => herm(z, &c) + c0,
                    1 => herm(b, &c),
                    _ => C64::new(0.0, 0.0),
                })
            }))
        }
        "exp_linear" => {
            let c = r.cvec_req("c")?;
            let dim = c.len();
            let c_eval = c.clone();
            let exponent =
                move |z: &[C64]| -> C64 { z.iter().zip(&c_eval).map(|(zj, cj)| zj * cj).sum() };
            let exponent2 = exponent.clone();
            Ok(
                AnalyticMap::from_fn("exp_linear", dim, move |z| exponent(z).exp())
                    .with_closed_form(move |z, b, k| {
                        let s: C64 = b.iter().zip(&c).map(|(bj, cj)| bj * cj).sum();
                        Some(s.powu(k as u32) * exponent2(z).exp())
                    }),
            )
        }
        "remark4" => {
            let eval = |z: &[C64]| (-z[0] * z[0] + z[1] * z[1]).exp();
            Ok(AnalyticMap::from_fn("remark4", 2, eval).with_closed_form(
                move |z, b, k| {
                    // g(t) = exp(u(t)) with u quadratic along the slice:
                    // u'(0) = 2(z2 b2 - z1 b1), u'' = 2(b2^2 - b1^2), so the
                    // derivative polynomials obey P_{k+1} = x P_k + u'' P_k'.
                    let x0 = 2.0 * (z[1] * b[1] - z[0] * b[0]);
                    let upp = 2.0 * (b[1] * b[1] - b[0] * b[0]);
                    let mut poly: Vec<C64> = vec![C64::new(1.0, 0.0)];
                    for _ in 0..k {
                        let mut next = vec![C64::new(0.0, 0.0); poly.len() + 1];
                        for (m, &coef) in poly.iter().enumerate() {
                            next[m + 1] += coef;
                            if m >= 1 {
                                next[m - 1] += upp * coef * m as f64;
                            }
                        }
                        poly = next;
                    }
                    let mut acc = C64::new(0.0, 0.0);
                    for &coef in poly.iter().rev() {
                        acc = acc * x0 + coef;
                    }
                    Some(acc * eval(z))
                },
            ))
        }
        "slice_poly" => {
            let roots = r.cvec_req("roots")?;
            let dim = r.int_or("dim", 1)? as usize;
            if dim == 0 {
                return Err(r.bad("`dim` must be at least 1".into()));
            }
            Ok(AnalyticMap::from_fn("slice_poly", dim, move |z| {
                roots.iter().map(|root| z[0] - root).product()
            }))
        }
        "truncated_product" => {
            let j_max = r.int_or("j_max", 0)?;
            if j_max < 1 {
                return Err(r.bad(format!("`j_max` must be >= 1, got {j_max}")));
            }
            let c = r.cvec_req("c")?;
            let d = r.cvec_req("d")?;
            if c.len() != d.len() {
                return Err(r.bad(format!(
                    "`c` (len {}) and `d` (len {}) must agree",
                    c.len(),
                    d.len()
                )));
            }
            let dim = c.len();
            Ok(AnalyticMap::from_fn("truncated_product", dim, move |z| {
                let zc = herm(z, &c);
                let zd = herm(z, &d);
                let mut acc = C64::new(1.0, 0.0) + zd;
                let mut pow2 = 1.0;
                for j in 1..=j_max {
                    pow2 *= 0.5;
                    acc *= (C64::new(1.0, 0.0) + zc * pow2).powu(j as u32);
                }
                acc
            }))
        }
        "normalized_zero" => {
            let a = r.complex_req("a")?;
            if a == C64::new(0.0, 0.0) {
                return Err(r.bad("`a` must be nonzero".into()));
            }
            let dim = r.int_or("dim", 1)? as usize;
            if dim == 0 {
                return Err(r.bad("`dim` must be at least 1".into()));
            }
            Ok(AnalyticMap::from_fn("normalized_zero", dim, move |z| {
                (z[0] - a) / (-a)
            }))
        }
        other => Err(Error::UnknownFunction {
            name: other.to_string(),
        }),
    }
}
