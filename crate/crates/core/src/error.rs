//! Error type shared by every module of the toolkit.
//!
//! Each variant corresponds to a violated precondition or a numerical
//! failure that callers are expected to handle; none of them abort a
//! whole experiment run.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("direction vector is zero")]
    ZeroDirection,

    #[error("point lies outside the open unit ball (|z| = {norm})")]
    OutsideBall { norm: f64 },

    #[error("direction component {j0} is zero; coordinate decomposition undefined")]
    ZeroComponent { j0: usize },

    #[error("component sum of the direction is zero; sum decomposition undefined")]
    DegenerateDirection,

    #[error("unknown registry function `{name}`")]
    UnknownFunction { name: String },

    #[error("bad parameters for `{name}`: {reason}")]
    BadParams { name: String, reason: String },

    #[error("eta = {eta} outside [0, beta] = [0, {beta}]")]
    EtaOutOfRange { eta: f64, beta: f64 },

    #[error("scaling factor theta is zero")]
    ZeroTheta,

    #[error("combination precondition fails at |z| = {norm}: L(z)(1-|z|) = {lhs} <= {rhs}")]
    PreconditionViolated { norm: f64, lhs: f64, rhs: f64 },

    #[error("sampled minimum of the base weight is not positive ({value})")]
    NonPositiveL { value: f64 },

    #[error("quadrature circle of radius {radius} escapes the slice domain (clearance {clearance})")]
    CircleEscapesDomain { radius: f64, clearance: f64 },

    #[error("derivative order {order} exceeds the configured maximum {max_order}")]
    OrderTooHigh { order: usize, max_order: usize },

    #[error("invalid radii pair (r1, r2) = ({r1}, {r2}) for {context}")]
    BadRadii { r1: f64, r2: f64, context: &'static str },

    #[error("invalid lambda/eta inputs: lambda1 = {lambda1}, lambda2 = {lambda2}, eta = {eta}")]
    BadLambdas { lambda1: f64, lambda2: f64, eta: f64 },

    #[error("a zero of the slice function lies on (or numerically on) the integration circle")]
    ZeroOnCircle,

    #[error("argument-principle quadrature is {value} away from the nearest integer (limit 0.25)")]
    NonIntegerResidue { value: f64 },

    #[error("zero search exceeded its subdivision budget ({detail})")]
    BudgetExceeded { detail: String },

    #[error("every scanned circle is degenerate; the slice function vanishes identically")]
    AllCirclesDegenerate,

    #[error("no grid point survives the exceptional-set exclusion at radius beta")]
    EmptyComplement,

    #[error("slice function is not normalized at the base point (|F(z0)| - 1 deviates by {deviation})")]
    NotNormalized { deviation: f64 },

    #[error("growth integrand is not finite at r = {r}")]
    NonFiniteWeight { r: f64 },

    #[error("report has no plottable series named `{name}`")]
    MissingSeries { name: String },

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
