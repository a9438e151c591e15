//! dirindex-core: numerical toolkit for the L-index in direction of
//! analytic functions on the unit ball of C^n.
//!
//! The library slices a function F along complex lines z0 + t*b, recovers
//! directional derivatives by Cauchy-integral quadrature, estimates the
//! index from the defining normalized-derivative inequality, and
//! cross-validates the estimate through independent characterizations:
//! circle-modulus ratios, a Hayman-type bound, log-derivative and
//! zero-counting behavior outside exceptional discs, growth bounds along
//! rays, and a PDE coefficient criterion.

pub mod criteria;
pub mod dirderiv;
pub mod error;
pub mod funcs;
pub mod geometry;
pub mod growth;
pub mod index;
pub mod lfield;
pub mod numerics;
pub mod pde;
pub mod sampling;
pub mod zeros;

pub mod config;
pub mod report;
pub mod runner;

pub use error::{Error, Result};
