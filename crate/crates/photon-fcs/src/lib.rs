//! Exact photon counting statistics for a two-level emitter side-coupled to a
//! one-dimensional waveguide.
//!
//! A coherent pulse of mean photon number `nbar` drives the emitter; the
//! library computes the full joint distribution of transmitted and reflected
//! photon numbers, its generating function, moments and cumulants, and the
//! long-pulse (continuum) limit for arbitrary initial field states.

pub mod bessel;
pub mod coeffs;
pub mod continuum;
pub mod counting;
pub mod error;
pub mod jet;
pub mod kernel;
pub mod numeric;
pub mod params;
pub mod validation;

pub use coeffs::{Channel, CoeffTable, CoeffValue};
pub use continuum::{
    continuum_distribution, continuum_f, squeezed_distribution, InitialState, SqueezedComparison,
    StateVector,
};
pub use counting::{CountDistribution, JointDistribution, MomentReport, Truncation};
pub use error::{Error, Result};
pub use params::ScatterParams;
pub use validation::CheckResult;
