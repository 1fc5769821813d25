//! Linear inviscid damping for the β-plane Couette flow.
//!
//! The crate evaluates the angular phase of the linearised evolution, its
//! stationary points and multiscale expansions, the region-wise bounds used
//! in the decay estimates, and the oscillatory integrals that give the
//! stream function and velocity.

pub mod error;
pub mod expansions;
pub mod figures;
pub mod filon;
pub mod fit;
pub mod integrator;
mod jet;
pub mod phase;
pub mod quad;
pub mod regions;
pub mod roots;
pub mod stationary;

pub use error::{Error, Result};
pub use phase::TimeParam;
