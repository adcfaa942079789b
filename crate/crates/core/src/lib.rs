//! Capacity, GDOF and interference-alignment tooling for the two-user X channel.
//!
//! * [`linalg`]: exact GF(2) / GF(p) matrices and the shift-matrix family.
//! * [`det`]: the linear deterministic X channel, its sum capacity and outer bounds.
//! * [`codec`]: constructive alignment schemes, rank certificates and zero-error round trips.
//! * [`gauss`]: Gaussian GDOF, outer bounds and noisy-interference verdicts.
//! * [`qary`]: Q-ary multilevel lifting of deterministic schemes with Monte Carlo simulation.

pub mod codec;
pub mod det;
pub mod error;
pub mod gauss;
pub mod linalg;
pub mod qary;
pub mod rational;

pub use error::{Error, Result};
