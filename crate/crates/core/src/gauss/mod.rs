//! Gaussian X channel: GDOF, sum-rate outer bounds and noisy-interference verdicts.
//!
//! Receiver `i` observes `Y_i = H_i1 X_1 + H_i2 X_2 + Z_i` with unit-variance
//! noise and powers `P_1, P_2`. All rates are in bits per channel use.

mod bounds;
mod gdof;
mod noisy;

pub use bounds::{
    gdof_numeric, identical_receiver_bound, known_outer_bounds, side_info_outer_bounds, sum_rate_outer_bounds,
    GaussBound,
};
pub use gdof::{gdof, gdof_branch, gdof_ic, gdof_ic_best, gdof_outer, gdof_real, ic_per_user, GdofBranch, RealGdof};
pub use noisy::{noisy_verdict, NoisyRegime, NoisyVerdict, SymmetricNoisyCheck};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussParams {
    pub h11: f64,
    pub h12: f64,
    pub h21: f64,
    pub h22: f64,
    pub p1: f64,
    pub p2: f64,
}

impl GaussParams {
    pub fn new(h11: f64, h12: f64, h21: f64, h22: f64, p1: f64, p2: f64) -> Result<Self> {
        let g = GaussParams { h11, h12, h21, h22, p1, p2 };
        if [h11, h12, h21, h22, p1, p2].iter().any(|v| !v.is_finite()) {
            return Err(Error::OutOfRange("channel parameters must be finite".into()));
        }
        if p1 < 0.0 || p2 < 0.0 {
            return Err(Error::OutOfRange("powers must be nonnegative".into()));
        }
        Ok(g)
    }

    /// `H11 = H22 = 1`, `H12 = H21 = h`, `P1 = P2 = P`.
    pub fn symmetric_unit(h: f64, p: f64) -> Result<Self> {
        Self::new(1.0, h, h, 1.0, p, p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymGaussParams {
    pub rho: f64,
    pub alpha: f64,
}

impl SymGaussParams {
    pub fn new(rho: f64, alpha: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 1.0) {
            return Err(Error::OutOfRange(format!("rho must exceed 1, got {rho}")));
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::OutOfRange(format!("alpha must be nonnegative, got {alpha}")));
        }
        Ok(SymGaussParams { rho, alpha })
    }

    /// `H11 = H22 = sqrt(rho)`, `H12 = H21 = sqrt(rho^alpha)`, unit powers.
    pub fn to_gauss(&self) -> GaussParams {
        let d = self.rho.sqrt();
        let c = self.rho.powf(self.alpha / 2.0);
        GaussParams { h11: d, h12: c, h21: c, h22: d, p1: 1.0, p2: 1.0 }
    }
}

/// `1/2 log2(1 + x)`
pub(crate) fn half_log(x: f64) -> f64 {
    0.5 * x.ln_1p() / std::f64::consts::LN_2
}
