use super::config::QaryConfig;
use crate::error::{Error, Result};

/// `N nd` base-`Q` digits, most significant first.
pub type DigitVector = Vec<u64>;

/// Integer transmit value `X_bar = sum_k x_k Q^k`.
pub fn modulate_int(cfg: &QaryConfig, digits: &[u64]) -> Result<u128> {
    let l = cfg.levels();
    if digits.len() != l {
        return Err(Error::DimensionMismatch(format!("{} digits, expected {l}", digits.len())));
    }
    let (lo, hi) = cfg.alphabet();
    digits.iter().try_fold(0u128, |acc, &d| {
        if d != 0 && !(lo..=hi).contains(&d) {
            return Err(Error::DigitOutOfAlphabet { digit: d, lo, hi });
        }
        Ok(acc * u128::from(cfg.q) + u128::from(d))
    })
}

/// Channel input `X = X_bar / sqrt(rho)` with `sqrt(rho) = Q^(N nd)`.
pub fn modulate(cfg: &QaryConfig, digits: &[u64]) -> Result<f64> {
    Ok(modulate_int(cfg, digits)? as f64 / cfg.pow_q(cfg.levels())? as f64)
}

/// Base-`Q` expansion of `value mod Q^L`, most significant digit first.
pub fn digits_of(cfg: &QaryConfig, value: u128) -> DigitVector {
    let l = cfg.levels();
    let q = u128::from(cfg.q);
    let mut v = value;
    let mut out = vec![0u64; l];
    for slot in out.iter_mut().rev() {
        *slot = (v % q) as u64;
        v /= q;
    }
    out
}

/// Digits of `floor(|integer + frac|) mod Q^L` for a real value split into an
/// exact integer part and a small real remainder.
pub fn demodulate_split(cfg: &QaryConfig, integer: i128, frac: f64) -> Result<DigitVector> {
    let fl = frac.floor();
    let t = integer + fl as i128;
    let r = frac - fl;
    let magnitude = if t >= 0 {
        t
    } else if r > 0.0 {
        -t - 1
    } else {
        -t
    };
    let modulus = cfg.pow_q(cfg.levels())? as i128;
    Ok(digits_of(cfg, magnitude.rem_euclid(modulus) as u128))
}

/// Digits seen by a receiver whose own signal is `own` and whose cross
/// signal `cross` arrives `Q^shift` weaker, plus additive noise.
pub fn receive(cfg: &QaryConfig, own: u128, cross: u128, noise: f64) -> Result<DigitVector> {
    let qs = cfg.pow_q(cfg.shift())?;
    let frac = (cross % qs) as f64 / qs as f64;
    demodulate_split(cfg, (own + cross / qs) as i128, frac + noise)
}

/// Received sample `y` in transmit units (divided by `sqrt(rho)`) to the
/// digits of `floor(|y sqrt(rho)|) mod Q^L`.
pub fn demodulate(cfg: &QaryConfig, y: f64) -> Result<DigitVector> {
    let scaled = y * cfg.pow_q(cfg.levels())? as f64;
    if !scaled.is_finite() || scaled.abs() >= 1e30 {
        return Err(Error::OutOfRange(format!("received value {y} out of range")));
    }
    let integer = scaled.trunc();
    demodulate_split(cfg, integer as i128, scaled - integer)
}
