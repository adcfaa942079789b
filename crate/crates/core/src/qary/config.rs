use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{is_prime, largest_prime_at_most};
use crate::rational::{self, int, rat, Rational};

/// Q-ary multilevel lifting of the `(N nc, N nd)` deterministic channel.
///
/// Each transmit signal has `L = N nd` base-`Q` digits drawn from a small
/// alphabet so that the sum of two digits never carries. Digits are stored
/// most significant first: index `r` carries power `Q^(L-1-r)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QaryConfig {
    pub q: u64,
    pub n: usize,
    pub nc: usize,
    pub nd: usize,
    #[serde(serialize_with = "rational::serialize_json")]
    pub epsilon: Rational,
    /// Digits are shifted from `{0..p-1}` to `{1..p}`.
    pub nonzero_digits: bool,
    pub prime: u32,
}

impl QaryConfig {
    pub fn new(q: u64, n: usize, nc: usize, nd: usize) -> Result<Self> {
        Self::with_epsilon(q, n, nc, nd, Rational::zero())
    }

    pub fn with_epsilon(q: u64, n: usize, nc: usize, nd: usize, epsilon: Rational) -> Result<Self> {
        if q < 13 {
            return Err(Error::OutOfRange(format!("Q must be at least 13, got {q}")));
        }
        if n == 0 || nd == 0 {
            return Err(Error::OutOfRange("N and nd must be positive".into()));
        }
        if nc > nd {
            return Err(Error::OutOfRange(format!("lifting needs nc <= nd, got nc={nc}, nd={nd}")));
        }
        if epsilon < Rational::zero() || epsilon >= int(1) {
            return Err(Error::OutOfRange(format!("epsilon must lie in [0, 1), got {epsilon}")));
        }
        let limit = u32::try_from((q - 1) / 4).map_err(|_| Error::OutOfRange("Q too large".into()))?;
        let prime =
            largest_prime_at_most(limit).ok_or_else(|| Error::OutOfRange(format!("no prime at most {limit}")))?;
        let cfg = QaryConfig { q, n, nc, nd, epsilon, nonzero_digits: false, prime };
        cfg.pow_q(cfg.levels())?;
        Ok(cfg)
    }

    /// Uses a smaller digit field; `p` must be prime and at most `(Q-1)/4`.
    pub fn with_prime(mut self, p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if u64::from(p) > (self.q - 1) / 4 {
            return Err(Error::OutOfRange(format!("p={p} exceeds (Q-1)/4 for Q={}", self.q)));
        }
        self.prime = p;
        Ok(self)
    }

    pub fn nonzero(mut self, on: bool) -> Self {
        self.nonzero_digits = on;
        self
    }

    /// `L = N nd` digits per signal.
    pub fn levels(&self) -> usize {
        self.n * self.nd
    }

    /// Cross-link digit offset `N (nd - nc)`.
    pub fn shift(&self) -> usize {
        self.n * (self.nd - self.nc)
    }

    /// Inclusive digit range.
    pub fn alphabet(&self) -> (u64, u64) {
        let p = u64::from(self.prime);
        if self.nonzero_digits {
            (1, p)
        } else {
            (0, p - 1)
        }
    }

    pub fn digit_offset(&self) -> u64 {
        self.alphabet().0
    }

    /// Every pair of alphabet digits sums to less than `Q`.
    pub fn no_carry(&self) -> bool {
        let (lo, hi) = self.alphabet();
        (lo..=hi).all(|a| (lo..=hi).all(|b| a + b < self.q))
    }

    /// `log_Q rho = 2 N nd / (1 - epsilon)`.
    pub fn log_q_rho(&self) -> Rational {
        int(2 * self.levels() as i64) / (int(1) - self.epsilon)
    }

    pub fn rho(&self) -> f64 {
        (self.q as f64).powf(rational::to_f64(&self.log_q_rho()))
    }

    /// `alpha = (nc + epsilon (nd - nc)) / nd`.
    pub fn alpha(&self) -> Rational {
        (int(self.nc as i64) + self.epsilon * int((self.nd - self.nc) as i64)) / int(self.nd as i64)
    }

    pub(crate) fn pow_q(&self, k: usize) -> Result<u128> {
        u128::from(self.q)
            .checked_pow(k as u32)
            .ok_or_else(|| Error::OutOfRange(format!("Q^{k} does not fit in 128 bits")))
    }

    /// `log_Q p`: Q-ary digits carried per field symbol.
    pub fn log_q_prime(&self) -> f64 {
        f64::from(self.prime).ln() / (self.q as f64).ln()
    }

    /// The two alphabet-size constants `floor((Q-1)/4 - 1)` and `floor((Q-1)/4) - 2`.
    pub fn alphabet_constant_readings(&self) -> (i64, i64) {
        let quarter = rat(self.q as i64 - 1, 4);
        ((quarter - int(1)).floor().to_integer(), quarter.floor().to_integer() - 2)
    }
}
