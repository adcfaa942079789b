use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::config::QaryConfig;
use super::lift::LiftedScheme;
use super::modem::{modulate_int, receive};
use crate::error::{Error, Result};

/// Trials per RNG stream; shard `i` uses stream `i` of the seeded ChaCha8 generator.
pub const SHARD_TRIALS: u64 = 4096;

const WILSON_Z: f64 = 1.96;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelStat {
    /// Power of `Q` carried by the digit; 0 is the least significant.
    pub level_k: usize,
    pub errors: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub wilson_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub config: QaryConfig,
    pub trials: u64,
    pub seed: u64,
    pub noise_scale: f64,
    /// Ordered by increasing `level_k`.
    pub levels: Vec<LevelStat>,
    /// Message tuples decoded incorrectly at either receiver.
    pub message_errors: u64,
    /// Mean `X^2` per transmitter.
    pub power: [f64; 2],
}

/// Upper end of the 95% Wilson score interval.
pub fn wilson_upper(errors: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 1.0;
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let centre = p + z2 / (2.0 * n);
    let spread = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre + spread) / (1.0 + z2 / n)).min(1.0)
}

impl SimReport {
    /// Each estimate exceeds the one below it by at most `sigmas` binomial
    /// standard deviations.
    pub fn monotone_within(&self, sigmas: f64) -> bool {
        self.levels.windows(2).all(|w| {
            let (lo, hi) = (&w[0], &w[1]);
            let var = |s: &LevelStat| s.p_hat * (1.0 - s.p_hat) / s.trials.max(1) as f64;
            let slack = sigmas * (var(lo) + var(hi)).sqrt();
            hi.p_hat <= lo.p_hat + slack.max(1.0 / hi.trials.max(1) as f64)
        })
    }

    pub fn max_power(&self) -> f64 {
        self.power[0].max(self.power[1])
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for l in &self.levels {
            w.serialize(l).map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    errors: Vec<u64>,
    message_errors: u64,
    power: [f64; 2],
    uses: u64,
}

fn run_shard(l: &LiftedScheme, seed: u64, shard: u64, trials: u64, noise_scale: f64) -> Result<Tally> {
    let cfg = l.config();
    let levels = cfg.levels();
    let scale = cfg.pow_q(levels)? as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    let mut t = Tally { errors: vec![0; levels], ..Tally::default() };
    for _ in 0..trials {
        let msgs = l.roundtrip().random_tuple(&mut rng);
        let [d1, d2] = l.encode_digits(&msgs)?;
        let (mut y1, mut y2) = (Vec::new(), Vec::new());
        for (a, b) in d1.iter().zip(&d2) {
            let (v1, v2) = (modulate_int(cfg, a)?, modulate_int(cfg, b)?);
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            let r1 = receive(cfg, v1, v2, noise_scale * z1)?;
            let r2 = receive(cfg, v2, v1, noise_scale * z2)?;
            let (e1, e2) = (l.expected_digits(a, b), l.expected_digits(b, a));
            for r in 0..levels {
                if r1[r] != e1[r] || r2[r] != e2[r] {
                    t.errors[levels - 1 - r] += 1;
                }
            }
            t.power[0] += (v1 as f64 / scale).powi(2);
            t.power[1] += (v2 as f64 / scale).powi(2);
            t.uses += 1;
            y1.extend(l.reduce(&r1));
            y2.extend(l.reduce(&r2));
        }
        if l.roundtrip().decode(&y1, &y2) != msgs {
            t.message_errors += 1;
        }
    }
    Ok(t)
}

/// Monte Carlo estimate of the per-level digit error rates.
///
/// Noise is `noise_scale` times a standard normal per receiver and use.
/// The report depends only on the seed, never on the thread count.
pub fn run_monte_carlo(l: &LiftedScheme, trials: u64, seed: u64, noise_scale: f64) -> Result<SimReport> {
    let cfg = l.config();
    if trials == 0 {
        return Err(Error::OutOfRange("trials must be at least 1".into()));
    }
    if !cfg.epsilon.numer().eq(&0) {
        return Err(Error::OutOfRange("simulation supports epsilon = 0 only".into()));
    }
    if !(noise_scale.is_finite() && noise_scale >= 0.0) {
        return Err(Error::OutOfRange(format!("noise scale {noise_scale}")));
    }
    let shards = trials.div_ceil(SHARD_TRIALS);
    let tallies = (0..shards)
        .into_par_iter()
        .map(|i| {
            let n = SHARD_TRIALS.min(trials - i * SHARD_TRIALS);
            run_shard(l, seed, i, n, noise_scale)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = Tally { errors: vec![0; cfg.levels()], ..Tally::default() };
    for t in tallies {
        for (a, b) in total.errors.iter_mut().zip(&t.errors) {
            *a += b;
        }
        total.message_errors += t.message_errors;
        total.power[0] += t.power[0];
        total.power[1] += t.power[1];
        total.uses += t.uses;
    }
    let uses = total.uses;
    let levels = total
        .errors
        .iter()
        .enumerate()
        .map(|(k, &e)| LevelStat {
            level_k: k,
            errors: e,
            trials: uses,
            p_hat: e as f64 / uses as f64,
            wilson_upper: wilson_upper(e, uses),
        })
        .collect();
    Ok(SimReport {
        config: cfg.clone(),
        trials,
        seed,
        noise_scale,
        levels,
        message_errors: total.message_errors,
        power: total.power.map(|p| p / uses as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qary::{lift_default, lift_scheme};

    #[test]
    fn wilson_reference_values() {
        // closed form at p_hat = 0: z^2 / (n + z^2)
        let z2 = 1.96f64 * 1.96;
        assert!((wilson_upper(0, 100) - z2 / (100.0 + z2)).abs() < 1e-15);
        assert!((wilson_upper(50, 100) - 0.596_170_2).abs() < 1e-6);
        assert_eq!(wilson_upper(10, 10), 1.0);
    }

    #[test]
    fn noiseless_has_no_errors() {
        let l = lift_default(&QaryConfig::new(17, 1, 2, 3).unwrap()).unwrap();
        let r = run_monte_carlo(&l, 5000, 3, 0.0).unwrap();
        assert!(r.levels.iter().all(|s| s.errors == 0));
        assert_eq!(r.message_errors, 0);
        assert!(r.max_power() <= 1.0);
    }

    #[test]
    fn seed_determines_report() {
        let l = lift_default(&QaryConfig::new(100, 1, 3, 4).unwrap()).unwrap();
        let a = run_monte_carlo(&l, 9000, 11, 1.0).unwrap();
        let b = run_monte_carlo(&l, 9000, 11, 1.0).unwrap();
        assert_eq!(a, b);
        let c = run_monte_carlo(&l, 9000, 12, 1.0).unwrap();
        assert_ne!(a.levels[0].errors, c.levels[0].errors);
    }

    #[test]
    fn noisy_levels_decay() {
        let l = lift_default(&QaryConfig::new(100, 1, 3, 4).unwrap().nonzero(true)).unwrap();
        let r = run_monte_carlo(&l, 20_000, 1, 1.0).unwrap();
        assert!(r.levels[0].p_hat > 0.1);
        assert!(r.levels[2..].iter().all(|s| s.errors == 0));
        assert!(r.monotone_within(3.0));
        let csv = r.to_csv().unwrap();
        assert!(csv.starts_with("level_k,errors,trials,p_hat,wilson_upper\n"));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn zero_digits_let_borrows_reach_higher_levels() {
        let l = lift_default(&QaryConfig::new(100, 1, 3, 4).unwrap()).unwrap();
        let zero = run_monte_carlo(&l, 20_000, 1, 1.0).unwrap();
        let l = lift_default(&QaryConfig::new(100, 1, 3, 4).unwrap().nonzero(true)).unwrap();
        let nonzero = run_monte_carlo(&l, 20_000, 1, 1.0).unwrap();
        assert!(zero.levels[1].errors > nonzero.levels[1].errors);
    }

    #[test]
    fn binary_field_lifts_unchanged() {
        let cfg = QaryConfig::new(17, 1, 2, 3).unwrap().with_prime(2).unwrap();
        let s = crate::codec::build_scheme(2, 3).unwrap();
        let l = lift_scheme(&cfg, &s).unwrap();
        assert!(l.exhaustive_noiseless().unwrap().passed());
        assert_eq!(run_monte_carlo(&l, 100, 0, 0.0).unwrap().message_errors, 0);
    }

    #[test]
    fn rejects_zero_trials_and_epsilon() {
        let l = lift_default(&QaryConfig::new(17, 1, 2, 3).unwrap()).unwrap();
        assert!(run_monte_carlo(&l, 0, 0, 1.0).is_err());
        let eps = QaryConfig::with_epsilon(17, 1, 2, 3, crate::rational::rat(1, 10)).unwrap();
        assert!(lift_default(&eps).and_then(|l| run_monte_carlo(&l, 10, 0, 1.0)).is_err());
    }
}
