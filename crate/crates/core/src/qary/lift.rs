use super::config::QaryConfig;
use super::modem::{modulate_int, receive, DigitVector};
use crate::codec::{LinearScheme, MessageTuple, RoundTrip};
use crate::det::{DetParams, SymDetParams};
use crate::error::{Error, Result};
use crate::linalg::{BitMatrix, FieldMatrix};

/// A deterministic scheme for the `(N nc, N nd)` channel over GF(p),
/// emitted as Q-ary digits.
#[derive(Debug, Clone)]
pub struct LiftedScheme {
    cfg: QaryConfig,
    roundtrip: RoundTrip,
}

/// Outcome of one noiseless lifted transmission.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedRun {
    pub decoded: MessageTuple,
    /// Receiver symbols after offset removal and reduction mod p.
    pub received: (Vec<u32>, Vec<u32>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct NoiselessReport {
    pub tuples: u64,
    pub decode_errors: u64,
    /// Tuples whose reduced digits differ from the deterministic channel output.
    pub digit_mismatches: u64,
}

impl NoiselessReport {
    pub fn passed(&self) -> bool {
        self.decode_errors == 0 && self.digit_mismatches == 0
    }
}

/// The deterministic channel the lifting emulates.
pub fn lifted_channel(cfg: &QaryConfig) -> DetParams {
    SymDetParams::new(cfg.n * cfg.nc, cfg.n * cfg.nd).into()
}

/// Lifts a GF(2) scheme by embedding its precoders into GF(p).
pub fn lift_scheme(cfg: &QaryConfig, s: &LinearScheme<BitMatrix>) -> Result<LiftedScheme> {
    if s.modulus() == cfg.prime {
        return lift_scheme_field(cfg, s);
    }
    lift_scheme_field(cfg, &s.embed(cfg.prime)?)
}

/// Lifts a scheme that is already defined over the digit field.
pub fn lift_scheme_field<M: FieldMatrix>(cfg: &QaryConfig, s: &LinearScheme<M>) -> Result<LiftedScheme> {
    if s.modulus() != cfg.prime {
        return Err(Error::FieldMismatch(s.modulus()));
    }
    let channel = lifted_channel(cfg);
    let roundtrip = RoundTrip::new(&channel, s)?;
    Ok(LiftedScheme { cfg: cfg.clone(), roundtrip })
}

impl LiftedScheme {
    pub fn config(&self) -> &QaryConfig {
        &self.cfg
    }

    pub fn roundtrip(&self) -> &RoundTrip {
        &self.roundtrip
    }

    pub fn extension(&self) -> usize {
        self.roundtrip.extension()
    }

    /// Field symbols per message.
    pub fn bits(&self) -> [usize; 4] {
        self.roundtrip.bits()
    }

    /// Sum rate in Q-ary digits per channel use: field symbols per use times `log_Q p`.
    pub fn sum_rate(&self) -> f64 {
        let symbols = self.roundtrip.total_bits() as f64 / self.extension() as f64;
        symbols * self.cfg.log_q_prime()
    }

    /// Sum rate normalised by `log_Q sqrt(rho) = N nd`.
    pub fn gdof_estimate(&self) -> f64 {
        self.sum_rate() / self.cfg.levels() as f64
    }

    /// Per-use digit vectors of both transmitters.
    pub fn encode_digits(&self, msgs: &MessageTuple) -> Result<[Vec<DigitVector>; 2]> {
        let (x1, x2) = self.roundtrip.encode(msgs)?;
        let off = self.cfg.digit_offset();
        let l = self.cfg.levels();
        let split = |x: Vec<u32>| -> Vec<DigitVector> {
            x.chunks(l).map(|c| c.iter().map(|&v| u64::from(v) + off).collect()).collect()
        };
        Ok([split(x1), split(x2)])
    }

    /// Integer digit sums a receiver should see without noise.
    pub fn expected_digits(&self, own: &[u64], cross: &[u64]) -> DigitVector {
        let s = self.cfg.shift();
        (0..own.len()).map(|r| own[r] + if r >= s { cross[r - s] } else { 0 }).collect()
    }

    /// Strips digit offsets and reduces the integer sums mod p.
    pub fn reduce(&self, digits: &[u64]) -> Vec<u32> {
        let s = self.cfg.shift();
        let off = self.cfg.digit_offset() as i128;
        let p = i128::from(self.cfg.prime);
        digits
            .iter()
            .enumerate()
            .map(|(r, &d)| {
                let offsets = if r >= s { 2 * off } else { off };
                (d as i128 - offsets).rem_euclid(p) as u32
            })
            .collect()
    }

    /// Sends one tuple through the noiseless real channel and decodes it.
    pub fn run_noiseless(&self, msgs: &MessageTuple) -> Result<LiftedRun> {
        let [d1, d2] = self.encode_digits(msgs)?;
        let (mut y1, mut y2) = (Vec::new(), Vec::new());
        for (a, b) in d1.iter().zip(&d2) {
            let (v1, v2) = (modulate_int(&self.cfg, a)?, modulate_int(&self.cfg, b)?);
            y1.extend(self.reduce(&receive(&self.cfg, v1, v2, 0.0)?));
            y2.extend(self.reduce(&receive(&self.cfg, v2, v1, 0.0)?));
        }
        let decoded = self.roundtrip.decode(&y1, &y2);
        Ok(LiftedRun { decoded, received: (y1, y2) })
    }

    /// Compares one noiseless lifted run with the deterministic roundtrip.
    pub fn matches_deterministic(&self, msgs: &MessageTuple) -> Result<(bool, bool)> {
        let lifted = self.run_noiseless(msgs)?;
        let (x1, x2) = self.roundtrip.encode(msgs)?;
        let det = self.roundtrip.transmit(&x1, &x2)?;
        let det_decoded = self.roundtrip.decode(&det.0, &det.1);
        Ok((lifted.decoded == *msgs && det_decoded == lifted.decoded, lifted.received == det))
    }

    /// Runs every message tuple through the noiseless lifting.
    pub fn exhaustive_noiseless(&self) -> Result<NoiselessReport> {
        use rayon::prelude::*;
        let total = self
            .roundtrip
            .tuple_count()
            .ok_or_else(|| Error::OutOfRange("too many message tuples for an exhaustive run".into()))?;
        let (decode_errors, digit_mismatches) = (0..total)
            .into_par_iter()
            .map(|i| {
                let (decoded_ok, digits_ok) = self.matches_deterministic(&self.roundtrip.tuple_from_index(i))?;
                Ok((u64::from(!decoded_ok), u64::from(!digits_ok)))
            })
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
        Ok(NoiselessReport { tuples: total, decode_errors, digit_mismatches })
    }
}

/// Builds the certified scheme for the lifted channel and lifts it.
pub fn lift_default(cfg: &QaryConfig) -> Result<LiftedScheme> {
    let s = crate::codec::build_scheme(cfg.n * cfg.nc, cfg.n * cfg.nd)?;
    lift_scheme(cfg, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::build_scheme;

    fn cfg(nc: usize, nd: usize) -> QaryConfig {
        QaryConfig::new(17, 1, nc, nd).unwrap()
    }

    #[test]
    fn exhaustive_noiseless_two_three() {
        let l = lift_default(&cfg(2, 3)).unwrap();
        assert_eq!(l.bits().iter().sum::<usize>(), 4);
        let r = l.exhaustive_noiseless().unwrap();
        assert_eq!(r, NoiselessReport { tuples: 81, decode_errors: 0, digit_mismatches: 0 });
    }

    #[test]
    fn exhaustive_noiseless_nonzero_digits() {
        for (nc, nd) in [(2, 3), (1, 2), (3, 4)] {
            let l = lift_default(&cfg(nc, nd).nonzero(true)).unwrap();
            assert!(l.exhaustive_noiseless().unwrap().passed(), "({nc},{nd})");
        }
    }

    #[test]
    fn rate_in_q_ary_digits() {
        let l = lift_default(&cfg(2, 3)).unwrap();
        let expected = 4.0 * 3f64.ln() / 17f64.ln();
        assert!((l.sum_rate() - expected).abs() < 1e-12);
        let n2 = lift_default(&QaryConfig::new(17, 2, 2, 3).unwrap()).unwrap();
        assert!((n2.sum_rate() - 2.0 * expected).abs() < 1e-12);
    }

    #[test]
    fn extended_scheme_lifts() {
        let c = QaryConfig::new(53, 1, 10, 13).unwrap();
        let l = lift_default(&c).unwrap();
        assert_eq!(l.extension(), 3);
        let msgs = l.roundtrip().tuple_from_index(123_456_789);
        let (ok, digits) = l.matches_deterministic(&msgs).unwrap();
        assert!(ok && digits);
    }

    #[test]
    fn rejects_wrong_channel_or_field() {
        let s = build_scheme(1, 3).unwrap();
        assert!(lift_scheme(&cfg(2, 3), &s).is_err());
        let s23 = build_scheme(2, 3).unwrap();
        let over5 = s23.embed(5).unwrap();
        assert_eq!(lift_scheme_field(&cfg(2, 3), &over5).unwrap_err(), Error::FieldMismatch(5));
    }
}
