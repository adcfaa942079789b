use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::scheme::LinearScheme;
use super::validate::{desired_and_interfering, receiver_matrices, validate_linear_scheme};
use crate::det::{apply_channel_mod, DetParams, Message};
use crate::error::{Error, Result};
use crate::linalg::FieldMatrix;

/// Symbols of `W11, W12, W21, W22`, in `Message::index` order.
pub type MessageTuple = [Vec<u32>; 4];

/// Dense row-major matrix over GF(p), used on the hot encode/decode path.
#[derive(Debug, Clone)]
struct Dense {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Dense {
    fn from<M: FieldMatrix>(m: &M) -> Self {
        let data = (0..m.rows()).flat_map(|r| (0..m.cols()).map(move |c| m.get(r, c))).collect();
        Dense { rows: m.rows(), cols: m.cols(), data }
    }

    fn mul_add(&self, v: &[u32], out: &mut [u32], p: u32) {
        for (r, o) in out.iter_mut().enumerate().take(self.rows) {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let acc = row.iter().zip(v).fold(u64::from(*o), |acc, (&a, &x)| acc + u64::from(a) * u64::from(x));
            *o = (acc % u64::from(p)) as u32;
        }
    }
}

/// Encoder, channel and zero-forcing decoders for one validated scheme.
///
/// Receiver `i` recovers its messages as `D_i y_i` where `D_i` inverts the
/// desired columns and annihilates the interference.
#[derive(Debug, Clone)]
pub struct RoundTrip {
    channel: DetParams,
    q: usize,
    extension: usize,
    modulus: u32,
    bits: [usize; 4],
    precoders: [Dense; 4],
    decoders: [Dense; 2],
}

impl RoundTrip {
    pub fn new<M: FieldMatrix>(p: &DetParams, s: &LinearScheme<M>) -> Result<Self> {
        let cert = validate_linear_scheme(p, s)?;
        if !cert.valid {
            return Err(Error::InvalidScheme(cert.summary()));
        }
        let decoder = |receiver| -> Result<Dense> {
            let (des, int) = receiver_matrices(s, receiver)?;
            let mt = des.hconcat(&int)?.transpose();
            let d = des.cols();
            let mut rows = Vec::with_capacity(d * mt.cols());
            for t in 0..d {
                let mut rhs = vec![0u32; mt.rows()];
                rhs[t] = 1;
                let x = mt
                    .solve(&rhs)?
                    .ok_or_else(|| Error::InvalidScheme(format!("receiver {receiver} cannot isolate symbol {t}")))?;
                rows.extend(x);
            }
            Ok(Dense { rows: d, cols: mt.cols(), data: rows })
        };
        Ok(RoundTrip {
            channel: *p,
            q: s.q(),
            extension: s.extension,
            modulus: s.modulus(),
            bits: Message::ALL.map(|m| s.bits(m)),
            precoders: Message::ALL.map(|m| Dense::from(s.precoder(m))),
            decoders: [decoder(1)?, decoder(2)?],
        })
    }

    pub fn total_bits(&self) -> usize {
        self.bits.iter().sum()
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn channel(&self) -> &DetParams {
        &self.channel
    }

    /// Levels per channel use.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn extension(&self) -> usize {
        self.extension
    }

    pub fn bits(&self) -> [usize; 4] {
        self.bits
    }

    /// Transmit signals `(X_1, X_2)`, each `extension * q` symbols.
    pub fn encode(&self, msgs: &MessageTuple) -> Result<(Vec<u32>, Vec<u32>)> {
        let n = self.extension * self.q;
        let mut x = [vec![0u32; n], vec![0u32; n]];
        for m in Message::ALL {
            let sym = &msgs[m.index()];
            if sym.len() != self.bits[m.index()] {
                return Err(Error::DimensionMismatch(format!(
                    "{m} has {} symbols, expected {}",
                    sym.len(),
                    self.bits[m.index()]
                )));
            }
            if let Some(&bad) = sym.iter().find(|&&v| v >= self.modulus) {
                return Err(Error::EntryOutOfRange { value: bad, modulus: self.modulus });
            }
            self.precoders[m.index()].mul_add(sym, &mut x[m.transmitter() - 1], self.modulus);
        }
        let [x1, x2] = x;
        Ok((x1, x2))
    }

    /// Applies the deterministic channel independently to each use.
    pub fn transmit(&self, x1: &[u32], x2: &[u32]) -> Result<(Vec<u32>, Vec<u32>)> {
        let (mut y1, mut y2) = (Vec::new(), Vec::new());
        for b in 0..self.extension {
            let range = b * self.q..(b + 1) * self.q;
            let (a, c) = apply_channel_mod(&self.channel, &x1[range.clone()], &x2[range], self.modulus)?;
            y1.extend(a);
            y2.extend(c);
        }
        Ok((y1, y2))
    }

    pub fn decode(&self, y1: &[u32], y2: &[u32]) -> MessageTuple {
        let mut out: MessageTuple = Default::default();
        for (receiver, y) in [(1, y1), (2, y2)] {
            let d = &self.decoders[receiver - 1];
            let mut z = vec![0u32; d.rows];
            d.mul_add(y, &mut z, self.modulus);
            let (des, _) = desired_and_interfering(receiver);
            let split = self.bits[des[0].index()];
            out[des[0].index()] = z[..split].to_vec();
            out[des[1].index()] = z[split..].to_vec();
        }
        out
    }

    pub fn run(&self, msgs: &MessageTuple) -> Result<MessageTuple> {
        let (x1, x2) = self.encode(msgs)?;
        let (y1, y2) = self.transmit(&x1, &x2)?;
        Ok(self.decode(&y1, &y2))
    }

    /// The `index`-th message tuple in base-`p` counting order.
    pub fn tuple_from_index(&self, mut index: u64) -> MessageTuple {
        let p = u64::from(self.modulus);
        self.bits.map(|k| {
            (0..k)
                .map(|_| {
                    let d = (index % p) as u32;
                    index /= p;
                    d
                })
                .collect()
        })
    }

    pub fn random_tuple<R: Rng>(&self, rng: &mut R) -> MessageTuple {
        self.bits.map(|k| (0..k).map(|_| rng.random_range(0..self.modulus)).collect())
    }

    /// Number of message tuples (`p^total_bits`), if it fits in `u64`.
    pub fn tuple_count(&self) -> Option<u64> {
        u64::from(self.modulus).checked_pow(self.total_bits() as u32)
    }

    /// Runs every message tuple; returns `(tuples, decoding errors)`.
    pub fn exhaustive(&self) -> Result<(u64, u64)> {
        let total = self
            .tuple_count()
            .ok_or_else(|| Error::OutOfRange("too many message tuples for an exhaustive run".into()))?;
        let errors = (0..total)
            .into_par_iter()
            .map(|i| {
                let msgs = self.tuple_from_index(i);
                self.run(&msgs).map(|out| u64::from(out != msgs))
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        Ok((total, errors))
    }

    /// Runs `count` uniformly random tuples drawn from a seeded ChaCha8 stream.
    pub fn random(&self, count: u64, seed: u64) -> Result<(u64, u64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut errors = 0;
        for _ in 0..count {
            let msgs = self.random_tuple(&mut rng);
            if self.run(&msgs)? != msgs {
                errors += 1;
            }
        }
        Ok((count, errors))
    }
}

/// Encodes, passes through the channel and decodes one message tuple.
pub fn run_det_roundtrip<M: FieldMatrix>(
    p: &DetParams,
    s: &LinearScheme<M>,
    messages: &MessageTuple,
) -> Result<MessageTuple> {
    RoundTrip::new(p, s)?.run(messages)
}
