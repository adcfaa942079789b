use serde::Serialize;

use crate::det::{DetParams, Message, RateTuple};
use crate::error::{Error, Result};
use crate::linalg::{embed, BitMatrix, FieldMatrix, PrimeFieldMatrix};
use crate::rational::{rat, Rational, RationalJson};

/// How a scheme was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Empty,
    SingleUser,
    InterferenceChannel,
    LayeredAlignment,
    BoxAlignment,
    ExtendedBoxAlignment,
}

/// Linear scheme over `extension` uses of a deterministic channel.
///
/// Transmitter `j` sends `X_j = sum_i P_ij m_ij`, where `P_ij` is the
/// `(extension * q) x k_ij` precoder of `W_ij` and `m_ij` its `k_ij` symbols.
/// Rows are grouped per channel use, each group ordered top level first.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearScheme<M> {
    pub channel: DetParams,
    pub extension: usize,
    pub construction: Construction,
    pub receivers_swapped: bool,
    precoders: [M; 4],
}

impl<M: FieldMatrix> LinearScheme<M> {
    pub fn new(channel: DetParams, extension: usize, construction: Construction, precoders: [M; 4]) -> Result<Self> {
        if extension == 0 {
            return Err(Error::EmptyDimension);
        }
        let rows = extension * channel.q();
        let modulus = precoders[0].modulus();
        for (m, p) in Message::ALL.iter().zip(&precoders) {
            if p.rows() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "precoder of {m} has {} rows, expected {rows}",
                    p.rows()
                )));
            }
            if p.modulus() != modulus {
                return Err(Error::FieldMismatch(p.modulus()));
            }
        }
        Ok(LinearScheme { channel, extension, construction, receivers_swapped: false, precoders })
    }

    pub fn q(&self) -> usize {
        self.channel.q()
    }

    pub fn modulus(&self) -> u32 {
        self.precoders[0].modulus()
    }

    pub fn precoder(&self, m: Message) -> &M {
        &self.precoders[m.index()]
    }

    pub fn with_precoder(&self, m: Message, p: M) -> Result<Self> {
        let mut precoders = self.precoders.clone();
        precoders[m.index()] = p;
        let mut s = LinearScheme::new(self.channel, self.extension, self.construction, precoders)?;
        s.receivers_swapped = self.receivers_swapped;
        Ok(s)
    }

    pub fn bits(&self, m: Message) -> usize {
        self.precoder(m).cols()
    }

    pub fn total_bits(&self) -> usize {
        Message::ALL.iter().map(|&m| self.bits(m)).sum()
    }

    pub fn rates(&self) -> RateTuple {
        let r = |m| rat(self.bits(m) as i64, self.extension as i64);
        RateTuple { r11: r(Message::W11), r12: r(Message::W12), r21: r(Message::W21), r22: r(Message::W22) }
    }

    pub fn sum_rate(&self) -> Rational {
        self.rates().sum()
    }

    /// Receiver `i`'s view of `W`'s precoder: `diag(S^{q - n_ij})` applied per use,
    /// with `j` the transmitter of `W`.
    pub fn effective(&self, receiver: usize, m: Message) -> M {
        let q = self.q();
        let shift = q - self.channel.levels(receiver, m.transmitter());
        self.precoder(m).block_shift_rows(q, shift)
    }

    /// Same transmit signals with the receivers relabelled; messages move
    /// `W11 <-> W21` and `W12 <-> W22`.
    pub fn swap_receivers(self) -> Self {
        let c = self.channel;
        let channel = DetParams::new(c.n21, c.n22, c.n11, c.n12);
        let [p11, p12, p21, p22] = self.precoders;
        LinearScheme {
            channel,
            extension: self.extension,
            construction: self.construction,
            receivers_swapped: !self.receivers_swapped,
            precoders: [p21, p22, p11, p12],
        }
    }
}

impl LinearScheme<BitMatrix> {
    /// Reinterprets the 0/1 precoders over GF(`modulus`).
    pub fn embed(&self, modulus: u32) -> Result<LinearScheme<PrimeFieldMatrix>> {
        let mut out = Vec::with_capacity(4);
        for p in &self.precoders {
            out.push(embed(p, modulus)?);
        }
        let precoders: [PrimeFieldMatrix; 4] = out.try_into().expect("four precoders");
        let mut s = LinearScheme::new(self.channel, self.extension, self.construction, precoders)?;
        s.receivers_swapped = self.receivers_swapped;
        Ok(s)
    }
}

#[derive(Serialize)]
struct MessageJson<'a, M> {
    message: Message,
    bits: usize,
    rate: RationalJson,
    precoder: &'a M,
}

impl<M: FieldMatrix + Serialize> Serialize for LinearScheme<M> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a, M> {
            channel: DetParams,
            q: usize,
            extension: usize,
            modulus: u32,
            construction: Construction,
            receivers_swapped: bool,
            rates: RateTuple,
            messages: Vec<MessageJson<'a, M>>,
        }
        let rates = self.rates();
        Json {
            channel: self.channel,
            q: self.q(),
            extension: self.extension,
            modulus: self.modulus(),
            construction: self.construction,
            receivers_swapped: self.receivers_swapped,
            rates,
            messages: Message::ALL
                .iter()
                .map(|&m| MessageJson {
                    message: m,
                    bits: self.bits(m),
                    rate: rates.get(m).into(),
                    precoder: self.precoder(m),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}
