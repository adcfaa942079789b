//! The linear deterministic X channel.
//!
//! Receiver `i` observes `Y_i = S^{q-n_i1} X_1 + S^{q-n_i2} X_2`, and message
//! `W_ij` travels from transmitter `j` to receiver `i`. In the symmetric
//! channel the direct links carry `nd` levels (`n11 = n22 = nd`) and the cross
//! links carry `nc` levels (`n12 = n21 = nc`).

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, pos, rat, Rational, RationalJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DetParams {
    pub n11: usize,
    pub n12: usize,
    pub n21: usize,
    pub n22: usize,
}

impl DetParams {
    pub fn new(n11: usize, n12: usize, n21: usize, n22: usize) -> Self {
        DetParams { n11, n12, n21, n22 }
    }

    pub fn q(&self) -> usize {
        self.n11.max(self.n12).max(self.n21).max(self.n22)
    }

    /// Level count of the link from transmitter `tx` to receiver `rx` (both 1 or 2).
    pub fn levels(&self, rx: usize, tx: usize) -> usize {
        match (rx, tx) {
            (1, 1) => self.n11,
            (1, 2) => self.n12,
            (2, 1) => self.n21,
            (2, 2) => self.n22,
            _ => panic!("no link {rx}{tx} in a two-user channel"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymDetParams {
    pub nc: usize,
    pub nd: usize,
}

impl SymDetParams {
    pub fn new(nc: usize, nd: usize) -> Self {
        SymDetParams { nc, nd }
    }

    pub fn ratio(&self) -> Option<Rational> {
        (self.nd > 0).then(|| rat(self.nc as i64, self.nd as i64))
    }

    pub fn swapped(&self) -> Self {
        SymDetParams { nc: self.nd, nd: self.nc }
    }
}

impl From<SymDetParams> for DetParams {
    fn from(s: SymDetParams) -> Self {
        DetParams { n11: s.nd, n12: s.nc, n21: s.nc, n22: s.nd }
    }
}

/// One of the four X-channel messages; `W_ij` goes from transmitter `j` to receiver `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Message {
    W11,
    W12,
    W21,
    W22,
}

impl Message {
    pub const ALL: [Message; 4] = [Message::W11, Message::W12, Message::W21, Message::W22];

    pub fn receiver(self) -> usize {
        match self {
            Message::W11 | Message::W12 => 1,
            Message::W21 | Message::W22 => 2,
        }
    }

    pub fn transmitter(self) -> usize {
        match self {
            Message::W11 | Message::W21 => 1,
            Message::W12 | Message::W22 => 2,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Relabelling that exchanges the two receivers.
    pub fn swap_receivers(self) -> Message {
        match self {
            Message::W11 => Message::W21,
            Message::W21 => Message::W11,
            Message::W12 => Message::W22,
            Message::W22 => Message::W12,
        }
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Message::W11 => "W11",
            Message::W12 => "W12",
            Message::W21 => "W21",
            Message::W22 => "W22",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RateTuple {
    pub r11: Rational,
    pub r12: Rational,
    pub r21: Rational,
    pub r22: Rational,
}

impl RateTuple {
    pub fn get(&self, m: Message) -> Rational {
        match m {
            Message::W11 => self.r11,
            Message::W12 => self.r12,
            Message::W21 => self.r21,
            Message::W22 => self.r22,
        }
    }

    pub fn sum(&self) -> Rational {
        self.r11 + self.r12 + self.r21 + self.r22
    }

    pub fn sum_of(&self, subset: &[Message]) -> Rational {
        subset.iter().map(|&m| self.get(m)).sum()
    }
}

impl Serialize for RateTuple {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json {
            r11: RationalJson,
            r12: RationalJson,
            r21: RationalJson,
            r22: RationalJson,
            sum: RationalJson,
        }
        Json {
            r11: self.r11.into(),
            r12: self.r12.into(),
            r21: self.r21.into(),
            r22: self.r22.into(),
            sum: self.sum().into(),
        }
        .serialize(serializer)
    }
}

/// `S^k v` over GF(`modulus`), with row 0 the top level.
fn shift_down(v: &[u32], k: usize) -> Vec<u32> {
    let q = v.len();
    let mut out = vec![0; q];
    if k < q {
        out[k..].copy_from_slice(&v[..q - k]);
    }
    out
}

/// Channel outputs `(y1, y2)` over GF(`modulus`); `apply_channel` is the GF(2) case.
pub fn apply_channel_mod(p: &DetParams, x1: &[u32], x2: &[u32], modulus: u32) -> Result<(Vec<u32>, Vec<u32>)> {
    let q = p.q();
    if x1.len() != q || x2.len() != q {
        return Err(Error::DimensionMismatch(format!("inputs of length {} and {} for q = {q}", x1.len(), x2.len())));
    }
    let receive = |a: usize, b: usize| -> Vec<u32> {
        let u = shift_down(x1, q - a);
        let w = shift_down(x2, q - b);
        u.iter().zip(&w).map(|(s, t)| (s + t) % modulus).collect()
    };
    Ok((receive(p.n11, p.n12), receive(p.n21, p.n22)))
}

pub fn apply_channel(p: &DetParams, x1: &[u32], x2: &[u32]) -> Result<(Vec<u32>, Vec<u32>)> {
    apply_channel_mod(p, x1, x2, 2)
}

/// Regimes of the symmetric sum capacity, ordered by `nc / nd`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CapacityBranch {
    /// `nc/nd < 1/2`
    WeakCross,
    /// `1/2 <= nc/nd < 3/4`
    TwiceCross,
    /// `3/4 <= nc/nd < 1`
    AlignedBelow,
    /// `nc = nd`
    Equal,
    /// `1 < nc/nd <= 4/3`
    AlignedAbove,
    /// `4/3 < nc/nd <= 2`
    TwiceDirect,
    /// `nc/nd > 2`
    StrongCross,
}

impl CapacityBranch {
    pub fn label(self) -> &'static str {
        match self {
            CapacityBranch::WeakCross => "2(nd-nc)",
            CapacityBranch::TwiceCross => "2nc",
            CapacityBranch::AlignedBelow => "2(nd-nc/3)",
            CapacityBranch::Equal => "nd",
            CapacityBranch::AlignedAbove => "2(nc-nd/3)",
            CapacityBranch::TwiceDirect => "2nd",
            CapacityBranch::StrongCross => "2(nc-nd)",
        }
    }
}

impl fmt::Display for CapacityBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Branch of the piecewise capacity formula for `ratio = nc / nd`.
pub fn branch_for_ratio(ratio: Rational) -> CapacityBranch {
    if ratio < rat(1, 2) {
        CapacityBranch::WeakCross
    } else if ratio < rat(3, 4) {
        CapacityBranch::TwiceCross
    } else if ratio < int(1) {
        CapacityBranch::AlignedBelow
    } else if ratio == int(1) {
        CapacityBranch::Equal
    } else if ratio <= rat(4, 3) {
        CapacityBranch::AlignedAbove
    } else if ratio <= int(2) {
        CapacityBranch::TwiceDirect
    } else {
        CapacityBranch::StrongCross
    }
}

/// Branch used for `s`; `None` only for the empty channel `nc = nd = 0`.
/// With `nd = 0 < nc` the ratio is infinite and the strong-cross branch applies.
pub fn capacity_branch(s: SymDetParams) -> Option<CapacityBranch> {
    match (s.nc, s.nd) {
        (0, 0) => None,
        (_, 0) => Some(CapacityBranch::StrongCross),
        _ => Some(branch_for_ratio(rat(s.nc as i64, s.nd as i64))),
    }
}

/// Sum capacity of the symmetric deterministic X channel.
pub fn sym_sum_capacity(s: SymDetParams) -> Rational {
    let (nc, nd) = (int(s.nc as i64), int(s.nd as i64));
    match capacity_branch(s) {
        None => Rational::zero(),
        Some(CapacityBranch::WeakCross) => int(2) * (nd - nc),
        Some(CapacityBranch::TwiceCross) => int(2) * nc,
        Some(CapacityBranch::AlignedBelow) => int(2) * (nd - nc / int(3)),
        Some(CapacityBranch::Equal) => nd,
        Some(CapacityBranch::AlignedAbove) => int(2) * (nc - nd / int(3)),
        Some(CapacityBranch::TwiceDirect) => int(2) * nd,
        Some(CapacityBranch::StrongCross) => int(2) * (nc - nd),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledBound {
    pub label: &'static str,
    pub rates: Vec<Message>,
    #[serde(serialize_with = "rational::serialize_json")]
    pub value: Rational,
}

impl LabeledBound {
    pub fn holds(&self, r: &RateTuple) -> bool {
        r.sum_of(&self.rates) <= self.value
    }
}

/// The six genie-aided outer bounds on rate sums of the deterministic X channel.
pub fn det_outer_bounds(p: &DetParams) -> Vec<LabeledBound> {
    use Message::*;
    let n = |v: usize| int(v as i64);
    let (n11, n12, n21, n22) = (n(p.n11), n(p.n12), n(p.n21), n(p.n22));
    vec![
        LabeledBound { label: "up1", rates: vec![W11, W12, W22], value: n11.max(n12) + pos(n22 - n12) },
        LabeledBound { label: "up2", rates: vec![W11, W21, W22], value: n21.max(n22) + pos(n11 - n21) },
        LabeledBound { label: "up3", rates: vec![W11, W21, W12], value: n11.max(n12) + pos(n21 - n11) },
        LabeledBound { label: "up4", rates: vec![W21, W12, W22], value: n21.max(n22) + pos(n12 - n22) },
        LabeledBound {
            label: "up5",
            rates: Message::ALL.to_vec(),
            value: n12.max(pos(n11 - n21)) + n21.max(pos(n22 - n12)),
        },
        LabeledBound {
            label: "up6",
            rates: Message::ALL.to_vec(),
            value: n11.max(pos(n12 - n22)) + n22.max(pos(n21 - n11)),
        },
    ]
}

/// Symmetric sum-rate upper bound: the minimum of the combined genie bounds,
/// plus the single-receiver bound `nd` when all links are equally strong.
pub fn sym_sum_upper(s: SymDetParams) -> Rational {
    let (nc, nd) = (int(s.nc as i64), int(s.nd as i64));
    let combined = rat(4, 3) * nc.max(nd) + rat(2, 3) * pos(nd - nc) + rat(2, 3) * pos(nc - nd);
    let mut best = combined.min(int(2) * nc.max(nd - nc)).min(int(2) * nd.max(nc - nd));
    if s.nc == s.nd {
        best = best.min(nd);
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapacityRow {
    pub nc: usize,
    pub nd: usize,
    pub ratio: String,
    pub capacity_num: i64,
    pub capacity_den: i64,
    pub branch_label: String,
}

pub fn capacity_row(s: SymDetParams) -> CapacityRow {
    let c = sym_sum_capacity(s);
    CapacityRow {
        nc: s.nc,
        nd: s.nd,
        ratio: s.ratio().map_or_else(|| "inf".to_string(), |r| rational::display(&r)),
        capacity_num: *c.numer(),
        capacity_den: *c.denom(),
        branch_label: capacity_branch(s).map_or("zero", CapacityBranch::label).to_string(),
    }
}

/// CSV table with header `nc,nd,ratio,capacity_num,capacity_den,branch_label`.
pub fn capacity_table_csv(points: &[SymDetParams]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for &s in points {
        w.serialize(capacity_row(s)).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}
