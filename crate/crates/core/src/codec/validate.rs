use serde::Serialize;

use super::scheme::LinearScheme;
use crate::det::{DetParams, Message};
use crate::error::{Error, Result};
use crate::linalg::{concat_cols, FieldMatrix};

/// Messages intended for `receiver` and those interfering at it.
pub fn desired_and_interfering(receiver: usize) -> ([Message; 2], [Message; 2]) {
    use Message::*;
    if receiver == 1 {
        ([W11, W12], [W21, W22])
    } else {
        ([W21, W22], [W11, W12])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReceiverCertificate {
    pub receiver: usize,
    pub desired_columns: usize,
    pub rank_interference: usize,
    pub rank_total: usize,
    pub decodable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub modulus: u32,
    pub receivers: [ReceiverCertificate; 2],
    pub full_column_rank: bool,
    pub valid: bool,
}

impl Certificate {
    pub fn summary(&self) -> String {
        let r = |c: &ReceiverCertificate| {
            format!(
                "rx{}: rank {} - {} vs {} desired",
                c.receiver, c.rank_total, c.rank_interference, c.desired_columns
            )
        };
        format!("{}; {}; full column rank: {}", r(&self.receivers[0]), r(&self.receivers[1]), self.full_column_rank)
    }
}

/// `[A_des | A_int]` at `receiver`, with the desired block first.
pub fn receiver_matrices<M: FieldMatrix>(s: &LinearScheme<M>, receiver: usize) -> Result<(M, M)> {
    let (des, int) = desired_and_interfering(receiver);
    let a = s.effective(receiver, des[0]);
    let b = s.effective(receiver, des[1]);
    let c = s.effective(receiver, int[0]);
    let d = s.effective(receiver, int[1]);
    Ok((concat_cols(&[&a, &b])?, concat_cols(&[&c, &d])?))
}

/// Linear decodability check: at each receiver the desired columns must stay
/// independent modulo the span of the interference.
pub fn validate_linear_scheme<M: FieldMatrix>(p: &DetParams, s: &LinearScheme<M>) -> Result<Certificate> {
    if *p != s.channel {
        return Err(Error::DimensionMismatch(format!("scheme built for {:?}, validated against {:?}", s.channel, p)));
    }
    let cert = |receiver| -> Result<ReceiverCertificate> {
        let (des, int) = receiver_matrices(s, receiver)?;
        let rank_interference = int.rank();
        let rank_total = des.hconcat(&int)?.rank();
        let desired_columns = des.cols();
        Ok(ReceiverCertificate {
            receiver,
            desired_columns,
            rank_interference,
            rank_total,
            decodable: rank_total - rank_interference == desired_columns,
        })
    };
    let receivers = [cert(1)?, cert(2)?];
    let full_column_rank = Message::ALL.iter().all(|&m| {
        let p = s.precoder(m);
        p.rank() == p.cols()
    });
    let valid = full_column_rank && receivers.iter().all(|r| r.decodable);
    Ok(Certificate { modulus: s.modulus(), receivers, full_column_rank, valid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::builders::{build_precoder_case3, build_scheme, empty_scheme};
    use crate::det::SymDetParams;

    #[test]
    fn case3_certificate() {
        let s = build_precoder_case3(12, 15).unwrap();
        let c = validate_linear_scheme(&s.channel, &s).unwrap();
        assert!(c.valid);
        assert_eq!(c.receivers[0].rank_total, 15);
        assert_eq!(c.receivers[0].rank_interference, 4);
        assert_eq!(c.receivers[1].rank_interference, 4);
    }

    #[test]
    fn duplicated_precoder_is_rejected() {
        let s = build_precoder_case3(12, 15).unwrap();
        let bad = s.with_precoder(Message::W12, s.precoder(Message::W11).clone()).unwrap();
        assert!(!validate_linear_scheme(&bad.channel, &bad).unwrap().valid);
    }

    #[test]
    fn empty_scheme_is_valid() {
        let p = DetParams::from(SymDetParams::new(3, 5));
        let s = empty_scheme(p, 1).unwrap();
        let c = validate_linear_scheme(&p, &s).unwrap();
        assert!(c.valid);
        assert_eq!(s.sum_rate(), crate::rational::int(0));
    }

    #[test]
    fn mismatched_channel_errors() {
        let s = build_scheme(2, 3).unwrap();
        assert!(validate_linear_scheme(&DetParams::new(3, 3, 3, 3), &s).is_err());
    }

    #[test]
    fn embedding_into_gf3_keeps_small_schemes_valid() {
        for (nc, nd) in [(2, 3), (3, 4), (12, 15), (10, 13), (1, 5)] {
            let s = build_scheme(nc, nd).unwrap().embed(3).unwrap();
            assert!(validate_linear_scheme(&s.channel, &s).unwrap().valid);
        }
    }
}
