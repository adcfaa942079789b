use serde::Serialize;

use super::{half_log, GaussParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoisyRegime {
    WeakNoisy,
    StrongNoisy,
    Neither,
}

/// The symmetric-channel conditions `|h(1 + h^2 P)| <= 1/2` and `|h| >= 2(1 + P)`,
/// evaluated when `H11 = H22 = 1`, `H12 = H21` and `P1 = P2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricNoisyCheck {
    pub weak: bool,
    pub strong: bool,
    /// The symmetric conditions disagree with the general ones.
    pub mismatch: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoisyVerdict {
    pub regime: NoisyRegime,
    /// Sum capacity in bits per use; present iff the regime is not `neither`.
    pub sum_capacity: Option<f64>,
    pub weak_lhs: Option<f64>,
    pub strong_lhs: Option<f64>,
    pub symmetric: Option<SymmetricNoisyCheck>,
}

/// Sum capacity when treating interference as noise is optimal, either on the
/// direct links (weak cross gains) or on the cross links (weak direct gains).
pub fn noisy_verdict(g: &GaussParams) -> NoisyVerdict {
    let GaussParams { h11, h12, h21, h22, p1, p2 } = *g;
    let weak_lhs = (h11 != 0.0 && h22 != 0.0)
        .then(|| (h12 / h22 * (1.0 + h21 * h21 * p1)).abs() + (h21 / h11 * (1.0 + h12 * h12 * p2)).abs());
    let strong_lhs = (h12 != 0.0 && h21 != 0.0)
        .then(|| (h22 / h12 * (1.0 + h11 * h11 * p1)).abs() + (h11 / h21 * (1.0 + h22 * h22 * p2)).abs());
    let weak = weak_lhs.is_some_and(|v| v <= 1.0);
    let strong = strong_lhs.is_some_and(|v| v <= 1.0);
    let (regime, sum_capacity) = if weak {
        let c = half_log(h11 * h11 * p1 / (1.0 + h12 * h12 * p2)) + half_log(h22 * h22 * p2 / (1.0 + h21 * h21 * p1));
        (NoisyRegime::WeakNoisy, Some(c))
    } else if strong {
        let c = half_log(h21 * h21 * p1 / (1.0 + h22 * h22 * p2)) + half_log(h12 * h12 * p2 / (1.0 + h11 * h11 * p1));
        (NoisyRegime::StrongNoisy, Some(c))
    } else {
        (NoisyRegime::Neither, None)
    };
    let symmetric = (h11 == 1.0 && h22 == 1.0 && h12 == h21 && p1 == p2).then(|| {
        let (h, p) = (h12, p1);
        let sym_weak = (h * (1.0 + h * h * p)).abs() <= 0.5;
        let sym_strong = h.abs() >= 2.0 * (1.0 + p);
        SymmetricNoisyCheck { weak: sym_weak, strong: sym_strong, mismatch: sym_weak != weak || sym_strong != strong }
    });
    NoisyVerdict { regime, sum_capacity, weak_lhs, strong_lhs, symmetric }
}
