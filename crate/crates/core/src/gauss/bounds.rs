use serde::Serialize;

use super::{half_log, GaussParams, SymGaussParams};
use crate::det::Message;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussBound {
    pub label: String,
    pub rates: Vec<Message>,
    pub value: f64,
}

impl GaussBound {
    fn new(label: impl Into<String>, rates: Vec<Message>, value: f64) -> Self {
        GaussBound { label: label.into(), rates, value }
    }
}

/// The two sum-rate bounds obtained by giving each receiver the other
/// receiver's interference-plus-noise as side information.
pub fn side_info_outer_bounds(g: &GaussParams) -> [f64; 2] {
    let GaussParams { h11, h12, h21, h22, p1, p2 } = *g;
    let (a11, a12, a21, a22) = (h11 * h11 * p1, h12 * h12 * p2, h21 * h21 * p1, h22 * h22 * p2);
    let first = half_log(a12 + a11 / (1.0 + a21)) + half_log(a21 + a22 / (1.0 + a12));
    let second = half_log(a11 + a12 / (1.0 + a22)) + half_log(a22 + a21 / (1.0 + a11));
    [first, second]
}

/// Single-link, multiple-access, broadcast and Z-channel bounds.
pub fn known_outer_bounds(g: &GaussParams) -> Vec<GaussBound> {
    use Message::*;
    let GaussParams { h11, h12, h21, h22, p1, p2 } = *g;
    let (a11, a12, a21, a22) = (h11 * h11 * p1, h12 * h12 * p2, h21 * h21 * p1, h22 * h22 * p2);
    vec![
        GaussBound::new("bound1-W11", vec![W11], half_log(a11)),
        GaussBound::new("bound1-W12", vec![W12], half_log(a12)),
        GaussBound::new("bound1-W21", vec![W21], half_log(a21)),
        GaussBound::new("bound1-W22", vec![W22], half_log(a22)),
        GaussBound::new("mac-bound1-tx1", vec![W11, W21], half_log((h11 * h11).max(h21 * h21) * p1)),
        GaussBound::new("mac-bound1-tx2", vec![W12, W22], half_log((h12 * h12).max(h22 * h22) * p2)),
        GaussBound::new("mac-bound2-rx1", vec![W11, W12], half_log(a11 + a12)),
        GaussBound::new("mac-bound2-rx2", vec![W21, W22], half_log(a21 + a22)),
        GaussBound::new("z-bound1", vec![W11, W22, W12], half_log(a11 + a12) + half_log(a22 / (1.0 + a12))),
        GaussBound::new("z-bound2", vec![W22, W11, W21], half_log(a22 + a21) + half_log(a11 / (1.0 + a21))),
        GaussBound::new("z-bound3", vec![W11, W12, W21], half_log(a11 + a12) + half_log(a21 / (1.0 + a11))),
        GaussBound::new("z-bound4", vec![W22, W21, W12], half_log(a22 + a21) + half_log(a12 / (1.0 + a22))),
    ]
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// When both receivers see the same gains they observe statistically identical
/// outputs, so all four messages are decodable at one receiver:
/// `R_sum <= 1/2 log(1 + H11^2 P1 + H12^2 P2)`.
pub fn identical_receiver_bound(g: &GaussParams) -> Option<f64> {
    (close(g.h11.abs(), g.h21.abs()) && close(g.h12.abs(), g.h22.abs()))
        .then(|| half_log(g.h11 * g.h11 * g.p1 + g.h12 * g.h12 * g.p2))
}

/// Every bound on the full sum rate that follows from the above: the two
/// side-information bounds, the Z-channel bounds averaged (each message
/// appears in three of the four), and sums of the pairwise bounds.
pub fn sum_rate_outer_bounds(g: &GaussParams) -> Vec<GaussBound> {
    let all = Message::ALL.to_vec();
    let [e1, e2] = side_info_outer_bounds(g);
    let known = known_outer_bounds(g);
    let by = |prefix: &str| known.iter().filter(|b| b.label.starts_with(prefix)).map(|b| b.value).sum::<f64>();
    let mut out = vec![
        GaussBound::new("side-info-1", all.clone(), e1),
        GaussBound::new("side-info-2", all.clone(), e2),
        GaussBound::new("z-average", all.clone(), by("z-bound") / 3.0),
        GaussBound::new("mac-bound1-sum", all.clone(), by("mac-bound1")),
        GaussBound::new("mac-bound2-sum", all.clone(), by("mac-bound2")),
        GaussBound::new("bound1-sum", all.clone(), by("bound1")),
    ];
    if let Some(v) = identical_receiver_bound(g) {
        out.push(GaussBound::new("identical-receivers", all, v));
    }
    out
}

/// Tightest sum-rate outer bound at finite `rho`, normalised by `1/2 log2 rho`.
pub fn gdof_numeric(alpha: f64, rho: f64) -> Result<f64> {
    let s = SymGaussParams::new(rho, alpha)?;
    let scale = 0.5 * rho.log2();
    if scale.is_nan() || scale <= 0.0 {
        return Err(Error::OutOfRange(format!("rho = {rho} too close to 1")));
    }
    let best = sum_rate_outer_bounds(&s.to_gauss()).into_iter().map(|b| b.value).fold(f64::INFINITY, f64::min);
    Ok(best / scale)
}
