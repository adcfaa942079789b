use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{best_approximation, int, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GdofBranch {
    /// `alpha < 1/2`
    NoisyInterference,
    /// `1/2 <= alpha < 3/4`
    WeakInterference,
    /// `3/4 <= alpha < 1`
    AlignedBelow,
    /// `alpha = 1`
    Equal,
    /// `1 < alpha <= 4/3`
    AlignedAbove,
    /// `4/3 < alpha <= 2`
    Flat,
    /// `alpha > 2`
    StrongCross,
}

impl GdofBranch {
    pub fn label(self) -> &'static str {
        match self {
            GdofBranch::NoisyInterference => "2-2a",
            GdofBranch::WeakInterference => "2a",
            GdofBranch::AlignedBelow => "2-2a/3",
            GdofBranch::Equal => "1",
            GdofBranch::AlignedAbove => "2a-2/3",
            GdofBranch::Flat => "2",
            GdofBranch::StrongCross => "2a-2",
        }
    }
}

fn check(alpha: Rational) -> Result<()> {
    if alpha.is_negative() {
        return Err(Error::OutOfRange(format!("alpha must be nonnegative, got {alpha}")));
    }
    Ok(())
}

pub fn gdof_branch(alpha: Rational) -> Result<GdofBranch> {
    check(alpha)?;
    Ok(if alpha < rat(1, 2) {
        GdofBranch::NoisyInterference
    } else if alpha < rat(3, 4) {
        GdofBranch::WeakInterference
    } else if alpha < int(1) {
        GdofBranch::AlignedBelow
    } else if alpha == int(1) {
        GdofBranch::Equal
    } else if alpha <= rat(4, 3) {
        GdofBranch::AlignedAbove
    } else if alpha <= int(2) {
        GdofBranch::Flat
    } else {
        GdofBranch::StrongCross
    })
}

/// Generalized degrees of freedom of the symmetric Gaussian X channel.
pub fn gdof(alpha: Rational) -> Result<Rational> {
    let two = int(2);
    Ok(match gdof_branch(alpha)? {
        GdofBranch::NoisyInterference => two - two * alpha,
        GdofBranch::WeakInterference => two * alpha,
        GdofBranch::AlignedBelow => two - rat(2, 3) * alpha,
        GdofBranch::Equal => int(1),
        GdofBranch::AlignedAbove => two * alpha - rat(2, 3),
        GdofBranch::Flat => two,
        GdofBranch::StrongCross => two * alpha - two,
    })
}

/// Outer bound `2 min(max(a, 1-a), 1 - a/3)` for `a <= 1`, extended by
/// `d(a) = a d(1/a)`. At `a = 1` both receivers see the same signal, so the
/// single-receiver bound `d <= 1` also applies.
pub fn gdof_outer(alpha: Rational) -> Result<Rational> {
    check(alpha)?;
    if alpha > int(1) {
        return Ok(alpha * gdof_outer(alpha.recip())?);
    }
    let one = Rational::one();
    let side_info = alpha.max(one - alpha);
    let z = one - alpha / int(3);
    let bound = int(2) * side_info.min(z);
    Ok(if alpha == one { bound.min(one) } else { bound })
}

/// Per-user GDOF of the symmetric two-user interference channel,
/// `min(1, max(a/2, 1-a/2), max(a, 1-a))`.
pub fn ic_per_user(alpha: Rational) -> Result<Rational> {
    check(alpha)?;
    let one = Rational::one();
    let half = alpha / int(2);
    Ok(one.min(half.max(one - half)).min(alpha.max(one - alpha)))
}

/// Sum GDOF of the interference channel with messages `W11, W22`.
pub fn gdof_ic(alpha: Rational) -> Result<Rational> {
    Ok(int(2) * ic_per_user(alpha)?)
}

/// Best interference channel inside the X channel: either the direct pair
/// `W11, W22` or the cross pair `W12, W21` (the latter sees `1/alpha`).
pub fn gdof_ic_best(alpha: Rational) -> Result<Rational> {
    let direct = gdof_ic(alpha)?;
    if alpha.is_zero() {
        return Ok(direct);
    }
    Ok(direct.max(alpha * gdof_ic(alpha.recip())?))
}

/// GDOF at a real `alpha`, evaluated at the nearest rational with denominator
/// at most `10^6`; `rounded` is that rational.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealGdof {
    pub alpha: f64,
    #[serde(serialize_with = "crate::rational::serialize_json")]
    pub rounded: Rational,
    pub rounding_error: f64,
    #[serde(serialize_with = "crate::rational::serialize_json")]
    pub d: Rational,
}

pub fn gdof_real(alpha: f64) -> Result<RealGdof> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::OutOfRange(format!("alpha must be a nonnegative number, got {alpha}")));
    }
    let rounded = best_approximation(alpha, 1_000_000)?;
    Ok(RealGdof {
        alpha,
        rounded,
        rounding_error: (crate::rational::to_f64(&rounded) - alpha).abs(),
        d: gdof(rounded)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gdof_examples() {
        assert_eq!(gdof(rat(1, 2)).unwrap(), int(1));
        assert_eq!(gdof(int(1)).unwrap(), int(1));
        assert_eq!(gdof(rat(4, 3)).unwrap(), int(2));
        assert_eq!(gdof(int(3)).unwrap(), int(4));
        assert!(gdof(rat(-1, 2)).is_err());
    }

    #[test]
    fn outer_examples() {
        assert_eq!(gdof_outer(rat(3, 4)).unwrap(), rat(3, 2));
        assert_eq!(gdof_outer(int(0)).unwrap(), int(2));
        assert_eq!(gdof_outer(int(2)).unwrap(), int(2));
        assert_eq!(gdof_outer(int(1)).unwrap(), int(1));
    }

    #[test]
    fn jump_at_one() {
        let eps = rat(1, 1_000_000);
        let left = int(2) - rat(2, 3) * int(1);
        let right = int(2) * int(1) - rat(2, 3);
        assert_eq!((left, right), (rat(4, 3), rat(4, 3)));
        assert_eq!(gdof(int(1) - eps).unwrap(), left + rat(2, 3) * eps);
        assert_eq!(gdof(int(1) + eps).unwrap(), right + int(2) * eps);
        assert_eq!(gdof(int(1)).unwrap(), int(1));
    }

    #[test]
    fn ic_comparison_points() {
        assert_eq!(gdof_ic(int(0)).unwrap(), int(2));
        assert_eq!(gdof_ic(rat(1, 2)).unwrap(), int(1));
        assert_eq!(gdof_ic(rat(3, 4)).unwrap(), rat(5, 4));
        assert_eq!(gdof_ic_best(rat(3, 2)).unwrap(), int(2));
        assert_eq!(gdof_ic_best(int(3)).unwrap(), int(4));
    }

    #[test]
    fn real_wrapper_reports_rounding() {
        let r = gdof_real(0.75).unwrap();
        assert_eq!((r.rounded, r.d), (rat(3, 4), rat(3, 2)));
        assert_eq!(r.rounding_error, 0.0);
        let r = gdof_real(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!(r.rounding_error < 1e-11);
        assert!(gdof_real(f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn symmetry_and_tightness(n in 0i64..5000, d in 1i64..1000) {
            let a = rat(n, d);
            prop_assert_eq!(gdof(a).unwrap(), gdof_outer(a).unwrap());
            if n > 0 {
                prop_assert_eq!(gdof(a).unwrap(), a * gdof(a.recip()).unwrap());
            }
            prop_assert!(gdof_ic_best(a).unwrap() <= gdof(a).unwrap());
        }
    }
}
