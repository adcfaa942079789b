use proptest::prelude::*;
use xchannel::codec::{build_scheme, run_sweep, validate_linear_scheme, RoundTrip, SweepConfig};
use xchannel::det::{apply_channel, det_outer_bounds, sym_sum_capacity, DetParams, SymDetParams};
use xchannel::gauss::gdof;
use xchannel::linalg::FieldMatrix;
use xchannel::qary::{lift_default, lift_scheme, run_monte_carlo, QaryConfig};
use xchannel::rational::{int, rat};

#[test]
fn deterministic_capacity_scales_to_gdof() {
    for nd in 1..=40i64 {
        for nc in 0..=3 * nd {
            let c = sym_sum_capacity(SymDetParams::new(nc as usize, nd as usize));
            assert_eq!(c / int(nd), gdof(rat(nc, nd)).unwrap(), "({nc},{nd})");
        }
    }
}

#[test]
fn schemes_meet_every_outer_bound() {
    for nd in 1..=14usize {
        for nc in 0..=2 * nd {
            let s = build_scheme(nc, nd).unwrap();
            let per_use = s.rates();
            for b in det_outer_bounds(&s.channel) {
                assert!(b.holds(&per_use), "({nc},{nd}) violates {}", b.label);
            }
        }
    }
}

#[test]
fn schemes_carry_over_to_odd_prime_fields() {
    for (nc, nd) in [(2, 3), (1, 3), (3, 4), (12, 15), (10, 13), (5, 3), (4, 4)] {
        let s = build_scheme(nc, nd).unwrap();
        for p in [3, 5, 7] {
            let e = s.embed(p).unwrap();
            assert!(validate_linear_scheme(&e.channel, &e).unwrap().valid, "({nc},{nd}) over GF({p})");
            let (tuples, errors) = RoundTrip::new(&e.channel, &e).unwrap().random(200, 5).unwrap();
            assert_eq!((tuples, errors), (200, 0));
        }
    }
}

#[test]
fn xor_channel_matches_shifted_sum() {
    let p = DetParams::new(4, 2, 3, 4);
    let (y1, y2) = apply_channel(&p, &[1, 0, 1, 1], &[0, 1, 1, 0]).unwrap();
    // y1 = x1 + S^2 x2, y2 = S^1 x1 + x2
    assert_eq!(y1, vec![1, 0, 1, 0]);
    assert_eq!(y2, vec![0, 0, 1, 1]);
}

#[test]
fn sweep_matches_capacity_up_to_ten() {
    let report = run_sweep(&SweepConfig { max_nd: 10, ..Default::default() });
    assert!(report.all_passed(), "{:?}", report.rows.iter().filter(|r| !r.pass).collect::<Vec<_>>());
    assert_eq!(report.rows.len(), (1..=10).map(|nd| 2 * nd + 1).sum::<usize>());
}

#[test]
fn lifting_with_two_channel_uses_per_level() {
    let cfg = QaryConfig::new(29, 2, 1, 2).unwrap();
    let l = lift_default(&cfg).unwrap();
    let report = l.exhaustive_noiseless().unwrap();
    assert!(report.passed());
    let noisy = run_monte_carlo(&l, 2000, 3, 1.0).unwrap();
    assert!(noisy.max_power() <= 1.0);
    assert_eq!(noisy.levels.len(), 4);
}

#[test]
fn lifting_rejects_schemes_for_other_channels() {
    let cfg = QaryConfig::new(17, 2, 2, 3).unwrap();
    let s = build_scheme(2, 3).unwrap();
    assert!(lift_scheme(&cfg, &s).is_err());
    assert!(lift_scheme(&cfg, &build_scheme(4, 6).unwrap()).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_schemes_round_trip(nd in 1usize..24, frac in 0.0f64..2.0, seed in any::<u64>()) {
        let nc = (nd as f64 * frac).round() as usize;
        let s = build_scheme(nc, nd).unwrap();
        prop_assert_eq!(s.sum_rate(), sym_sum_capacity(SymDetParams::new(nc, nd)));
        for m in xchannel::det::Message::ALL {
            prop_assert_eq!(s.precoder(m).rank(), s.bits(m));
        }
        let rt = RoundTrip::new(&s.channel, &s).unwrap();
        prop_assert_eq!(rt.random(50, seed).unwrap(), (50, 0));
    }
}
