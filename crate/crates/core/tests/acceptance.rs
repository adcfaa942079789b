//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use xchannel::codec::{build_scheme, cyclic_decompose_blocks, pack_boxes, validate_linear_scheme, RoundTrip};
use xchannel::det::{sym_sum_capacity, sym_sum_upper, SymDetParams};
use xchannel::gauss::{gdof, gdof_ic_best, gdof_numeric, gdof_outer, noisy_verdict, GaussParams, NoisyRegime};
use xchannel::qary::{lift_default, run_monte_carlo, QaryConfig};
use xchannel::rational::{int, rat, Rational};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn grid(max_nd: usize) -> Vec<(usize, usize)> {
    (1..=max_nd).flat_map(|nd| (0..=2 * nd).map(move |nc| (nc, nd))).collect()
}

fn constructive_capacity() -> Outcome {
    let failures: Vec<String> = grid(30)
        .par_iter()
        .filter_map(|&(nc, nd)| {
            let target = sym_sum_capacity(SymDetParams::new(nc, nd));
            let ok = build_scheme(nc, nd).and_then(|s| {
                let cert = validate_linear_scheme(&s.channel, &s)?;
                Ok(cert.valid && s.sum_rate() == target)
            });
            match ok {
                Ok(true) => None,
                Ok(false) => Some(format!("({nc},{nd})")),
                Err(e) => Some(format!("({nc},{nd}): {e}")),
            }
        })
        .collect();
    outcome(failures.is_empty(), format!("{} points, failures {:?}", grid(30).len(), failures))
}

fn upper_equals_capacity() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for nd in 0..=200usize {
        for nc in 0..=400usize {
            if nc + nd == 0 {
                continue;
            }
            count += 1;
            let s = SymDetParams::new(nc, nd);
            if sym_sum_upper(s) != sym_sum_capacity(s) {
                bad.push((nc, nd));
            }
        }
    }
    outcome(bad.is_empty(), format!("{count} points, mismatches {bad:?}"))
}

fn zero_error_coding() -> Outcome {
    type Row = (usize, usize, bool, u64, u64, Option<String>);
    let rows: Vec<Row> = grid(30)
        .par_iter()
        .map(|&(nc, nd)| {
            let run = || -> xchannel::Result<(bool, u64, u64)> {
                let s = build_scheme(nc, nd)?;
                let rt = RoundTrip::new(&s.channel, &s)?;
                if rt.total_bits() <= 16 {
                    let (t, e) = rt.exhaustive()?;
                    Ok((true, t, e))
                } else {
                    let mut rng = ChaCha8Rng::seed_from_u64((nc * 1000 + nd) as u64);
                    let mut errors = 0;
                    for _ in 0..1000 {
                        let m = rt.random_tuple(&mut rng);
                        if rt.run(&m)? != m {
                            errors += 1;
                        }
                    }
                    Ok((false, 1000, errors))
                }
            };
            match run() {
                Ok((ex, t, e)) => (nc, nd, ex, t, e, None),
                Err(err) => (nc, nd, false, 0, 0, Some(err.to_string())),
            }
        })
        .collect();
    let exhaustive = rows.iter().filter(|r| r.2).count();
    let tuples: u64 = rows.iter().map(|r| r.3).sum();
    let errors: u64 = rows.iter().map(|r| r.4).sum();
    let failed: Vec<String> = rows.iter().filter_map(|r| r.5.clone()).collect();
    outcome(
        errors == 0 && failed.is_empty(),
        format!(
            "{} schemes ({exhaustive} exhaustive), {tuples} tuples, {errors} errors, failures {failed:?}",
            rows.len()
        ),
    )
}

/// Column rank over GF(2) of bitset columns.
fn gf2_rank(mut cols: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let bits = cols.first().map_or(0, |c| c.len() * 64);
    for bit in 0..bits {
        let (w, m) = (bit / 64, 1u64 << (bit % 64));
        let Some(p) = (rank..cols.len()).find(|&i| cols[i][w] & m != 0) else { continue };
        cols.swap(rank, p);
        let pivot = cols[rank].clone();
        for (i, c) in cols.iter_mut().enumerate() {
            if i != rank && c[w] & m != 0 {
                for (a, b) in c.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn box_certificates() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for nd in 1..=60usize {
        for nc in 1..nd {
            if 4 * nc < 3 * nd {
                continue;
            }
            checked += 1;
            let blocks = if nc % 3 == 0 { 1 } else { 3 };
            let d = cyclic_decompose_blocks(nd, nc, blocks).unwrap();
            let s = nd - nc;
            let spread = {
                let lens: Vec<usize> = d.chains.iter().map(Vec::len).collect();
                lens.iter().max().unwrap() - lens.iter().min().unwrap()
            };
            let a = match pack_boxes(&d) {
                Ok(a) => a,
                Err(e) => {
                    bad.push(format!("({nc},{nd}): {e}"));
                    continue;
                }
            };
            let dim = blocks * nd;
            let words = dim.div_ceil(64);
            let unit = |levels: &[usize]| {
                let mut c = vec![0u64; words];
                for &l in levels {
                    c[l / 64] ^= 1 << (l % 64);
                }
                c
            };
            let h = |levels: &[usize]| -> Vec<usize> {
                levels.iter().filter(|&&l| l % nd + s < nd).map(|&l| l + s).collect()
            };
            let mut g = Vec::new();
            for b in &a.boxes {
                let hv = h(&b.generator);
                let h2v = h(&hv);
                g.extend([unit(&b.generator), unit(&hv), unit(&h2v)]);
            }
            let kernel: Vec<usize> = d.chains.iter().map(|c| *c.last().unwrap()).collect();
            g.extend(kernel.iter().map(|&k| unit(&[k])));
            let rank = gf2_rank(g);
            let boxes_expected = if blocks == 1 { nc / 3 } else { nc };
            if rank != dim || a.boxes.len() != boxes_expected || spread > 1 {
                bad.push(format!(
                    "({nc},{nd}): rank {rank}/{dim}, boxes {}/{boxes_expected}, spread {spread}",
                    a.boxes.len()
                ));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} instances, failures {bad:?}"))
}

/// Closed-form GDOF of the symmetric X channel, evaluated branch by branch.
fn gdof_oracle(a: Rational) -> Rational {
    let (two, three) = (int(2), int(3));
    if a < rat(1, 2) {
        two - two * a
    } else if a < rat(3, 4) {
        two * a
    } else if a < int(1) {
        two - two * a / three
    } else if a == int(1) {
        int(1)
    } else if a <= rat(4, 3) {
        two * a - two / three
    } else if a <= int(2) {
        two
    } else {
        two * a - two
    }
}

fn rational_grid(den: i64, count: i64) -> Vec<Rational> {
    let mut g: Vec<Rational> = (0..count).map(|k| rat(k, den)).collect();
    for (n, d) in [(1, 2), (2, 3), (3, 4), (1, 1), (4, 3), (3, 2), (2, 1)] {
        g.push(rat(n, d));
    }
    g.sort();
    g.dedup();
    g
}

fn gdof_identities() -> Outcome {
    let grid = rational_grid(360, 1000);
    let mut bad = Vec::new();
    for &a in &grid {
        let d = gdof(a).unwrap();
        let outer = gdof_outer(a).unwrap();
        let sym_ok = a.is_zero() || d == a * gdof(a.recip()).unwrap();
        if d != outer || !sym_ok || d != gdof_oracle(a) {
            bad.push(a.to_string());
        }
    }
    let left: Vec<Rational> = (1..=6).map(|k| gdof(int(1) - rat(1, 10i64.pow(k))).unwrap()).collect();
    let jump = left.iter().enumerate().all(|(k, v)| v - int(4) / int(3) == rat(2, 3 * 10i64.pow(k as u32 + 1)))
        && gdof(Rational::one()).unwrap() == int(1);
    outcome(
        bad.is_empty() && jump,
        format!("{} grid points, mismatches {bad:?}, jump at 1 (left limit 4/3, value 1): {jump}", grid.len()),
    )
}

/// Symmetric interference channel sum GDOF (W-curve).
fn ic_oracle(a: Rational) -> Rational {
    let one = int(1);
    let per_user = one.min((a / 2).max(one - a / 2)).min(a.max(one - a));
    int(2) * per_user
}

fn x_beats_ic() -> Outcome {
    let grid: Vec<Rational> = rational_grid(720, 4321);
    let mut bad = Vec::new();
    for &a in &grid {
        let d = gdof(a).unwrap();
        let ic = gdof_ic_best(a).unwrap();
        let oracle = if a.is_zero() { ic_oracle(a) } else { ic_oracle(a).max(a * ic_oracle(a.recip())) };
        let strict_region = a > rat(2, 3) && a < rat(3, 2) && a != int(1);
        let ok = ic == oracle && if strict_region { d > ic } else { d == ic };
        if !ok {
            bad.push(a.to_string());
        }
    }
    outcome(bad.is_empty(), format!("{} grid points in [0, 6], violations {bad:?}", grid.len()))
}

fn noisy_verdicts() -> Outcome {
    // log2(1 + 1/1.01) to 40 significant digits
    const REFERENCE: f64 = 0.992_840_208_427_133_877_211_356_839_225_324_084_5;
    let sym = |h: f64, p: f64| noisy_verdict(&GaussParams::new(1.0, h, h, 1.0, p, p).unwrap());
    let weak = sym(0.1, 1.0);
    let c = weak.sum_capacity.unwrap_or(f64::NAN);
    let ok_weak = weak.regime == NoisyRegime::WeakNoisy && (c - REFERENCE).abs() <= 1e-12;
    let ok_strong = sym(5.0, 1.0).regime == NoisyRegime::StrongNoisy;
    let ok_neither = sym(1.0, 1.0).regime == NoisyRegime::Neither;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let h = 10f64.powf(rng.random_range(-3.0..2.0)) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let p = 10f64.powf(rng.random_range(-2.0..3.0));
        let v = sym(h, p);
        let sym_weak = (h * (1.0 + h * h * p)).abs() <= 0.5;
        let sym_strong = h.abs() >= 2.0 * (1.0 + p);
        let general_weak = v.regime == NoisyRegime::WeakNoisy;
        let general_strong = v.regime == NoisyRegime::StrongNoisy;
        if sym_weak != general_weak || sym_strong != general_strong || v.symmetric.is_none_or(|s| s.mismatch) {
            mismatches += 1;
        }
    }
    outcome(
        ok_weak && ok_strong && ok_neither && mismatches == 0,
        format!(
            "h=0.1: C={c:.15} (|err| {:.1e}), h=5 strong: {ok_strong}, h=1 neither: {ok_neither}, random mismatches {mismatches}/1000",
            (c - REFERENCE).abs()
        ),
    )
}

fn qary_noiseless() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (nc, nd) in [(2, 3), (3, 4)] {
        let cfg = QaryConfig::new(17, 1, nc, nd).unwrap();
        let report = lift_default(&cfg).and_then(|l| l.exhaustive_noiseless());
        match report {
            Ok(r) => {
                pass &= cfg.prime == 3 && r.passed();
                parts.push(format!(
                    "({nc},{nd}) p={}: {} tuples, {} decode errors, {} digit mismatches",
                    cfg.prime, r.tuples, r.decode_errors, r.digit_mismatches
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("({nc},{nd}): {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn qary_noisy() -> Outcome {
    let start = Instant::now();
    let cfg = QaryConfig::new(100, 1, 3, 4).unwrap().nonzero(true);
    let r = lift_default(&cfg).and_then(|l| run_monte_carlo(&l, 100_000, 1, 1.0)).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let p: Vec<f64> = r.levels.iter().map(|l| l.p_hat).collect();
    let n = 100_000f64;
    let monotone = p.windows(2).all(|w| {
        let sigma = (w[0] * (1.0 - w[0]) / n + w[1] * (1.0 - w[1]) / n).sqrt();
        w[1] <= w[0] + 3.0 * sigma
    });
    let tail = p.iter().skip(2).all(|&v| v < 1e-3);
    let power = r.power.iter().all(|&v| v <= 1.0);
    outcome(
        monotone && tail && power && secs < 60.0 && r.trials == 100_000,
        format!("p_hat by level {p:?}, power {:?}, monotone {monotone}, tail {tail}, {secs:.1}s", r.power),
    )
}

fn numeric_convergence() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (n, d) in [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)] {
        let a = rat(n, d);
        let numeric = gdof_numeric(n as f64 / d as f64, 1e12).unwrap();
        let exact = gdof_outer(a).unwrap();
        let gap = (numeric - *exact.numer() as f64 / *exact.denom() as f64).abs();
        pass &= gap <= 0.05;
        parts.push(format!("a={a}: {numeric:.5} vs {exact} (gap {gap:.5})"));
    }
    outcome(pass, parts.join(", "))
}

fn main() {
    type Check = (&'static str, fn() -> Outcome);
    let criteria: [Check; 10] = [
        ("constructive sum capacity, nd <= 30", constructive_capacity),
        ("upper bound equals capacity, nd <= 200", upper_equals_capacity),
        ("zero-error round trips", zero_error_coding),
        ("box packing rank certificates, nd <= 60", box_certificates),
        ("GDOF identities on a rational grid", gdof_identities),
        ("X channel exceeds IC exactly on (2/3, 3/2) minus 1", x_beats_ic),
        ("noisy-interference verdicts", noisy_verdicts),
        ("Q-ary lifting without noise", qary_noiseless),
        ("Q-ary lifting with noise, Q=100", qary_noisy),
        ("numeric outer bounds at rho = 1e12", numeric_convergence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("[{:>2}] {verdict} {name} ({:.1}s): {}", i + 1, start.elapsed().as_secs_f64(), o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
