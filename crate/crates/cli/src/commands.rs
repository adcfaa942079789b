use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use xchannel::codec::{build_scheme, run_sweep, validate_linear_scheme, LinearScheme, RoundTrip, SweepConfig};
use xchannel::det::{
    capacity_branch, det_outer_bounds, sym_sum_capacity, sym_sum_upper, CapacityBranch, DetParams, Message,
    SymDetParams,
};
use xchannel::gauss::{
    gdof, gdof_branch, gdof_ic_best, gdof_numeric, gdof_outer, known_outer_bounds, noisy_verdict,
    sum_rate_outer_bounds, GaussParams, SymGaussParams,
};
use xchannel::linalg::{BitMatrix, FieldMatrix};
use xchannel::qary::{lift_default, run_monte_carlo, QaryConfig};
use xchannel::rational::{self, int, Rational};

use crate::report::{Cell, Report};
use crate::Failure;

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symmetric sum capacity of the deterministic channel.
    Capacity(CapacityArgs),
    /// Genie-aided outer bounds of the deterministic channel.
    BoundsDet(DetArgs),
    /// Outer bounds of the Gaussian channel in bits per use.
    BoundsGauss(GaussArgs),
    /// GDOF of the symmetric Gaussian channel at one alpha.
    Gdof(GdofArgs),
    /// GDOF curve of the X channel and the best interference channel.
    GdofCurve(CurveArgs),
    /// Builds and certifies the alignment precoders.
    Precoder(PrecoderArgs),
    /// Builds, certifies and round-trips every scheme on a grid.
    SweepVerify(SweepArgs),
    /// Encodes, transmits and decodes messages over the deterministic channel.
    SimulateDet(SimDetArgs),
    /// Monte Carlo of the Q-ary lifting over the Gaussian channel.
    SimulateGauss(SimGaussArgs),
    /// Tests whether treating interference as noise is sum-capacity optimal.
    NoisyCheck(GaussArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CapacityArgs {
    #[arg(long)]
    nc: Option<usize>,
    #[arg(long)]
    nd: Option<usize>,
    /// Tabulate every `1 <= nd <= max_nd`, `0 <= nc <= 2 nd` instead.
    #[arg(long, conflicts_with_all = ["nc", "nd"])]
    max_nd: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct DetArgs {
    #[arg(long)]
    n11: Option<usize>,
    #[arg(long)]
    n12: Option<usize>,
    #[arg(long)]
    n21: Option<usize>,
    #[arg(long)]
    n22: Option<usize>,
    #[arg(long, conflicts_with_all = ["n11", "n12", "n21", "n22"])]
    nc: Option<usize>,
    #[arg(long, conflicts_with_all = ["n11", "n12", "n21", "n22"])]
    nd: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct GaussArgs {
    #[arg(long)]
    h11: Option<f64>,
    #[arg(long)]
    h12: Option<f64>,
    #[arg(long)]
    h21: Option<f64>,
    #[arg(long)]
    h22: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    /// Symmetric cross gain with unit direct gains (use with `--p`).
    #[arg(long, conflicts_with_all = ["h11", "h12", "h21", "h22", "p1", "p2"])]
    h: Option<f64>,
    #[arg(long, conflicts_with_all = ["h11", "h12", "h21", "h22", "p1", "p2"])]
    p: Option<f64>,
    /// Symmetric SNR; cross gains are `rho^(alpha/2)` (use with `--alpha`).
    #[arg(long, conflicts_with_all = ["h11", "h12", "h21", "h22", "p1", "p2", "h", "p"])]
    rho: Option<f64>,
    #[arg(long, conflicts_with_all = ["h11", "h12", "h21", "h22", "p1", "p2", "h", "p"])]
    alpha: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct GdofArgs {
    /// `p/q`, an integer or a decimal.
    #[arg(long)]
    alpha: String,
    /// Also evaluate the outer bounds numerically at this SNR.
    #[arg(long)]
    rho: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct CurveArgs {
    #[arg(long, default_value = "1/100")]
    step: String,
    #[arg(long, default_value = "3")]
    max_alpha: String,
}

#[derive(Debug, Args, Serialize)]
pub struct PrecoderArgs {
    #[arg(long)]
    nc: usize,
    #[arg(long)]
    nd: usize,
    /// Zero one precoder column before certifying (negative control).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// JSON file with sweep settings; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    min_nd: Option<usize>,
    #[arg(long)]
    max_nd: Option<usize>,
    #[arg(long)]
    nc_factor: Option<usize>,
    #[arg(long)]
    exhaustive_bits: Option<usize>,
    #[arg(long)]
    random_tuples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Corrupt the scheme at `nc,nd` (negative control).
    #[arg(long, value_parser = parse_point)]
    inject_fault: Option<(usize, usize)>,
}

#[derive(Debug, Args, Serialize)]
pub struct SimDetArgs {
    #[arg(long)]
    nc: usize,
    #[arg(long)]
    nd: usize,
    /// Random tuples when the scheme is too large for an exhaustive run.
    #[arg(long, default_value_t = 1000)]
    tuples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    exhaustive_bits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Digits {
    /// `{0, ..., p-1}`
    ZeroBased,
    /// `{1, ..., p}`
    Nonzero,
}

#[derive(Debug, Args, Serialize)]
pub struct SimGaussArgs {
    #[arg(long = "Q")]
    q: u64,
    #[arg(long = "N", default_value_t = 1)]
    n: usize,
    #[arg(long)]
    nc: usize,
    #[arg(long)]
    nd: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    noiseless: bool,
    #[arg(long, value_enum, default_value_t = Digits::Nonzero)]
    digits: Digits,
    /// Digit field; defaults to the largest prime at most `(Q-1)/4`.
    #[arg(long)]
    prime: Option<u32>,
}

fn parse_point(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected nc,nd")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

fn config_of(name: &str, args: &impl Serialize) -> Value {
    let mut v = serde_json::to_value(args).unwrap_or(Value::Null);
    if let Value::Object(m) = &mut v {
        m.insert("command".into(), json!(name));
    }
    v
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn messages_label(ms: &[Message]) -> String {
    ms.iter().map(ToString::to_string).collect::<Vec<_>>().join("+")
}

pub fn execute(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Capacity(a) => capacity(a),
        Command::BoundsDet(a) => bounds_det(a),
        Command::BoundsGauss(a) => bounds_gauss(a),
        Command::Gdof(a) => gdof_cmd(a),
        Command::GdofCurve(a) => gdof_curve(a),
        Command::Precoder(a) => precoder(a),
        Command::SweepVerify(a) => sweep(a),
        Command::SimulateDet(a) => simulate_det(a),
        Command::SimulateGauss(a) => simulate_gauss(a),
        Command::NoisyCheck(a) => noisy_check(a),
    }
}

fn capacity(a: &CapacityArgs) -> Result<Report, Failure> {
    let points: Vec<SymDetParams> = match (a.nc, a.nd, a.max_nd) {
        (_, _, Some(max)) => (1..=max).flat_map(|nd| (0..=2 * nd).map(move |nc| SymDetParams::new(nc, nd))).collect(),
        (Some(0), Some(0), None) => return Err(usage("nc = nd = 0 describes no channel")),
        (Some(nc), Some(nd), None) => vec![SymDetParams::new(nc, nd)],
        _ => return Err(usage("capacity needs --nc and --nd, or --max-nd")),
    };
    let mut r = Report::new(config_of("capacity", a), vec!["nc", "nd", "ratio", "capacity", "upper", "branch"]);
    for s in points {
        r.row(vec![
            Cell::int(s.nc as u64),
            Cell::int(s.nd as u64),
            s.ratio().map_or(Cell::Null, Cell::Rat),
            Cell::Rat(sym_sum_capacity(s)),
            Cell::Rat(sym_sum_upper(s)),
            Cell::text(capacity_branch(s).map_or("zero", CapacityBranch::label)),
        ]);
    }
    Ok(r)
}

fn bounds_det(a: &DetArgs) -> Result<Report, Failure> {
    let (p, sym) = match (a.n11, a.n12, a.n21, a.n22, a.nc, a.nd) {
        (Some(n11), Some(n12), Some(n21), Some(n22), None, None) => (DetParams::new(n11, n12, n21, n22), None),
        (None, None, None, None, Some(nc), Some(nd)) => {
            let s = SymDetParams::new(nc, nd);
            (s.into(), Some(s))
        }
        _ => return Err(usage("bounds-det needs --n11 --n12 --n21 --n22, or --nc --nd")),
    };
    let mut r = Report::new(config_of("bounds-det", a), vec!["label", "messages", "value"]);
    for b in det_outer_bounds(&p) {
        r.row(vec![Cell::text(b.label), Cell::text(messages_label(&b.rates)), Cell::Rat(b.value)]);
    }
    if let Some(s) = sym {
        r.row(vec![Cell::text("sum-upper"), Cell::text(messages_label(&Message::ALL)), Cell::Rat(sym_sum_upper(s))]);
    }
    Ok(r)
}

fn gauss_params(a: &GaussArgs) -> Result<(GaussParams, Option<f64>), Failure> {
    match *a {
        GaussArgs {
            h11: Some(h11),
            h12: Some(h12),
            h21: Some(h21),
            h22: Some(h22),
            p1: Some(p1),
            p2: Some(p2),
            ..
        } => Ok((GaussParams::new(h11, h12, h21, h22, p1, p2)?, None)),
        GaussArgs { h: Some(h), p: Some(p), .. } => Ok((GaussParams::symmetric_unit(h, p)?, None)),
        GaussArgs { rho: Some(rho), alpha: Some(alpha), .. } => {
            Ok((SymGaussParams::new(rho, alpha)?.to_gauss(), Some(rho)))
        }
        _ => Err(usage("give --h11 --h12 --h21 --h22 --p1 --p2, or --h --p, or --rho --alpha")),
    }
}

fn bounds_gauss(a: &GaussArgs) -> Result<Report, Failure> {
    let (g, rho) = gauss_params(a)?;
    let mut r = Report::new(config_of("bounds-gauss", a), vec!["label", "messages", "value"]);
    let all = known_outer_bounds(&g).into_iter().chain(sum_rate_outer_bounds(&g));
    for b in all {
        r.row(vec![Cell::text(b.label), Cell::text(messages_label(&b.rates)), Cell::Float(b.value)]);
    }
    let best = sum_rate_outer_bounds(&g).into_iter().map(|b| b.value).fold(f64::INFINITY, f64::min);
    r.row(vec![Cell::text("sum-min"), Cell::text(messages_label(&Message::ALL)), Cell::Float(best)]);
    if let Some(rho) = rho {
        r.row(vec![
            Cell::text("sum-min-normalised"),
            Cell::text(messages_label(&Message::ALL)),
            Cell::Float(best / (0.5 * rho.log2())),
        ]);
    }
    Ok(r)
}

fn parse_rational(s: &str, what: &str) -> Result<Rational, Failure> {
    rational::parse(s).map_err(|e| usage(format!("--{what}: {e}")))
}

fn gdof_cmd(a: &GdofArgs) -> Result<Report, Failure> {
    let alpha = parse_rational(&a.alpha, "alpha")?;
    let mut r = Report::new(config_of("gdof", a), vec!["alpha", "d", "branch", "outer", "ic", "numeric_outer"]);
    let numeric = a.rho.map(|rho| gdof_numeric(rational::to_f64(&alpha), rho)).transpose()?;
    r.row(vec![
        Cell::Rat(alpha),
        Cell::Rat(gdof(alpha)?),
        Cell::text(gdof_branch(alpha)?.label()),
        Cell::Rat(gdof_outer(alpha)?),
        Cell::Rat(gdof_ic_best(alpha)?),
        Cell::opt_float(numeric),
    ]);
    Ok(r)
}

fn gdof_curve(a: &CurveArgs) -> Result<Report, Failure> {
    let step = parse_rational(&a.step, "step")?;
    let max = parse_rational(&a.max_alpha, "max-alpha")?;
    if step <= int(0) {
        return Err(usage("--step must be positive"));
    }
    if max < int(0) {
        return Err(usage("--max-alpha must be nonnegative"));
    }
    let mut grid: Vec<Rational> = Vec::new();
    let mut x = int(0);
    while x <= max {
        grid.push(x);
        x += step;
    }
    let breakpoints = [(1, 2), (2, 3), (3, 4), (1, 1), (4, 3), (3, 2), (2, 1)];
    grid.extend(breakpoints.iter().map(|&(n, d)| rational::rat(n, d)).filter(|b| *b <= max));
    grid.sort();
    grid.dedup();
    let mut r = Report::new(config_of("gdof-curve", a), vec!["alpha", "d", "branch", "ic", "gain"]);
    for alpha in grid {
        let (d, ic) = (gdof(alpha)?, gdof_ic_best(alpha)?);
        r.row(vec![
            Cell::Rat(alpha),
            Cell::Rat(d),
            Cell::text(gdof_branch(alpha)?.label()),
            Cell::Rat(ic),
            Cell::Rat(d - ic),
        ]);
    }
    Ok(r)
}

fn corrupt(s: LinearScheme<BitMatrix>) -> Result<LinearScheme<BitMatrix>, Failure> {
    let Some(m) = Message::ALL.into_iter().find(|&m| s.bits(m) > 0) else {
        return Ok(s);
    };
    let mut p = s.precoder(m).clone();
    for row in 0..p.rows() {
        p.set(row, 0, 0);
    }
    Ok(s.with_precoder(m, p)?)
}

fn precoder(a: &PrecoderArgs) -> Result<Report, Failure> {
    let mut s = build_scheme(a.nc, a.nd)?;
    if a.inject_fault {
        s = corrupt(s)?;
    }
    let cert = validate_linear_scheme(&s.channel, &s)?;
    let mut r = Report::new(config_of("precoder", a), vec!["message", "bits", "rate", "precoder_rows_hex"]);
    let rates = s.rates();
    for m in Message::ALL {
        let p = s.precoder(m);
        let hex: Vec<String> = (0..p.rows()).map(|row| p.row_hex(row)).collect();
        r.row(vec![
            Cell::text(m.to_string()),
            Cell::int(s.bits(m) as u64),
            Cell::Rat(rates.get(m)),
            Cell::text(hex.join(" ")),
        ]);
    }
    let construction = serde_json::to_value(s.construction).unwrap_or(Value::Null);
    r.footer.push(format!(
        "construction {} extension {} sum rate {}",
        construction.as_str().unwrap_or("?"),
        s.extension,
        rational::display(&s.sum_rate())
    ));
    r.footer.push(format!("certificate {}: {}", if cert.valid { "valid" } else { "INVALID" }, cert.summary()));
    r.result = Some(json!({ "scheme": s, "certificate": cert }));
    r.ok = cert.valid;
    Ok(r)
}

fn sweep(a: &SweepArgs) -> Result<Report, Failure> {
    let mut cfg: SweepConfig = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => SweepConfig::default(),
    };
    macro_rules! apply {
        ($($f:ident),*) => { $(if let Some(v) = a.$f { cfg.$f = v; })* };
    }
    apply!(min_nd, max_nd, nc_factor, exhaustive_bits, random_tuples, seed);
    if a.inject_fault.is_some() {
        cfg.inject_fault = a.inject_fault;
    }
    if cfg.min_nd > cfg.max_nd && cfg.points.is_empty() {
        return Err(usage("min_nd exceeds max_nd"));
    }
    let report = run_sweep(&cfg);
    let mut config = serde_json::to_value(&cfg).unwrap_or(Value::Null);
    if let Value::Object(m) = &mut config {
        m.insert("command".into(), json!("sweep-verify"));
    }
    let mut r = Report::new(
        config,
        vec![
            "nc",
            "nd",
            "construction",
            "extension",
            "sum_rate",
            "capacity",
            "valid",
            "mode",
            "tuples",
            "errors",
            "pass",
        ],
    );
    for row in &report.rows {
        let construction = row
            .construction
            .and_then(|c| serde_json::to_value(c).ok())
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_else(|| "-".into());
        r.row(vec![
            Cell::int(row.nc as u64),
            Cell::int(row.nd as u64),
            Cell::text(construction),
            Cell::int(row.extension as u64),
            row.sum_rate.map_or(Cell::Null, |v| Cell::Rat(v.into())),
            Cell::Rat(row.capacity.into()),
            Cell::Bool(row.valid),
            Cell::text(if row.exhaustive { "exhaustive" } else { "random" }),
            Cell::int(row.tuples),
            Cell::int(row.errors),
            Cell::Bool(row.pass),
        ]);
    }
    r.footer.push(format!("passed {} failed {}", report.passed, report.failed));
    for row in report.rows.iter().filter(|row| !row.pass) {
        r.footer.push(format!(
            "FAIL ({}, {}): {}",
            row.nc,
            row.nd,
            row.error.as_deref().unwrap_or("verification failed")
        ));
    }
    r.ok = report.all_passed();
    r.result = Some(serde_json::to_value(&report).unwrap_or(Value::Null));
    Ok(r)
}

fn simulate_det(a: &SimDetArgs) -> Result<Report, Failure> {
    let s = build_scheme(a.nc, a.nd)?;
    let rt = RoundTrip::new(&s.channel, &s)?;
    let exhaustive = rt.total_bits() <= a.exhaustive_bits;
    let (tuples, errors) = if exhaustive { rt.exhaustive()? } else { rt.random(a.tuples, a.seed)? };
    let mut r =
        Report::new(config_of("simulate-det", a), vec!["nc", "nd", "sum_rate", "symbols", "mode", "tuples", "errors"]);
    r.row(vec![
        Cell::int(a.nc as u64),
        Cell::int(a.nd as u64),
        Cell::Rat(s.sum_rate()),
        Cell::int(rt.total_bits() as u64),
        Cell::text(if exhaustive { "exhaustive" } else { "random" }),
        Cell::int(tuples),
        Cell::int(errors),
    ]);
    r.ok = errors == 0;
    Ok(r)
}

fn simulate_gauss(a: &SimGaussArgs) -> Result<Report, Failure> {
    let mut cfg = QaryConfig::new(a.q, a.n, a.nc, a.nd)?.nonzero(a.digits == Digits::Nonzero);
    if let Some(p) = a.prime {
        cfg = cfg.with_prime(p)?;
    }
    let lifted = lift_default(&cfg)?;
    let noise = if a.noiseless { 0.0 } else { 1.0 };
    let sim = run_monte_carlo(&lifted, a.trials, a.seed, noise)?;
    let mut config = serde_json::to_value(&cfg).unwrap_or(Value::Null);
    if let Value::Object(m) = &mut config {
        m.insert("command".into(), json!("simulate-gauss"));
        m.insert("trials".into(), json!(a.trials));
        m.insert("seed".into(), json!(a.seed));
        m.insert("noiseless".into(), json!(a.noiseless));
    }
    let mut r = Report::new(config, vec!["level_k", "errors", "trials", "p_hat", "wilson_upper"]);
    for l in &sim.levels {
        r.row(vec![
            Cell::int(l.level_k as u64),
            Cell::int(l.errors),
            Cell::int(l.trials),
            Cell::Float(l.p_hat),
            Cell::Float(l.wilson_upper),
        ]);
    }
    r.footer.push(format!(
        "power {} {}; message errors {}; sum rate {} Q-ary digits per use",
        sim.power[0],
        sim.power[1],
        sim.message_errors,
        lifted.sum_rate()
    ));
    r.result = Some(json!({
        "levels": sim.levels,
        "trials": sim.trials,
        "seed": sim.seed,
        "noise_scale": sim.noise_scale,
        "message_errors": sim.message_errors,
        "power": sim.power,
        "sum_rate": lifted.sum_rate(),
        "gdof_estimate": lifted.gdof_estimate(),
    }));
    Ok(r)
}

fn noisy_check(a: &GaussArgs) -> Result<Report, Failure> {
    let (g, _) = gauss_params(a)?;
    let v = noisy_verdict(&g);
    let regime = serde_json::to_value(v.regime).unwrap_or(Value::Null);
    let mut r = Report::new(
        config_of("noisy-check", a),
        vec!["regime", "sum_capacity", "weak_lhs", "strong_lhs", "symmetric_mismatch"],
    );
    r.row(vec![
        Cell::text(regime.as_str().unwrap_or("?")),
        Cell::opt_float(v.sum_capacity),
        Cell::opt_float(v.weak_lhs),
        Cell::opt_float(v.strong_lhs),
        v.symmetric.map_or(Cell::Null, |s| Cell::Bool(s.mismatch)),
    ]);
    r.result = Some(serde_json::to_value(v).unwrap_or(Value::Null));
    Ok(r)
}
