use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::builders::build_scheme;
use super::roundtrip::RoundTrip;
use super::validate::validate_linear_scheme;
use crate::det::{sym_sum_capacity, Message, SymDetParams};
use crate::error::Result;
use crate::linalg::FieldMatrix;
use crate::rational::RationalJson;

/// Grid and effort settings for a build/validate/round-trip sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub min_nd: usize,
    pub max_nd: usize,
    /// `nc` runs over `0..=nc_factor * nd`.
    pub nc_factor: usize,
    /// Explicit `(nc, nd)` points replacing the grid when non-empty.
    pub points: Vec<(usize, usize)>,
    /// Schemes with at most this many message symbols are checked exhaustively.
    pub exhaustive_bits: usize,
    pub random_tuples: u64,
    pub seed: u64,
    /// Corrupts the scheme at this point (negative control).
    pub inject_fault: Option<(usize, usize)>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            min_nd: 1,
            max_nd: 20,
            nc_factor: 2,
            points: Vec::new(),
            exhaustive_bits: 16,
            random_tuples: 1000,
            seed: 0,
            inject_fault: None,
        }
    }
}

impl SweepConfig {
    pub fn grid(&self) -> Vec<(usize, usize)> {
        if !self.points.is_empty() {
            return self.points.clone();
        }
        (self.min_nd..=self.max_nd)
            .flat_map(|nd| (0..=self.nc_factor * nd).map(move |nc| (nc, nd)))
            .filter(|&(nc, nd)| nc + nd > 0)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub nc: usize,
    pub nd: usize,
    pub construction: Option<super::scheme::Construction>,
    pub extension: usize,
    pub sum_rate: Option<RationalJson>,
    pub capacity: RationalJson,
    pub rate_matches: bool,
    pub valid: bool,
    pub exhaustive: bool,
    pub tuples: u64,
    pub errors: u64,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub passed: usize,
    pub failed: usize,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn point_seed(seed: u64, nc: usize, nd: usize) -> u64 {
    seed ^ ((nd as u64) << 32 | nc as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn check_point(cfg: &SweepConfig, nc: usize, nd: usize) -> SweepRow {
    let capacity = sym_sum_capacity(SymDetParams::new(nc, nd));
    let mut row = SweepRow {
        nc,
        nd,
        construction: None,
        extension: 0,
        sum_rate: None,
        capacity: capacity.into(),
        rate_matches: false,
        valid: false,
        exhaustive: false,
        tuples: 0,
        errors: 0,
        pass: false,
        error: None,
    };
    let outcome = (|| -> Result<()> {
        let mut s = build_scheme(nc, nd)?;
        if cfg.inject_fault == Some((nc, nd)) {
            if let Some(m) = Message::ALL.into_iter().find(|&m| s.bits(m) > 0) {
                let mut p = s.precoder(m).clone();
                for r in 0..p.rows() {
                    p.set(r, 0, 0);
                }
                s = s.with_precoder(m, p)?;
            }
        }
        row.construction = Some(s.construction);
        row.extension = s.extension;
        row.sum_rate = Some(s.sum_rate().into());
        row.rate_matches = s.sum_rate() == capacity;
        row.valid = validate_linear_scheme(&s.channel, &s)?.valid;
        if !row.valid {
            return Ok(());
        }
        let rt = RoundTrip::new(&s.channel, &s)?;
        row.exhaustive = rt.total_bits() <= cfg.exhaustive_bits;
        let (tuples, errors) =
            if row.exhaustive { rt.exhaustive()? } else { rt.random(cfg.random_tuples, point_seed(cfg.seed, nc, nd))? };
        row.tuples = tuples;
        row.errors = errors;
        Ok(())
    })();
    if let Err(e) = outcome {
        row.error = Some(e.to_string());
    }
    row.pass = row.error.is_none() && row.valid && row.rate_matches && row.errors == 0;
    row
}

/// Builds, validates and round-trips the scheme at every grid point.
pub fn run_sweep(cfg: &SweepConfig) -> SweepReport {
    let rows: Vec<SweepRow> = cfg.grid().par_iter().map(|&(nc, nd)| check_point(cfg, nc, nd)).collect();
    let passed = rows.iter().filter(|r| r.pass).count();
    SweepReport { config: cfg.clone(), passed, failed: rows.len() - passed, rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_sweep_passes() {
        let cfg = SweepConfig { max_nd: 1, ..Default::default() };
        let r = run_sweep(&cfg);
        assert_eq!(r.rows.len(), 3);
        assert!(r.all_passed());
    }

    #[test]
    fn injected_fault_fails() {
        let cfg = SweepConfig { max_nd: 3, inject_fault: Some((2, 3)), ..Default::default() };
        let r = run_sweep(&cfg);
        assert_eq!(r.failed, 1);
        let bad = r.rows.iter().find(|row| !row.pass).unwrap();
        assert_eq!((bad.nc, bad.nd), (2, 3));
    }

    #[test]
    fn config_parses_from_json() {
        let cfg: SweepConfig = serde_json::from_str(r#"{"max_nd": 4, "seed": 9}"#).unwrap();
        assert_eq!((cfg.max_nd, cfg.seed, cfg.exhaustive_bits), (4, 9, 16));
        assert!(serde_json::from_str::<SweepConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
