use super::boxes::{pack_boxes, BoxAssignment};
use super::chains::cyclic_decompose_blocks;
use super::scheme::{Construction, LinearScheme};
use super::validate::validate_linear_scheme;
use crate::det::{DetParams, SymDetParams};
use crate::error::{Error, Result};
use crate::linalg::{concat_cols, BitMatrix, FieldMatrix};
use crate::rational::{int, rat, Rational};

fn ratio(nc: usize, nd: usize) -> Result<Rational> {
    if nd == 0 {
        return Err(Error::OutOfRange("nd must be positive".into()));
    }
    Ok(rat(nc as i64, nd as i64))
}

fn require(nc: usize, nd: usize, lo: Rational, hi: Rational) -> Result<()> {
    let r = ratio(nc, nd)?;
    if r < lo || r >= hi {
        return Err(Error::OutOfRange(format!("nc/nd = {nc}/{nd} outside [{lo}, {hi})")));
    }
    Ok(())
}

fn unit_columns(rows: usize, levels: &[usize]) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows, levels.len());
    for (c, &l) in levels.iter().enumerate() {
        m.set(l, c, 1);
    }
    m
}

fn channel(nc: usize, nd: usize) -> DetParams {
    DetParams::from(SymDetParams::new(nc, nd))
}

/// Scheme that sends nothing.
pub fn empty_scheme(p: DetParams, extension: usize) -> Result<LinearScheme<BitMatrix>> {
    let rows = extension * p.q();
    let z = BitMatrix::zeros(rows, 0);
    LinearScheme::new(p, extension, Construction::Empty, [z.clone(), z.clone(), z.clone(), z])
}

/// Levels used by each transmitter when the channel is run as an interference
/// channel: lowest-first greedy, skipping any level whose interference image
/// would land on an already chosen level.
fn greedy_levels(nd: usize, s: usize) -> Vec<usize> {
    let mut chosen = vec![false; nd];
    for r in 0..nd {
        chosen[r] = !(r >= s && chosen[r - s]);
    }
    (0..nd).filter(|&r| chosen[r]).collect()
}

fn levels_compatible(levels: &[usize], s: usize) -> bool {
    levels.iter().all(|&r| r < s || !levels.contains(&(r - s)))
}

/// Lexicographically first `size`-subset of `0..nd` compatible with shift `s`.
fn exhaustive_levels(nd: usize, s: usize, size: usize) -> Option<Vec<usize>> {
    fn go(next: usize, nd: usize, s: usize, size: usize, acc: &mut Vec<usize>) -> bool {
        if acc.len() == size {
            return true;
        }
        for r in next..nd {
            if nd - r < size - acc.len() {
                return false;
            }
            if r >= s && acc.contains(&(r - s)) {
                continue;
            }
            acc.push(r);
            if go(r + 1, nd, s, size, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let mut acc = Vec::new();
    go(0, nd, s, size, &mut acc).then_some(acc)
}

pub const EXHAUSTIVE_LEVEL_LIMIT: usize = 20;

/// Cross messages silent; each user keeps the levels its own receiver sees
/// free of interference.
pub fn build_scheme_case1(nc: usize, nd: usize) -> Result<LinearScheme<BitMatrix>> {
    require(nc, nd, int(0), rat(2, 3))?;
    let s = nd - nc;
    let per_user = if 2 * nc < nd { nd - nc } else { nc };
    let mut levels = greedy_levels(nd, s);
    if levels.len() != per_user || !levels_compatible(&levels, s) {
        if nd > EXHAUSTIVE_LEVEL_LIMIT {
            return Err(Error::InvalidScheme(format!("no level allocation found for ({nc},{nd})")));
        }
        levels = exhaustive_levels(nd, s, per_user)
            .ok_or_else(|| Error::InvalidScheme(format!("no level allocation exists for ({nc},{nd})")))?;
    }
    let p = unit_columns(nd, &levels);
    let z = BitMatrix::zeros(nd, 0);
    let scheme =
        LinearScheme::new(channel(nc, nd), 1, Construction::InterferenceChannel, [p.clone(), z.clone(), z, p])?;
    certified(scheme)
}

/// Own message on levels `[0, s)` and `[3s, nd)`, cross message on `[s, 2s)`,
/// levels `[2s, 3s)` left empty so the cross message arrives there cleanly.
pub fn build_scheme_case2(nc: usize, nd: usize) -> Result<LinearScheme<BitMatrix>> {
    require(nc, nd, rat(2, 3), rat(3, 4))?;
    let s = nd - nc;
    let own: Vec<usize> = (0..s).chain(3 * s..nd).collect();
    let cross: Vec<usize> = (s..2 * s).collect();
    let p_own = unit_columns(nd, &own);
    let p_cross = unit_columns(nd, &cross);
    let scheme = LinearScheme::new(
        channel(nc, nd),
        1,
        Construction::LayeredAlignment,
        [p_own.clone(), p_cross.clone(), p_cross, p_own],
    )?;
    certified(scheme)
}

fn box_scheme(
    nc: usize,
    nd: usize,
    a: &BoxAssignment,
    extension: usize,
    construction: Construction,
) -> Result<LinearScheme<BitMatrix>> {
    let v = a.v();
    let own = concat_cols(&[&v, &a.v_null()])?;
    let cross = a.apply_h(&v);
    let scheme = LinearScheme::new(channel(nc, nd), extension, construction, [own.clone(), cross.clone(), cross, own])?;
    certified(scheme)
}

/// `X_i = V a + V_null b + H V c` with `H = S^{nd-nc}`: the cross message is
/// pre-shifted so both interfering messages arrive in `col(HV)`.
pub fn build_precoder_case3(nc: usize, nd: usize) -> Result<LinearScheme<BitMatrix>> {
    require(nc, nd, rat(3, 4), int(1))?;
    if !nc.is_multiple_of(3) {
        return Err(Error::OutOfRange(format!("nc = {nc} is not divisible by 3")));
    }
    let a = pack_boxes(&cyclic_decompose_blocks(nd, nc, 1)?)?;
    box_scheme(nc, nd, &a, 1, Construction::BoxAlignment)
}

/// The same construction over three channel uses with block-diagonal `H`.
pub fn build_precoder_extended(nc: usize, nd: usize) -> Result<LinearScheme<BitMatrix>> {
    require(nc, nd, rat(3, 4), int(1))?;
    let a = pack_boxes(&cyclic_decompose_blocks(nd, nc, 3)?)?;
    box_scheme(nc, nd, &a, 3, Construction::ExtendedBoxAlignment)
}

fn certified(s: LinearScheme<BitMatrix>) -> Result<LinearScheme<BitMatrix>> {
    let cert = validate_linear_scheme(&s.channel, &s)?;
    if !cert.valid {
        return Err(Error::InvalidScheme(cert.summary()));
    }
    Ok(s)
}

/// Sum-capacity-achieving scheme for any `(nc, nd)` other than `(0, 0)`.
pub fn build_scheme(nc: usize, nd: usize) -> Result<LinearScheme<BitMatrix>> {
    if nc == 0 && nd == 0 {
        return Err(Error::OutOfRange("nc and nd are both zero".into()));
    }
    if nc > nd {
        return Ok(build_scheme(nd, nc)?.swap_receivers());
    }
    if nc == nd {
        let z = BitMatrix::zeros(nd, 0);
        let scheme = LinearScheme::new(
            channel(nc, nd),
            1,
            Construction::SingleUser,
            [BitMatrix::identity(nd), z.clone(), z.clone(), z],
        )?;
        return certified(scheme);
    }
    let r = rat(nc as i64, nd as i64);
    if r < rat(2, 3) {
        build_scheme_case1(nc, nd)
    } else if r < rat(3, 4) {
        build_scheme_case2(nc, nd)
    } else if nc.is_multiple_of(3) {
        build_precoder_case3(nc, nd)
    } else {
        build_precoder_extended(nc, nd)
    }
}
