use serde::Serialize;

use crate::error::{Error, Result};

/// Decomposition of the level space into `H`-invariant chains, `H = S^s` with
/// `s = nd - nc`, optionally repeated over `blocks` independent channel uses.
///
/// Chain `i` of block `b` lists levels `b*nd + i, b*nd + i + s, ...` from the top;
/// its last element spans part of `ker H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainDecomposition {
    pub nd: usize,
    pub nc: usize,
    pub blocks: usize,
    pub chains: Vec<Vec<usize>>,
}

impl ChainDecomposition {
    pub fn shift(&self) -> usize {
        self.nd - self.nc
    }

    pub fn dim(&self) -> usize {
        self.blocks * self.nd
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.chains.iter().filter_map(|c| c.last().copied()).collect()
    }

    pub fn non_kernel_count(&self) -> usize {
        self.chains.iter().map(|c| c.len() - 1).sum()
    }

    /// Longest minus shortest chain.
    pub fn length_spread(&self) -> usize {
        let lens = self.chains.iter().map(Vec::len);
        lens.clone().max().unwrap_or(0) - lens.min().unwrap_or(0)
    }
}

pub fn cyclic_decompose(nd: usize, nc: usize) -> Result<ChainDecomposition> {
    cyclic_decompose_blocks(nd, nc, 1)
}

pub fn cyclic_decompose_blocks(nd: usize, nc: usize, blocks: usize) -> Result<ChainDecomposition> {
    if nc == 0 || nc >= nd {
        return Err(Error::OutOfRange(format!("chains need 0 < nc < nd, got nc={nc}, nd={nd}")));
    }
    if blocks == 0 {
        return Err(Error::EmptyDimension);
    }
    let s = nd - nc;
    let chains =
        (0..blocks).flat_map(|b| (0..s).map(move |i| (i..nd).step_by(s).map(|l| b * nd + l).collect())).collect();
    Ok(ChainDecomposition { nd, nc, blocks, chains })
}
