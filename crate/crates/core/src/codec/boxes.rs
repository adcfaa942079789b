use serde::Serialize;

use super::chains::ChainDecomposition;
use crate::error::{Error, Result};
use crate::linalg::{concat_cols, BitMatrix, FieldMatrix};
use crate::rational::{int, rat};

/// One box: generator `v` (a sum of standard basis vectors) contributing
/// `v, Hv, H^2 v`, and the three chain positions it accounts for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PackedBox {
    pub generator: Vec<usize>,
    pub circles: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxAssignment {
    pub dim: usize,
    pub nd: usize,
    pub shift: usize,
    pub boxes: Vec<PackedBox>,
    pub kernel: Vec<usize>,
    /// Whether the generic search had to replace the direct construction.
    pub searched: bool,
    pub g_rank: usize,
}

impl BoxAssignment {
    /// `V`: one column per box generator.
    pub fn v(&self) -> BitMatrix {
        let mut v = BitMatrix::zeros(self.dim, self.boxes.len());
        for (c, b) in self.boxes.iter().enumerate() {
            for &l in &b.generator {
                let cur = v.get(l, c);
                v.set(l, c, cur ^ 1);
            }
        }
        v
    }

    /// `H M` for the block-diagonal `H = diag(S^s, ...)`.
    pub fn apply_h(&self, m: &BitMatrix) -> BitMatrix {
        m.block_shift_rows(self.nd, self.shift)
    }

    pub fn v_null(&self) -> BitMatrix {
        unit_columns(self.dim, &self.kernel)
    }

    /// `G = [V | HV | H^2 V | V_null]`.
    pub fn g(&self) -> BitMatrix {
        let v = self.v();
        let hv = self.apply_h(&v);
        let h2v = self.apply_h(&hv);
        concat_cols(&[&v, &hv, &h2v, &self.v_null()]).expect("blocks share the row count")
    }
}

fn unit_columns(dim: usize, levels: &[usize]) -> BitMatrix {
    let mut m = BitMatrix::zeros(dim, levels.len());
    for (c, &l) in levels.iter().enumerate() {
        m.set(l, c, 1);
    }
    m
}

fn check_preconditions(d: &ChainDecomposition) -> Result<()> {
    let ratio = rat(d.nc as i64, d.nd as i64);
    if ratio < rat(3, 4) || ratio >= int(1) {
        return Err(Error::OutOfRange(format!("box packing needs 3/4 <= nc/nd < 1, got {}/{}", d.nc, d.nd)));
    }
    if !d.non_kernel_count().is_multiple_of(3) {
        return Err(Error::OutOfRange(format!(
            "{} non-kernel positions cannot be split into triples",
            d.non_kernel_count()
        )));
    }
    Ok(())
}

/// Position `h` steps above the kernel end of `chain`.
fn at_height(chain: &[usize], h: usize) -> usize {
    chain[chain.len() - 1 - h]
}

fn direct_boxes(d: &ChainDecomposition) -> Vec<PackedBox> {
    let mut boxes = Vec::new();
    let mut singles = Vec::new();
    let mut doubles = Vec::new();
    for chain in &d.chains {
        let n = chain.len() - 1;
        for t in 0..n / 3 {
            boxes.push(PackedBox { generator: vec![chain[3 * t]], circles: chain[3 * t..3 * t + 3].to_vec() });
        }
        match n % 3 {
            1 => singles.push(chain.as_slice()),
            2 => doubles.push(chain.as_slice()),
            _ => {}
        }
    }
    let pairs = singles.len().min(doubles.len());
    for (b, a) in doubles.iter().zip(&singles).take(pairs) {
        boxes.push(PackedBox {
            generator: vec![at_height(b, 2), at_height(a, 3)],
            circles: vec![at_height(b, 2), at_height(b, 1), at_height(a, 1)],
        });
    }
    for t in singles[pairs..].chunks(3) {
        if let [a1, a2, a3] = t {
            boxes.push(PackedBox {
                generator: vec![at_height(a1, 1), at_height(a2, 2), at_height(a3, 3)],
                circles: vec![at_height(a1, 1), at_height(a2, 1), at_height(a3, 1)],
            });
        }
    }
    for t in doubles[pairs..].chunks(3) {
        if let [b1, b2, b3] = t {
            boxes.push(PackedBox {
                generator: vec![at_height(b1, 2), at_height(b2, 3)],
                circles: vec![at_height(b1, 2), at_height(b1, 1), at_height(b2, 1)],
            });
            boxes.push(PackedBox {
                generator: vec![at_height(b3, 2), at_height(b2, 4)],
                circles: vec![at_height(b3, 2), at_height(b3, 1), at_height(b2, 2)],
            });
        }
    }
    boxes
}

fn assemble(d: &ChainDecomposition, boxes: Vec<PackedBox>, searched: bool) -> BoxAssignment {
    let mut a =
        BoxAssignment { dim: d.dim(), nd: d.nd, shift: d.shift(), boxes, kernel: d.kernel(), searched, g_rank: 0 };
    a.g_rank = a.g().rank();
    a
}

/// Packs the non-kernel chain positions into `nc/3` boxes per block and
/// certifies `rank(G) = dim` before returning.
pub fn pack_boxes(d: &ChainDecomposition) -> Result<BoxAssignment> {
    check_preconditions(d)?;
    let direct = assemble(d, direct_boxes(d), false);
    if direct.g_rank == d.dim() && direct.boxes.len() * 3 == d.non_kernel_count() {
        return Ok(direct);
    }
    search_boxes(d, DEFAULT_SEARCH_BUDGET)
        .map_err(|_| Error::CertificateFailed { rank: direct.g_rank, expected: d.dim() })
}

pub const DEFAULT_SEARCH_BUDGET: usize = 200_000;

/// Incremental GF(2) basis over packed words.
#[derive(Clone)]
struct XorBasis {
    rows: Vec<(usize, Vec<u64>)>,
}

impl XorBasis {
    fn new() -> Self {
        XorBasis { rows: Vec::new() }
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (pivot, row) in &self.rows {
            if (v[pivot / 64] >> (pivot % 64)) & 1 == 1 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a ^= b;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<u64>) -> bool {
        let v = self.reduce(v);
        let Some(w) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let pivot = w * 64 + v[w].trailing_zeros() as usize;
        self.rows.push((pivot, v));
        true
    }
}

/// Backtracking search over generators made of one or two non-kernel
/// positions, accepting a box only when it raises the rank by three.
pub fn search_boxes(d: &ChainDecomposition, budget: usize) -> Result<BoxAssignment> {
    check_preconditions(d)?;
    let dim = d.dim();
    let words = dim.div_ceil(64);
    let (nd, s) = (d.nd, d.shift());
    let to_vec = |levels: &[usize]| {
        let mut v = vec![0u64; words];
        for &l in levels {
            v[l / 64] ^= 1 << (l % 64);
        }
        v
    };
    let h = |levels: &[usize]| -> Vec<usize> { levels.iter().filter(|&&l| l % nd + s < nd).map(|&l| l + s).collect() };
    let kernel = d.kernel();
    let non_kernel: Vec<usize> = (0..dim).filter(|l| !kernel.contains(l)).collect();
    let mut candidates: Vec<Vec<usize>> = non_kernel.iter().map(|&a| vec![a]).collect();
    for (i, &a) in non_kernel.iter().enumerate() {
        for &b in &non_kernel[i + 1..] {
            candidates.push(vec![a, b]);
        }
    }
    let mut base = XorBasis::new();
    for &k in &kernel {
        base.insert(to_vec(&[k]));
    }
    let needed = d.non_kernel_count() / 3;
    let mut visited = 0usize;

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        basis: &XorBasis,
        start: usize,
        chosen: &mut Vec<usize>,
        needed: usize,
        candidates: &[Vec<usize>],
        triple: &dyn Fn(&[usize]) -> [Vec<u64>; 3],
        visited: &mut usize,
        budget: usize,
    ) -> bool {
        if chosen.len() == needed {
            return true;
        }
        for (i, cand) in candidates.iter().enumerate().skip(start) {
            *visited += 1;
            if *visited > budget {
                return false;
            }
            let mut next = basis.clone();
            if triple(cand).into_iter().all(|v| next.insert(v)) {
                chosen.push(i);
                if dfs(&next, i + 1, chosen, needed, candidates, triple, visited, budget) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let triple = |g: &[usize]| {
        let hg = h(g);
        let h2g = h(&hg);
        [to_vec(g), to_vec(&hg), to_vec(&h2g)]
    };
    let mut chosen = Vec::new();
    if !dfs(&base, 0, &mut chosen, needed, &candidates, &triple, &mut visited, budget) {
        return Err(Error::CertificateFailed { rank: kernel.len() + 3 * chosen.len(), expected: dim });
    }
    let boxes = chosen
        .iter()
        .map(|&i| {
            let g = candidates[i].clone();
            let hg = h(&g);
            let circles = vec![g[0], hg.first().copied().unwrap_or(g[0]), h(&hg).first().copied().unwrap_or(g[0])];
            PackedBox { generator: g, circles }
        })
        .collect();
    let a = assemble(d, boxes, true);
    if a.g_rank != dim {
        return Err(Error::CertificateFailed { rank: a.g_rank, expected: dim });
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::chains::{cyclic_decompose, cyclic_decompose_blocks};

    fn covered_once(a: &BoxAssignment, d: &ChainDecomposition) -> bool {
        let mut seen: Vec<usize> = a.boxes.iter().flat_map(|b| b.circles.clone()).collect();
        seen.sort_unstable();
        let mut expect: Vec<usize> = d.chains.iter().flat_map(|c| c[..c.len() - 1].to_vec()).collect();
        expect.sort_unstable();
        seen == expect
    }

    #[test]
    fn fifteen_twelve() {
        let d = cyclic_decompose(15, 12).unwrap();
        let a = pack_boxes(&d).unwrap();
        assert_eq!(a.kernel.len(), 3);
        assert_eq!(a.boxes.len(), 4);
        let g = a.g();
        assert_eq!((g.rows(), g.cols(), g.rank()), (15, 15, 15));
        assert!(!a.searched);
        assert!(covered_once(&a, &d));
    }

    #[test]
    fn four_three() {
        let d = cyclic_decompose(4, 3).unwrap();
        let a = pack_boxes(&d).unwrap();
        assert_eq!(a.boxes, vec![PackedBox { generator: vec![0], circles: vec![0, 1, 2] }]);
        assert_eq!(a.g(), BitMatrix::identity(4));
    }

    #[test]
    fn eight_six_matches_exhaustive_search() {
        let d = cyclic_decompose(8, 6).unwrap();
        let a = pack_boxes(&d).unwrap();
        assert_eq!((a.kernel.len(), a.boxes.len(), a.g_rank), (2, 2, 8));
        // independent oracle: scan every pair of generators in F_2^8
        let h = |v: u32| (v << 2) & 0xff;
        let rank = |vs: &[u32]| {
            let mut pivots = [0u32; 8];
            let mut r = 0;
            for &v in vs {
                let mut x = v;
                for bit in (0..8).rev() {
                    if (x >> bit) & 1 == 0 {
                        continue;
                    }
                    if pivots[bit] == 0 {
                        pivots[bit] = x;
                        r += 1;
                        break;
                    }
                    x ^= pivots[bit];
                }
            }
            r
        };
        // level l is bit l; kernel levels 6 and 7
        let kernel = [1u32 << 6, 1 << 7];
        let mut found = 0;
        for v1 in 1u32..256 {
            for v2 in v1 + 1..256 {
                let mut vs = vec![v1, h(v1), h(h(v1)), v2, h(v2), h(h(v2))];
                vs.extend(kernel);
                if rank(&vs) == 8 {
                    found += 1;
                }
            }
        }
        assert!(found > 0);
        let gens: Vec<u32> = a.boxes.iter().map(|b| b.generator.iter().fold(0, |acc, &l| acc ^ (1 << l))).collect();
        let mut vs: Vec<u32> = gens.iter().flat_map(|&v| [v, h(v), h(h(v))]).collect();
        vs.extend(kernel);
        assert_eq!(rank(&vs), 8);
    }

    #[test]
    fn search_agrees_with_direct_construction() {
        for (nd, nc) in [(8, 6), (15, 12), (12, 9), (16, 12)] {
            let d = cyclic_decompose(nd, nc).unwrap();
            let a = search_boxes(&d, DEFAULT_SEARCH_BUDGET).unwrap();
            assert_eq!(a.g_rank, nd);
            assert_eq!(a.boxes.len(), nc / 3);
            assert!(a.searched);
        }
    }

    #[test]
    fn extended_packings() {
        let d = cyclic_decompose_blocks(13, 10, 3).unwrap();
        let a = pack_boxes(&d).unwrap();
        assert_eq!((a.boxes.len(), a.g_rank), (10, 39));
        let d = cyclic_decompose_blocks(17, 13, 3).unwrap();
        let a = pack_boxes(&d).unwrap();
        assert_eq!(a.boxes.len(), 13);
        assert_eq!(a.boxes.iter().map(|b| b.circles.len()).sum::<usize>(), 39);
        assert_eq!(a.g_rank, 51);
        assert!(covered_once(&a, &d));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(pack_boxes(&cyclic_decompose(10, 7).unwrap()).is_err());
        assert!(pack_boxes(&cyclic_decompose(13, 10).unwrap()).is_err());
    }

    #[test]
    fn all_divisible_instances_certify() {
        for nd in 2..=60usize {
            for nc in (1..nd).filter(|nc| 4 * nc >= 3 * nd) {
                let blocks = if nc % 3 == 0 { 1 } else { 3 };
                let d = cyclic_decompose_blocks(nd, nc, blocks).unwrap();
                let a = pack_boxes(&d).unwrap();
                assert_eq!(a.g_rank, blocks * nd, "nd={nd} nc={nc}");
                assert_eq!(a.boxes.len(), blocks * nc / 3);
                assert!(!a.searched, "nd={nd} nc={nc} needed search");
                assert!(covered_once(&a, &d));
            }
        }
    }
}
