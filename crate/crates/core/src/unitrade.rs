//! Unitrades: block sets in which every small subset is covered an even
//! number of times.

use crate::block::{subsets_of_size, Block, MAX_ELEMENTS};
use crate::error::{Result, TradeError};
use crate::trade::{compress_mask, superset_sums, SignedTrade};

/// A plain set of blocks over `2^V`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Unitrade {
    v: usize,
    blocks: Vec<Block>,
}

impl Unitrade {
    /// Rejects blocks outside `2^V` and repeated blocks.
    pub fn from_blocks<I: IntoIterator<Item = Block>>(v: usize, blocks: I) -> Result<Self> {
        if v > MAX_ELEMENTS {
            return Err(TradeError::UniverseTooLarge { v, cap: MAX_ELEMENTS });
        }
        let mut blocks: Vec<Block> = blocks.into_iter().collect();
        if let Some(b) = blocks.iter().find(|b| !b.fits(v)) {
            return Err(TradeError::BlockOutOfRange { mask: b.mask(), v });
        }
        blocks.sort_unstable();
        if blocks.windows(2).any(|w| w[0] == w[1]) {
            return Err(TradeError::InvalidParameter("repeated block in a unitrade".into()));
        }
        Ok(Unitrade { v, blocks })
    }

    pub(crate) fn from_sorted(v: usize, blocks: Vec<Block>) -> Self {
        debug_assert!(blocks.windows(2).all(|w| w[0] < w[1]));
        Unitrade { v, blocks }
    }

    pub fn empty(v: usize) -> Self {
        Unitrade { v, blocks: Vec::new() }
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.v
    }

    #[inline]
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains(&self, b: Block) -> bool {
        self.blocks.binary_search(&b).is_ok()
    }

    /// `|U| / 2`, rounded down.
    pub fn volume(&self) -> usize {
        self.blocks.len() / 2
    }

    pub fn foundation(&self) -> Block {
        self.blocks.iter().fold(Block::EMPTY, |acc, &b| acc | b)
    }

    /// Whether every `S` with `|S| <= t` lies in an even number of blocks.
    pub fn is_unitrade(&self, t: usize) -> Result<bool> {
        if t > self.v {
            return Err(TradeError::InvalidParameter(format!(
                "strength t = {t} exceeds universe size v = {}",
                self.v
            )));
        }
        let found = self.foundation();
        let f = found.len() as usize;
        if f <= 20 {
            let mut table = vec![0u32; 1usize << f];
            for &b in &self.blocks {
                table[compress_mask(b.mask(), found.mask()) as usize] += 1;
            }
            superset_sums(&mut table, f);
            return Ok(table
                .iter()
                .enumerate()
                .all(|(idx, &n)| n % 2 == 0 || idx.count_ones() as usize > t));
        }
        for k in 0..=t.min(f) {
            for s in subsets_of_size(found, k) {
                let n = self.blocks.iter().filter(|b| s.is_subset_of(**b)).count();
                if n % 2 == 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Symmetric difference of two block sets.
    pub fn symmetric_difference(&self, other: &Unitrade) -> Unitrade {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.blocks, &other.blocks);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(*x);
                    i += 1;
                }
                (Some(x), None) => {
                    out.push(*x);
                    i += 1;
                }
                (_, Some(y)) => {
                    out.push(*y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Unitrade { v: self.v.max(other.v), blocks: out }
    }

    /// Attaches `signs[k]` to the `k`-th block (sorted order).
    pub fn with_signs(&self, signs: &[i64]) -> Result<SignedTrade> {
        if signs.len() != self.blocks.len() {
            return Err(TradeError::InvalidParameter("one sign per block required".into()));
        }
        SignedTrade::from_terms(self.v, self.blocks.iter().copied().zip(signs.iter().copied()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuples(v: usize, ts: &[&str]) -> Unitrade {
        Unitrade::from_blocks(v, ts.iter().map(|t| Block::from_tuple(t).unwrap())).unwrap()
    }

    #[test]
    fn rm_example_is_two_unitrade() {
        let u = tuples(
            6,
            &["111000", "111001", "111010", "111011", "110100", "110101", "110110", "110111"],
        );
        assert!(u.is_unitrade(2).unwrap());
        assert!(!u.is_unitrade(3).unwrap());
    }

    #[test]
    fn volume_three_example_is_one_unitrade() {
        let u = tuples(5, &["00111", "10011", "01011", "11001", "11100", "11010"]);
        assert!(u.is_unitrade(1).unwrap());
        assert_eq!(u.volume(), 3);
    }

    #[test]
    fn affine_subspace_is_unitrade() {
        // x5 + <x1, x2x3, x4>: a 3-dimensional coset
        let gens = [Block::from_elements([1]), Block::from_elements([2, 3]), Block::from_elements([4])];
        let origin = Block::from_elements([5]);
        let blocks: Vec<Block> = (0u32..8)
            .map(|sel| {
                (0..3).filter(|k| sel >> k & 1 == 1).fold(origin, |acc, k| acc ^ gens[k])
            })
            .collect();
        let u = Unitrade::from_blocks(5, blocks).unwrap();
        assert!(u.is_unitrade(2).unwrap());
    }

    #[test]
    fn rejects_repeats_and_bad_t() {
        assert!(Unitrade::from_blocks(2, [Block::EMPTY, Block::EMPTY]).is_err());
        assert!(Unitrade::from_blocks(2, [Block::from_elements([3])]).is_err());
        assert!(Unitrade::empty(2).is_unitrade(3).is_err());
    }
}
