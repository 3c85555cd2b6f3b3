//! Blocks: subsets of the ground set `V = {1, ..., v}` stored as bitmasks.
//!
//! Element `i` lives at bit `i - 1`. The XOR of two masks is the symmetric
//! difference of the corresponding sets, which is the group operation on `2^V`.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, BitXorAssign};

/// Largest ground set a [`Block`] can address.
pub const MAX_ELEMENTS: usize = 32;

/// A subset of the ground set.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(u32);

impl Block {
    pub const EMPTY: Block = Block(0);

    #[inline]
    pub const fn from_mask(mask: u32) -> Self {
        Block(mask)
    }

    #[inline]
    pub const fn mask(self) -> u32 {
        self.0
    }

    /// The singleton `x_i = {i}` (1-based).
    ///
    /// # Panics
    /// If `i` is zero or larger than [`MAX_ELEMENTS`].
    #[inline]
    pub fn singleton(i: usize) -> Self {
        assert!((1..=MAX_ELEMENTS).contains(&i), "element {i} out of range");
        Block(1 << (i - 1))
    }

    /// Builds a block from 1-based element labels.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        elements
            .into_iter()
            .fold(Block::EMPTY, |acc, i| acc | Block::singleton(i))
    }

    /// Parses a characteristic tuple such as `"0110010"`; the leftmost
    /// character is element 1.
    pub fn from_tuple(tuple: &str) -> Option<Self> {
        if tuple.len() > MAX_ELEMENTS {
            return None;
        }
        let mut mask = 0u32;
        for (pos, ch) in tuple.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => mask |= 1 << pos,
                _ => return None,
            }
        }
        Some(Block(mask))
    }

    /// Characteristic tuple of length `v`, element 1 first.
    pub fn to_tuple(self, v: usize) -> String {
        (0..v)
            .map(|pos| if self.0 >> pos & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Number of elements (the block's size).
    #[inline]
    pub const fn len(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Whether the 1-based element `i` is in the block.
    #[inline]
    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_ELEMENTS).contains(&i) && self.0 >> (i - 1) & 1 == 1
    }

    #[inline]
    pub const fn is_subset_of(self, other: Block) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub const fn is_disjoint(self, other: Block) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub const fn without(self, other: Block) -> Block {
        Block(self.0 & !other.0)
    }

    /// Whether every element of the block is at most `v`.
    #[inline]
    pub const fn fits(self, v: usize) -> bool {
        v >= MAX_ELEMENTS || self.0 >> v == 0
    }

    /// 1-based elements in increasing order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(bit + 1)
            }
        })
    }

    /// All subsets of `self`, starting from the empty set.
    pub fn subsets(self) -> impl Iterator<Item = Block> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(Block(cur))
        })
    }
}

impl BitXor for Block {
    type Output = Block;
    #[inline]
    fn bitxor(self, rhs: Block) -> Block {
        Block(self.0 ^ rhs.0)
    }
}

impl BitXorAssign for Block {
    #[inline]
    fn bitxor_assign(&mut self, rhs: Block) {
        self.0 ^= rhs.0;
    }
}

impl BitOr for Block {
    type Output = Block;
    #[inline]
    fn bitor(self, rhs: Block) -> Block {
        Block(self.0 | rhs.0)
    }
}

impl BitAnd for Block {
    type Output = Block;
    #[inline]
    fn bitand(self, rhs: Block) -> Block {
        Block(self.0 & rhs.0)
    }
}

/// Monomial notation: `x1x2x3`, with `1` for the empty block.
impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for i in self.elements() {
            write!(f, "x{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block({self})")
    }
}

/// Iterates over all `k`-subsets of `within` in increasing mask order.
pub(crate) fn subsets_of_size(within: Block, k: usize) -> impl Iterator<Item = Block> {
    let positions: Vec<u32> = within.elements().map(|i| (i - 1) as u32).collect();
    let n = positions.len();
    let mut idx: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let cur = idx.as_mut()?;
        let mask = cur.iter().fold(0u32, |m, &j| m | 1 << positions[j]);
        // advance to the next combination
        let mut pos = k;
        loop {
            if pos == 0 {
                idx = None;
                break;
            }
            pos -= 1;
            if cur[pos] < n - k + pos {
                cur[pos] += 1;
                for j in pos + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(Block(mask))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_convention() {
        let b = Block::from_tuple("0110010").unwrap();
        assert_eq!(b, Block::from_elements([2, 3, 6]));
        assert_eq!(b.mask(), 0b0100110);
        assert_eq!(b.mask(), 38);
        assert_eq!(b.to_tuple(7), "0110010");
    }

    #[test]
    fn xor_is_symmetric_difference() {
        let a = Block::from_elements([1, 2, 5]);
        let b = Block::from_elements([2, 3]);
        assert_eq!(a ^ b, Block::from_elements([1, 3, 5]));
    }

    #[test]
    fn subset_iteration() {
        let b = Block::from_elements([1, 3, 4]);
        let subs: Vec<_> = b.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|s| s.is_subset_of(b)));
        let pairs: Vec<_> = subsets_of_size(b, 2).collect();
        assert_eq!(pairs.len(), 3);
        assert!(pairs.iter().all(|s| s.len() == 2 && s.is_subset_of(b)));
        assert_eq!(subsets_of_size(b, 0).count(), 1);
        assert_eq!(subsets_of_size(b, 4).count(), 0);
    }

    #[test]
    fn display() {
        assert_eq!(Block::EMPTY.to_string(), "1");
        assert_eq!(Block::from_elements([1, 3]).to_string(), "x1x3");
    }
}
