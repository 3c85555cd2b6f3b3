//! Signed trades: integer-valued functions on `2^V`.
//!
//! A trade `T = Σ τ_X X` keeps its positive leg in the positive coefficients
//! and its negative leg in the negative ones. Sums and products follow the
//! group ring `Z[(2^V, ⊕)]`, so multiplying by a block is a shift.

use std::collections::BTreeMap;
use std::fmt;

use crate::block::{subsets_of_size, Block, MAX_ELEMENTS};
use crate::error::{Result, TradeError};
use crate::unitrade::Unitrade;

/// Foundations up to this size are checked with a dense superset-sum table.
const DENSE_CHECK_LIMIT: usize = 20;

/// A finite `Z`-valued function on `2^V`, stored sparsely.
///
/// Terms are kept sorted by mask and no stored coefficient is zero, so two
/// trades are equal exactly when their term lists are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedTrade {
    v: usize,
    terms: Vec<(Block, i64)>,
}

/// Volume, foundation and element replications of a balanced trade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeStats {
    pub volume: u64,
    pub foundation: Block,
    /// `replications[i - 1]` is `r_i`, counted in the positive leg.
    pub replications: Vec<u64>,
}

fn check_universe(v: usize) -> Result<()> {
    if v > MAX_ELEMENTS {
        return Err(TradeError::UniverseTooLarge { v, cap: MAX_ELEMENTS });
    }
    Ok(())
}

impl SignedTrade {
    pub fn void(v: usize) -> Self {
        SignedTrade { v, terms: Vec::new() }
    }

    /// Sums the given `(block, coefficient)` pairs; repeated blocks accumulate
    /// and zero totals are dropped.
    pub fn from_terms<I: IntoIterator<Item = (Block, i64)>>(v: usize, terms: I) -> Result<Self> {
        check_universe(v)?;
        let mut acc: BTreeMap<Block, i64> = BTreeMap::new();
        for (block, coeff) in terms {
            if !block.fits(v) {
                return Err(TradeError::BlockOutOfRange { mask: block.mask(), v });
            }
            let slot = acc.entry(block).or_insert(0);
            *slot = slot.checked_add(coeff).ok_or(TradeError::CoefficientOverflow)?;
        }
        Ok(SignedTrade {
            v,
            terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        })
    }

    /// Builds `T₊ - T₋` from two block lists (repetitions allowed).
    pub fn from_legs(v: usize, plus: &[Block], minus: &[Block]) -> Result<Self> {
        Self::from_terms(
            v,
            plus.iter().map(|&b| (b, 1)).chain(minus.iter().map(|&b| (b, -1))),
        )
    }

    /// Internal constructor for terms that are already sorted, distinct and nonzero.
    pub(crate) fn from_sorted_terms(v: usize, terms: Vec<(Block, i64)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|&(b, c)| c != 0 && b.fits(v)));
        SignedTrade { v, terms }
    }

    /// A single block with coefficient one.
    pub fn monomial(v: usize, block: Block) -> Result<Self> {
        Self::from_terms(v, [(block, 1)])
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.v
    }

    #[inline]
    pub fn terms(&self) -> &[(Block, i64)] {
        &self.terms
    }

    #[inline]
    pub fn is_void(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, block: Block) -> i64 {
        self.terms
            .binary_search_by_key(&block, |&(b, _)| b)
            .map(|idx| self.terms[idx].1)
            .unwrap_or(0)
    }

    /// Same function viewed inside a larger (or smaller) universe.
    pub fn with_universe(&self, v: usize) -> Result<Self> {
        check_universe(v)?;
        if let Some(&(b, _)) = self.terms.iter().find(|(b, _)| !b.fits(v)) {
            return Err(TradeError::BlockOutOfRange { mask: b.mask(), v });
        }
        Ok(SignedTrade { v, terms: self.terms.clone() })
    }

    pub fn foundation(&self) -> Block {
        self.terms.iter().fold(Block::EMPTY, |acc, &(b, _)| acc | b)
    }

    /// Blocks with nonzero coefficient.
    pub fn support(&self) -> Vec<Block> {
        self.terms.iter().map(|&(b, _)| b).collect()
    }

    /// No repeated blocks: every coefficient is `±1`.
    pub fn is_simple(&self) -> bool {
        self.terms.iter().all(|&(_, c)| c == 1 || c == -1)
    }

    pub fn positive_leg(&self) -> Vec<Block> {
        self.leg(|c| c > 0)
    }

    pub fn negative_leg(&self) -> Vec<Block> {
        self.leg(|c| c < 0)
    }

    fn leg(&self, side: impl Fn(i64) -> bool) -> Vec<Block> {
        self.terms
            .iter()
            .filter(|&&(_, c)| side(c))
            .flat_map(|&(b, c)| std::iter::repeat_n(b, c.unsigned_abs() as usize))
            .collect()
    }

    fn positive_mass(&self) -> u64 {
        self.terms.iter().filter(|&&(_, c)| c > 0).map(|&(_, c)| c as u64).sum()
    }

    fn negative_mass(&self) -> u64 {
        self.terms.iter().filter(|&&(_, c)| c < 0).map(|&(_, c)| c.unsigned_abs()).sum()
    }

    /// The `[0]`-trade condition: both legs have the same size.
    pub fn is_balanced(&self) -> bool {
        self.terms.iter().map(|&(_, c)| c as i128).sum::<i128>() == 0
    }

    /// Whether `Σ_{X ⊇ S} τ_X = 0` for every `S` with `|S| <= t`.
    ///
    /// Only subsets of the foundation need checking: any other `S` has an
    /// empty sum.
    pub fn is_trade(&self, t: usize) -> Result<bool> {
        if t > self.v {
            return Err(TradeError::InvalidParameter(format!(
                "strength t = {t} exceeds universe size v = {}",
                self.v
            )));
        }
        let found = self.foundation();
        if found.len() as usize <= DENSE_CHECK_LIMIT {
            Ok(self.is_trade_dense(t))
        } else {
            Ok(self.is_trade_sparse(t))
        }
    }

    /// Direct evaluation of the superset sums, smallest `S` first.
    pub(crate) fn is_trade_sparse(&self, t: usize) -> bool {
        let found = self.foundation();
        for k in 0..=t.min(found.len() as usize) {
            for s in subsets_of_size(found, k) {
                let sum: i128 = self
                    .terms
                    .iter()
                    .filter(|&&(b, _)| s.is_subset_of(b))
                    .map(|&(_, c)| c as i128)
                    .sum();
                if sum != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Superset-sum transform over the compressed foundation.
    pub(crate) fn is_trade_dense(&self, t: usize) -> bool {
        let found = self.foundation();
        let f = found.len() as usize;
        let mut table = vec![0i128; 1usize << f];
        for &(b, c) in &self.terms {
            table[compress_mask(b.mask(), found.mask()) as usize] += c as i128;
        }
        superset_sums(&mut table, f);
        table
            .iter()
            .enumerate()
            .all(|(idx, &s)| s == 0 || idx.count_ones() as usize > t)
    }

    /// The largest `t <= v` for which this is a `[t]`-trade, or `None` if it
    /// is not even balanced. The void trade has strength `v`.
    pub fn strength(&self) -> Option<usize> {
        if !self.is_balanced() {
            return None;
        }
        let mut best = 0;
        for t in 1..=self.v {
            if self.is_trade(t).unwrap_or(false) {
                best = t;
            } else {
                break;
            }
        }
        Some(best)
    }

    fn require_balanced(&self) -> Result<()> {
        if self.is_balanced() {
            Ok(())
        } else {
            Err(TradeError::InconsistentTrade)
        }
    }

    /// `vol(T)`: the size of either leg, counted with multiplicity.
    pub fn volume(&self) -> Result<u64> {
        self.require_balanced()?;
        Ok(self.positive_mass())
    }

    /// Half the L1 mass; equals the volume on balanced trades.
    #[inline]
    pub(crate) fn half_mass(&self) -> u64 {
        (self.positive_mass() + self.negative_mass()) / 2
    }

    /// `r_α`: blocks of the positive leg containing `alpha`, with multiplicity.
    pub fn replication(&self, alpha: Block) -> Result<u64> {
        self.replication_avoiding(alpha, Block::EMPTY)
    }

    /// `r_{αβ̄}`: positive-leg blocks containing `alpha` and missing `beta`.
    pub fn replication_avoiding(&self, alpha: Block, beta: Block) -> Result<u64> {
        self.require_balanced()?;
        if !alpha.is_disjoint(beta) {
            return Err(TradeError::InvalidParameter(
                "alpha and beta must be disjoint".into(),
            ));
        }
        Ok(self
            .terms
            .iter()
            .filter(|&&(b, c)| c > 0 && alpha.is_subset_of(b) && b.is_disjoint(beta))
            .map(|&(_, c)| c as u64)
            .sum())
    }

    pub fn stats(&self) -> Result<TradeStats> {
        let volume = self.volume()?;
        let replications = (1..=self.v)
            .map(|i| self.replication(Block::singleton(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TradeStats { volume, foundation: self.foundation(), replications })
    }

    /// The `Y`-shift: the coefficient of `X` moves to `X ⊕ Y`.
    pub fn shift(&self, y: Block) -> Self {
        let mut terms: Vec<(Block, i64)> = self.terms.iter().map(|&(b, c)| (b ^ y, c)).collect();
        terms.sort_unstable_by_key(|&(b, _)| b);
        SignedTrade { v: self.v.max(universe_of(y)), terms }
    }

    /// Swap of the legs.
    pub fn negated(&self) -> Self {
        SignedTrade {
            v: self.v,
            terms: self.terms.iter().map(|&(b, c)| (b, -c)).collect(),
        }
    }

    /// The `i`-projection: element `i` is removed from every block and
    /// coefficients that land on the same block are merged.
    pub fn projection(&self, i: usize) -> Result<Self> {
        if !(1..=self.v).contains(&i) {
            return Err(TradeError::InvalidParameter(format!(
                "element {i} outside 1..={}",
                self.v
            )));
        }
        let drop = Block::singleton(i);
        Self::from_terms(self.v, self.terms.iter().map(|&(b, c)| (b.without(drop), c)))
    }

    /// Whether some element's projection keeps the volume, i.e. the trade
    /// is an extension of that projection.
    pub fn is_extension(&self) -> Result<bool> {
        let volume = self.volume()?;
        if volume == 0 {
            return Err(TradeError::UndefinedOnVoid);
        }
        for i in self.foundation().elements() {
            if self.projection(i)?.half_mass() == volume {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether two non-constant coordinates agree (or disagree) on every
    /// block of the support. Such twins survive every equivalence
    /// transformation, and identifying them is a volume-preserving
    /// projection, so a degenerate trade is always an extension; the
    /// converse fails (`1 - x1x2 - x2x3 + x1x2x3 - x1x3x4 + x1x2x3x4`).
    pub fn is_degenerate(&self) -> Result<bool> {
        if self.volume()? == 0 {
            return Err(TradeError::UndefinedOnVoid);
        }
        let first = self.terms[0].0.mask();
        let mut columns: Vec<Vec<bool>> = (0..self.v)
            .map(|i| self.terms.iter().map(|&(b, _)| ((b.mask() ^ first) >> i) & 1 == 1).collect())
            .filter(|c: &Vec<bool>| c.contains(&true))
            .collect();
        columns.sort_unstable();
        Ok(columns.windows(2).any(|w| w[0] == w[1]))
    }

    /// `T_{αβ̄}`: blocks containing `alpha` and avoiding `beta`, unmodified.
    pub fn restrict(&self, alpha: Block, beta: Block) -> Result<Self> {
        if !alpha.is_disjoint(beta) {
            return Err(TradeError::InvalidParameter(
                "alpha and beta must be disjoint".into(),
            ));
        }
        Ok(SignedTrade {
            v: self.v,
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|&(b, _)| alpha.is_subset_of(b) && b.is_disjoint(beta))
                .collect(),
        })
    }

    /// Shifts by the set of elements whose replication exceeds half the
    /// volume, so that afterwards every `r_i <= vol/2`.
    pub fn reduce(&self) -> Result<Self> {
        let stats = self.stats()?;
        if stats.volume == 0 {
            return Err(TradeError::UndefinedOnVoid);
        }
        let heavy = stats
            .replications
            .iter()
            .enumerate()
            .filter(|&(_, &r)| 2 * r > stats.volume)
            .fold(Block::EMPTY, |acc, (idx, _)| acc | Block::singleton(idx + 1));
        Ok(self.shift(heavy))
    }

    /// Whether every element replication is at most half the volume.
    pub fn is_reduced(&self) -> Result<bool> {
        let stats = self.stats()?;
        Ok(stats.replications.iter().all(|&r| 2 * r <= stats.volume))
    }

    /// Blocks of odd multiplicity in `T₊ ⊎ T₋`.
    pub fn odd_support(&self) -> Unitrade {
        odd_support(self.v, self.terms.iter().map(|&(b, c)| (b, c.unsigned_abs())))
    }

    pub fn try_add(&self, other: &SignedTrade) -> Result<Self> {
        Self::from_terms(
            self.v.max(other.v),
            self.terms.iter().chain(other.terms.iter()).copied(),
        )
    }

    pub fn try_sub(&self, other: &SignedTrade) -> Result<Self> {
        self.try_add(&other.negated())
    }

    /// Multiplication in the group ring: `X · Y = X ⊕ Y`.
    pub fn try_mul(&self, other: &SignedTrade) -> Result<Self> {
        let mut products = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(a, ca) in &self.terms {
            for &(b, cb) in &other.terms {
                products.push((a ^ b, ca.checked_mul(cb).ok_or(TradeError::CoefficientOverflow)?));
            }
        }
        Self::from_terms(self.v.max(other.v), products)
    }

    /// `(1 - X) T`.
    pub fn one_minus(&self, x: Block) -> Result<Self> {
        let v = self.v.max(universe_of(x));
        self.with_universe(v)?.try_sub(&self.shift(x))
    }

    /// Human-readable polynomial, e.g. `1 - x1x2 + 2x1x2x3`.
    pub fn to_polynomial(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, &(b, c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if idx == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let mag = c.unsigned_abs();
            match (mag, b.is_empty()) {
                (1, _) => out.push_str(&b.to_string()),
                (_, true) => out.push_str(&mag.to_string()),
                (_, false) => out.push_str(&format!("{mag}{b}")),
            }
        }
        out
    }
}

impl fmt::Debug for SignedTrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedTrade(v={}, {})", self.v, self.to_polynomial())
    }
}

impl fmt::Display for SignedTrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_polynomial())
    }
}

/// Smallest universe containing the block.
pub(crate) fn universe_of(b: Block) -> usize {
    (32 - b.mask().leading_zeros()) as usize
}

/// Blocks whose multiplicity in the multiset is odd.
pub fn odd_support<I: IntoIterator<Item = (Block, u64)>>(v: usize, multiset: I) -> Unitrade {
    let mut counts: BTreeMap<Block, u64> = BTreeMap::new();
    for (b, m) in multiset {
        *counts.entry(b).or_insert(0) += m;
    }
    let blocks: Vec<Block> = counts.into_iter().filter(|&(_, m)| m % 2 == 1).map(|(b, _)| b).collect();
    let v = blocks.iter().map(|&b| universe_of(b)).max().unwrap_or(0).max(v);
    Unitrade::from_sorted(v, blocks)
}

/// Expands `X0 (X1 - Y1)(X2 - Y2) ... (Xk - Yk)` in the group ring.
///
/// All blocks must be pairwise disjoint and every `Xi ∪ Yi` nonempty; with
/// `k` factors the result is a `[k-1]`-trade of volume `2^(k-1)`.
pub fn product_expand(v: usize, x0: Block, factors: &[(Block, Block)]) -> Result<SignedTrade> {
    let mut used = x0;
    for (idx, &(x, y)) in factors.iter().enumerate() {
        if (x | y).is_empty() {
            return Err(TradeError::InvalidMinimalForm(format!("factor {} is empty", idx + 1)));
        }
        if !x.is_disjoint(y) || !used.is_disjoint(x | y) {
            return Err(TradeError::InvalidMinimalForm(format!(
                "factor {} overlaps earlier blocks",
                idx + 1
            )));
        }
        used = used | x | y;
    }
    if !used.fits(v) {
        return Err(TradeError::BlockOutOfRange { mask: used.mask(), v });
    }
    let mut terms = vec![(x0, 1i64)];
    for &(x, y) in factors {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for &(b, c) in &terms {
            next.push((b ^ x, c));
            next.push((b ^ y, -c));
        }
        terms = next;
    }
    SignedTrade::from_terms(v, terms)
}

/// Packs the bits of `mask` selected by `within` into the low bits.
#[inline]
pub(crate) fn compress_mask(mask: u32, within: u32) -> u32 {
    let mut out = 0u32;
    let mut rest = within;
    let mut pos = 0;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        if mask & bit != 0 {
            out |= 1 << pos;
        }
        pos += 1;
        rest ^= bit;
    }
    out
}

/// In place: `table[S] <- Σ_{X ⊇ S} table[X]`.
pub(crate) fn superset_sums<T: Copy + std::ops::AddAssign>(table: &mut [T], bits: usize) {
    for b in 0..bits {
        let step = 1usize << b;
        for idx in 0..table.len() {
            if idx & step == 0 {
                let hi = table[idx | step];
                table[idx] += hi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(elems: &[usize]) -> Block {
        Block::from_elements(elems.iter().copied())
    }

    /// `1 - x1x2 - x2x3 - x1x3 + 2x1x2x3`
    pub(crate) fn example_vol3() -> SignedTrade {
        SignedTrade::from_terms(
            3,
            [(b(&[]), 1), (b(&[1, 2]), -1), (b(&[2, 3]), -1), (b(&[1, 3]), -1), (b(&[1, 2, 3]), 2)],
        )
        .unwrap()
    }

    /// Extension of `example_vol3` by a fourth element.
    fn example_extension() -> SignedTrade {
        SignedTrade::from_terms(
            4,
            [
                (b(&[]), 1),
                (b(&[1, 2]), -1),
                (b(&[2, 3]), -1),
                (b(&[1, 2, 3]), 1),
                (b(&[1, 3, 4]), -1),
                (b(&[1, 2, 3, 4]), 1),
            ],
        )
        .unwrap()
    }

    fn square(v: usize) -> SignedTrade {
        // (1 - x1)(1 - x2)
        product_expand(v, Block::EMPTY, &[(Block::EMPTY, b(&[1])), (Block::EMPTY, b(&[2]))]).unwrap()
    }

    #[test]
    fn example_is_one_trade_not_two() {
        let t = example_vol3();
        assert!(t.is_trade(1).unwrap());
        assert!(!t.is_trade(2).unwrap());
        assert!(!t.is_trade_sparse(2));
        assert!(t.is_trade_sparse(1));
        assert_eq!(t.strength(), Some(1));
    }

    #[test]
    fn void_is_trade_for_every_strength() {
        let t = SignedTrade::void(4);
        for s in 0..=4 {
            assert!(t.is_trade(s).unwrap());
        }
        assert!(matches!(t.is_trade(5), Err(TradeError::InvalidParameter(_))));
    }

    #[test]
    fn stats_of_example() {
        let t = example_vol3();
        let s = t.stats().unwrap();
        assert_eq!(s.volume, 3);
        assert_eq!(s.foundation, b(&[1, 2, 3]));
        assert_eq!(t.replication(Block::EMPTY).unwrap(), 3);
        assert_eq!(t.replication(b(&[1])).unwrap(), 2);
        assert_eq!(s.replications, vec![2, 2, 2]);
    }

    #[test]
    fn unbalanced_is_inconsistent() {
        let t = SignedTrade::from_legs(2, &[b(&[1]), b(&[2])], &[b(&[])]).unwrap();
        assert_eq!(t.volume(), Err(TradeError::InconsistentTrade));
        assert!(!t.is_trade(0).unwrap());
    }

    #[test]
    fn shift_example() {
        let t = example_vol3();
        let shifted = t.shift(b(&[1, 2, 3]));
        let expected = SignedTrade::from_terms(
            3,
            [(b(&[1, 2, 3]), 1), (b(&[3]), -1), (b(&[1]), -1), (b(&[2]), -1), (b(&[]), 2)],
        )
        .unwrap();
        assert_eq!(shifted, expected);
        assert!(shifted.is_trade(1).unwrap());
        assert_eq!(shifted.volume().unwrap(), 3);
        assert_eq!(t.shift(Block::EMPTY), t);
        assert_eq!(shifted.shift(b(&[1, 2, 3])), t);
    }

    #[test]
    fn projection_examples() {
        let t = example_vol3();
        let p = t.projection(3).unwrap();
        let expected =
            SignedTrade::from_terms(3, [(b(&[]), 1), (b(&[1]), -1), (b(&[2]), -1), (b(&[1, 2]), 1)])
                .unwrap();
        assert_eq!(p, expected);
        assert_eq!(p.volume().unwrap(), 2);
        assert_eq!(example_extension().projection(4).unwrap(), t.with_universe(4).unwrap());
        assert!(SignedTrade::void(3).projection(2).unwrap().is_void());
        assert!(t.projection(0).is_err());
    }

    #[test]
    fn degeneracy() {
        assert!(example_extension().is_extension().unwrap());
        assert!(!example_extension().is_degenerate().unwrap());
        assert!(!square(2).is_degenerate().unwrap());
        assert!(!square(2).is_extension().unwrap());
        // (1 - x1x2)(1 - x3x4)
        let t = product_expand(4, Block::EMPTY, &[(Block::EMPTY, b(&[1, 2])), (Block::EMPTY, b(&[3, 4]))])
            .unwrap();
        assert!(t.is_degenerate().unwrap());
        assert!(t.is_extension().unwrap());
        assert_eq!(SignedTrade::void(2).is_degenerate(), Err(TradeError::UndefinedOnVoid));
        assert_eq!(SignedTrade::void(2).is_extension(), Err(TradeError::UndefinedOnVoid));
    }

    #[test]
    fn restrict_examples() {
        let t = example_vol3();
        let r = t.restrict(b(&[1]), Block::EMPTY).unwrap();
        let expected =
            SignedTrade::from_terms(3, [(b(&[1, 2]), -1), (b(&[1, 3]), -1), (b(&[1, 2, 3]), 2)]).unwrap();
        assert_eq!(r, expected);
        assert!(r.is_trade(0).unwrap());
        assert_eq!(r.volume().unwrap(), 2);
        assert_eq!(t.restrict(Block::EMPTY, Block::EMPTY).unwrap(), t);
        let t4 = t.with_universe(4).unwrap();
        assert!(t4.restrict(b(&[4]), Block::EMPTY).unwrap().is_void());
        assert!(t.restrict(b(&[1]), b(&[1, 2])).is_err());
    }

    #[test]
    fn reduce_examples() {
        let t = example_vol3();
        let r = t.reduce().unwrap();
        assert_eq!(r, t.shift(b(&[1, 2, 3])));
        assert_eq!(r.stats().unwrap().replications, vec![1, 1, 1]);
        assert_eq!(r.reduce().unwrap(), r);
        let sq = square(2);
        assert_eq!(sq.reduce().unwrap(), sq);
        assert_eq!(SignedTrade::void(2).reduce(), Err(TradeError::UndefinedOnVoid));
    }

    #[test]
    fn product_expand_examples() {
        let t = product_expand(4, Block::EMPTY, &[(b(&[1]), b(&[2])), (b(&[3]), b(&[4]))]).unwrap();
        assert_eq!(t.terms().len(), 4);
        assert!(t.is_trade(1).unwrap());
        assert_eq!(t.volume().unwrap(), 2);

        let t5 = product_expand(5, b(&[5]), &[(b(&[1]), b(&[2])), (b(&[3]), b(&[4]))]).unwrap();
        assert_eq!(t5.volume().unwrap(), 2);
        assert!(t5.support().iter().all(|x| x.contains(5)));

        let cube = product_expand(
            3,
            Block::EMPTY,
            &[(b(&[1]), Block::EMPTY), (b(&[2]), Block::EMPTY), (b(&[3]), Block::EMPTY)],
        )
        .unwrap();
        assert!(cube.is_trade(2).unwrap());
        assert_eq!(cube.volume().unwrap(), 4);

        assert!(matches!(
            product_expand(3, Block::EMPTY, &[(b(&[1]), b(&[1, 2]))]),
            Err(TradeError::InvalidMinimalForm(_))
        ));
        assert!(matches!(
            product_expand(3, Block::EMPTY, &[(Block::EMPTY, Block::EMPTY)]),
            Err(TradeError::InvalidMinimalForm(_))
        ));
    }

    #[test]
    fn odd_support_examples() {
        let t = example_vol3();
        let u = t.odd_support();
        assert_eq!(u.blocks(), &[b(&[]), b(&[1, 2]), b(&[1, 3]), b(&[2, 3])]);
        let sq = square(2);
        assert_eq!(sq.odd_support().blocks(), sq.support().as_slice());
        assert!(odd_support(3, std::iter::empty()).is_empty());
    }

    #[test]
    fn group_ring_product() {
        // (1 - x1)(1 - x2) equals the expanded square
        let one_minus_x1 = SignedTrade::from_terms(2, [(Block::EMPTY, 1), (b(&[1]), -1)]).unwrap();
        let one_minus_x2 = SignedTrade::from_terms(2, [(Block::EMPTY, 1), (b(&[2]), -1)]).unwrap();
        assert_eq!(one_minus_x1.try_mul(&one_minus_x2).unwrap(), square(2));
        assert_eq!(one_minus_x1.one_minus(b(&[2])).unwrap(), square(2));
    }

    #[test]
    fn overflow_is_reported() {
        let r = SignedTrade::from_terms(1, [(Block::EMPTY, i64::MAX), (Block::EMPTY, 1)]);
        assert_eq!(r, Err(TradeError::CoefficientOverflow));
    }

    #[test]
    fn polynomial_rendering() {
        assert_eq!(example_vol3().to_polynomial(), "1 - x1x2 - x1x3 - x2x3 + 2x1x2x3");
    }
}
