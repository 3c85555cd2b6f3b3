//! GF(2) linear algebra on block sets: affine rank, affine span, span
//! complement and foundation compression.

use crate::block::Block;
use crate::error::{Result, TradeError};
use crate::trade::SignedTrade;
use crate::unitrade::Unitrade;

/// Largest affine span [`affine_span`] will materialize.
pub const SPAN_RANK_CAP: usize = 25;

/// An affine subspace `origin ⊕ span(rows)`, rows in reduced echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Basis {
    origin: Block,
    /// Each row has a distinct leading (highest) bit, and no other row has
    /// that bit set.
    rows: Vec<Block>,
}

impl Gf2Basis {
    /// Affine hull of a nonempty block set; the origin is the first block.
    pub fn of_set(blocks: &[Block]) -> Option<Self> {
        let (&origin, rest) = blocks.split_first()?;
        let mut basis = Gf2Basis { origin, rows: Vec::new() };
        for &b in rest {
            basis.insert(b ^ origin);
        }
        Some(basis)
    }

    /// Adds a direction; returns whether the dimension grew.
    pub fn insert(&mut self, direction: Block) -> bool {
        let mut x = direction.mask();
        for r in &self.rows {
            let lead = 31 - r.mask().leading_zeros();
            if x >> lead & 1 == 1 {
                x ^= r.mask();
            }
        }
        if x == 0 {
            return false;
        }
        let lead = 31 - x.leading_zeros();
        for r in self.rows.iter_mut() {
            if r.mask() >> lead & 1 == 1 {
                *r = Block::from_mask(r.mask() ^ x);
            }
        }
        let pos = self.rows.partition_point(|r| r.mask() > x);
        self.rows.insert(pos, Block::from_mask(x));
        true
    }

    #[inline]
    pub fn origin(&self) -> Block {
        self.origin
    }

    #[inline]
    pub fn rows(&self) -> &[Block] {
        &self.rows
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Whether `b` lies in the affine subspace.
    pub fn contains(&self, b: Block) -> bool {
        let mut x = (b ^ self.origin).mask();
        for r in &self.rows {
            let lead = 31 - r.mask().leading_zeros();
            if x >> lead & 1 == 1 {
                x ^= r.mask();
            }
        }
        x == 0
    }

    /// All `2^dim` points, in Gray-code order starting at the origin.
    pub fn points(&self) -> Vec<Block> {
        let mut out = Vec::with_capacity(1 << self.rows.len());
        let mut cur = self.origin;
        out.push(cur);
        for step in 1u64..(1u64 << self.rows.len()) {
            cur ^= self.rows[step.trailing_zeros() as usize];
            out.push(cur);
        }
        out
    }

    /// Dimension of the image under deleting element `i`.
    fn projected_dimension(&self, i: usize) -> usize {
        let drop = Block::singleton(i);
        let mut projected = Gf2Basis { origin: Block::EMPTY, rows: Vec::new() };
        for r in &self.rows {
            projected.insert(r.without(drop));
        }
        projected.dimension()
    }
}

/// Dimension of the affine span; `-1` for the empty set.
pub fn affine_rank(blocks: &[Block]) -> i32 {
    Gf2Basis::of_set(blocks).map_or(-1, |b| b.dimension() as i32)
}

/// Every point of the affine span, sorted.
pub fn affine_span(blocks: &[Block]) -> Result<Vec<Block>> {
    let basis = Gf2Basis::of_set(blocks).ok_or(TradeError::UndefinedOnEmpty)?;
    if basis.dimension() > SPAN_RANK_CAP {
        return Err(TradeError::SpanTooLarge { rank: basis.dimension(), cap: SPAN_RANK_CAP });
    }
    let mut pts = basis.points();
    pts.sort_unstable();
    Ok(pts)
}

/// `⟨U⟩ ∖ U`, again a `[t]`-unitrade when `U` is one.
pub fn span_complement(u: &Unitrade, t: usize) -> Result<Unitrade> {
    if u.is_empty() {
        return Err(TradeError::UndefinedOnEmpty);
    }
    if !u.is_unitrade(t)? {
        return Err(TradeError::InvalidParameter(format!("input is not a [{t}]-unitrade")));
    }
    let span = affine_span(u.blocks())?;
    let rest: Vec<Block> = span.into_iter().filter(|b| !u.contains(*b)).collect();
    Unitrade::from_blocks(u.v(), rest)
}

/// Affine rank of a trade's support.
pub fn trade_affine_rank(t: &SignedTrade) -> i32 {
    affine_rank(&t.support())
}

/// Projects away elements on which the affine span of the support is
/// injective, until the foundation size equals the affine rank.
///
/// Each such projection is a bijection on the span, so no blocks merge and
/// both volume and affine rank are preserved.
pub fn compress(t: &SignedTrade) -> Result<SignedTrade> {
    if !t.is_balanced() {
        return Err(TradeError::InconsistentTrade);
    }
    let mut cur = t.clone();
    loop {
        let support = cur.support();
        let Some(basis) = Gf2Basis::of_set(&support) else {
            return Ok(cur);
        };
        let found = cur.foundation();
        if found.len() as usize == basis.dimension() {
            return Ok(cur);
        }
        let Some(i) = found.elements().find(|&i| basis.projected_dimension(i) == basis.dimension())
        else {
            return Ok(cur);
        };
        let next = cur.projection(i)?;
        debug_assert_eq!(next.terms().len(), cur.terms().len());
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trade::product_expand;

    fn set(v: usize, ts: &[&str]) -> Vec<Block> {
        let _ = v;
        ts.iter().map(|t| Block::from_tuple(t).unwrap()).collect()
    }

    fn b(elems: &[usize]) -> Block {
        Block::from_elements(elems.iter().copied())
    }

    #[test]
    fn rank_examples() {
        let s = set(5, &["00111", "10011", "01011", "11001", "11100", "11010"]);
        assert_eq!(affine_rank(&s), 4);
        assert_eq!(affine_rank(&[b(&[2, 4])]), 0);
        assert_eq!(affine_rank(&[b(&[]), b(&[1]), b(&[2]), b(&[1, 2])]), 2);
        assert_eq!(affine_rank(&[]), -1);
    }

    #[test]
    fn span_examples() {
        assert_eq!(affine_span(&[b(&[]), b(&[1]), b(&[2])]).unwrap(), vec![
            b(&[]),
            b(&[1]),
            b(&[2]),
            b(&[1, 2])
        ]);
        let s = set(5, &["00111", "10011", "01011", "11001", "11100", "11010"]);
        let span = affine_span(&s).unwrap();
        assert_eq!(span.len(), 16);
        assert!(s.iter().all(|x| span.contains(x)));
        assert_eq!(affine_span(&span).unwrap(), span);
        assert!(affine_span(&[]).is_err());
    }

    #[test]
    fn span_cap() {
        let blocks: Vec<Block> = std::iter::once(Block::EMPTY).chain((1..=27).map(Block::singleton)).collect();
        assert!(matches!(affine_span(&blocks), Err(TradeError::SpanTooLarge { rank: 27, .. })));
    }

    #[test]
    fn complement_examples() {
        // the even-weight sets of 2^[3] already form a 2-dimensional subspace
        let u = Unitrade::from_blocks(3, [b(&[]), b(&[1, 2]), b(&[1, 3]), b(&[2, 3])]).unwrap();
        assert_eq!(affine_rank(u.blocks()), 2);
        assert!(span_complement(&u, 1).unwrap().is_empty());

        let s = set(5, &["00111", "10011", "01011", "11001", "11100", "11010"]);
        let u = Unitrade::from_blocks(5, s).unwrap();
        let c = span_complement(&u, 1).unwrap();
        assert_eq!(c.len(), 10);
        assert!(c.is_unitrade(1).unwrap());

        let f = crate::anf::Anf::from_monomials(6, &[b(&[1, 2]), b(&[3, 4]), b(&[5, 6])]).unwrap();
        let u = Unitrade::from_blocks(6, f.ones()).unwrap();
        let c = span_complement(&u, 3).unwrap();
        assert_eq!(c.len(), 36);
        assert!(c.is_unitrade(3).unwrap());

        let full = Unitrade::from_blocks(2, [b(&[]), b(&[1]), b(&[2]), b(&[1, 2])]).unwrap();
        assert!(span_complement(&full, 1).unwrap().is_empty());
        assert_eq!(span_complement(&Unitrade::empty(2), 1), Err(TradeError::UndefinedOnEmpty));
    }

    #[test]
    fn compress_examples() {
        // (1 - x1)(1 - x2x3x4)
        let t = product_expand(4, Block::EMPTY, &[(Block::EMPTY, b(&[1])), (Block::EMPTY, b(&[2, 3, 4]))])
            .unwrap();
        let c = compress(&t).unwrap();
        assert_eq!(c.foundation().len(), 2);
        assert_eq!(c.volume().unwrap(), 2);
        assert_eq!(trade_affine_rank(&c), 2);
        assert!(c.is_trade(1).unwrap());

        let sq = product_expand(2, Block::EMPTY, &[(Block::EMPTY, b(&[1])), (Block::EMPTY, b(&[2]))]).unwrap();
        assert_eq!(compress(&sq).unwrap(), sq);

        let ex = SignedTrade::from_terms(
            3,
            [(b(&[]), 1), (b(&[1, 2]), -1), (b(&[2, 3]), -1), (b(&[1, 3]), -1), (b(&[1, 2, 3]), 2)],
        )
        .unwrap();
        assert_eq!(trade_affine_rank(&ex), 3);
        assert_eq!(compress(&ex).unwrap(), ex);
    }
}
