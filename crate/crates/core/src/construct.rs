//! Explicit trade families: minimal trades, parity-split spans and the
//! merges built from them, and the small-volume templates.

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::block::Block;
use crate::error::{Result, TradeError};
use crate::gf2span::Gf2Basis;
use crate::trade::{product_expand, SignedTrade};

/// `X0 (X1 - Y1) ... (X_{t+1} - Y_{t+1})`, a `[t]`-trade of volume `2^t`.
pub fn minimal_trade(v: usize, x0: Block, pairs: &[(Block, Block)]) -> Result<SignedTrade> {
    if pairs.is_empty() {
        return Err(TradeError::InvalidMinimalForm("at least one pair is required".into()));
    }
    product_expand(v, x0, pairs)
}

/// Which weight parity of a span goes to the positive leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegParity {
    Even,
    Odd,
}

impl LegParity {
    fn matches(self, b: Block) -> bool {
        b.len().is_multiple_of(2) == (self == LegParity::Even)
    }
}

impl FromStr for LegParity {
    type Err = TradeError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(LegParity::Even),
            "odd" => Ok(LegParity::Odd),
            other => Err(TradeError::InvalidParameter(format!("parity must be even or odd, got {other}"))),
        }
    }
}

/// A linear span of blocks split into legs by block weight parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityLegSpan {
    generators: Vec<Block>,
    positive_parity: LegParity,
}

impl ParityLegSpan {
    pub fn new(generators: Vec<Block>, positive_parity: LegParity) -> Result<Self> {
        let mut basis = Gf2Basis::of_set(&[Block::EMPTY]).expect("nonempty");
        for &g in &generators {
            if !basis.insert(g) {
                return Err(TradeError::InvalidParameter(format!("generator {g} is dependent")));
            }
        }
        Ok(ParityLegSpan { generators, positive_parity })
    }

    /// Span of the singletons of `elements` (1-based).
    pub fn of_singletons(elements: impl IntoIterator<Item = usize>, positive_parity: LegParity) -> Result<Self> {
        Self::new(elements.into_iter().map(Block::singleton).collect(), positive_parity)
    }

    pub fn generators(&self) -> &[Block] {
        &self.generators
    }

    pub fn positive_parity(&self) -> LegParity {
        self.positive_parity
    }

    /// All `2^k` points of the span.
    pub fn points(&self) -> Vec<Block> {
        let mut pts = vec![Block::EMPTY];
        for &g in &self.generators {
            let shifted: Vec<Block> = pts.iter().map(|&p| p ^ g).collect();
            pts.extend(shifted);
        }
        pts.sort_unstable();
        pts
    }

    pub fn to_trade(&self, v: usize) -> Result<SignedTrade> {
        let p = self.positive_parity;
        SignedTrade::from_terms(v, self.points().into_iter().map(|b| (b, if p.matches(b) { 1 } else { -1 })))
    }
}

/// Joins two simple `[t]`-trades whose same-side legs are disjoint; blocks
/// on opposite sides cancel.
pub fn merge_simple(t1: &SignedTrade, t2: &SignedTrade, t: usize) -> Result<SignedTrade> {
    for (name, tr) in [("first", t1), ("second", t2)] {
        if !tr.is_simple() || !tr.is_trade(t)? {
            return Err(TradeError::MergePreconditionViolated(format!("{name} operand is not a simple [{t}]-trade")));
        }
    }
    for &(b, c) in t1.terms() {
        if t2.coefficient(b) == c {
            return Err(TradeError::MergePreconditionViolated(format!("block {b} lies on the same side of both")));
        }
    }
    t1.try_add(t2)
}

/// The two volume families of the spectrum construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumFamily {
    /// `2^{t+1} + 2^{t-1} - 2^i`, `0 <= i <= t-2`.
    Ii,
    /// `2^{t+1} + 2^{t-1} - 3·2^i`, `0 <= i <= t-3`.
    Iii,
}

impl FromStr for SpectrumFamily {
    type Err = TradeError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ii" => Ok(SpectrumFamily::Ii),
            "iii" => Ok(SpectrumFamily::Iii),
            other => Err(TradeError::InvalidParameter(format!("family must be ii or iii, got {other}"))),
        }
    }
}

impl SpectrumFamily {
    pub fn volume(self, t: usize, i: usize) -> u64 {
        let base = (1u64 << (t + 1)) + (1u64 << (t - 1));
        match self {
            SpectrumFamily::Ii => base - (1 << i),
            SpectrumFamily::Iii => base - 3 * (1 << i),
        }
    }

    /// Largest admissible `i` for strength `t`, if any.
    pub fn max_i(self, t: usize) -> Option<usize> {
        match self {
            SpectrumFamily::Ii => t.checked_sub(2),
            SpectrumFamily::Iii => t.checked_sub(3),
        }
    }
}

/// A simple `[t]`-trade of volume [`SpectrumFamily::volume`], built from
/// three parity-split spans of singletons merged twice.
pub fn spectrum_trade(t: usize, i: usize, family: SpectrumFamily) -> Result<SignedTrade> {
    match family.max_i(t) {
        Some(max) if i <= max => {}
        _ => return Err(TradeError::InvalidParameter(format!("i={i} out of range for t={t}, family {family:?}"))),
    }
    let v = match family {
        SpectrumFamily::Ii => 2 * t - i + 3,
        SpectrumFamily::Iii => 2 * t - i + 2,
    };
    if v > crate::gf2span::SPAN_RANK_CAP {
        return Err(TradeError::UniverseTooLarge { v, cap: crate::gf2span::SPAN_RANK_CAP });
    }
    let s1 = ParityLegSpan::of_singletons(1..=t + 1, LegParity::Odd)?;
    let s2 = ParityLegSpan::of_singletons((1..t).chain([t + 2, t + 3]), LegParity::Even)?;
    let s4 = match family {
        SpectrumFamily::Ii => ParityLegSpan::of_singletons((1..=i).chain([t]).chain(t + 4..=2 * t - i + 3), LegParity::Even)?,
        SpectrumFamily::Iii => {
            ParityLegSpan::of_singletons((1..=i).chain([t, t + 1]).chain(t + 4..=2 * t - i + 2), LegParity::Even)?
        }
    };

    let (p1, p2, p4): (BTreeSet<Block>, BTreeSet<Block>, BTreeSet<Block>) = (
        s1.points().into_iter().collect(),
        s2.points().into_iter().collect(),
        s4.points().into_iter().collect(),
    );
    let i12 = p1.intersection(&p2).count();
    let i14 = p1.intersection(&p4).count();
    let i24: BTreeSet<Block> = p2.intersection(&p4).copied().collect();
    let i124 = i24.intersection(&p1).count();
    let expected_14 = match family {
        SpectrumFamily::Ii => 1 << (i + 1),
        SpectrumFamily::Iii => 1 << (i + 2),
    };
    assert_eq!(i12, 1 << (t - 1), "|T1 ∩ T2|");
    assert_eq!(i14, expected_14, "|T1 ∩ T4|");
    assert_eq!(i24.len(), 1 << i, "|T2 ∩ T4|");
    assert_eq!(i124, 1 << i, "|T1 ∩ T2 ∩ T4|");

    let t3 = merge_simple(&s1.to_trade(v)?, &s2.to_trade(v)?, t)?;
    let t5 = merge_simple(&t3, &s4.to_trade(v)?, t)?;
    let blocks = t5.terms().len() as u64;
    if !t5.is_simple() || !t5.is_trade(t)? || blocks != 2 * family.volume(t, i) {
        return Err(TradeError::InconsistentTrade);
    }
    Ok(t5)
}

/// Volumes of simple `[t]`-trades below `2.5·2^t`, split into those known to
/// occur and those known not to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleSpectrum {
    pub exists: BTreeSet<u64>,
    pub not_exists: BTreeSet<u64>,
    /// Exclusive bound `2.5·2^t` of the statement.
    pub valid_below: u64,
}

pub fn known_simple_spectrum(t: usize) -> Result<SimpleSpectrum> {
    if t == 0 || t > 60 {
        return Err(TradeError::InvalidParameter(format!("t={t} outside 1..=60")));
    }
    let valid_below = 5u64 << (t - 1);
    let mut exists = BTreeSet::from([0u64, 1 << (t + 1)]);
    for i in 0..=t {
        exists.insert((1 << (t + 1)) - (1 << i));
    }
    for family in [SpectrumFamily::Ii, SpectrumFamily::Iii] {
        if let Some(max) = family.max_i(t) {
            exists.extend((0..=max).map(|i| family.volume(t, i)));
        }
    }
    exists.retain(|&x| x < valid_below);
    let not_exists = (0..valid_below).filter(|x| !exists.contains(x)).collect();
    Ok(SimpleSpectrum { exists, not_exists, valid_below })
}

fn mutually_disjoint(blocks: &[Block]) -> bool {
    let mut seen = Block::EMPTY;
    for &b in blocks {
        if !seen.is_disjoint(b) {
            return false;
        }
        seen = seen | b;
    }
    true
}

fn mutually_different(blocks: &[Block]) -> bool {
    let set: BTreeSet<Block> = blocks.iter().copied().collect();
    set.len() == blocks.len()
}

fn xor_all(blocks: &[Block]) -> Block {
    blocks.iter().fold(Block::EMPTY, |acc, &b| acc ^ b)
}

fn cross_distinct(y: &[Block], z: &[Block]) -> bool {
    y.iter().all(|a| !z.contains(a))
}

fn template_error(msg: &str) -> TradeError {
    TradeError::InvalidTemplate(msg.into())
}

/// `Y0 ⊕ ({Y1,Y2,Y3}, {Z1,Z2,Z3})`: every `[1]`-trade of volume 3 has this
/// form. Empty blocks may repeat inside one leg.
pub fn vol3_template(v: usize, y: [Block; 3], z: [Block; 3], shift: Block) -> Result<SignedTrade> {
    if !mutually_disjoint(&y) || !mutually_disjoint(&z) {
        return Err(template_error("Y and Z blocks must be mutually disjoint within each leg"));
    }
    if xor_all(&y) != xor_all(&z) {
        return Err(template_error("Y1Y2Y3 must equal Z1Z2Z3"));
    }
    if !cross_distinct(&y, &z) {
        return Err(template_error("Y_i must differ from Z_j"));
    }
    let t = SignedTrade::from_legs(v, &y, &z)?.shift(shift);
    if t.v() != v || t.half_mass() != 3 || !t.is_trade(1)? {
        return Err(template_error("instance is not a volume-3 [1]-trade"));
    }
    Ok(t)
}

/// Parameterized `[2]`-trades of volume 6; every such trade is equivalent
/// to one of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vol6Template {
    /// `(1-XY1)(1-XY2)(1-XY3) - (1-XZ1)(1-XZ2)(1-XZ3)`.
    ThreeThree { x: Block, y: [Block; 3], z: [Block; 3] },
    /// `(1-Y1)(1-Y2)(1-Y3) - (1-Z1)(1-Z2)(1-Z3)` with `Y1Y2 = Z1Z2`.
    TwoTwo { y: [Block; 3], z: [Block; 3] },
    /// `(1-Y1)(1-Y2)(1-Y3) - (1-Z1)(1-Z2)(1-Y1Y2Y3)`.
    OneThree { y: [Block; 3], z: [Block; 2] },
    /// `({Y1,Y2,Y3,XZ1,XZ2,XZ3}, {Z1,Z2,Z3,XY1,XY2,XY3})`, i.e. `(1-X)σ`.
    OneOne { x: Block, y: [Block; 3], z: [Block; 3] },
}

impl Vol6Template {
    pub fn kind(&self) -> &'static str {
        match self {
            Vol6Template::ThreeThree { .. } => "P3-3",
            Vol6Template::TwoTwo { .. } => "P2-2",
            Vol6Template::OneThree { .. } => "P1-3",
            Vol6Template::OneOne { .. } => "P1-1",
        }
    }
}

/// `∏ (1 - B)` in the group ring.
fn one_minus_product(v: usize, blocks: &[Block]) -> Result<SignedTrade> {
    let mut acc = SignedTrade::monomial(v, Block::EMPTY)?;
    for &b in blocks {
        acc = acc.try_mul(&SignedTrade::from_terms(v, [(Block::EMPTY, 1), (b, -1)])?)?;
    }
    Ok(acc)
}

pub fn vol6_template(v: usize, template: &Vol6Template) -> Result<SignedTrade> {
    let nonempty = |bs: &[Block]| bs.iter().all(|b| !b.is_empty());
    let t = match *template {
        Vol6Template::ThreeThree { x, y, z } => {
            let six = [y[0], y[1], y[2], z[0], z[1], z[2]];
            if !mutually_disjoint(&[x, y[0], y[1], y[2]]) || !mutually_disjoint(&[x, z[0], z[1], z[2]]) {
                return Err(template_error("X, Y_i and X, Z_i must be mutually disjoint"));
            }
            if !nonempty(&six) || !mutually_different(&six) {
                return Err(template_error("Y_i, Z_i must be mutually different nonempty sets"));
            }
            if xor_all(&y) != xor_all(&z) {
                return Err(template_error("Y1Y2Y3 must equal Z1Z2Z3"));
            }
            one_minus_product(v, &y.map(|b| x ^ b))?.try_sub(&one_minus_product(v, &z.map(|b| x ^ b))?)?
        }
        Vol6Template::TwoTwo { y, z } => {
            let six = [y[0], y[1], y[2], z[0], z[1], z[2]];
            if !mutually_disjoint(&y) || !mutually_disjoint(&z) {
                return Err(template_error("Y_i and Z_i must be mutually disjoint"));
            }
            if !nonempty(&six) || !mutually_different(&six) {
                return Err(template_error("Y_i, Z_i must be mutually different nonempty sets"));
            }
            if y[0] ^ y[1] != z[0] ^ z[1] {
                return Err(template_error("Y1Y2 must equal Z1Z2"));
            }
            one_minus_product(v, &y)?.try_sub(&one_minus_product(v, &z)?)?
        }
        Vol6Template::OneThree { y, z } => {
            let five = [y[0], y[1], y[2], z[0], z[1]];
            if !nonempty(&five) || !mutually_disjoint(&five) {
                return Err(template_error("Y1, Y2, Y3, Z1, Z2 must be mutually disjoint nonempty sets"));
            }
            one_minus_product(v, &y)?.try_sub(&one_minus_product(v, &[z[0], z[1], xor_all(&y)])?)?
        }
        Vol6Template::OneOne { x, y, z } => {
            if x.is_empty() {
                return Err(template_error("X must be nonempty"));
            }
            if !mutually_disjoint(&[x, y[0], y[1], y[2]]) || !mutually_disjoint(&[x, z[0], z[1], z[2]]) {
                return Err(template_error("X, Y_i and X, Z_i must be mutually disjoint"));
            }
            if xor_all(&y) != xor_all(&z) || !cross_distinct(&y, &z) {
                return Err(template_error("need Y1Y2Y3 = Z1Z2Z3 and Y_i != Z_j"));
            }
            let plus = [y[0], y[1], y[2], x ^ z[0], x ^ z[1], x ^ z[2]];
            let minus = [z[0], z[1], z[2], x ^ y[0], x ^ y[1], x ^ y[2]];
            SignedTrade::from_legs(v, &plus, &minus)?
        }
    };
    if t.half_mass() != 6 || !t.is_trade(2)? {
        return Err(template_error("parameters collapse below volume 6"));
    }
    Ok(t)
}

/// Calls `f` with every labeling of `0..v` by `0..k` (base-`k` odometer);
/// returns the per-label masks.
fn for_each_labeling(v: usize, k: usize, mut f: impl FnMut(&[u32])) {
    let mut labels = vec![0usize; v];
    let mut masks = vec![0u32; k];
    loop {
        masks.iter_mut().for_each(|m| *m = 0);
        for (e, &l) in labels.iter().enumerate() {
            masks[l] |= 1 << e;
        }
        f(&masks);
        let mut pos = 0;
        loop {
            if pos == v {
                return;
            }
            labels[pos] += 1;
            if labels[pos] < k {
                break;
            }
            labels[pos] = 0;
            pos += 1;
        }
    }
}

/// Ordered partitions of `within` into `k` (possibly empty) parts.
fn for_each_partition(within: u32, k: usize, mut f: impl FnMut(&[u32])) {
    let elems: Vec<usize> = (0..32).filter(|&e| within >> e & 1 == 1).collect();
    let mut parts = vec![0u32; k];
    for_each_labeling(elems.len(), k, |masks| {
        for (p, part) in parts.iter_mut().enumerate() {
            *part = 0;
            let mut rest = masks[p];
            while rest != 0 {
                let idx = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                *part |= 1 << elems[idx];
            }
        }
        f(&parts);
    });
}

fn blocks3(m: &[u32]) -> [Block; 3] {
    [Block::from_mask(m[0]), Block::from_mask(m[1]), Block::from_mask(m[2])]
}

/// Every valid unshifted instance of [`vol3_template`] on `2^[v]`.
pub fn vol3_sweep(v: usize) -> Vec<SignedTrade> {
    let mut out = Vec::new();
    for_each_labeling(v, 4, |m| {
        let y = blocks3(&m[1..]);
        for_each_partition(m[1] | m[2] | m[3], 3, |zp| {
            if let Ok(t) = vol3_template(v, y, blocks3(zp), Block::EMPTY) {
                out.push(t);
            }
        });
    });
    out
}

/// Every valid instance of each [`Vol6Template`] kind on `2^[v]`.
pub fn vol6_sweep(v: usize) -> Vec<(Vol6Template, SignedTrade)> {
    let mut out = Vec::new();
    let mut push = |tpl: Vol6Template| {
        if let Ok(t) = vol6_template(v, &tpl) {
            out.push((tpl, t));
        }
    };
    // labels: 0 none, 1 X, 2..=4 Y
    for_each_labeling(v, 5, |m| {
        let x = Block::from_mask(m[1]);
        let y = blocks3(&m[2..]);
        for_each_partition(m[2] | m[3] | m[4], 3, |zp| {
            let z = blocks3(zp);
            push(Vol6Template::ThreeThree { x, y, z });
            push(Vol6Template::OneOne { x, y, z });
        });
    });
    // labels: 0 none, 1..=3 Y
    for_each_labeling(v, 4, |m| {
        let y = blocks3(&m[1..]);
        let outside = !(m[1] | m[2]) & ((1u32 << v) - 1);
        for_each_partition(m[1] | m[2], 2, |zp| {
            let mut z3 = outside;
            loop {
                push(Vol6Template::TwoTwo { y, z: [Block::from_mask(zp[0]), Block::from_mask(zp[1]), Block::from_mask(z3)] });
                if z3 == 0 {
                    break;
                }
                z3 = (z3 - 1) & outside;
            }
        });
    });
    // labels: 0 none, 1..=3 Y, 4..=5 Z
    for_each_labeling(v, 6, |m| {
        push(Vol6Template::OneThree {
            y: blocks3(&m[1..]),
            z: [Block::from_mask(m[4]), Block::from_mask(m[5])],
        });
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(elems: &[usize]) -> Block {
        Block::from_elements(elems.iter().copied())
    }

    #[test]
    fn minimal_examples() {
        let t = minimal_trade(6, Block::EMPTY, &[(b(&[1]), b(&[2])), (b(&[3]), b(&[4])), (b(&[5]), b(&[6]))]).unwrap();
        assert_eq!(t.volume().unwrap(), 4);
        assert!(t.is_trade(2).unwrap());
        let t0 = minimal_trade(3, b(&[3]), &[(b(&[1]), b(&[2]))]).unwrap();
        assert_eq!(t0, SignedTrade::from_legs(3, &[b(&[1, 3])], &[b(&[2, 3])]).unwrap());
        assert!(matches!(
            minimal_trade(3, Block::EMPTY, &[(b(&[1, 2]), b(&[2]))]),
            Err(TradeError::InvalidMinimalForm(_))
        ));
    }

    #[test]
    fn merge_of_two_squares() {
        let a = ParityLegSpan::of_singletons([1, 2], LegParity::Even).unwrap().to_trade(3).unwrap();
        let c = ParityLegSpan::of_singletons([1, 3], LegParity::Odd).unwrap().to_trade(3).unwrap();
        let m = merge_simple(&a, &c, 1).unwrap();
        // the spans share a line, so |T1 ⊕ T2| = 8 - 4
        assert_eq!(m.volume().unwrap(), 2);
        assert!(m.is_simple() && m.is_trade(1).unwrap());
        assert_eq!(merge_simple(&a, &SignedTrade::void(3), 1).unwrap(), a);
        assert!(matches!(merge_simple(&a, &a, 1), Err(TradeError::MergePreconditionViolated(_))));
    }

    #[test]
    fn dependent_generators_rejected() {
        assert!(ParityLegSpan::new(vec![b(&[1]), b(&[2]), b(&[1, 2])], LegParity::Odd).is_err());
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(spectrum_trade(2, 0, SpectrumFamily::Ii).unwrap().volume().unwrap(), 9);
        assert_eq!(spectrum_trade(3, 0, SpectrumFamily::Iii).unwrap().volume().unwrap(), 17);
        assert_eq!(spectrum_trade(3, 1, SpectrumFamily::Ii).unwrap().volume().unwrap(), 18);
        assert!(spectrum_trade(2, 1, SpectrumFamily::Ii).is_err());
        assert!(spectrum_trade(2, 0, SpectrumFamily::Iii).is_err());
    }

    #[test]
    fn spectrum_sets() {
        let s = known_simple_spectrum(2).unwrap();
        assert_eq!(s.exists, BTreeSet::from([0, 4, 6, 7, 8, 9]));
        assert_eq!(s.not_exists, BTreeSet::from([1, 2, 3, 5]));
        let s = known_simple_spectrum(3).unwrap();
        assert_eq!(s.exists, BTreeSet::from([0, 8, 12, 14, 15, 16, 17, 18, 19]));
        assert_eq!(known_simple_spectrum(1).unwrap().exists, BTreeSet::from([0, 2, 3, 4]));
    }

    #[test]
    fn vol3_examples() {
        let t = vol3_template(4, [b(&[1]), b(&[2]), b(&[3, 4])], [b(&[3]), b(&[4]), b(&[1, 2])], Block::EMPTY).unwrap();
        assert!(t.is_simple() && t.is_trade(1).unwrap());
        assert!(vol3_template(4, [b(&[1]), b(&[2]), b(&[3, 4])], [b(&[1]), b(&[4]), b(&[2, 3])], Block::EMPTY).is_err());
        // repeated empty block: a multiset leg
        let m = vol3_template(3, [Block::EMPTY, Block::EMPTY, b(&[1, 2, 3])], [b(&[1]), b(&[2]), b(&[3])], Block::EMPTY)
            .unwrap();
        assert!(!m.is_simple());
    }

    #[test]
    fn vol6_examples() {
        let t = vol6_template(
            4,
            &Vol6Template::ThreeThree { x: Block::EMPTY, y: [b(&[1]), b(&[2]), b(&[3, 4])], z: [b(&[3]), b(&[4]), b(&[1, 2])] },
        )
        .unwrap();
        assert_eq!(t.volume().unwrap(), 6);
        let t = vol6_template(5, &Vol6Template::OneThree { y: [b(&[1]), b(&[2]), b(&[3])], z: [b(&[4]), b(&[5])] }).unwrap();
        assert_eq!(t.foundation().len(), 5);
        let bad = Vol6Template::OneOne { x: Block::EMPTY, y: [b(&[1]), b(&[2]), b(&[3])], z: [b(&[1, 2, 3]), Block::EMPTY, Block::EMPTY] };
        assert!(matches!(vol6_template(4, &bad), Err(TradeError::InvalidTemplate(_))));
    }

    #[test]
    fn partitions_cover() {
        let mut n = 0;
        for_each_partition(0b1011, 2, |p| {
            assert_eq!(p[0] | p[1], 0b1011);
            assert_eq!(p[0] & p[1], 0);
            n += 1;
        });
        assert_eq!(n, 8);
    }
}
