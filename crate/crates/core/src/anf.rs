//! Algebraic normal form of block sets and the volume/affine-rank
//! classification of small unitrades.
//!
//! A set `S ⊆ 2^V` is identified with its indicator function, written as a
//! GF(2) polynomial in `y_1, ..., y_v`. Monomial `∏_{i ∈ m} y_i` is indexed by
//! the mask `m`, so the polynomial and the truth table are both bit vectors
//! of length `2^v` and the binary Möbius transform maps one to the other.

use crate::block::Block;
use crate::error::{Result, TradeError};
use crate::gf2span::affine_rank;
use crate::unitrade::Unitrade;

/// Largest universe the dense transform accepts.
pub const ANF_UNIVERSE_CAP: usize = 25;

/// Lanes of a 64-bit word whose index has bit `b` clear.
const LOW_LANES: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// A Boolean polynomial over `v` variables, stored as packed coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Anf {
    v: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for Anf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let monomials: Vec<String> = self.monomials().iter().map(|m| m.to_string()).collect();
        write!(f, "Anf(v={}, {})", self.v, if monomials.is_empty() { "0".into() } else { monomials.join(" + ") })
    }
}

fn word_count(v: usize) -> usize {
    if v <= 6 {
        1
    } else {
        1 << (v - 6)
    }
}

fn check_cap(v: usize) -> Result<()> {
    if v > ANF_UNIVERSE_CAP {
        Err(TradeError::UniverseTooLarge { v, cap: ANF_UNIVERSE_CAP })
    } else {
        Ok(())
    }
}

fn pack(v: usize, points: &[Block]) -> Result<Vec<u64>> {
    check_cap(v)?;
    let mut words = vec![0u64; word_count(v)];
    for &b in points {
        if !b.fits(v) {
            return Err(TradeError::BlockOutOfRange { mask: b.mask(), v });
        }
        let m = b.mask() as usize;
        words[m >> 6] |= 1 << (m & 63);
    }
    Ok(words)
}

fn unpack(words: &[u64]) -> Vec<Block> {
    let mut out = Vec::new();
    for (wi, &w) in words.iter().enumerate() {
        let mut rest = w;
        while rest != 0 {
            let bit = rest.trailing_zeros();
            rest &= rest - 1;
            out.push(Block::from_mask(((wi as u32) << 6) | bit));
        }
    }
    out
}

/// In-place binary Möbius transform over GF(2): `a[m] <- ⊕_{x ⊆ m} a[x]`.
/// It is its own inverse.
fn moebius(words: &mut [u64], v: usize) {
    for (b, &low) in LOW_LANES.iter().enumerate().take(v.min(6)) {
        let width = 1u32 << b;
        for w in words.iter_mut() {
            *w ^= (*w & low) << width;
        }
    }
    for b in 6..v {
        let step = 1usize << (b - 6);
        for j in 0..words.len() {
            if j & step == 0 {
                words[j | step] ^= words[j];
            }
        }
    }
}

impl Anf {
    pub fn zero(v: usize) -> Result<Self> {
        check_cap(v)?;
        Ok(Anf { v, words: vec![0; word_count(v)] })
    }

    /// The polynomial whose set of ones is exactly `points`.
    pub fn from_set(v: usize, points: &[Block]) -> Result<Self> {
        let mut words = pack(v, points)?;
        moebius(&mut words, v);
        Ok(Anf { v, words })
    }

    /// The polynomial with exactly the given monomials.
    pub fn from_monomials(v: usize, monomials: &[Block]) -> Result<Self> {
        check_cap(v)?;
        let mut words = vec![0u64; word_count(v)];
        for &m in monomials {
            if !m.fits(v) {
                return Err(TradeError::BlockOutOfRange { mask: m.mask(), v });
            }
            // a repeated monomial cancels
            let m = m.mask() as usize;
            words[m >> 6] ^= 1 << (m & 63);
        }
        Ok(Anf { v, words })
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.v
    }

    /// Monomials with coefficient one, as masks in increasing order.
    pub fn monomials(&self) -> Vec<Block> {
        unpack(&self.words)
    }

    /// The set of ones (inverse transform).
    pub fn ones(&self) -> Vec<Block> {
        let mut words = self.words.clone();
        moebius(&mut words, self.v);
        unpack(&words)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Largest monomial size with a nonzero coefficient; `-1` for zero.
    pub fn degree(&self) -> i32 {
        self.monomials().iter().map(|m| m.len() as i32).max().unwrap_or(-1)
    }
}

/// Shorthand for [`Anf::from_set`].
pub fn anf_from_set(points: &[Block], v: usize) -> Result<Anf> {
    Anf::from_set(v, points)
}

/// Shorthand for [`Anf::ones`].
pub fn set_from_anf(f: &Anf) -> Vec<Block> {
    f.ones()
}

/// Affine type of a unitrade with volume below `2 · 2^t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KasamiKind {
    /// Volume `2^t`: a `(t+1)`-dimensional affine subspace.
    MinAffine,
    /// Symmetric difference of two `(t+1)`-dimensional affine subspaces.
    TypeA,
    /// Quadratic type, affine rank `t + 3`.
    TypeB,
    /// Volume at least `2 · 2^t`; not covered by this classifier.
    OutOfRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KasamiClass {
    pub kind: KasamiKind,
    /// `i` with `vol = 2^(t+1) - 2^i`, for the two typed classes.
    pub i: Option<u32>,
    pub expected_afrk: Option<i32>,
    pub volume: usize,
}

/// Classifies a nonempty `[t]`-unitrade by its volume and affine rank.
pub fn kasami_classify(u: &Unitrade, t: usize) -> Result<KasamiClass> {
    if u.is_empty() {
        return Err(TradeError::UndefinedOnEmpty);
    }
    if !u.is_unitrade(t)? {
        return Err(TradeError::InvalidParameter(format!("input is not a [{t}]-unitrade")));
    }
    let volume = u.volume();
    let afrk = affine_rank(u.blocks());
    let fail = || TradeError::ClassificationFailure { volume, afrk, t };
    let min = 1u64 << t;
    let vol = volume as u64;
    if vol < min {
        return Err(fail());
    }
    if vol == min {
        if afrk != t as i32 + 1 {
            return Err(fail());
        }
        return Ok(KasamiClass {
            kind: KasamiKind::MinAffine,
            i: None,
            expected_afrk: Some(t as i32 + 1),
            volume,
        });
    }
    if vol >= 2 * min {
        return Ok(KasamiClass { kind: KasamiKind::OutOfRange, i: None, expected_afrk: None, volume });
    }
    let gap = 2 * min - vol;
    if !gap.is_power_of_two() {
        return Err(fail());
    }
    let i = gap.trailing_zeros();
    let (t_i, i_i) = (t as i32, i as i32);
    if afrk == 2 * t_i + 2 - i_i {
        return Ok(KasamiClass {
            kind: KasamiKind::TypeA,
            i: Some(i),
            expected_afrk: Some(afrk),
            volume,
        });
    }
    if afrk == t_i + 3 && 2 * i_i >= t_i - 1 && i_i <= t_i - 2 {
        return Ok(KasamiClass {
            kind: KasamiKind::TypeB,
            i: Some(i),
            expected_afrk: Some(afrk),
            volume,
        });
    }
    Err(fail())
}
