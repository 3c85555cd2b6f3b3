//! The equivalence group of trades and canonical forms.
//!
//! A [`Transform`] acts on a trade as `T ↦ s · π(Y ⊕ T)`: shift by `Y`, then
//! permute elements by `π`, then optionally swap the legs (`s = -1`). The
//! group has order `2 · 2^v · v!`.
//!
//! The canonical representative is the least serialization (mask sequence
//! first, then coefficient sequence) over the transforms that survive an
//! invariant-based pruning. The pruning is equivariant: the admissible set of
//! `h(T)` is the admissible set of `T` composed with `h^-1`. That keeps the
//! minimum a class invariant, and the number of admissible transforms that
//! reach the minimum equals `|Aut(T)|`.

use std::fmt;

use crate::block::Block;
use crate::error::{Result, TradeError};
use crate::trade::SignedTrade;

/// An element of the equivalence group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transform {
    /// `perm[e]` is the image of bit `e` (element `e + 1`).
    perm: Vec<u8>,
    shift: Block,
    swap: bool,
}

impl Transform {
    pub fn identity(v: usize) -> Self {
        Transform { perm: (0..v as u8).collect(), shift: Block::EMPTY, swap: false }
    }

    /// `perm` maps 0-based bit positions; it must be a permutation of `0..v`.
    pub fn new(perm: Vec<u8>, shift: Block, swap: bool) -> Result<Self> {
        let v = perm.len();
        let mut seen = vec![false; v];
        for &p in &perm {
            let p = p as usize;
            if p >= v || seen[p] {
                return Err(TradeError::InvalidParameter("not a permutation".into()));
            }
            seen[p] = true;
        }
        if !shift.fits(v) {
            return Err(TradeError::BlockOutOfRange { mask: shift.mask(), v });
        }
        Ok(Transform { perm, shift, swap })
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    pub fn shift(&self) -> Block {
        self.shift
    }

    pub fn swap(&self) -> bool {
        self.swap
    }

    /// Image of a block under shift-then-permute.
    #[inline]
    pub fn apply_block(&self, b: Block) -> Block {
        Block::from_mask(permute_mask(&self.perm, (b ^ self.shift).mask()))
    }

    pub fn apply(&self, t: &SignedTrade) -> SignedTrade {
        let sign = if self.swap { -1 } else { 1 };
        let mut terms: Vec<(Block, i64)> =
            t.terms().iter().map(|&(b, c)| (self.apply_block(b), sign * c)).collect();
        terms.sort_unstable_by_key(|&(b, _)| b);
        SignedTrade::from_sorted_terms(t.v().max(self.v()), terms)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Transform) -> Transform {
        assert_eq!(self.v(), other.v(), "transforms over different universes");
        let inv_other = invert(&other.perm);
        let pulled_back = permute_mask(&inv_other, self.shift.mask());
        Transform {
            perm: other.perm.iter().map(|&p| self.perm[p as usize]).collect(),
            shift: other.shift ^ Block::from_mask(pulled_back),
            swap: self.swap ^ other.swap,
        }
    }

    pub fn inverse(&self) -> Transform {
        let inv = invert(&self.perm);
        Transform {
            shift: Block::from_mask(permute_mask(&self.perm, self.shift.mask())),
            perm: inv,
            swap: self.swap,
        }
    }
}

fn invert(perm: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; perm.len()];
    for (e, &p) in perm.iter().enumerate() {
        inv[p as usize] = e as u8;
    }
    inv
}

#[inline]
pub(crate) fn permute_mask(perm: &[u8], mask: u32) -> u32 {
    let mut rest = mask;
    let mut out = 0u32;
    while rest != 0 {
        let e = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= 1 << perm[e];
    }
    out
}

/// `2 · 2^v · v!`.
pub fn group_order(v: usize) -> u128 {
    2 * (1u128 << v) * factorial(v)
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Every group element over `v` elements; only sensible for small `v`.
pub fn all_transforms(v: usize) -> impl Iterator<Item = Transform> {
    all_permutations(v).into_iter().flat_map(move |perm| {
        (0..1u32 << v).flat_map(move |shift| {
            let perm = perm.clone();
            [false, true].into_iter().map(move |swap| Transform {
                perm: perm.clone(),
                shift: Block::from_mask(shift),
                swap,
            })
        })
    })
}

/// All permutations of `0..v` in lexicographic order.
pub(crate) fn all_permutations(v: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..v as u8).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// Advances to the next lexicographic permutation; on the last one, resets to
/// sorted order and returns `false`.
fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Serialized canonical representative: `v`, the term count, the masks and
/// then the coefficients, all big-endian (coefficients offset-binary) so
/// that byte order equals the search order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    fn from_terms(v: usize, terms: &[(u32, i64)]) -> Self {
        let mut bytes = Vec::with_capacity(5 + terms.len() * 12);
        bytes.push(v as u8);
        bytes.extend_from_slice(&(terms.len() as u32).to_be_bytes());
        for &(m, _) in terms {
            bytes.extend_from_slice(&m.to_be_bytes());
        }
        for &(_, c) in terms {
            bytes.extend_from_slice(&((c as u64) ^ (1 << 63)).to_be_bytes());
        }
        CanonicalKey(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Reads back the representative the key encodes.
    pub fn decode(&self) -> SignedTrade {
        let v = self.0[0] as usize;
        let n = u32::from_be_bytes(self.0[1..5].try_into().unwrap()) as usize;
        let masks = &self.0[5..5 + 4 * n];
        let coeffs = &self.0[5 + 4 * n..];
        let terms = (0..n)
            .map(|k| {
                let m = u32::from_be_bytes(masks[4 * k..4 * k + 4].try_into().unwrap());
                let c = u64::from_be_bytes(coeffs[8 * k..8 * k + 8].try_into().unwrap()) ^ (1 << 63);
                (Block::from_mask(m), c as i64)
            })
            .collect();
        SignedTrade::from_sorted_terms(v, terms)
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.decode().to_polynomial())
    }
}

/// Canonical representative, its key, and the automorphism-group size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub key: CanonicalKey,
    pub representative: SignedTrade,
    pub aut_size: u128,
}

pub fn canonical_form(t: &SignedTrade) -> Canonical {
    let mut canon = Canonicalizer::default();
    let terms: Vec<(u32, i64)> = t.terms().iter().map(|&(b, c)| (b.mask(), c)).collect();
    let (best, aut_size) = canon.canonicalize(t.v(), &terms);
    let key = CanonicalKey::from_terms(t.v(), &best);
    let representative = SignedTrade::from_sorted_terms(
        t.v(),
        best.iter().map(|&(m, c)| (Block::from_mask(m), c)).collect(),
    );
    Canonical { key, representative, aut_size }
}

pub fn canonical_key(t: &SignedTrade) -> CanonicalKey {
    canonical_form(t).key
}

pub fn are_equivalent(a: &SignedTrade, b: &SignedTrade) -> Result<bool> {
    if a.v() != b.v() {
        return Err(TradeError::InvalidComparison(a.v(), b.v()));
    }
    Ok(canonical_key(a) == canonical_key(b))
}

/// Number of group elements fixing `t`.
pub fn aut_size(t: &SignedTrade) -> u128 {
    canonical_form(t).aut_size
}

#[inline]
fn fmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive combination of a label with a (commutatively summed)
/// multiset hash.
#[inline]
fn mix(h: u64, x: u64) -> u64 {
    fmix(h.rotate_left(23) ^ fmix(x))
}

/// Universes up to this size use bitset candidates over a dense table.
const DENSE_V: usize = 7;

/// Reusable scratch space for canonicalization.
#[derive(Default)]
pub(crate) struct Canonicalizer {
    block_inv: Vec<u64>,
    block_inv2: Vec<u64>,
    block_labels: Vec<u64>,
    shifted: Vec<(u32, i64)>,
    candidate: Vec<(u32, i64)>,
    best: Vec<(u32, i64)>,
    dense: Vec<i64>,
    best_dense: Vec<i64>,
    order: Vec<u8>,
    cells: Vec<(usize, usize)>,
}

impl Canonicalizer {
    /// Returns the canonical term list and `|Aut|`.
    pub(crate) fn canonicalize(&mut self, v: usize, terms: &[(u32, i64)]) -> (Vec<(u32, i64)>, u128) {
        let n = terms.len();
        if n == 0 {
            return (Vec::new(), group_order(v));
        }
        self.block_invariants(terms);
        let min_inv = *self.block_inv2.iter().min().unwrap();
        let dense = v <= DENSE_V;
        if dense && self.dense.len() < 1 << DENSE_V {
            self.dense = vec![0; 1 << DENSE_V];
            self.best_dense = vec![0; 1 << DENSE_V];
        }

        let mut aut: u128 = 0;
        let mut have_best = false;
        let mut best_set: u128 = 0;
        let mut order = std::mem::take(&mut self.order);
        let mut cells = std::mem::take(&mut self.cells);
        let mut perm = [0u8; 32];

        for k in 0..n {
            if self.block_inv2[k] != min_inv {
                continue;
            }
            let (y, ck) = terms[k];
            let sign = ck.signum();
            self.shifted.clear();
            self.shifted.extend(terms.iter().map(|&(m, c)| (m ^ y, c * sign)));

            let free = self.element_cells(v, &mut order, &mut cells);
            // elements outside every block permute freely without changing the image
            let free_factor = factorial(free);
            let searched = v - free;

            loop {
                for (pos, &e) in order[..searched].iter().enumerate() {
                    perm[e as usize] = pos as u8;
                }
                let ord = if dense {
                    let mut set = 0u128;
                    for &(m, c) in &self.shifted {
                        let pm = permute_mask(&perm, m);
                        set |= 1 << pm;
                        self.dense[pm as usize] = c;
                    }
                    let ord = if have_best {
                        compare_dense(set, &self.dense, best_set, &self.best_dense)
                    } else {
                        std::cmp::Ordering::Less
                    };
                    if ord.is_lt() {
                        std::mem::swap(&mut self.dense, &mut self.best_dense);
                        best_set = set;
                    }
                    ord
                } else {
                    self.candidate.clear();
                    self.candidate
                        .extend(self.shifted.iter().map(|&(m, c)| (permute_mask(&perm, m), c)));
                    self.candidate.sort_unstable_by_key(|&(m, _)| m);
                    let ord = if have_best {
                        compare_terms(&self.candidate, &self.best)
                    } else {
                        std::cmp::Ordering::Less
                    };
                    if ord.is_lt() {
                        std::mem::swap(&mut self.best, &mut self.candidate);
                    }
                    ord
                };
                match ord {
                    std::cmp::Ordering::Less => {
                        have_best = true;
                        aut = free_factor;
                    }
                    std::cmp::Ordering::Equal => aut += free_factor,
                    std::cmp::Ordering::Greater => {}
                }
                if !advance_cells(&mut order, &cells) {
                    break;
                }
            }
        }
        self.order = order;
        self.cells = cells;
        if dense {
            let mut out = Vec::with_capacity(n);
            let mut rest = best_set;
            while rest != 0 {
                let m = rest.trailing_zeros();
                rest &= rest - 1;
                out.push((m, self.best_dense[m as usize]));
            }
            (out, aut)
        } else {
            (self.best.clone(), aut)
        }
    }

    /// Shift- and permutation-invariant block labels, refined once.
    fn block_invariants(&mut self, terms: &[(u32, i64)]) {
        let n = terms.len();
        self.block_inv.clear();
        for k in 0..n {
            let (mk, ck) = terms[k];
            let mut acc = 0u64;
            for (j, &(mj, cj)) in terms.iter().enumerate() {
                if j != k {
                    let prod = ck.wrapping_mul(cj) as u64;
                    acc = acc.wrapping_add(fmix(prod.wrapping_shl(8) | (mk ^ mj).count_ones() as u64));
                }
            }
            self.block_inv.push(mix(ck.unsigned_abs(), acc));
        }
        self.block_inv2.clear();
        for k in 0..n {
            let (mk, ck) = terms[k];
            let mut acc = 0u64;
            for (j, &(mj, cj)) in terms.iter().enumerate() {
                if j != k {
                    let prod = ck.wrapping_mul(cj) as u64;
                    let edge = prod.wrapping_shl(8) | (mk ^ mj).count_ones() as u64;
                    acc = acc.wrapping_add(mix(edge, self.block_inv[j]));
                }
            }
            self.block_inv2.push(mix(self.block_inv[k], acc));
        }
    }

    /// Orders elements of the shifted trade by an equivariant label and
    /// splits them into cells of equal label. Elements in no block are put
    /// last; their count is returned and they are left out of `cells`.
    fn element_cells(&mut self, v: usize, order: &mut Vec<u8>, cells: &mut Vec<(usize, usize)>) -> usize {
        let shifted = &self.shifted;
        let occupied = shifted.iter().fold(0u32, |acc, &(m, _)| acc | m);
        let mut labels = [0u64; 32];
        for &(m, c) in shifted {
            let w = fmix(((c as u64) << 8) | m.count_ones() as u64);
            for_each_bit(m, |e| labels[e] = labels[e].wrapping_add(w));
        }
        let mut distinct = count_distinct(&labels[..v], occupied);
        for _ in 0..3 {
            self.block_labels.clear();
            for &(m, c) in shifted {
                let mut acc = 0u64;
                for_each_bit(m, |e| acc = acc.wrapping_add(fmix(labels[e])));
                self.block_labels.push(fmix(mix(c as u64, acc)));
            }
            let mut sums = [0u64; 32];
            for (&(m, _), &bl) in shifted.iter().zip(&self.block_labels) {
                for_each_bit(m, |e| sums[e] = sums[e].wrapping_add(bl));
            }
            for e in 0..v {
                labels[e] = mix(labels[e], sums[e]);
            }
            let now = count_distinct(&labels[..v], occupied);
            if now == distinct {
                break;
            }
            distinct = now;
        }

        order.clear();
        order.extend((0..v as u8).filter(|&e| occupied >> e & 1 == 1));
        let inside = order.len();
        order.sort_unstable_by_key(|&e| (labels[e as usize], e));
        order.extend((0..v as u8).filter(|&e| occupied >> e & 1 == 0));

        cells.clear();
        let mut start = 0;
        for pos in 1..=inside {
            if pos == inside || labels[order[pos] as usize] != labels[order[start] as usize] {
                if pos - start > 1 {
                    cells.push((start, pos));
                }
                start = pos;
            }
        }
        v - inside
    }
}

#[inline]
fn for_each_bit(mut m: u32, mut f: impl FnMut(usize)) {
    while m != 0 {
        f(m.trailing_zeros() as usize);
        m &= m - 1;
    }
}

fn count_distinct(labels: &[u64], occupied: u32) -> usize {
    let mut xs = [0u64; 32];
    let mut len = 0;
    for (e, &l) in labels.iter().enumerate() {
        if occupied >> e & 1 == 1 {
            xs[len] = l;
            len += 1;
        }
    }
    let xs = &mut xs[..len];
    xs.sort_unstable();
    1.min(len) + xs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Same order as [`compare_terms`] for equal-length candidates stored as a
/// mask bitset plus a dense coefficient table: the first differing mask of
/// two sorted lists is the lowest bit of the symmetric difference.
fn compare_dense(a_set: u128, a: &[i64], b_set: u128, b: &[i64]) -> std::cmp::Ordering {
    if a_set != b_set {
        let low = (a_set ^ b_set).trailing_zeros();
        return if a_set >> low & 1 == 1 { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater };
    }
    let mut rest = a_set;
    while rest != 0 {
        let m = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        match a[m].cmp(&b[m]) {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// Odometer over the permutations of every cell segment of `order`.
fn advance_cells(order: &mut [u8], cells: &[(usize, usize)]) -> bool {
    for &(start, end) in cells.iter().rev() {
        if next_permutation(&mut order[start..end]) {
            return true;
        }
    }
    false
}

fn compare_terms(a: &[(u32, i64)], b: &[(u32, i64)]) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().map(|t| t.0).cmp(b.iter().map(|t| t.0)))
        .then_with(|| a.iter().map(|t| t.1).cmp(b.iter().map(|t| t.1)))
}
