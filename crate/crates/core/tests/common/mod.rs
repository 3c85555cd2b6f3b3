//! Random generators and per-sample checks shared by the property suite and
//! the acceptance run. Checks return the first violation as an error string.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use tradeforge::anf::{anf_from_set, set_from_anf, Anf};
use tradeforge::canon::aut_size;
use tradeforge::construct::minimal_trade;
use tradeforge::gf2span::{affine_rank, trade_affine_rank};
use tradeforge::{canonical_form, canonical_key, Block, SignedTrade, Transform, Unitrade};

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// `X0 (X1 - Y1) ... (X_{t+1} - Y_{t+1})` with a random element layout.
pub fn random_minimal(rng: &mut StdRng, v: usize, t: usize) -> SignedTrade {
    let k = t + 1;
    let mut elements: Vec<usize> = (1..=v).collect();
    elements.shuffle(rng);
    // slot 0 is X0, slots 2j+1 / 2j+2 are X_j / Y_j, anything else unused
    let mut slots = vec![Block::EMPTY; 2 * k + 1];
    for (idx, &e) in elements.iter().enumerate() {
        let slot = if idx < k { 2 * idx + 1 + rng.gen_range(0..2) } else { rng.gen_range(0..2 * k + 3) };
        if slot < slots.len() {
            slots[slot] = slots[slot] | Block::singleton(e);
        }
    }
    let pairs: Vec<(Block, Block)> = (0..k).map(|j| (slots[2 * j + 1], slots[2 * j + 2])).collect();
    minimal_trade(v, slots[0], &pairs).unwrap()
}

/// A signed sum of shifted minimal trades; always a `[t]`-trade.
pub fn random_trade(rng: &mut StdRng, v: usize, t: usize) -> SignedTrade {
    let mut acc = SignedTrade::void(v);
    for _ in 0..rng.gen_range(1..=3) {
        let m = random_minimal(rng, v, t).shift(Block::from_mask(rng.gen_range(0..1u32 << v)));
        let m = if rng.gen_bool(0.5) { m.negated() } else { m };
        acc = acc.try_add(&m).unwrap();
    }
    acc
}

pub fn random_transform(rng: &mut StdRng, v: usize) -> Transform {
    let mut perm: Vec<u8> = (0..v as u8).collect();
    perm.shuffle(rng);
    Transform::new(perm, Block::from_mask(rng.gen_range(0..1u32 << v)), rng.gen_bool(0.5)).unwrap()
}

/// Minimum volume and the gaps below `2^(t+1)`.
pub fn check_gaps(u: &Unitrade, t: usize) -> Result<(), String> {
    if u.is_empty() {
        return Ok(());
    }
    let vol = u.volume() as u64;
    ensure!(vol >= 1 << t, "unitrade of volume {vol} below 2^{t}");
    if vol < 1 << (t + 1) {
        ensure!((0..=t).any(|i| vol == (1u64 << (t + 1)) - (1 << i)), "volume {vol} in a gap for t={t}");
    }
    Ok(())
}

/// Invariants that must agree on equal keys. The foundation and the
/// replications are taken relative to the first block, so they survive
/// shifts; replications are only leg-independent for `t >= 1`.
pub fn invariants(t: &SignedTrade) -> (u64, u32, i32, Vec<u64>) {
    let vol = t.volume().unwrap();
    let first = t.terms()[0].0;
    let moving = t.terms().iter().fold(Block::EMPTY, |acc, &(b, _)| acc | (b ^ first));
    let mut reps: Vec<u64> = t
        .foundation()
        .elements()
        .map(|i| {
            let r = t.replication(Block::singleton(i)).unwrap();
            r.min(vol - r)
        })
        .filter(|&r| r > 0)
        .collect();
    reps.sort_unstable();
    (vol, moving.len(), trade_affine_rank(t), reps)
}

/// Unitrade ⇔ degree bound on one random set (or random low-degree
/// polynomial), plus the gaps on every unitrade found.
pub fn check_degree(v: usize, seed: u64, polynomial: bool) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let set: Vec<Block> = if polynomial {
        let d = rng.gen_range(0..=v);
        let monomials: Vec<Block> =
            (0..1u32 << v).map(Block::from_mask).filter(|m| m.len() as usize <= d && rng.gen_bool(0.3)).collect();
        set_from_anf(&Anf::from_monomials(v, &monomials).unwrap())
    } else {
        let p = rng.gen_range(0.05..0.95);
        (0..1u32 << v).map(Block::from_mask).filter(|_| rng.gen_bool(p)).collect()
    };
    let f = anf_from_set(&set, v).unwrap();
    ensure!(set_from_anf(&f) == set, "ANF round trip failed");
    let u = Unitrade::from_blocks(v, set).unwrap();
    for t in 0..v {
        let uni = u.is_unitrade(t).unwrap();
        ensure!(uni == (f.degree() <= (v - t - 1) as i32), "v={v} t={t}: unitrade={uni}, degree={}", f.degree());
        if uni {
            check_gaps(&u, t)?;
        }
    }
    Ok(())
}

/// Shift, projection, decomposition, derived-trade, lifting and reduction
/// closure on one random `[t]`-trade.
pub fn check_closure(t: usize, v: usize, seed: u64) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let tr = random_trade(&mut rng, v, t);
    let poly = tr.to_polynomial();
    ensure!(tr.is_trade(t).unwrap(), "generator broke: {poly}");
    let odd = tr.odd_support();
    ensure!(odd.is_unitrade(t).unwrap(), "odd support not a unitrade: {poly}");
    check_gaps(&odd, t)?;
    if tr.is_void() {
        return Ok(());
    }
    let vol = tr.volume().unwrap();
    ensure!(vol >= 1 << t, "volume below 2^t: {poly}");
    if !odd.is_empty() {
        ensure!(affine_rank(odd.blocks()) > t as i32, "odd support too flat: {poly}");
    }

    let y = Block::from_mask(rng.gen_range(0..1u32 << v));
    let shifted = tr.shift(y);
    ensure!(shifted.is_trade(t).unwrap() && shifted.volume().unwrap() == vol, "shift broke: {poly}");
    ensure!(tr.strength() == shifted.strength(), "shift changed the strength: {poly}");

    for i in 1..=v {
        ensure!(tr.projection(i).unwrap().is_trade(t).unwrap(), "projection {i} broke: {poly}");
    }

    // T = P + x_i P′ with i outside P, P′
    if t > 0 {
        let xi = Block::singleton(rng.gen_range(1..=v));
        let p = tr.restrict(Block::EMPTY, xi).unwrap();
        let p2 = tr.restrict(xi, Block::EMPTY).unwrap().shift(xi);
        ensure!(p.is_trade(t - 1).unwrap() && p2.is_trade(t - 1).unwrap(), "decomposition broke: {poly}");
    }

    // derived trades T_{αβ̄}
    let alpha = Block::from_mask(rng.gen_range(0..1u32 << v));
    let beta = Block::from_mask(rng.gen_range(0..1u32 << v)).without(alpha);
    let k = (alpha.len() + beta.len()) as usize;
    if k <= t {
        ensure!(tr.restrict(alpha, beta).unwrap().is_trade(t - k).unwrap(), "derived trade broke: {poly}");
    }

    // (1 - x_i) T for a fresh element gains one strength
    if v < 8 {
        let lifted = tr.one_minus(Block::singleton(v + 1)).unwrap();
        ensure!(lifted.is_trade(t + 1).unwrap() && lifted.volume().unwrap() == 2 * vol, "lift broke: {poly}");
    }

    let reduced = tr.reduce().unwrap();
    ensure!(reduced.is_reduced().unwrap() && reduced.is_trade(t).unwrap(), "reduction broke: {poly}");

    if t >= 1 && tr.is_simple() {
        let x = tr.support().iter().fold(Block::EMPTY, |acc, &b| acc ^ b);
        ensure!(x == Block::EMPTY, "blocks of a simple [1]-trade do not cancel: {poly}");
    }
    Ok(())
}

/// Key, aut and invariants agree along `transforms` random group elements.
pub fn check_orbit(t: usize, v: usize, seed: u64, transforms: usize) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let tr = random_trade(&mut rng, v, t);
    let canon = canonical_form(&tr);
    ensure!(canon.key.decode() == canon.representative, "key does not decode to the representative");
    for _ in 0..transforms {
        let g = random_transform(&mut rng, v);
        let image = g.apply(&tr);
        ensure!(canonical_key(&image) == canon.key, "key moved under {g:?}: {}", tr.to_polynomial());
        ensure!(aut_size(&image) == canon.aut_size, "aut moved under {g:?}: {}", tr.to_polynomial());
        if t > 0 && !tr.is_void() {
            ensure!(invariants(&image) == invariants(&tr), "invariants moved: {}", tr.to_polynomial());
        }
    }
    Ok(())
}
