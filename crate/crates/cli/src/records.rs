//! JSON Lines records: one trade or unitrade per line, masks with bit
//! `i - 1` standing for element `i`.

use std::io::{BufRead, Write};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use tradeforge::{Block, SignedTrade, Unitrade};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TradeRecord {
    pub v: usize,
    pub coeffs: Vec<(u32, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitradeRecord {
    pub v: usize,
    pub blocks: Vec<u32>,
}

fn check_universe(v: usize) -> anyhow::Result<()> {
    if v > tradeforge::block::MAX_ELEMENTS {
        bail!("v={v} exceeds {}", tradeforge::block::MAX_ELEMENTS);
    }
    Ok(())
}

fn check_mask(m: u32, v: usize) -> anyhow::Result<()> {
    if !Block::from_mask(m).fits(v) {
        bail!("mask {m} does not fit in {v} elements");
    }
    Ok(())
}

impl TradeRecord {
    pub fn from_trade(t: &SignedTrade) -> Self {
        TradeRecord { v: t.v(), coeffs: t.terms().iter().map(|&(b, c)| (b.mask(), c)).collect() }
    }

    /// Masks may come in any order; repeated masks and zero coefficients
    /// are rejected.
    pub fn to_trade(&self) -> anyhow::Result<SignedTrade> {
        check_universe(self.v)?;
        let mut masks: Vec<u32> = Vec::with_capacity(self.coeffs.len());
        for &(m, c) in &self.coeffs {
            check_mask(m, self.v)?;
            if c == 0 {
                bail!("zero coefficient on mask {m}");
            }
            masks.push(m);
        }
        masks.sort_unstable();
        if let Some(w) = masks.windows(2).find(|w| w[0] == w[1]) {
            bail!("mask {} appears twice", w[0]);
        }
        Ok(SignedTrade::from_terms(self.v, self.coeffs.iter().map(|&(m, c)| (Block::from_mask(m), c)))?)
    }
}

impl UnitradeRecord {
    #[cfg(test)]
    pub fn from_unitrade(u: &Unitrade) -> Self {
        UnitradeRecord { v: u.v(), blocks: u.blocks().iter().map(|b| b.mask()).collect() }
    }

    pub fn to_unitrade(&self) -> anyhow::Result<Unitrade> {
        check_universe(self.v)?;
        for &m in &self.blocks {
            check_mask(m, self.v)?;
        }
        Ok(Unitrade::from_blocks(self.v, self.blocks.iter().map(|&m| Block::from_mask(m)))?)
    }
}

/// Parses every nonblank line; errors carry the 1-based line number.
pub fn read_lines<T, R: BufRead>(reader: R) -> Vec<(usize, anyhow::Result<T>)>
where
    T: for<'de> Deserialize<'de>,
{
    reader
        .lines()
        .enumerate()
        .filter_map(|(idx, line)| {
            let line = match line {
                Ok(l) => l,
                Err(e) => return Some((idx + 1, Err(e.into()))),
            };
            if line.trim().is_empty() {
                return None;
            }
            Some((idx + 1, serde_json::from_str(&line).with_context(|| "malformed record")))
        })
        .collect()
}

pub fn write_line<T: Serialize, W: Write>(out: &mut W, record: &T) -> anyhow::Result<()> {
    serde_json::to_writer(&mut *out, record)?;
    out.write_all(b"\n")?;
    Ok(())
}
