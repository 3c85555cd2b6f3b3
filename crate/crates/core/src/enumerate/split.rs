//! Searching for a ±1 signing of a unitrade that makes it a simple trade.

use crate::block::subsets_of_size;
use crate::error::{Result, TradeError};
use crate::trade::SignedTrade;
use crate::unitrade::Unitrade;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitOutcome {
    /// A simple trade whose legs partition the unitrade.
    Found(SignedTrade),
    /// No signing exists.
    None,
    /// The node budget ran out first.
    Unknown,
}

/// Backtracking over signs with unit propagation on the superset-sum
/// equations. The first block is fixed positive (the swap symmetry).
pub fn split_unitrade(u: &Unitrade, t: usize, node_budget: Option<u64>) -> Result<SplitOutcome> {
    if !u.is_unitrade(t)? {
        return Err(TradeError::InvalidParameter(format!("not a [{t}]-unitrade")));
    }
    if u.is_empty() {
        return Ok(SplitOutcome::Found(SignedTrade::void(u.v())));
    }
    let mut solver = Solver::new(u, t);
    solver.budget = node_budget;
    let ok = solver.assign(0, 1) && solver.propagate();
    let found = if ok { solver.search() } else { Some(false) };
    match found {
        Some(true) => {
            let signs: Vec<i64> = solver.val.iter().map(|&s| s as i64).collect();
            let trade = u.with_signs(&signs)?;
            debug_assert!(trade.is_trade(t)? && trade.odd_support() == *u);
            Ok(SplitOutcome::Found(trade))
        }
        Some(false) => Ok(SplitOutcome::None),
        None => Ok(SplitOutcome::Unknown),
    }
}

struct Solver {
    /// Block indices of each equation `Σ_{B ⊇ S} s_B = 0`.
    cons: Vec<Vec<u32>>,
    var_cons: Vec<Vec<u32>>,
    sum: Vec<i32>,
    free: Vec<u32>,
    val: Vec<i8>,
    trail: Vec<u32>,
    queue: Vec<u32>,
    nodes: u64,
    budget: Option<u64>,
}

impl Solver {
    fn new(u: &Unitrade, t: usize) -> Self {
        let blocks = u.blocks();
        let found = u.foundation();
        let mut cons: Vec<Vec<u32>> = Vec::new();
        // strongest equations first
        for k in (0..=t.min(found.len() as usize)).rev() {
            for s in subsets_of_size(found, k) {
                let members: Vec<u32> =
                    (0..blocks.len() as u32).filter(|&j| s.is_subset_of(blocks[j as usize])).collect();
                if !members.is_empty() {
                    cons.push(members);
                }
            }
        }
        let mut var_cons = vec![Vec::new(); blocks.len()];
        for (c, members) in cons.iter().enumerate() {
            for &j in members {
                var_cons[j as usize].push(c as u32);
            }
        }
        let free = cons.iter().map(|m| m.len() as u32).collect();
        Solver {
            sum: vec![0; cons.len()],
            free,
            cons,
            var_cons,
            val: vec![0; blocks.len()],
            trail: Vec::new(),
            queue: Vec::new(),
            nodes: 0,
            budget: None,
        }
    }

    /// Sets a sign; false on an immediate contradiction.
    fn assign(&mut self, x: usize, s: i8) -> bool {
        self.val[x] = s;
        self.trail.push(x as u32);
        let mut ok = true;
        for &c in &self.var_cons[x] {
            let c = c as usize;
            self.sum[c] += s as i32;
            self.free[c] -= 1;
            let need = self.sum[c].unsigned_abs();
            if need > self.free[c] {
                ok = false;
            } else if need == self.free[c] && need > 0 {
                self.queue.push(c as u32);
            }
        }
        ok
    }

    /// Forces the remaining signs of saturated equations.
    fn propagate(&mut self) -> bool {
        while let Some(c) = self.queue.pop() {
            let c = c as usize;
            if self.free[c] == 0 || self.sum[c].unsigned_abs() != self.free[c] {
                continue;
            }
            let s: i8 = if self.sum[c] > 0 { -1 } else { 1 };
            for idx in 0..self.cons[c].len() {
                let x = self.cons[c][idx] as usize;
                if self.val[x] == 0 && !self.assign(x, s) {
                    self.queue.clear();
                    return false;
                }
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let x = self.trail.pop().unwrap() as usize;
            let s = self.val[x] as i32;
            for &c in &self.var_cons[x] {
                self.sum[c as usize] -= s;
                self.free[c as usize] += 1;
            }
            self.val[x] = 0;
        }
    }

    /// `Some(found)`, or `None` when the budget ran out.
    fn search(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return None;
        }
        // branch inside the tightest open equation
        let mut best: Option<(u32, usize)> = None;
        for (c, &f) in self.free.iter().enumerate() {
            if f > 0 && best.is_none_or(|(bf, _)| f < bf) {
                best = Some((f, c));
            }
        }
        let Some((_, c)) = best else {
            return Some(true);
        };
        let x = self.cons[c].iter().map(|&j| j as usize).find(|&j| self.val[j] == 0).unwrap();
        let mark = self.trail.len();
        for s in [1i8, -1] {
            if self.assign(x, s) && self.propagate() {
                match self.search() {
                    Some(false) => {}
                    other => return other,
                }
            }
            self.queue.clear();
            self.undo_to(mark);
        }
        Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::Block;

    fn tuples(ts: &[&str]) -> Vec<Block> {
        ts.iter().map(|s| Block::from_tuple(s).unwrap()).collect()
    }

    fn brute_force(u: &Unitrade, t: usize) -> bool {
        let n = u.len();
        (0..1u64 << n).any(|bits| {
            let signs: Vec<i64> = (0..n).map(|j| if bits >> j & 1 == 1 { 1 } else { -1 }).collect();
            u.with_signs(&signs).unwrap().is_trade(t).unwrap()
        })
    }

    #[test]
    fn square_splits() {
        let u = Unitrade::from_blocks(2, tuples(&["00", "10", "01", "11"])).unwrap();
        let SplitOutcome::Found(t) = split_unitrade(&u, 1, None).unwrap() else { panic!() };
        assert!(t.is_trade(1).unwrap());
        let plus: Vec<Block> = t.positive_leg();
        assert!(plus == tuples(&["00", "11"]) || plus == tuples(&["10", "01"]));
    }

    #[test]
    fn example_set_matches_oracle() {
        let u = Unitrade::from_blocks(5, tuples(&["00111", "10011", "01011", "11001", "11100", "11010"])).unwrap();
        let out = split_unitrade(&u, 1, None).unwrap();
        assert_eq!(matches!(out, SplitOutcome::Found(_)), brute_force(&u, 1));
        if let SplitOutcome::Found(t) = out {
            assert_eq!(t.odd_support(), u);
            assert!(t.is_trade(1).unwrap());
        }
    }

    #[test]
    fn budget_gives_unknown() {
        let u = Unitrade::from_blocks(5, tuples(&["00111", "10011", "01011", "11001", "11100", "11010"])).unwrap();
        assert_eq!(split_unitrade(&u, 1, Some(0)).unwrap(), SplitOutcome::Unknown);
    }

    #[test]
    fn non_unitrade_rejected() {
        let u = Unitrade::from_blocks(2, tuples(&["00", "10"])).unwrap();
        assert!(split_unitrade(&u, 1, None).is_err());
    }
}
