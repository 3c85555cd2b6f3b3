//! Replication-parity audit of simple `[2]`-trades on five elements.

use std::collections::{BTreeMap, BTreeSet};

use crate::block::Block;
use crate::error::{Result, TradeError};
use crate::trade::SignedTrade;

use super::ClassTable;

/// Per volume: whether the number of odd replications must be odd, and the
/// odd replication values allowed.
const RULES: [(u64, bool, &[u64]); 3] = [(6, true, &[3]), (8, false, &[3, 5]), (10, true, &[5])];

#[derive(Debug, Clone)]
pub struct ParityAudit {
    pub pass: bool,
    /// Classes inspected (simple, foundation of size 5, volume 6, 8 or 10).
    pub checked: usize,
    /// Odd replication values seen, per volume.
    pub odd_values: BTreeMap<u64, BTreeSet<u64>>,
    pub counterexample: Option<SignedTrade>,
}

/// Needs the `(t = 2, v = 5)` level with volume cap at least 10.
pub fn parity_audit(table: &ClassTable) -> Result<ParityAudit> {
    let spec = table.spec;
    if spec.t != 2 || spec.v != 5 || spec.vol_cap < 10 {
        return Err(TradeError::InvalidParameter(format!(
            "audit needs t=2, v=5, cap >= 10; got t={}, v={}, cap={}",
            spec.t, spec.v, spec.vol_cap
        )));
    }
    let mut audit = ParityAudit { pass: true, checked: 0, odd_values: BTreeMap::new(), counterexample: None };
    for class in &table.classes {
        let Some(&(_, odd_count_odd, allowed)) = RULES.iter().find(|r| r.0 == class.volume) else {
            continue;
        };
        if !class.simple || class.foundation_size != 5 {
            continue;
        }
        audit.checked += 1;
        let rep = &class.representative;
        let odd: Vec<u64> = rep
            .foundation()
            .elements()
            .map(|i| rep.replication(Block::singleton(i)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|r| r % 2 == 1)
            .collect();
        audit.odd_values.entry(class.volume).or_default().extend(odd.iter().copied());
        let ok = (odd.len() % 2 == 1) == odd_count_odd && odd.iter().all(|r| allowed.contains(r));
        if !ok && audit.pass {
            audit.pass = false;
            audit.counterexample = Some(rep.clone());
        }
    }
    Ok(audit)
}
