//! Isomorph-free enumeration of volume-capped `[t]`-trades.
//!
//! Every `[t]`-trade on `2^[v]` splits as `T = P + x_v P'` with `P`, `P'`
//! free of element `v`; its projection `T' = P + P'` is a `[t]`-trade on
//! `2^[v-1]` and `P`, `P'` are `[t-1]`-trades, at least one of them with
//! volume at most `cap / 2`. A level `(t, v, cap)` is therefore built from
//! the class representatives of `(t, v-1, cap)` and all labeled trades of
//! `(t-1, v-1, cap/2)`:
//!
//! * `T' - (1 - x_v) T''` always, and
//! * `x_v T' + (1 - x_v) T''` when `vol(T' - T'') > cap / 2`,
//!
//! keeping results of volume at most `cap` and deduplicating by canonical
//! key. The level `t = 0` is enumerated directly.

mod audit;
mod report;
pub mod split;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::block::Block;
use crate::canon::{all_permutations, group_order, permute_mask, CanonicalKey, Canonicalizer};
use crate::error::{Result, TradeError};
use crate::gf2span::trade_affine_rank;
use crate::trade::SignedTrade;

pub use audit::{parity_audit, ParityAudit};
pub use report::{table_report, TableReport};
pub use split::{split_unitrade, SplitOutcome};

/// Parameters of one enumeration level: all `[t]`-trades with foundation in
/// `[v]` and volume at most `vol_cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelSpec {
    pub t: usize,
    pub v: usize,
    pub vol_cap: u64,
}

impl LevelSpec {
    pub fn new(t: usize, v: usize, vol_cap: u64) -> Self {
        LevelSpec { t, v, vol_cap }
    }

    /// The two levels this one is built from, or `None` for base levels.
    pub fn sub_levels(&self) -> Option<(LevelSpec, LevelSpec)> {
        if self.t == 0 || self.v == 0 {
            return None;
        }
        Some((
            LevelSpec::new(self.t, self.v - 1, self.vol_cap),
            LevelSpec::new(self.t - 1, self.v - 1, self.vol_cap / 2),
        ))
    }
}

/// One equivalence class of an enumerated level.
#[derive(Debug, Clone)]
pub struct ClassRecord {
    pub key: CanonicalKey,
    pub representative: SignedTrade,
    pub aut_size: u128,
    pub volume: u64,
    pub simple: bool,
    pub degenerate: bool,
    /// Some projection keeps the volume (weaker than `degenerate`).
    pub extension: bool,
    pub foundation_size: usize,
    pub afrk: i32,
}

impl ClassRecord {
    fn from_canonical(v: usize, terms: Vec<(u32, i64)>, aut_size: u128) -> Self {
        let key = canonical_key_of(v, &terms);
        let representative = SignedTrade::from_sorted_terms(
            v,
            terms.into_iter().map(|(m, c)| (Block::from_mask(m), c)).collect(),
        );
        let volume = representative.half_mass();
        let degenerate = volume > 0 && representative.is_degenerate().unwrap_or(false);
        let extension = volume > 0 && representative.is_extension().unwrap_or(false);
        ClassRecord {
            key,
            simple: representative.is_simple(),
            degenerate,
            extension,
            foundation_size: representative.foundation().len() as usize,
            afrk: trade_affine_rank(&representative),
            representative,
            aut_size,
            volume,
        }
    }

    /// `|Aut(2^V)| / |Aut(T)|`: the number of labeled trades in the class.
    pub fn orbit_size(&self) -> u128 {
        group_order(self.representative.v()) / self.aut_size
    }
}

fn canonical_key_of(v: usize, terms: &[(u32, i64)]) -> CanonicalKey {
    let t = SignedTrade::from_sorted_terms(v, terms.iter().map(|&(m, c)| (Block::from_mask(m), c)).collect());
    crate::canon::canonical_form(&t).key
}

/// The four counts printed in a table cell `a(b) c(d)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CellCounts {
    pub all: usize,
    pub non_degenerate: usize,
    pub simple: usize,
    pub non_degenerate_simple: usize,
}

impl std::fmt::Display for CellCounts {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({}) {}({})", self.all, self.non_degenerate, self.simple, self.non_degenerate_simple)
    }
}

/// All classes of a level, sorted by canonical key.
#[derive(Debug, Clone)]
pub struct ClassTable {
    pub spec: LevelSpec,
    pub classes: Vec<ClassRecord>,
    /// Labeled trades counted while generating the level.
    pub labeled_total: u128,
}

impl ClassTable {
    /// Per-volume counts.
    pub fn cells(&self) -> BTreeMap<u64, CellCounts> {
        self.cells_by(|c| c.degenerate)
    }

    /// Per-volume counts under an alternative degeneracy predicate.
    pub fn cells_by(&self, degenerate: impl Fn(&ClassRecord) -> bool) -> BTreeMap<u64, CellCounts> {
        let mut out: BTreeMap<u64, CellCounts> = BTreeMap::new();
        for c in &self.classes {
            let cell = out.entry(c.volume).or_default();
            cell.all += 1;
            let c_degenerate = degenerate(c);
            if !c_degenerate {
                cell.non_degenerate += 1;
            }
            if c.simple {
                cell.simple += 1;
                if !c_degenerate {
                    cell.non_degenerate_simple += 1;
                }
            }
        }
        out
    }

    pub fn cell(&self, volume: u64) -> CellCounts {
        self.cells().get(&volume).copied().unwrap_or_default()
    }

    pub fn find(&self, key: &CanonicalKey) -> Option<&ClassRecord> {
        self.classes.binary_search_by(|c| c.key.cmp(key)).ok().map(|i| &self.classes[i])
    }

    /// Classes of the given volume.
    pub fn of_volume(&self, volume: u64) -> impl Iterator<Item = &ClassRecord> {
        self.classes.iter().filter(move |c| c.volume == volume)
    }
}

/// Outcome of the orbit–stabilizer double count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleCount {
    /// `Σ |Aut(2^V)| / |Aut(T)|` over class representatives.
    pub lhs: u128,
    /// Labeled trades counted during generation.
    pub rhs: u128,
    pub pass: bool,
}

pub fn double_count_check(table: &ClassTable) -> DoubleCount {
    let lhs = table.classes.iter().map(ClassRecord::orbit_size).sum();
    DoubleCount { lhs, rhs: table.labeled_total, pass: lhs == table.labeled_total }
}

/// Thread count and labeled-trade budget for an [`Enumerator`].
#[derive(Debug, Clone, Copy, Default)]
pub struct EnumerationConfig {
    /// Worker threads; `0` uses the rayon default.
    pub jobs: usize,
    /// Upper bound on labeled trades generated across all levels.
    pub budget: Option<u64>,
}

struct Budget {
    limit: Option<u64>,
    spent: AtomicU64,
}

impl Budget {
    fn spend(&self, units: u64) -> Result<()> {
        let total = self.spent.fetch_add(units, Ordering::Relaxed) + units;
        match self.limit {
            Some(limit) if total > limit => Err(TradeError::EnumerationAborted { spent: total, limit }),
            _ => Ok(()),
        }
    }
}

/// Memoizing driver for the level recursion.
pub struct Enumerator {
    budget: Budget,
    pool: rayon::ThreadPool,
    cache: HashMap<LevelSpec, Arc<ClassTable>>,
}

impl Default for Enumerator {
    fn default() -> Self {
        Self::new(EnumerationConfig::default())
    }
}

impl Enumerator {
    pub fn new(config: EnumerationConfig) -> Self {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .expect("failed to build worker pool");
        Enumerator {
            budget: Budget { limit: config.budget, spent: AtomicU64::new(0) },
            pool,
            cache: HashMap::new(),
        }
    }

    /// Budget units consumed so far.
    pub fn spent(&self) -> u64 {
        self.budget.spent.load(Ordering::Relaxed)
    }

    /// Enumerates (or returns the cached) level.
    pub fn level(&mut self, spec: LevelSpec) -> Result<Arc<ClassTable>> {
        if let Some(table) = self.cache.get(&spec) {
            return Ok(Arc::clone(table));
        }
        let table = match spec.sub_levels() {
            None if spec.t == 0 => base_level(spec, &self.budget)?,
            None => void_level(spec),
            Some((same_t, lower_t)) => {
                let prev = self.level(same_t)?;
                let lower = self.level(lower_t)?;
                let budget = &self.budget;
                self.pool.install(|| combine(spec, &prev, &lower, budget))?
            }
        };
        let table = Arc::new(table);
        self.cache.insert(spec, Arc::clone(&table));
        Ok(table)
    }
}

/// One-shot enumeration with default settings.
pub fn enumerate_level(spec: LevelSpec) -> Result<ClassTable> {
    let mut e = Enumerator::default();
    Ok((*e.level(spec)?).clone())
}

fn void_level(spec: LevelSpec) -> ClassTable {
    let void = ClassRecord::from_canonical(spec.v, Vec::new(), group_order(spec.v));
    ClassTable { spec, classes: vec![void], labeled_total: 1 }
}

fn finish(spec: LevelSpec, found: HashMap<Vec<(u32, i64)>, u128>, labeled_total: u128) -> ClassTable {
    let mut classes: Vec<ClassRecord> = found
        .into_iter()
        .map(|(terms, aut)| ClassRecord::from_canonical(spec.v, terms, aut))
        .collect();
    classes.sort_by(|a, b| a.key.cmp(&b.key));
    ClassTable { spec, classes, labeled_total }
}

/// All labeled `[0]`-trades of volume at most `cap` on `2^[v]`.
pub(crate) fn labeled_zero_trades(v: usize, cap: u64) -> Vec<Vec<(u32, i64)>> {
    fn walk(
        block: u32,
        n_blocks: u32,
        pos: u64,
        neg: u64,
        cap: u64,
        cur: &mut Vec<(u32, i64)>,
        out: &mut Vec<Vec<(u32, i64)>>,
    ) {
        if block == n_blocks {
            if pos == neg {
                out.push(cur.clone());
            }
            return;
        }
        walk(block + 1, n_blocks, pos, neg, cap, cur, out);
        for c in 1..=(cap - pos) {
            cur.push((block, c as i64));
            walk(block + 1, n_blocks, pos + c, neg, cap, cur, out);
            cur.pop();
        }
        for c in 1..=(cap - neg) {
            cur.push((block, -(c as i64)));
            walk(block + 1, n_blocks, pos, neg + c, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    walk(0, 1 << v, 0, 0, cap, &mut Vec::new(), &mut out);
    out
}

fn base_level(spec: LevelSpec, budget: &Budget) -> Result<ClassTable> {
    let labeled = labeled_zero_trades(spec.v, spec.vol_cap);
    budget.spend(labeled.len() as u64)?;
    let mut canon = Canonicalizer::default();
    let mut found = HashMap::new();
    for terms in &labeled {
        let (best, aut) = canon.canonicalize(spec.v, terms);
        found.entry(best).or_insert(aut);
    }
    Ok(finish(spec, found, labeled.len() as u128))
}

/// Distinct images of `terms` under the full group on `v` elements.
pub(crate) fn orbit_terms(v: usize, terms: &[(u32, i64)], perms: &[Vec<u8>]) -> Vec<Vec<(u32, i64)>> {
    let mut seen: HashSet<Vec<(u32, i64)>> = HashSet::new();
    let mut permuted: HashSet<Vec<(u32, i64)>> = HashSet::new();
    for perm in perms {
        let mut img: Vec<(u32, i64)> = terms.iter().map(|&(m, c)| (permute_mask(perm, m), c)).collect();
        img.sort_unstable();
        permuted.insert(img);
    }
    for img in &permuted {
        for y in 0..1u32 << v {
            for sign in [1i64, -1] {
                let mut shifted: Vec<(u32, i64)> = img.iter().map(|&(m, c)| (m ^ y, c * sign)).collect();
                shifted.sort_unstable();
                seen.insert(shifted);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Every labeled trade of a level, by orbit expansion of its classes.
pub fn labeled_trades(table: &ClassTable) -> Vec<SignedTrade> {
    let v = table.spec.v;
    let perms = all_permutations(v);
    table
        .classes
        .iter()
        .flat_map(|c| {
            let terms: Vec<(u32, i64)> = c.representative.terms().iter().map(|&(b, x)| (b.mask(), x)).collect();
            orbit_terms(v, &terms, &perms)
        })
        .map(|terms| {
            SignedTrade::from_sorted_terms(v, terms.into_iter().map(|(m, c)| (Block::from_mask(m), c)).collect())
        })
        .collect()
}

/// A `[t]`-trade representative of the previous level, laid out for the
/// combination loop.
struct Projection {
    sparse: Vec<(u32, i64)>,
    dense: Vec<i64>,
    mass: i64,
    weight: u128,
}

struct Partial {
    found: HashMap<Vec<(u32, i64)>, u128>,
    solutions: Vec<u64>,
}

fn combine(spec: LevelSpec, prev: &ClassTable, lower: &ClassTable, budget: &Budget) -> Result<ClassTable> {
    let cap = spec.vol_cap;
    let half = cap / 2;
    let sub_v = spec.v - 1;
    let high = 1u32 << sub_v;
    let sub_order = group_order(sub_v);

    let projections: Vec<Projection> = prev
        .classes
        .iter()
        .map(|c| {
            let sparse: Vec<(u32, i64)> =
                c.representative.terms().iter().map(|&(b, x)| (b.mask(), x)).collect();
            let mut dense = vec![0i64; 1 << sub_v];
            for &(m, x) in &sparse {
                dense[m as usize] = x;
            }
            let mass = sparse.iter().map(|&(_, x)| x.abs()).sum();
            debug_assert_eq!(sub_order % c.aut_size, 0);
            Projection { sparse, dense, mass, weight: sub_order / c.aut_size }
        })
        .collect();
    let perms = all_permutations(sub_v);

    let partials: Vec<Result<Partial>> = lower
        .classes
        .par_iter()
        .map(|rec| {
            let rep: Vec<(u32, i64)> = rec.representative.terms().iter().map(|&(b, x)| (b.mask(), x)).collect();
            let orbit = orbit_terms(sub_v, &rep, &perms);
            budget.spend(orbit.len() as u64)?;
            let mut part = Partial { found: HashMap::new(), solutions: vec![0; projections.len()] };
            let mut canon = Canonicalizer::default();
            let mut difference: Vec<(u32, i64)> = Vec::new();
            let mut candidate: Vec<(u32, i64)> = Vec::new();
            let mut generated = 0u64;
            for lower_terms in &orbit {
                let lower_vol = lower_terms.iter().map(|&(_, x)| x.abs()).sum::<i64>() as u64 / 2;
                for (j, p) in projections.iter().enumerate() {
                    let mut mass = p.mass;
                    for &(m, x) in lower_terms {
                        let d = p.dense[m as usize];
                        mass += (d - x).abs() - d.abs();
                    }
                    let diff_vol = mass as u64 / 2;
                    if lower_vol + diff_vol > cap {
                        continue;
                    }
                    subtract_sorted(&p.sparse, lower_terms, &mut difference);

                    // T' - (1 - x_v) T'' = (T' - T'') + x_v T''
                    candidate.clear();
                    candidate.extend_from_slice(&difference);
                    candidate.extend(lower_terms.iter().map(|&(m, x)| (m | high, x)));
                    let (best, aut) = canon.canonicalize(spec.v, &candidate);
                    part.found.entry(best).or_insert(aut);
                    part.solutions[j] += 1;
                    generated += 1;

                    if diff_vol > half {
                        // x_v T' + (1 - x_v) T'' = T'' + x_v (T' - T'')
                        candidate.clear();
                        candidate.extend_from_slice(lower_terms);
                        candidate.extend(difference.iter().map(|&(m, x)| (m | high, x)));
                        let (best, aut) = canon.canonicalize(spec.v, &candidate);
                        part.found.entry(best).or_insert(aut);
                        part.solutions[j] += 1;
                        generated += 1;
                    }
                }
            }
            budget.spend(generated)?;
            Ok(part)
        })
        .collect();

    let mut found: HashMap<Vec<(u32, i64)>, u128> = HashMap::new();
    let mut solutions = vec![0u64; projections.len()];
    for part in partials {
        let part = part?;
        for (terms, aut) in part.found {
            found.entry(terms).or_insert(aut);
        }
        for (acc, s) in solutions.iter_mut().zip(part.solutions) {
            *acc += s;
        }
    }
    let labeled_total = projections
        .iter()
        .zip(&solutions)
        .map(|(p, &s)| p.weight * s as u128)
        .sum();
    Ok(finish(spec, found, labeled_total))
}

/// `out <- a - b` for sorted sparse term lists.
fn subtract_sorted(a: &[(u32, i64)], b: &[(u32, i64)], out: &mut Vec<(u32, i64)>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(ma, xa)), Some(&(mb, xb))) if ma == mb => {
                if xa != xb {
                    out.push((ma, xa - xb));
                }
                i += 1;
                j += 1;
            }
            (Some(&(ma, xa)), Some(&(mb, _))) if ma < mb => {
                out.push((ma, xa));
                i += 1;
            }
            (Some(&(ma, xa)), None) => {
                out.push((ma, xa));
                i += 1;
            }
            (_, Some(&(mb, xb))) => {
                out.push((mb, -xb));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t1_v3() {
        let table = enumerate_level(LevelSpec::new(1, 3, 3)).unwrap();
        assert_eq!(table.cell(2).all, 2);
        assert_eq!(table.cell(3).all, 1);
        assert_eq!(table.cell(3).simple, 0);
        assert!(double_count_check(&table).pass);
    }

    #[test]
    fn t2_v4() {
        let table = enumerate_level(LevelSpec::new(2, 4, 7)).unwrap();
        let cells = table.cells();
        assert_eq!(cells[&4], CellCounts { all: 2, non_degenerate: 1, simple: 2, non_degenerate_simple: 1 });
        assert_eq!(cells[&6], CellCounts { all: 2, non_degenerate: 2, simple: 0, non_degenerate_simple: 0 });
        assert_eq!(cells.len(), 3);
        assert!(double_count_check(&table).pass);
    }

    #[test]
    fn below_minimum_volume_only_void() {
        for t in 0..4 {
            let cap = (1u64 << t) - 1;
            let table = enumerate_level(LevelSpec::new(t, 5, cap)).unwrap();
            assert_eq!(table.classes.len(), 1);
            assert!(table.classes[0].representative.is_void());
        }
    }

    #[test]
    fn tiny_double_counts() {
        let table = enumerate_level(LevelSpec::new(1, 2, 2)).unwrap();
        let dc = double_count_check(&table);
        assert_eq!((dc.lhs, dc.rhs), (3, 3));
        let table = enumerate_level(LevelSpec::new(2, 4, 0)).unwrap();
        let dc = double_count_check(&table);
        assert_eq!((dc.lhs, dc.rhs, dc.pass), (1, 1, true));
    }

    #[test]
    fn budget_aborts() {
        let mut e = Enumerator::new(EnumerationConfig { jobs: 1, budget: Some(10) });
        assert!(matches!(e.level(LevelSpec::new(1, 4, 3)), Err(TradeError::EnumerationAborted { .. })));
    }

    #[test]
    fn report_formats_and_gaps() {
        let mut e = Enumerator::default();
        let r = table_report(&mut e, 1, 4, 3);
        assert!(r.is_complete());
        assert_eq!(r.cell(4, 3).unwrap(), CellCounts { all: 5, non_degenerate: 4, simple: 3, non_degenerate_simple: 3 });
        let text = r.to_string();
        assert!(text.contains("5(4) 3(3)"), "{text}");
        let mut tight = Enumerator::new(EnumerationConfig { jobs: 1, budget: Some(100) });
        let r = table_report(&mut tight, 1, 5, 3);
        assert!(!r.is_complete());
        assert!(r.rows.last().unwrap().cells.is_none());
        assert!(r.to_string().contains("incomplete"));
    }

    #[test]
    fn subtraction() {
        let mut out = Vec::new();
        subtract_sorted(&[(0, 1), (3, -1), (5, 2)], &[(3, -1), (4, 1), (5, 1)], &mut out);
        assert_eq!(out, vec![(0, 1), (4, -1), (5, 1)]);
    }
}
