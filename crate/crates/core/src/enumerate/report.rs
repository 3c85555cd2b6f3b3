//! Text tables of class counts, one row per universe size.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::TradeError;

use super::{CellCounts, Enumerator, LevelSpec};

#[derive(Debug, Clone)]
pub struct TableRow {
    pub v: usize,
    /// `None` when the budget ran out before this row.
    pub cells: Option<BTreeMap<u64, CellCounts>>,
}

#[derive(Debug, Clone)]
pub struct TableReport {
    pub t: usize,
    pub vol_cap: u64,
    pub rows: Vec<TableRow>,
    /// Why the table is incomplete, if it is.
    pub aborted: Option<TradeError>,
}

impl TableReport {
    pub fn cell(&self, v: usize, volume: u64) -> Option<CellCounts> {
        let row = self.rows.iter().find(|r| r.v == v)?;
        Some(row.cells.as_ref()?.get(&volume).copied().unwrap_or_default())
    }

    pub fn is_complete(&self) -> bool {
        self.aborted.is_none()
    }

    fn volumes(&self) -> BTreeSet<u64> {
        self.rows.iter().filter_map(|r| r.cells.as_ref()).flat_map(|c| c.keys().copied()).collect()
    }
}

/// Rows `v = t, ..., v_max` (the first standing for every `v <= t`). Rows
/// past a budget abort are left as gaps.
pub fn table_report(enumerator: &mut Enumerator, t: usize, v_max: usize, vol_cap: u64) -> TableReport {
    let mut report = TableReport { t, vol_cap, rows: Vec::new(), aborted: None };
    for v in t..=v_max.max(t) {
        let cells = if report.aborted.is_some() {
            None
        } else {
            match enumerator.level(LevelSpec::new(t, v, vol_cap)) {
                Ok(table) => Some(table.cells()),
                Err(e) => {
                    report.aborted = Some(e);
                    None
                }
            }
        };
        report.rows.push(TableRow { v, cells });
    }
    report
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let volumes: Vec<u64> = self.volumes().into_iter().collect();
        let mut grid: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["vol.".to_string()];
        header.extend(volumes.iter().map(u64::to_string));
        grid.push(header);
        for row in &self.rows {
            let label = if row.v == self.t { format!("v<={}", row.v) } else { format!("v={}", row.v) };
            let mut line = vec![label];
            for vol in &volumes {
                line.push(match &row.cells {
                    None => "-".to_string(),
                    Some(cells) => match cells.get(vol) {
                        None => "0".to_string(),
                        Some(_) if *vol == 0 => "1".to_string(),
                        Some(c) => c.to_string(),
                    },
                });
            }
            grid.push(line);
        }
        let widths: Vec<usize> =
            (0..grid[0].len()).map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
        writeln!(f, "t={}, volume <= {}", self.t, self.vol_cap)?;
        for (r, line) in grid.iter().enumerate() {
            let cells: Vec<String> = line.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
            writeln!(f, "{}", cells.join(" | "))?;
            if r == 0 {
                let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
                writeln!(f, "{}", rule.join("-+-"))?;
            }
        }
        if let Some(e) = &self.aborted {
            writeln!(f, "incomplete: {e}")?;
        }
        Ok(())
    }
}
