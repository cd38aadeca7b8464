use std::collections::BTreeMap;

use super::check_budget;
use crate::error::{Error, Result};
use crate::types::{CorrectnessLog, ExampleId, MethodDescriptor, Selection, StatsTable};

/// Number of correct-to-incorrect transitions between consecutive
/// assessments of each example.
pub fn count_forgetting_events(log: &CorrectnessLog) -> BTreeMap<ExampleId, u32> {
    log.rows()
        .iter()
        .map(|(id, seq)| {
            let events = seq.windows(2).filter(|w| w[0] && !w[1]).count();
            (*id, events as u32)
        })
        .collect()
}

/// The `k` most-forgotten examples.
pub fn select_forgetting(stats: &StatsTable, k: usize) -> Result<Selection> {
    check_budget(k, stats.len())?;
    let mut rows = Vec::with_capacity(stats.len());
    for row in stats.rows() {
        let count = row
            .forget_count
            .ok_or_else(|| Error::InvalidInput(format!("id {} has no forgetting count", row.id)))?;
        rows.push((count, row.entropy, row.id));
    }
    rows.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.total_cmp(&a.1)).then(a.2.cmp(&b.2)));
    let ids = rows.into_iter().take(k).map(|r| r.2).collect();
    Selection::new(MethodDescriptor::new("forgetting"), ids, None, stats)
}
