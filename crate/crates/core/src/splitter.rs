//! Train/validation partitioning of a selection.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::seeded_rng;
use crate::types::{train_size, ExampleId, Selection, SplitMode, SplitResult, StatsTable};

/// Default train share.
pub const DEFAULT_RATIO: f64 = 0.5;

fn check_ratio(ratio: f64) -> Result<()> {
    if ratio > 0.0 && ratio < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "ratio must be in (0, 1), got {ratio}"
        )))
    }
}

/// Shuffles the selection and sends the first `round(ratio * k)` ids to train.
pub fn split_allshuffle(
    sel: &Selection,
    stats: &StatsTable,
    ratio: f64,
    seed: u64,
) -> Result<SplitResult> {
    check_ratio(ratio)?;
    sel.check_against(stats)?;
    let mut ids = sel.ids().to_vec();
    ids.shuffle(&mut seeded_rng(seed));
    let val = ids.split_off(train_size(ratio, sel.k()));
    SplitResult::new(ids, val, SplitMode::AllShuffle, ratio)
}

/// Splits by entropy rank: with `low_to_train` the `round(ratio * k)`
/// lowest-entropy ids go to train, otherwise the `round(ratio * k)`
/// highest-entropy ids do. Equal entropies are ordered by id.
pub fn split_disjoint(
    sel: &Selection,
    stats: &StatsTable,
    ratio: f64,
    low_to_train: bool,
) -> Result<SplitResult> {
    check_ratio(ratio)?;
    sel.check_against(stats)?;
    let mut keyed: Vec<(f64, ExampleId)> = sel
        .ids()
        .iter()
        .map(|&id| (stats.get(id).expect("checked").entropy, id))
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    if !low_to_train {
        keyed.reverse();
    }
    let mut train: Vec<ExampleId> = keyed.into_iter().map(|e| e.1).collect();
    let val = train.split_off(train_size(ratio, sel.k()));
    SplitResult::new(train, val, SplitMode::Disjoint, ratio)
}
