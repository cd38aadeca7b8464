use std::cmp::Ordering;
use std::collections::HashSet;

use rand::seq::index;

use super::check_budget;
use crate::error::{Error, Result};
use crate::rng::seeded_rng;
use crate::types::{ExampleId, ExampleStat, MethodDescriptor, Selection, StatsTable};

fn ascending(a: &ExampleStat, b: &ExampleStat) -> Ordering {
    a.entropy.total_cmp(&b.entropy).then(a.id.cmp(&b.id))
}

fn descending(a: &ExampleStat, b: &ExampleStat) -> Ordering {
    b.entropy.total_cmp(&a.entropy).then(a.id.cmp(&b.id))
}

fn ranked(stats: &StatsTable, order: fn(&ExampleStat, &ExampleStat) -> Ordering) -> Vec<ExampleId> {
    let mut rows: Vec<&ExampleStat> = stats.rows().iter().collect();
    rows.sort_by(|a, b| order(a, b));
    rows.into_iter().map(|r| r.id).collect()
}

/// `k` ids drawn uniformly without replacement, in draw order.
pub fn select_random(stats: &StatsTable, k: usize, seed: u64) -> Result<Selection> {
    check_budget(k, stats.len())?;
    let mut rng = seeded_rng(seed);
    let ids = index::sample(&mut rng, stats.len(), k)
        .into_iter()
        .map(|i| stats.rows()[i].id)
        .collect();
    Selection::new(MethodDescriptor::new("random"), ids, Some(seed), stats)
}

/// The `k` highest-entropy ids, highest first.
pub fn select_entropy_topk(stats: &StatsTable, k: usize) -> Result<Selection> {
    check_budget(k, stats.len())?;
    let mut ids = ranked(stats, descending);
    ids.truncate(k);
    Selection::new(MethodDescriptor::new("entropy-top"), ids, None, stats)
}

/// The `k` lowest-entropy ids, lowest first.
pub fn select_entropy_bottomk(stats: &StatsTable, k: usize) -> Result<Selection> {
    check_budget(k, stats.len())?;
    let mut ids = ranked(stats, ascending);
    ids.truncate(k);
    Selection::new(MethodDescriptor::new("entropy-bottom"), ids, None, stats)
}

/// Size of the low-entropy share, `floor(beta * k)`.
///
/// A relative slack of 1e-9 keeps products such as `0.29 * 100` from
/// flooring one short of the intended integer.
pub fn bottom_share(beta: f64, k: usize) -> usize {
    let exact = beta * k as f64;
    (exact + exact.abs() * 1e-9).floor() as usize
}

/// `floor(beta * k)` lowest-entropy ids followed by the `k - floor(beta * k)`
/// highest-entropy ids.
///
/// The high side is taken first; if the two sides would share ids (possible
/// under entropy ties or when `k` is close to `n`), the low side keeps
/// extending upwards past the shared ids.
pub fn select_tail_deterministic(stats: &StatsTable, k: usize, beta: f64) -> Result<Selection> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidInput(format!(
            "beta must be in (0, 1), got {beta}"
        )));
    }
    check_budget(k, stats.len())?;
    let n_bottom = bottom_share(beta, k);
    let n_top = k - n_bottom;

    let top: Vec<ExampleId> = ranked(stats, descending).into_iter().take(n_top).collect();
    let taken: HashSet<ExampleId> = top.iter().copied().collect();
    let mut ids: Vec<ExampleId> = ranked(stats, ascending)
        .into_iter()
        .filter(|id| !taken.contains(id))
        .take(n_bottom)
        .collect();
    ids.extend(top);

    let method = MethodDescriptor::new("tail").param("beta", beta);
    Selection::new(method, ids, None, stats)
}
