use rand::Rng;

use super::check_budget;
use crate::error::Result;
use crate::histogram::{build_histogram, selection_probabilities};
use crate::rng::seeded_rng;
use crate::types::{MethodDescriptor, ProbabilityTable, Selection, StatsTable, WeightScheme};

/// Weighted sampling of `k` ids without replacement.
///
/// The result has the distribution of `k` successive draws, each
/// proportional to the remaining probabilities. Each id with probability
/// `p > 0` gets an exponential arrival time `E / p`; the `k` earliest
/// arrivals, in arrival order, are exactly such a sequence of draws.
/// One uniform is consumed per table entry (in id order), so the output is a
/// pure function of the table and the seed.
pub fn select_probabilistic(
    stats: &StatsTable,
    k: usize,
    probs: &ProbabilityTable,
    seed: u64,
) -> Result<Selection> {
    probs.check_aligned(stats)?;
    check_budget(k, probs.positive_count())?;
    Selection::new(
        MethodDescriptor::new("prob"),
        sample_weighted(probs, k, seed),
        Some(seed),
        stats,
    )
}

fn sample_weighted(probs: &ProbabilityTable, k: usize, seed: u64) -> Vec<u64> {
    let mut rng = seeded_rng(seed);
    let mut arrivals: Vec<(f64, u64)> = Vec::with_capacity(probs.positive_count());
    for &(id, p) in probs.entries() {
        let u: f64 = rng.gen();
        if p > 0.0 {
            // 1 - u lies in (0, 1], so the exponential is finite
            arrivals.push((-(1.0 - u).ln() / p, id));
        }
    }
    let order = |a: &(f64, u64), b: &(f64, u64)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < arrivals.len() {
        arrivals.select_nth_unstable_by(k, order);
        arrivals.truncate(k);
    }
    arrivals.sort_by(order);
    arrivals.into_iter().map(|a| a.1).collect()
}

/// Builds the entropy histogram of `stats`, derives per-example
/// probabilities under `weight`, and samples `k` ids from them.
pub fn select_histogram_weighted(
    stats: &StatsTable,
    k: usize,
    weight: WeightScheme,
    bin_width: f64,
    floor: f64,
    seed: u64,
) -> Result<Selection> {
    check_budget(k, stats.len())?;
    let histogram = build_histogram(stats, bin_width, floor)?;
    let probs = selection_probabilities(stats, &histogram, weight)?;
    let ids = sample_weighted(&probs, k, seed);
    let method = MethodDescriptor::new("prob")
        .param("weight", weight)
        .param("bin_width", bin_width)
        .param("floor", floor);
    Selection::new(method, ids, Some(seed), stats)
}
