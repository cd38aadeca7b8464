use std::collections::HashSet;

use rand::Rng;

use super::check_budget;
use crate::error::{Error, Result};
use crate::rng::seeded_rng;
use crate::types::{ExampleId, MethodDescriptor, Selection, StatsTable};

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Greedy k-center: repeatedly adds the example farthest (in feature space)
/// from the current pool.
///
/// The pool starts as `initial_pool`, or as one id drawn uniformly with
/// `seed` when that is empty. Pool ids are not part of the result; the
/// result lists the `k` added ids in order of addition.
pub fn select_kcenter(
    stats: &StatsTable,
    k: usize,
    initial_pool: &[ExampleId],
    seed: u64,
) -> Result<Selection> {
    let features: Vec<&[f64]> = stats
        .rows()
        .iter()
        .map(|r| {
            r.feature
                .as_deref()
                .ok_or_else(|| Error::InvalidInput(format!("id {} has no feature vector", r.id)))
        })
        .collect::<Result<_>>()?;

    let n = stats.len();
    let mut pooled = vec![false; n];
    let mut pool = Vec::new();
    let mut seen = HashSet::new();
    for &id in initial_pool {
        let i = stats
            .position(id)
            .ok_or_else(|| Error::Consistency(format!("pool id {id} is not in the stats table")))?;
        if !seen.insert(id) {
            return Err(Error::InvalidInput(format!("pool id {id} repeated")));
        }
        pooled[i] = true;
        pool.push(i);
    }
    let drawn = initial_pool.is_empty();
    if drawn {
        if n == 0 {
            return Err(Error::Capacity {
                requested: k,
                available: 0,
            });
        }
        let i = seeded_rng(seed).gen_range(0..n);
        pooled[i] = true;
        pool.push(i);
    }
    check_budget(k, n - pool.len())?;

    let mut min_dist = vec![f64::INFINITY; n];
    for (i, d) in min_dist.iter_mut().enumerate() {
        if !pooled[i] {
            *d = pool
                .iter()
                .map(|&p| euclidean(features[i], features[p]))
                .fold(f64::INFINITY, f64::min);
        }
    }

    let mut ids = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<usize> = None;
        for i in 0..n {
            if !pooled[i] && best.is_none_or(|b| min_dist[i] > min_dist[b]) {
                best = Some(i);
            }
        }
        let center = best.expect("budget checked");
        pooled[center] = true;
        ids.push(stats.rows()[center].id);
        for i in 0..n {
            if !pooled[i] {
                min_dist[i] = min_dist[i].min(euclidean(features[i], features[center]));
            }
        }
    }

    let pool_ids: Vec<String> = pool
        .iter()
        .map(|&i| stats.rows()[i].id.to_string())
        .collect();
    let method = MethodDescriptor::new("kcenter").param("pool", pool_ids.join(" "));
    Selection::new(method, ids, drawn.then_some(seed), stats)
}
