use super::Method;
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::types::{MethodDescriptor, Selection, StatsTable};

/// Splits a budget of `k` across classes with `pool_sizes[c]` candidates each.
///
/// Every class starts with `k / C` slots, capped at its pool size. Leftover
/// slots (the remainder plus any capped deficit) go one at a time to the
/// classes with spare candidates, largest pool first, ties by ascending
/// class index, cycling until the budget is spent.
pub fn class_quotas(pool_sizes: &[usize], k: usize) -> Result<Vec<usize>> {
    let classes = pool_sizes.len();
    if classes == 0 || k < classes {
        return Err(Error::InvalidInput(format!(
            "class-balanced selection needs k >= number of classes ({classes}), got k = {k}"
        )));
    }
    let available: usize = pool_sizes.iter().sum();
    if available < k {
        return Err(Error::Capacity {
            requested: k,
            available,
        });
    }
    let base = k / classes;
    let mut quotas: Vec<usize> = pool_sizes.iter().map(|&s| s.min(base)).collect();
    let mut remaining = k - quotas.iter().sum::<usize>();

    let mut order: Vec<usize> = (0..classes).collect();
    order.sort_by(|&a, &b| pool_sizes[b].cmp(&pool_sizes[a]).then(a.cmp(&b)));
    while remaining > 0 {
        for &c in &order {
            if remaining == 0 {
                break;
            }
            if quotas[c] < pool_sizes[c] {
                quotas[c] += 1;
                remaining -= 1;
            }
        }
    }
    Ok(quotas)
}

/// Runs `inner` independently on each class's sub-table with the quota from
/// [`class_quotas`]; class `c` uses seed `derive_seed(seed, c)`.
///
/// Output is grouped by ascending class.
pub fn select_class_balanced(
    inner: &Method,
    stats: &StatsTable,
    k: usize,
    seed: u64,
) -> Result<Selection> {
    if matches!(inner, Method::KCenter { .. }) {
        return Err(Error::InvalidInput(
            "k-center cannot be applied per class".into(),
        ));
    }
    let classes = stats.class_count();
    let subtables: Vec<StatsTable> = (0..classes)
        .map(|c| stats.filter(|r| r.label == c))
        .collect();
    let sizes: Vec<usize> = subtables.iter().map(StatsTable::len).collect();
    let quotas = class_quotas(&sizes, k)?;

    let mut ids = Vec::with_capacity(k);
    let mut inner_desc = None;
    for (c, (sub, quota)) in subtables.iter().zip(quotas).enumerate() {
        if quota == 0 {
            continue;
        }
        let part = inner.select(sub, quota, derive_seed(seed, c as u64))?;
        inner_desc.get_or_insert_with(|| part.method().clone());
        ids.extend_from_slice(part.ids());
    }

    let inner_desc = inner_desc.unwrap_or_else(|| MethodDescriptor::new(inner.name()));
    let mut method = MethodDescriptor::new(inner_desc.name).param("class_balanced", true);
    method.params.extend(inner_desc.params);
    Selection::new(method, ids, Some(seed), stats)
}
