//! Proxy-data selectors.
//!
//! Every selector returns a [`Selection`] of exactly `k` distinct ids from
//! its input table and is deterministic given its inputs and seed. Ties are
//! always broken the same way: equal entropies by ascending id, equal
//! forgetting counts by descending entropy then ascending id, equal k-center
//! distances by ascending id.

mod balanced;
mod forgetting;
mod kcenter;
mod probabilistic;
mod ranking;

pub use balanced::{class_quotas, select_class_balanced};
pub use forgetting::{count_forgetting_events, select_forgetting};
pub use kcenter::{euclidean, select_kcenter};
pub use probabilistic::{select_histogram_weighted, select_probabilistic};
pub use ranking::{
    bottom_share, select_entropy_bottomk, select_entropy_topk, select_random,
    select_tail_deterministic,
};

use crate::error::{Error, Result};
use crate::types::{ExampleId, Selection, StatsTable, WeightScheme};

/// Default share of the budget taken from the low-entropy end by tail selection.
pub const DEFAULT_BETA: f64 = 0.9;

/// A fully parameterized selection method.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Random,
    EntropyTop,
    EntropyBottom,
    Forgetting,
    KCenter {
        pool: Vec<ExampleId>,
    },
    Tail {
        beta: f64,
    },
    Probabilistic {
        weight: WeightScheme,
        bin_width: f64,
        floor: f64,
    },
}

impl Method {
    pub const NAMES: [&'static str; 7] = [
        "random",
        "entropy-top",
        "entropy-bottom",
        "forgetting",
        "kcenter",
        "tail",
        "prob",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Random => "random",
            Method::EntropyTop => "entropy-top",
            Method::EntropyBottom => "entropy-bottom",
            Method::Forgetting => "forgetting",
            Method::KCenter { .. } => "kcenter",
            Method::Tail { .. } => "tail",
            Method::Probabilistic { .. } => "prob",
        }
    }

    /// Runs the method on `stats`. Seed-free methods ignore `seed`.
    pub fn select(&self, stats: &StatsTable, k: usize, seed: u64) -> Result<Selection> {
        match self {
            Method::Random => select_random(stats, k, seed),
            Method::EntropyTop => select_entropy_topk(stats, k),
            Method::EntropyBottom => select_entropy_bottomk(stats, k),
            Method::Forgetting => select_forgetting(stats, k),
            Method::KCenter { pool } => select_kcenter(stats, k, pool, seed),
            Method::Tail { beta } => select_tail_deterministic(stats, k, *beta),
            Method::Probabilistic {
                weight,
                bin_width,
                floor,
            } => select_histogram_weighted(stats, k, *weight, *bin_width, *floor, seed),
        }
    }
}

/// Checks `1 <= k <= available`.
pub(crate) fn check_budget(k: usize, available: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if k > available {
        return Err(Error::Capacity {
            requested: k,
            available,
        });
    }
    Ok(())
}
