//! Predictive distributions and per-example entropy from raw logits.

use crate::error::{Error, Result};
use crate::types::{ExampleStat, LogitsTable, StatsTable};

/// Probabilities at or below this are treated as exactly zero in `p ln p`.
pub const ZERO_PROBABILITY: f64 = 1e-300;

const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Softmax with max-subtraction.
pub fn predictive_distribution(logits: &[f64]) -> Result<Vec<f64>> {
    if logits.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 logits, got {}",
            logits.len()
        )));
    }
    if let Some(bad) = logits.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite logit {bad}")));
    }
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = logits.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= sum;
    }
    Ok(probs)
}

/// Shannon entropy in nats, with `0 ln 0 = 0`.
pub fn entropy(probs: &[f64]) -> Result<f64> {
    if probs.is_empty() {
        return Err(Error::InvalidInput("empty distribution".into()));
    }
    if let Some(bad) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidInput(format!(
            "probability {bad} outside [0, 1]"
        )));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(Error::InvalidInput(format!("probabilities sum to {sum}")));
    }
    let h: f64 = probs
        .iter()
        .filter(|&&p| p > ZERO_PROBABILITY)
        .map(|&p| -p * p.ln())
        .sum();
    // rounding can push a one-hot sum a hair below zero
    Ok(h.max(0.0))
}

/// Entropy of every row of `logits`, as a stats table sorted by id.
pub fn compute_entropy_table(logits: &LogitsTable) -> Result<StatsTable> {
    let rows = logits
        .rows()
        .iter()
        .map(|row| {
            predictive_distribution(&row.logits)
                .and_then(|p| entropy(&p))
                .and_then(|h| ExampleStat::new(row.id, row.label, h))
                .map_err(|e| Error::InvalidInput(format!("id {}: {e}", row.id)))
        })
        .collect::<Result<Vec<_>>>()?;
    StatsTable::from_rows(rows)
}
