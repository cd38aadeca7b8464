//! Log-scale entropy histograms and the histogram-derived selection
//! probabilities that favour both tails of the entropy distribution.
//!
//! Entropies are clamped to `floor`, mapped through `log10`, and counted in
//! half-open bins `[left, right)` whose edges are integer multiples of the
//! bin width. Empty bins are kept in the histogram (so edges stay contiguous)
//! but take no part in weighting: `B`, the maximum height and every
//! normalizing sum range over non-empty bins only.

use crate::error::{Error, Result};
use crate::types::{Histogram, ProbabilityTable, StatsTable, WeightScheme};

/// Default width of a bin on the log10(entropy) axis.
pub const DEFAULT_BIN_WIDTH: f64 = 0.25;

/// Default clamp applied to entropies before taking log10.
pub const DEFAULT_FLOOR: f64 = 1e-12;

fn log_entropy(entropy: f64, floor: f64) -> f64 {
    entropy.max(floor).log10()
}

/// Index `g` with `g * width <= value < (g + 1) * width`, computed against
/// the same floating-point edges that [`Histogram::left_edge`] reports.
fn global_bin(value: f64, width: f64) -> i64 {
    let mut g = (value / width).floor() as i64;
    while value < g as f64 * width {
        g -= 1;
    }
    while value >= (g + 1) as f64 * width {
        g += 1;
    }
    g
}

/// Bins every example of `stats`; leading and trailing empty bins are trimmed.
pub fn build_histogram(stats: &StatsTable, bin_width: f64, floor: f64) -> Result<Histogram> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    if !(floor.is_finite() && floor > 0.0) {
        return Err(Error::InvalidInput(format!(
            "floor must be positive, got {floor}"
        )));
    }
    if stats.is_empty() {
        return Err(Error::InvalidInput(
            "cannot build a histogram of an empty table".into(),
        ));
    }
    let bins: Vec<i64> = stats
        .rows()
        .iter()
        .map(|r| global_bin(log_entropy(r.entropy, floor), bin_width))
        .collect();
    let lo = *bins.iter().min().expect("non-empty");
    let hi = *bins.iter().max().expect("non-empty");
    let mut heights = vec![0u64; (hi - lo + 1) as usize];
    for g in bins {
        heights[(g - lo) as usize] += 1;
    }
    Histogram::from_parts(bin_width, lo, floor, heights)
}

/// Bin of `entropy` in `h`; values outside the built range clamp to the end bins.
pub fn bin_of(entropy: f64, h: &Histogram) -> usize {
    let g = global_bin(log_entropy(entropy, h.floor()), h.bin_width());
    let last = h.bin_count() as i64 - 1;
    (g - h.origin_index()).clamp(0, last) as usize
}

/// Weights of every bin under `scheme`; empty bins get weight 0 and the
/// non-empty weights sum to 1.
pub fn bin_weights(h: &Histogram, scheme: WeightScheme) -> Vec<f64> {
    let heights = h.heights();
    let occupied = heights.iter().filter(|&&c| c > 0);
    match scheme {
        WeightScheme::W1 => {
            let max = occupied.clone().copied().max().unwrap_or(0);
            let denom: u64 = occupied.map(|&c| max - c + 1).sum();
            heights
                .iter()
                .map(|&c| {
                    if c == 0 {
                        0.0
                    } else {
                        (max - c + 1) as f64 / denom as f64
                    }
                })
                .collect()
        }
        WeightScheme::W2 => {
            let bins = occupied.count() as f64;
            heights
                .iter()
                .map(|&c| if c == 0 { 0.0 } else { 1.0 / bins })
                .collect()
        }
        WeightScheme::W3 => {
            let denom: f64 = occupied.map(|&c| 1.0 / c as f64).sum();
            heights
                .iter()
                .map(|&c| {
                    if c == 0 {
                        0.0
                    } else {
                        (1.0 / c as f64) / denom
                    }
                })
                .collect()
        }
    }
}

/// Weight of a single bin under `scheme`.
pub fn selection_weight(bin: usize, h: &Histogram, scheme: WeightScheme) -> Result<f64> {
    if bin >= h.bin_count() {
        return Err(Error::InvalidInput(format!(
            "bin {bin} out of range for a histogram with {} bins",
            h.bin_count()
        )));
    }
    Ok(bin_weights(h, scheme)[bin])
}

/// Per-example probability `norm(weight(bin) / height(bin))` for every example of `stats`.
///
/// All examples of one bin get the same probability.
pub fn selection_probabilities(
    stats: &StatsTable,
    h: &Histogram,
    scheme: WeightScheme,
) -> Result<ProbabilityTable> {
    if h.total() != stats.len() as u64 {
        return Err(Error::Consistency(format!(
            "histogram holds {} examples but the table has {}",
            h.total(),
            stats.len()
        )));
    }
    let weights = bin_weights(h, scheme);
    let bins: Vec<usize> = stats.rows().iter().map(|r| bin_of(r.entropy, h)).collect();
    let mut seen = vec![0u64; h.bin_count()];
    for (row, &b) in stats.rows().iter().zip(&bins) {
        if h.height(b) == 0 {
            return Err(Error::Consistency(format!(
                "id {} falls into empty bin {b}; histogram was not built from this table",
                row.id
            )));
        }
        seen[b] += 1;
    }
    if seen != h.heights() {
        return Err(Error::Consistency(
            "bin occupancy of the table differs from the histogram heights".into(),
        ));
    }
    let total: f64 = weights.iter().sum();
    let per_example: Vec<f64> = weights
        .iter()
        .zip(h.heights())
        .map(|(&w, &c)| if c == 0 { 0.0 } else { w / c as f64 / total })
        .collect();
    ProbabilityTable::new(
        stats
            .rows()
            .iter()
            .zip(bins)
            .map(|(r, b)| (r.id, per_example[b]))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ExampleStat;

    fn table(entropies: &[f64]) -> StatsTable {
        StatsTable::from_rows(
            entropies
                .iter()
                .enumerate()
                .map(|(i, &e)| ExampleStat::new(i as u64, 0, e).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn fixture() -> Histogram {
        Histogram::from_parts(1.0, 0, 1e-12, vec![10, 5, 1]).unwrap()
    }

    /// 16 examples: ten in [1, 10), five in [10, 100), one in [100, 1000).
    fn fixture_table() -> StatsTable {
        let mut e = vec![2.0; 10];
        e.extend([20.0; 5]);
        e.push(200.0);
        table(&e)
    }

    fn close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn interior_empty_bin_is_kept() {
        let h = build_histogram(&table(&[0.001, 0.01, 1.0]), 1.0, 1e-12).unwrap();
        assert_eq!(h.heights(), &[1, 1, 0, 1]);
        assert_eq!(h.origin(), -3.0);
        assert_eq!(h.total(), 3);
        assert_eq!(bin_of(0.001, &h), 0);
        assert_eq!(bin_of(1.0, &h), 3);
    }

    #[test]
    fn single_value_gives_single_bin() {
        for width in [0.1, 0.25, 0.5, 2.0] {
            let h = build_histogram(&table(&[10f64.ln(); 7]), width, 1e-12).unwrap();
            assert_eq!(h.heights(), &[7]);
        }
    }

    #[test]
    fn zero_entropy_is_clamped() {
        let h = build_histogram(&table(&[0.0]), 0.25, 1e-12).unwrap();
        assert_eq!(h.origin(), -12.0);
        assert_eq!(h.heights(), &[1]);
    }

    #[test]
    fn build_rejects_bad_parameters() {
        assert!(build_histogram(&table(&[]), 0.25, 1e-12).is_err());
        assert!(build_histogram(&table(&[1.0]), 0.0, 1e-12).is_err());
        assert!(build_histogram(&table(&[1.0]), 0.25, 0.0).is_err());
    }

    #[test]
    fn bin_of_edges_and_clamping() {
        let h = fixture();
        assert_eq!(bin_of(10.0, &h), 1);
        assert_eq!(bin_of(1.0, &h), 0);
        assert_eq!(bin_of(1e-5, &h), 0);
        assert_eq!(bin_of(1e9, &h), 2);
    }

    #[test]
    fn fixture_weights() {
        let h = fixture();
        close(
            &bin_weights(&h, WeightScheme::W1),
            &[1.0 / 17.0, 6.0 / 17.0, 10.0 / 17.0],
        );
        close(&bin_weights(&h, WeightScheme::W2), &[1.0 / 3.0; 3]);
        close(
            &bin_weights(&h, WeightScheme::W3),
            &[1.0 / 13.0, 2.0 / 13.0, 10.0 / 13.0],
        );
        assert!(selection_weight(3, &h, WeightScheme::W1).is_err());
    }

    #[test]
    fn empty_bins_take_no_weight() {
        let h = Histogram::from_parts(1.0, 0, 1e-12, vec![2, 0, 1]).unwrap();
        close(&bin_weights(&h, WeightScheme::W2), &[0.5, 0.0, 0.5]);
        // max 2: (2-2+1, 2-1+1) / 3
        close(
            &bin_weights(&h, WeightScheme::W1),
            &[1.0 / 3.0, 0.0, 2.0 / 3.0],
        );
        close(
            &bin_weights(&h, WeightScheme::W3),
            &[1.0 / 3.0, 0.0, 2.0 / 3.0],
        );
    }

    #[test]
    fn fixture_probabilities_w1() {
        let stats = fixture_table();
        let h = build_histogram(&stats, 1.0, 1e-12).unwrap();
        assert_eq!(h.heights(), &[10, 5, 1]);
        let p = selection_probabilities(&stats, &h, WeightScheme::W1).unwrap();
        let probs: Vec<f64> = p.entries().iter().map(|e| e.1).collect();
        let mut expected = vec![1.0 / 170.0; 10];
        expected.extend([6.0 / 85.0; 5]);
        expected.push(10.0 / 17.0);
        close(&probs, &expected);
    }

    #[test]
    fn single_bin_is_uniform() {
        let stats = table(&[1.5; 5]);
        let h = build_histogram(&stats, 0.25, 1e-12).unwrap();
        for scheme in WeightScheme::ALL {
            let p = selection_probabilities(&stats, &h, scheme).unwrap();
            assert!(p.entries().iter().all(|e| (e.1 - 0.2).abs() < 1e-15));
        }
    }

    #[test]
    fn w2_equal_bins() {
        let stats = table(&[2.0, 2.0, 20.0, 20.0]);
        let h = build_histogram(&stats, 1.0, 1e-12).unwrap();
        let p = selection_probabilities(&stats, &h, WeightScheme::W2).unwrap();
        assert!(p.entries().iter().all(|e| (e.1 - 0.25).abs() < 1e-15));
    }

    #[test]
    fn mismatched_histogram_is_rejected() {
        let stats = fixture_table();
        let other = build_histogram(&table(&[2.0, 200.0]), 1.0, 1e-12).unwrap();
        assert!(matches!(
            selection_probabilities(&stats, &other, WeightScheme::W1),
            Err(Error::Consistency(_))
        ));
    }
}
