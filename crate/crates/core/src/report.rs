//! Composition diagnostics for a selection against its source table.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::histogram::{bin_of, build_histogram};
use crate::io::format_real;
use crate::types::{ExampleId, Selection, StatsTable};

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBin {
    pub index: usize,
    pub left_edge: f64,
    pub right_edge: f64,
    pub full_height: u64,
    pub subset_height: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassShare {
    pub label: u32,
    pub count: usize,
    pub ratio: f64,
}

/// Entropy thresholds of the lowest and highest deciles of a table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBounds {
    /// Examples with entropy at or below this are in the low tail.
    pub low: f64,
    /// Examples with entropy at or above this are in the high tail.
    pub high: f64,
}

impl TailBounds {
    /// The decile size is `max(1, n / 10)` examples in entropy order, so both
    /// deciles are non-empty; examples tied with a boundary entropy count as
    /// inside the tail.
    pub fn of(stats: &StatsTable) -> Result<Self> {
        if stats.is_empty() {
            return Err(Error::InvalidInput("tail bounds of an empty table".into()));
        }
        let sorted = sorted_entropies(stats);
        let n = sorted.len();
        let decile = (n / 10).max(1);
        Ok(Self {
            low: sorted[decile - 1],
            high: sorted[n - decile],
        })
    }

    pub fn contains(&self, entropy: f64) -> bool {
        entropy <= self.low || entropy >= self.high
    }
}

fn sorted_entropies(stats: &StatsTable) -> Vec<f64> {
    let mut e: Vec<f64> = stats.rows().iter().map(|r| r.entropy).collect();
    e.sort_by(f64::total_cmp);
    e
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn lookup<'a>(
    stats: &'a StatsTable,
    ids: &[ExampleId],
) -> Result<Vec<&'a crate::types::ExampleStat>> {
    ids.iter()
        .map(|&id| {
            stats.get(id).ok_or_else(|| {
                Error::Consistency(format!("selected id {id} is not in the stats table"))
            })
        })
        .collect()
}

/// Fraction of `ids` falling in the lowest or highest entropy decile of `stats`.
pub fn tail_mass(ids: &[ExampleId], stats: &StatsTable) -> Result<f64> {
    let bounds = TailBounds::of(stats)?;
    let rows = lookup(stats, ids)?;
    if rows.is_empty() {
        return Ok(0.0);
    }
    let inside = rows.iter().filter(|r| bounds.contains(r.entropy)).count();
    Ok(inside as f64 / rows.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositionReport {
    pub method: String,
    pub subset_size: usize,
    pub full_size: usize,
    pub bin_width: f64,
    pub bins: Vec<ReportBin>,
    pub classes: Vec<ClassShare>,
    pub low_tail_fraction: f64,
    pub high_tail_fraction: f64,
    pub tail_mass: f64,
    pub below_median_fraction: f64,
}

/// Bins the subset with the full table's histogram, counts classes, and
/// measures how much of the subset sits in the entropy tails.
pub fn composition_report(
    sel: &Selection,
    stats: &StatsTable,
    bin_width: f64,
    floor: f64,
) -> Result<CompositionReport> {
    let rows = lookup(stats, sel.ids())?;
    let h = build_histogram(stats, bin_width, floor)?;
    let mut subset_heights = vec![0u64; h.bin_count()];
    for row in &rows {
        subset_heights[bin_of(row.entropy, &h)] += 1;
    }
    let bins = (0..h.bin_count())
        .map(|b| ReportBin {
            index: b,
            left_edge: h.left_edge(b),
            right_edge: h.right_edge(b),
            full_height: h.height(b),
            subset_height: subset_heights[b],
        })
        .collect();

    let size = rows.len();
    let fraction = |count: usize| {
        if size == 0 {
            0.0
        } else {
            count as f64 / size as f64
        }
    };
    let mut counts = vec![0usize; stats.class_count() as usize];
    for row in &rows {
        counts[row.label as usize] += 1;
    }
    let classes = counts
        .into_iter()
        .enumerate()
        .map(|(label, count)| ClassShare {
            label: label as u32,
            count,
            ratio: fraction(count),
        })
        .collect();

    let bounds = TailBounds::of(stats)?;
    let low = rows.iter().filter(|r| r.entropy <= bounds.low).count();
    let high = rows.iter().filter(|r| r.entropy >= bounds.high).count();
    let either = rows.iter().filter(|r| bounds.contains(r.entropy)).count();
    let med = median(&sorted_entropies(stats));
    let below = rows.iter().filter(|r| r.entropy < med).count();

    Ok(CompositionReport {
        method: sel.method().to_string(),
        subset_size: size,
        full_size: stats.len(),
        bin_width,
        bins,
        classes,
        low_tail_fraction: fraction(low),
        high_tail_fraction: fraction(high),
        tail_mass: fraction(either),
        below_median_fraction: fraction(below),
    })
}

impl CompositionReport {
    /// Plain-text rendering: a summary block, then the histogram and class tables as CSV.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# method={}", self.method);
        let _ = writeln!(out, "subset_size,{}", self.subset_size);
        let _ = writeln!(out, "full_size,{}", self.full_size);
        let _ = writeln!(out, "tail_mass,{}", format_real(self.tail_mass));
        let _ = writeln!(
            out,
            "low_tail_fraction,{}",
            format_real(self.low_tail_fraction)
        );
        let _ = writeln!(
            out,
            "high_tail_fraction,{}",
            format_real(self.high_tail_fraction)
        );
        let _ = writeln!(
            out,
            "below_median_fraction,{}",
            format_real(self.below_median_fraction)
        );
        out.push('\n');
        out.push_str("bin_index,left_edge_log10,right_edge_log10,full_height,subset_height\n");
        for bin in &self.bins {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                bin.index,
                format_real(bin.left_edge),
                format_real(bin.right_edge),
                bin.full_height,
                bin.subset_height
            );
        }
        out.push('\n');
        out.push_str("label,count,ratio\n");
        for class in &self.classes {
            let _ = writeln!(
                out,
                "{},{},{}",
                class.label,
                class.count,
                format_real(class.ratio)
            );
        }
        out
    }
}
