//! Domain types shared by every stage of the pipeline.
//!
//! All types validate their invariants on construction and are immutable
//! afterwards, so they can be shared freely between threads.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{invariant, Error, Result};

/// Caller-assigned example identifier (the row index in the source dataset).
pub type ExampleId = u64;

/// Per-example statistics: the unit every selector works on.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleStat {
    pub id: ExampleId,
    pub label: u32,
    /// Predictive entropy in nats.
    pub entropy: f64,
    pub forget_count: Option<u32>,
    pub feature: Option<Vec<f64>>,
}

impl ExampleStat {
    pub fn new(id: ExampleId, label: u32, entropy: f64) -> Result<Self> {
        if !entropy.is_finite() || entropy < 0.0 {
            return Err(invariant(
                "entropy >= 0",
                format!("id {id} has entropy {entropy}"),
            ));
        }
        Ok(Self {
            id,
            label,
            entropy,
            forget_count: None,
            feature: None,
        })
    }

    pub fn with_forget_count(mut self, count: u32) -> Self {
        self.forget_count = Some(count);
        self
    }

    pub fn with_feature(mut self, feature: Vec<f64>) -> Self {
        self.feature = Some(feature);
        self
    }
}

/// The target dataset: examples sorted by ascending id.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsTable {
    rows: Vec<ExampleStat>,
    class_count: u32,
    feature_dim: Option<usize>,
}

impl StatsTable {
    /// Builds a table whose class count is inferred as `max(label) + 1`.
    pub fn from_rows(rows: Vec<ExampleStat>) -> Result<Self> {
        let class_count = rows.iter().map(|r| r.label + 1).max().unwrap_or(0);
        Self::new(rows, class_count)
    }

    pub fn new(mut rows: Vec<ExampleStat>, class_count: u32) -> Result<Self> {
        rows.sort_by_key(|r| r.id);
        if let Some(w) = rows.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(invariant(
                "ids are unique",
                format!("duplicate id {}", w[0].id),
            ));
        }
        let mut feature_dim = None;
        for row in &rows {
            if row.label >= class_count {
                return Err(invariant(
                    "labels in [0, C)",
                    format!(
                        "id {} has label {} with C = {class_count}",
                        row.id, row.label
                    ),
                ));
            }
            if !row.entropy.is_finite() || row.entropy < 0.0 {
                return Err(invariant(
                    "entropy >= 0",
                    format!("id {} has entropy {}", row.id, row.entropy),
                ));
            }
            if let Some(feature) = &row.feature {
                if feature.is_empty() {
                    return Err(invariant(
                        "feature dimension >= 1",
                        format!("id {} has an empty feature vector", row.id),
                    ));
                }
                if feature.iter().any(|v| !v.is_finite()) {
                    return Err(invariant(
                        "features are finite",
                        format!("id {} has a non-finite feature", row.id),
                    ));
                }
                match feature_dim {
                    None => feature_dim = Some(feature.len()),
                    Some(dim) if dim != feature.len() => {
                        return Err(invariant(
                            "features share one dimension",
                            format!(
                                "id {} has dimension {}, expected {dim}",
                                row.id,
                                feature.len()
                            ),
                        ))
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(Self {
            rows,
            class_count,
            feature_dim,
        })
    }

    pub fn rows(&self) -> &[ExampleStat] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn class_count(&self) -> u32 {
        self.class_count
    }

    pub fn feature_dim(&self) -> Option<usize> {
        self.feature_dim
    }

    pub fn ids(&self) -> impl Iterator<Item = ExampleId> + '_ {
        self.rows.iter().map(|r| r.id)
    }

    pub fn position(&self, id: ExampleId) -> Option<usize> {
        self.rows.binary_search_by_key(&id, |r| r.id).ok()
    }

    pub fn get(&self, id: ExampleId) -> Option<&ExampleStat> {
        self.position(id).map(|i| &self.rows[i])
    }

    pub fn contains(&self, id: ExampleId) -> bool {
        self.position(id).is_some()
    }

    /// Rows satisfying `keep`, with the class count preserved.
    pub fn filter(&self, mut keep: impl FnMut(&ExampleStat) -> bool) -> StatsTable {
        let rows: Vec<_> = self.rows.iter().filter(|r| keep(r)).cloned().collect();
        let feature_dim = rows.iter().find_map(|r| r.feature.as_ref().map(Vec::len));
        StatsTable {
            rows,
            class_count: self.class_count,
            feature_dim,
        }
    }

    /// Sets `forget_count` from `counts`; every id in the table must be covered.
    pub fn with_forget_counts(&self, counts: &BTreeMap<ExampleId, u32>) -> Result<StatsTable> {
        let mut rows = self.rows.clone();
        for row in &mut rows {
            let count = counts.get(&row.id).ok_or_else(|| {
                Error::Consistency(format!("no forgetting count for id {}", row.id))
            })?;
            row.forget_count = Some(*count);
        }
        StatsTable::new(rows, self.class_count)
    }

    /// Attaches feature vectors; every id in the table must be covered.
    pub fn with_features(&self, features: &BTreeMap<ExampleId, Vec<f64>>) -> Result<StatsTable> {
        let mut rows = self.rows.clone();
        for row in &mut rows {
            let feature = features.get(&row.id).ok_or_else(|| {
                Error::Consistency(format!("no feature vector for id {}", row.id))
            })?;
            row.feature = Some(feature.clone());
        }
        StatsTable::new(rows, self.class_count)
    }
}

/// One row of raw classifier output.
#[derive(Debug, Clone, PartialEq)]
pub struct LogitsRow {
    pub id: ExampleId,
    pub label: u32,
    pub logits: Vec<f64>,
}

/// Raw classifier outputs (softmax inputs) for a dataset.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LogitsTable {
    rows: Vec<LogitsRow>,
    dim: usize,
}

impl LogitsTable {
    pub fn new(rows: Vec<LogitsRow>) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.logits.len());
        if !rows.is_empty() && dim < 2 {
            return Err(invariant(
                "logit dimension >= 2",
                format!("id {} has {dim} logits", rows[0].id),
            ));
        }
        let mut seen = HashSet::with_capacity(rows.len());
        for row in &rows {
            if row.logits.len() != dim {
                return Err(invariant(
                    "rows share one logit dimension",
                    format!(
                        "id {} has {} logits, expected {dim}",
                        row.id,
                        row.logits.len()
                    ),
                ));
            }
            if !seen.insert(row.id) {
                return Err(invariant(
                    "ids are unique",
                    format!("duplicate id {}", row.id),
                ));
            }
        }
        Ok(Self { rows, dim })
    }

    pub fn rows(&self) -> &[LogitsRow] {
        &self.rows
    }

    /// Logit dimension `d`, or 0 for an empty table.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Uniform-width histogram over `log10(max(entropy, floor))`.
///
/// Bin edges are stored as integer multiples of the bin width so that
/// building, querying and exporting all agree on the same edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    bin_width: f64,
    origin_index: i64,
    floor: f64,
    heights: Vec<u64>,
    total: u64,
}

impl Histogram {
    /// `origin_index` is the left edge of bin 0 in units of `bin_width`.
    pub fn from_parts(
        bin_width: f64,
        origin_index: i64,
        floor: f64,
        heights: Vec<u64>,
    ) -> Result<Self> {
        if !(bin_width.is_finite() && bin_width > 0.0) {
            return Err(invariant("bin_width > 0", format!("got {bin_width}")));
        }
        if !(floor.is_finite() && floor > 0.0) {
            return Err(invariant("floor > 0", format!("got {floor}")));
        }
        if heights.is_empty() {
            return Err(invariant("at least one bin", "no bins"));
        }
        let total = heights.iter().sum();
        Ok(Self {
            bin_width,
            origin_index,
            floor,
            heights,
            total,
        })
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn origin_index(&self) -> i64 {
        self.origin_index
    }

    /// Left edge of bin 0 on the log10 axis.
    pub fn origin(&self) -> f64 {
        self.origin_index as f64 * self.bin_width
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn heights(&self) -> &[u64] {
        &self.heights
    }

    pub fn height(&self, bin: usize) -> u64 {
        self.heights[bin]
    }

    pub fn bin_count(&self) -> usize {
        self.heights.len()
    }

    pub fn non_empty_bins(&self) -> usize {
        self.heights.iter().filter(|&&h| h > 0).count()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn left_edge(&self, bin: usize) -> f64 {
        (self.origin_index + bin as i64) as f64 * self.bin_width
    }

    pub fn right_edge(&self, bin: usize) -> f64 {
        self.left_edge(bin + 1)
    }
}

/// Per-bin selection weight used to turn a histogram into probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightScheme {
    /// Proportional to `max height - height + 1`.
    W1,
    /// Uniform over non-empty bins.
    W2,
    /// Proportional to `1 / height`.
    W3,
}

impl WeightScheme {
    pub const ALL: [WeightScheme; 3] = [WeightScheme::W1, WeightScheme::W2, WeightScheme::W3];

    pub fn as_str(self) -> &'static str {
        match self {
            WeightScheme::W1 => "w1",
            WeightScheme::W2 => "w2",
            WeightScheme::W3 => "w3",
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "w1" => Ok(WeightScheme::W1),
            "w2" => Ok(WeightScheme::W2),
            "w3" => Ok(WeightScheme::W3),
            other => Err(Error::InvalidInput(format!(
                "unknown weight scheme `{other}` (expected w1, w2 or w3)"
            ))),
        }
    }
}

/// Tolerance on the total mass of a [`ProbabilityTable`].
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

/// Per-example selection probabilities, sorted by id.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    entries: Vec<(ExampleId, f64)>,
}

impl ProbabilityTable {
    pub fn new(mut entries: Vec<(ExampleId, f64)>) -> Result<Self> {
        entries.sort_by_key(|e| e.0);
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(invariant(
                "ids appear once",
                format!("duplicate id {}", w[0].0),
            ));
        }
        if let Some((id, p)) = entries.iter().find(|(_, p)| !(0.0..=1.0).contains(p)) {
            return Err(invariant(
                "probabilities in [0, 1]",
                format!("id {id} has probability {p}"),
            ));
        }
        let sum: f64 = entries.iter().map(|e| e.1).sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(invariant("probabilities sum to 1", format!("sum is {sum}")));
        }
        Ok(Self { entries })
    }

    /// Normalizes non-negative masses into a probability table.
    pub fn from_masses(masses: Vec<(ExampleId, f64)>) -> Result<Self> {
        if let Some((id, m)) = masses.iter().find(|(_, m)| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::InvalidInput(format!("id {id} has mass {m}")));
        }
        let total: f64 = masses.iter().map(|e| e.1).sum();
        if total <= 0.0 {
            return Err(Error::InvalidInput("total mass is zero".into()));
        }
        Self::new(masses.into_iter().map(|(id, m)| (id, m / total)).collect())
    }

    pub fn entries(&self) -> &[(ExampleId, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: ExampleId) -> Option<f64> {
        self.entries
            .binary_search_by_key(&id, |e| e.0)
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn positive_count(&self) -> usize {
        self.entries.iter().filter(|e| e.1 > 0.0).count()
    }

    /// Checks that this table covers exactly the ids of `stats`.
    pub fn check_aligned(&self, stats: &StatsTable) -> Result<()> {
        if self.entries.len() != stats.len()
            || self
                .entries
                .iter()
                .zip(stats.rows())
                .any(|(e, r)| e.0 != r.id)
        {
            return Err(Error::Consistency(
                "probability table ids do not match the stats table".into(),
            ));
        }
        Ok(())
    }
}

/// Name and parameters of the method that produced a selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodDescriptor {
    pub name: String,
    pub params: Vec<(String, String)>,
}

impl MethodDescriptor {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: Vec::new(),
        }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }
}

impl fmt::Display for MethodDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            let params: Vec<_> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            write!(f, "({})", params.join(", "))?;
        }
        Ok(())
    }
}

/// A proxy dataset: an ordered set of distinct ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    method: MethodDescriptor,
    ids: Vec<ExampleId>,
    seed: Option<u64>,
}

impl Selection {
    /// Validates the ids against `stats`.
    pub fn new(
        method: MethodDescriptor,
        ids: Vec<ExampleId>,
        seed: Option<u64>,
        stats: &StatsTable,
    ) -> Result<Self> {
        let selection = Self::unchecked(method, ids, seed)?;
        selection.check_against(stats)?;
        Ok(selection)
    }

    /// Validates only id uniqueness; use [`Selection::check_against`] once a table is at hand.
    pub fn unchecked(
        method: MethodDescriptor,
        ids: Vec<ExampleId>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let mut seen = HashSet::with_capacity(ids.len());
        if let Some(id) = ids.iter().find(|id| !seen.insert(**id)) {
            return Err(invariant(
                "selected ids are distinct",
                format!("id {id} repeated"),
            ));
        }
        Ok(Self { method, ids, seed })
    }

    pub fn check_against(&self, stats: &StatsTable) -> Result<()> {
        match self.ids.iter().find(|id| !stats.contains(**id)) {
            Some(id) => Err(Error::Consistency(format!(
                "selected id {id} is not in the stats table"
            ))),
            None => Ok(()),
        }
    }

    pub fn method(&self) -> &MethodDescriptor {
        &self.method
    }

    pub fn ids(&self) -> &[ExampleId] {
        &self.ids
    }

    pub fn k(&self) -> usize {
        self.ids.len()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitMode {
    AllShuffle,
    Disjoint,
}

impl SplitMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitMode::AllShuffle => "allshuffle",
            SplitMode::Disjoint => "disjoint",
        }
    }
}

impl fmt::Display for SplitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Train share for a split of `k` items: `ratio * k` rounded half up.
pub fn train_size(ratio: f64, k: usize) -> usize {
    ((ratio * k as f64).round() as usize).min(k)
}

/// A selection partitioned into training and validation ids.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult {
    train: Vec<ExampleId>,
    val: Vec<ExampleId>,
    mode: SplitMode,
    ratio: f64,
}

impl SplitResult {
    pub fn new(
        train: Vec<ExampleId>,
        val: Vec<ExampleId>,
        mode: SplitMode,
        ratio: f64,
    ) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(invariant("ratio in (0, 1)", format!("got {ratio}")));
        }
        let k = train.len() + val.len();
        if train.len() != train_size(ratio, k) {
            return Err(invariant(
                "|train| = round(ratio * k)",
                format!("|train| = {} with k = {k}, ratio = {ratio}", train.len()),
            ));
        }
        let mut seen = HashSet::with_capacity(k);
        if let Some(id) = train.iter().chain(&val).find(|id| !seen.insert(**id)) {
            return Err(invariant(
                "train and val are disjoint",
                format!("id {id} repeated"),
            ));
        }
        Ok(Self {
            train,
            val,
            mode,
            ratio,
        })
    }

    pub fn train(&self) -> &[ExampleId] {
        &self.train
    }

    pub fn val(&self) -> &[ExampleId] {
        &self.val
    }

    pub fn mode(&self) -> SplitMode {
        self.mode
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }
}

/// Per-assessment correctness of each example during training.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectnessLog {
    epochs: usize,
    rows: Vec<(ExampleId, Vec<bool>)>,
}

impl CorrectnessLog {
    pub fn new(rows: Vec<(ExampleId, Vec<bool>)>) -> Result<Self> {
        let epochs = rows.first().map_or(0, |r| r.1.len());
        if !rows.is_empty() && epochs == 0 {
            return Err(invariant("epochs >= 1", "rows have no assessments"));
        }
        let mut seen = HashSet::with_capacity(rows.len());
        for (id, seq) in &rows {
            if seq.len() != epochs {
                return Err(invariant(
                    "rows share one length",
                    format!("id {id} has {} assessments, expected {epochs}", seq.len()),
                ));
            }
            if !seen.insert(*id) {
                return Err(invariant("ids are unique", format!("duplicate id {id}")));
            }
        }
        Ok(Self { epochs, rows })
    }

    pub fn epochs(&self) -> usize {
        self.epochs
    }

    pub fn rows(&self) -> &[(ExampleId, Vec<bool>)] {
        &self.rows
    }
}
