//! Delimited-text file formats.
//!
//! All files are UTF-8, comma-separated, LF-terminated, with one header
//! line. Reals are written with 17 significant digits so that reading and
//! re-writing a file reproduces it byte for byte.
//!
//! | file        | columns                                   |
//! |-------------|-------------------------------------------|
//! | logits      | `id,label,logit_0,..,logit_{d-1}`         |
//! | stats       | `id,label,entropy[,forget_count]`         |
//! | features    | `id,f_0,..,f_{F-1}`                       |
//! | correctness | `id,c_0,..,c_{E-1}` with `c` in {0, 1}    |
//! | histogram   | `bin_index,left_edge_log10,right_edge_log10,height` |
//!
//! Selection files have no column header: `# key=value` metadata lines
//! (`method`, method parameters, `k`, optional `seed`) followed by one id per
//! line in selection order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use csv::StringRecord;

use crate::error::{Error, Result};
use crate::types::{
    CorrectnessLog, ExampleId, ExampleStat, Histogram, LogitsRow, LogitsTable, MethodDescriptor,
    Selection, SplitResult, StatsTable,
};

/// Formats a real with 17 significant digits.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

struct Table {
    path: String,
    header: StringRecord,
    records: Vec<(usize, StringRecord)>,
}

impl Table {
    fn parse_error(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }

    fn field<T: FromStr>(&self, line: usize, record: &StringRecord, col: usize) -> Result<T> {
        let raw = record.get(col).unwrap_or_default();
        raw.parse().map_err(|_| {
            let name = self.header.get(col).unwrap_or("?");
            self.parse_error(line, format!("column `{name}`: cannot parse `{raw}`"))
        })
    }
}

fn read_table(path: &Path, leading: &[&str], min_columns: usize) -> Result<Table> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    let mut header = None;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            path: display.clone(),
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if header.is_none() {
            header = Some(record);
        } else {
            records.push((line, record));
        }
    }
    let header = header.ok_or_else(|| Error::Parse {
        path: display.clone(),
        line: 1,
        message: "no rows (missing header)".into(),
    })?;
    let table = Table {
        path: display,
        header,
        records,
    };
    let matches = leading
        .iter()
        .enumerate()
        .all(|(i, name)| table.header.get(i) == Some(*name));
    if !matches || table.header.len() < min_columns {
        return Err(table.parse_error(
            1,
            format!("expected header starting with `{}`", leading.join(",")),
        ));
    }
    for (line, record) in &table.records {
        if record.len() != table.header.len() {
            return Err(table.parse_error(
                *line,
                format!(
                    "expected {} fields, found {}",
                    table.header.len(),
                    record.len()
                ),
            ));
        }
    }
    Ok(table)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

fn push_row(out: &mut String, fields: impl IntoIterator<Item = String>) {
    let fields: Vec<String> = fields.into_iter().collect();
    out.push_str(&fields.join(","));
    out.push('\n');
}

fn indexed_header(first: &[&str], prefix: &str, count: usize) -> Vec<String> {
    first
        .iter()
        .map(|s| s.to_string())
        .chain((0..count).map(|i| format!("{prefix}_{i}")))
        .collect()
}

pub fn read_logits(path: &Path) -> Result<LogitsTable> {
    let table = read_table(path, &["id", "label"], 4)?;
    let mut rows = Vec::with_capacity(table.records.len());
    for (line, record) in &table.records {
        let id = table.field(*line, record, 0)?;
        let label = table.field(*line, record, 1)?;
        let logits = (2..record.len())
            .map(|c| table.field(*line, record, c))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(bad) = logits.iter().find(|v| !v.is_finite()) {
            return Err(table.parse_error(*line, format!("non-finite logit {bad}")));
        }
        rows.push(LogitsRow { id, label, logits });
    }
    LogitsTable::new(rows)
}

pub fn write_logits(path: &Path, logits: &LogitsTable) -> Result<()> {
    let mut out = String::new();
    push_row(
        &mut out,
        indexed_header(&["id", "label"], "logit", logits.dim()),
    );
    for row in logits.rows() {
        push_row(
            &mut out,
            [row.id.to_string(), row.label.to_string()]
                .into_iter()
                .chain(row.logits.iter().map(|&v| format_real(v))),
        );
    }
    write_text(path, &out)
}

/// Reads a stats file; the class count is inferred from the labels.
pub fn read_stats(path: &Path) -> Result<StatsTable> {
    let table = read_table(path, &["id", "label", "entropy"], 3)?;
    let with_counts = match table.header.len() {
        3 => false,
        4 if table.header.get(3) == Some("forget_count") => true,
        _ => return Err(table.parse_error(1, "expected header `id,label,entropy[,forget_count]`")),
    };
    let mut rows = Vec::with_capacity(table.records.len());
    for (line, record) in &table.records {
        let entropy: f64 = table.field(*line, record, 2)?;
        let mut stat = ExampleStat::new(
            table.field(*line, record, 0)?,
            table.field(*line, record, 1)?,
            entropy,
        )
        .map_err(|e| table.parse_error(*line, e.to_string()))?;
        if with_counts && !record[3].is_empty() {
            stat.forget_count = Some(table.field(*line, record, 3)?);
        }
        rows.push(stat);
    }
    StatsTable::from_rows(rows)
}

/// Writes a stats file; the `forget_count` column is present when any row has a count.
pub fn write_stats(path: &Path, stats: &StatsTable) -> Result<()> {
    write_text(path, &stats_to_string(stats))
}

pub fn stats_to_string(stats: &StatsTable) -> String {
    let with_counts = stats.rows().iter().any(|r| r.forget_count.is_some());
    let mut out = String::new();
    out.push_str(if with_counts {
        "id,label,entropy,forget_count\n"
    } else {
        "id,label,entropy\n"
    });
    for row in stats.rows() {
        let _ = write!(out, "{},{},{}", row.id, row.label, format_real(row.entropy));
        if with_counts {
            out.push(',');
            if let Some(c) = row.forget_count {
                let _ = write!(out, "{c}");
            }
        }
        out.push('\n');
    }
    out
}

pub fn read_features(path: &Path) -> Result<BTreeMap<ExampleId, Vec<f64>>> {
    let table = read_table(path, &["id"], 2)?;
    let mut features = BTreeMap::new();
    for (line, record) in &table.records {
        let id: ExampleId = table.field(*line, record, 0)?;
        let values = (1..record.len())
            .map(|c| table.field(*line, record, c))
            .collect::<Result<Vec<f64>>>()?;
        if features.insert(id, values).is_some() {
            return Err(table.parse_error(*line, format!("duplicate id {id}")));
        }
    }
    Ok(features)
}

pub fn write_features(path: &Path, features: &BTreeMap<ExampleId, Vec<f64>>) -> Result<()> {
    let dim = features.values().next().map_or(0, Vec::len);
    let mut out = String::new();
    push_row(&mut out, indexed_header(&["id"], "f", dim));
    for (id, values) in features {
        push_row(
            &mut out,
            std::iter::once(id.to_string()).chain(values.iter().map(|&v| format_real(v))),
        );
    }
    write_text(path, &out)
}

pub fn read_correctness(path: &Path) -> Result<CorrectnessLog> {
    let table = read_table(path, &["id"], 2)?;
    let mut rows = Vec::with_capacity(table.records.len());
    for (line, record) in &table.records {
        let id: ExampleId = table.field(*line, record, 0)?;
        let seq = (1..record.len())
            .map(|c| match &record[c] {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(table.parse_error(*line, format!("expected 0 or 1, found `{other}`"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        rows.push((id, seq));
    }
    CorrectnessLog::new(rows)
}

pub fn write_correctness(path: &Path, log: &CorrectnessLog) -> Result<()> {
    let mut out = String::new();
    push_row(&mut out, indexed_header(&["id"], "c", log.epochs()));
    for (id, seq) in log.rows() {
        push_row(
            &mut out,
            std::iter::once(id.to_string()).chain(seq.iter().map(|&c| u8::from(c).to_string())),
        );
    }
    write_text(path, &out)
}

pub fn histogram_to_string(h: &Histogram) -> String {
    let mut out = String::from("bin_index,left_edge_log10,right_edge_log10,height\n");
    for (b, height) in h.heights().iter().enumerate() {
        let _ = writeln!(
            out,
            "{b},{},{},{height}",
            format_real(h.left_edge(b)),
            format_real(h.right_edge(b))
        );
    }
    out
}

pub fn write_histogram(path: &Path, h: &Histogram) -> Result<()> {
    write_text(path, &histogram_to_string(h))
}

/// Reads a histogram file. The floor is not part of the format and must be supplied.
pub fn read_histogram(path: &Path, floor: f64) -> Result<Histogram> {
    let table = read_table(
        path,
        &["bin_index", "left_edge_log10", "right_edge_log10", "height"],
        4,
    )?;
    let Some((first_line, first)) = table.records.first() else {
        return Err(table.parse_error(1, "no rows"));
    };
    let left: f64 = table.field(*first_line, first, 1)?;
    let right: f64 = table.field(*first_line, first, 2)?;
    let width = right - left;
    let mut heights = Vec::with_capacity(table.records.len());
    for (b, (line, record)) in table.records.iter().enumerate() {
        let index: usize = table.field(*line, record, 0)?;
        if index != b {
            return Err(table.parse_error(*line, format!("expected bin {b}, found {index}")));
        }
        heights.push(table.field(*line, record, 3)?);
    }
    Histogram::from_parts(width, (left / width).round() as i64, floor, heights)
}

pub fn selection_to_string(sel: &Selection) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# method={}", sel.method().name);
    for (key, value) in &sel.method().params {
        let _ = writeln!(out, "# {key}={value}");
    }
    let _ = writeln!(out, "# k={}", sel.k());
    if let Some(seed) = sel.seed() {
        let _ = writeln!(out, "# seed={seed}");
    }
    for id in sel.ids() {
        let _ = writeln!(out, "{id}");
    }
    out
}

pub fn write_selection(path: &Path, sel: &Selection) -> Result<()> {
    write_text(path, &selection_to_string(sel))
}

/// Reads a selection file. Ids are not checked against any stats table.
pub fn read_selection(path: &Path) -> Result<Selection> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path)?;
    let err = |line: usize, message: String| Error::Parse {
        path: display.clone(),
        line,
        message,
    };
    let mut method: Option<MethodDescriptor> = None;
    let mut params = Vec::new();
    let mut k = None;
    let mut seed = None;
    let mut ids = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim_end_matches('\r');
        if let Some(meta) = raw.strip_prefix('#') {
            let (key, value) = meta
                .trim()
                .split_once('=')
                .ok_or_else(|| err(line, format!("metadata line without `=`: `{raw}`")))?;
            match key {
                "method" => method = Some(MethodDescriptor::new(value)),
                "k" => {
                    k = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| err(line, format!("bad k `{value}`")))?,
                    )
                }
                "seed" => {
                    seed = Some(
                        value
                            .parse::<u64>()
                            .map_err(|_| err(line, format!("bad seed `{value}`")))?,
                    )
                }
                _ => params.push((key.to_string(), value.to_string())),
            }
        } else if !raw.trim().is_empty() {
            ids.push(
                raw.trim()
                    .parse::<ExampleId>()
                    .map_err(|_| err(line, format!("bad id `{raw}`")))?,
            );
        }
    }
    let mut method = method.ok_or_else(|| err(1, "missing `# method=` line".into()))?;
    method.params = params;
    if let Some(k) = k {
        if k != ids.len() {
            return Err(err(
                0,
                format!("header says k={k} but file lists {} ids", ids.len()),
            ));
        }
    }
    Selection::unchecked(method, ids, seed)
}

/// Paths `{prefix}_train.txt` and `{prefix}_val.txt`.
pub fn split_paths(prefix: &Path) -> (PathBuf, PathBuf) {
    let base = prefix.as_os_str().to_string_lossy();
    (
        PathBuf::from(format!("{base}_train.txt")),
        PathBuf::from(format!("{base}_val.txt")),
    )
}

/// Writes both halves of a split in the selection format.
///
/// `seed` is recorded only when given, so seed-free splits are
/// byte-identical whatever seed the caller had configured.
pub fn write_split(
    prefix: &Path,
    split: &SplitResult,
    low_to_train: Option<bool>,
    seed: Option<u64>,
) -> Result<(PathBuf, PathBuf)> {
    let (train_path, val_path) = split_paths(prefix);
    for (part, ids, path) in [
        ("train", split.train(), &train_path),
        ("val", split.val(), &val_path),
    ] {
        let mut method = MethodDescriptor::new("split")
            .param("part", part)
            .param("mode", split.mode())
            .param("ratio", split.ratio());
        if let Some(flag) = low_to_train {
            method = method.param("low_to_train", flag);
        }
        let sel = Selection::unchecked(method, ids.to_vec(), seed)?;
        write_selection(path, &sel)?;
    }
    Ok((train_path, val_path))
}
