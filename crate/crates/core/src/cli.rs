//! Command-line surface.
//!
//! Every command reads its inputs, never modifies them, and writes its
//! outputs deterministically. Failures are printed to stderr prefixed with
//! [`ERROR_PREFIX`] (runtime errors, exit status 1) or [`USAGE_PREFIX`]
//! (missing or conflicting flags, exit status 2).

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::entropy::compute_entropy_table;
use crate::error::Error;
use crate::histogram::{build_histogram, DEFAULT_BIN_WIDTH, DEFAULT_FLOOR};
use crate::io;
use crate::report::composition_report;
use crate::selectors::{count_forgetting_events, select_class_balanced, Method, DEFAULT_BETA};
use crate::splitter::{split_allshuffle, split_disjoint, DEFAULT_RATIO};
use crate::types::{ExampleId, StatsTable, WeightScheme};

pub const ERROR_PREFIX: &str = "proxy-data: error: ";
pub const USAGE_PREFIX: &str = "proxy-data: usage error: ";

/// Environment variable that overrides the default seed.
pub const SEED_ENV: &str = "PROXY_DATA_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "proxy-data",
    version,
    about = "Build entropy-based proxy datasets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodName {
    Random,
    EntropyTop,
    EntropyBottom,
    Forgetting,
    Kcenter,
    Tail,
    Prob,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightName {
    W1,
    W2,
    W3,
}

impl From<WeightName> for WeightScheme {
    fn from(w: WeightName) -> Self {
        match w {
            WeightName::W1 => WeightScheme::W1,
            WeightName::W2 => WeightScheme::W2,
            WeightName::W3 => WeightScheme::W3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeName {
    Allshuffle,
    Disjoint,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute per-example entropy from a logits file.
    Entropy {
        #[arg(long)]
        logits: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Select a proxy subset from a stats file.
    Select {
        #[arg(long)]
        stats: PathBuf,
        #[arg(long, value_enum)]
        method: MethodName,
        #[arg(long)]
        k: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        /// Low-entropy share of the budget for `tail`.
        #[arg(long, default_value_t = DEFAULT_BETA)]
        beta: f64,
        #[arg(long, value_enum, default_value = "w1")]
        weight: WeightName,
        #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
        bin_width: f64,
        #[arg(long, default_value_t = DEFAULT_FLOOR)]
        floor: f64,
        /// Apply the method per class with balanced quotas.
        #[arg(long)]
        class_balanced: bool,
        /// Features file (`kcenter`).
        #[arg(long)]
        features: Option<PathBuf>,
        /// Correctness log (`forgetting`); otherwise counts come from the stats file.
        #[arg(long)]
        correctness: Option<PathBuf>,
        /// Comma-separated initial pool ids for `kcenter`; one seeded id when omitted.
        #[arg(long, value_delimiter = ',')]
        pool: Vec<ExampleId>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the log10-entropy histogram of a stats file.
    Histogram {
        #[arg(long)]
        stats: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
        bin_width: f64,
        #[arg(long, default_value_t = DEFAULT_FLOOR)]
        floor: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Split a selection into train and validation files.
    Split {
        #[arg(long)]
        selection: PathBuf,
        /// Required for `disjoint`; validates ids for `allshuffle`.
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "allshuffle")]
        mode: ModeName,
        #[arg(long, default_value_t = DEFAULT_RATIO)]
        ratio: f64,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        /// In `disjoint` mode, send low-entropy ids to train.
        #[arg(long)]
        low_to_train: bool,
        /// Output paths are `<prefix>_train.txt` and `<prefix>_val.txt`.
        #[arg(long)]
        out_prefix: PathBuf,
    },
    /// Report subset size, entropy histogram, class ratios and tail mass.
    Report {
        #[arg(long)]
        selection: PathBuf,
        #[arg(long)]
        stats: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
        bin_width: f64,
        #[arg(long, default_value_t = DEFAULT_FLOOR)]
        floor: f64,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure of a command.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` and runs the command, printing results to stdout and
/// failures to stderr.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli.command) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("{USAGE_PREFIX}{msg}");
            ExitCode::from(2)
        }
        Err(CliError::Run(e)) => {
            eprintln!("{ERROR_PREFIX}{e}");
            ExitCode::from(1)
        }
    }
}

/// Runs a parsed command and returns the text it prints.
pub fn execute(command: &Command) -> CliResult<String> {
    match command {
        Command::Entropy { logits, out } => cmd_entropy(logits, out),
        Command::Select {
            stats,
            method,
            k,
            seed,
            beta,
            weight,
            bin_width,
            floor,
            class_balanced,
            features,
            correctness,
            pool,
            out,
        } => {
            let table = io::read_stats(stats)?;
            let (table, method) = resolve_method(
                table,
                *method,
                *beta,
                (*weight).into(),
                *bin_width,
                *floor,
                features.as_deref(),
                correctness.as_deref(),
                pool,
            )?;
            cmd_select(&table, &method, *class_balanced, *k, *seed, out)
        }
        Command::Histogram {
            stats,
            bin_width,
            floor,
            out,
        } => cmd_histogram(stats, *bin_width, *floor, out),
        Command::Split {
            selection,
            stats,
            mode,
            ratio,
            seed,
            low_to_train,
            out_prefix,
        } => cmd_split(
            selection,
            stats.as_deref(),
            *mode,
            *ratio,
            *seed,
            *low_to_train,
            out_prefix,
        ),
        Command::Report {
            selection,
            stats,
            bin_width,
            floor,
            out,
        } => cmd_report(selection, stats, *bin_width, *floor, out.as_deref()),
    }
}

pub fn cmd_entropy(logits_path: &Path, out: &Path) -> CliResult<String> {
    let logits = io::read_logits(logits_path)?;
    if logits.is_empty() {
        return Err(Error::InvalidInput(format!("{}: no rows", logits_path.display())).into());
    }
    let stats = compute_entropy_table(&logits)?;
    io::write_stats(out, &stats)?;
    let entropies: Vec<f64> = stats.rows().iter().map(|r| r.entropy).collect();
    let min = entropies.iter().copied().fold(f64::INFINITY, f64::min);
    let max = entropies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = entropies.iter().sum::<f64>() / entropies.len() as f64;
    Ok(format!(
        "rows={} entropy_min={} entropy_mean={} entropy_max={}\n",
        stats.len(),
        io::format_real(min),
        io::format_real(mean),
        io::format_real(max)
    ))
}

/// Turns CLI flags into a [`Method`], joining side inputs into the table.
#[allow(clippy::too_many_arguments)]
pub fn resolve_method(
    stats: StatsTable,
    method: MethodName,
    beta: f64,
    weight: WeightScheme,
    bin_width: f64,
    floor: f64,
    features: Option<&Path>,
    correctness: Option<&Path>,
    pool: &[ExampleId],
) -> CliResult<(StatsTable, Method)> {
    Ok(match method {
        MethodName::Random => (stats, Method::Random),
        MethodName::EntropyTop => (stats, Method::EntropyTop),
        MethodName::EntropyBottom => (stats, Method::EntropyBottom),
        MethodName::Tail => (stats, Method::Tail { beta }),
        MethodName::Prob => (
            stats,
            Method::Probabilistic {
                weight,
                bin_width,
                floor,
            },
        ),
        MethodName::Forgetting => {
            let stats = match correctness {
                Some(path) => {
                    let counts = count_forgetting_events(&io::read_correctness(path)?);
                    stats.with_forget_counts(&counts)?
                }
                None if stats.rows().iter().all(|r| r.forget_count.is_some()) => stats,
                None => {
                    return Err(CliError::Usage(
                        "--method forgetting needs --correctness or a forget_count column in the stats file"
                            .into(),
                    ))
                }
            };
            (stats, Method::Forgetting)
        }
        MethodName::Kcenter => {
            let path = features
                .ok_or_else(|| CliError::Usage("--method kcenter needs --features".into()))?;
            let stats = stats.with_features(&io::read_features(path)?)?;
            (
                stats,
                Method::KCenter {
                    pool: pool.to_vec(),
                },
            )
        }
    })
}

pub fn cmd_select(
    stats: &StatsTable,
    method: &Method,
    class_balanced: bool,
    k: usize,
    seed: u64,
    out: &Path,
) -> CliResult<String> {
    let selection = if class_balanced {
        select_class_balanced(method, stats, k, seed)?
    } else {
        method.select(stats, k, seed)?
    };
    io::write_selection(out, &selection)?;
    Ok(format!(
        "selected {} of {} ids with {}\n",
        selection.k(),
        stats.len(),
        selection.method()
    ))
}

pub fn cmd_histogram(
    stats_path: &Path,
    bin_width: f64,
    floor: f64,
    out: &Path,
) -> CliResult<String> {
    let stats = io::read_stats(stats_path)?;
    let h = build_histogram(&stats, bin_width, floor)?;
    io::write_histogram(out, &h)?;
    Ok(format!(
        "bins={} non_empty={} total={}\n",
        h.bin_count(),
        h.non_empty_bins(),
        h.total()
    ))
}

pub fn cmd_split(
    selection_path: &Path,
    stats_path: Option<&Path>,
    mode: ModeName,
    ratio: f64,
    seed: u64,
    low_to_train: bool,
    out_prefix: &Path,
) -> CliResult<String> {
    let selection = io::read_selection(selection_path)?;
    let (split, written_seed, flag) = match mode {
        ModeName::Allshuffle => {
            let stats = match stats_path {
                Some(path) => io::read_stats(path)?,
                None => StatsTable::from_rows(
                    selection
                        .ids()
                        .iter()
                        .map(|&id| crate::types::ExampleStat::new(id, 0, 0.0))
                        .collect::<Result<_, _>>()?,
                )?,
            };
            (
                split_allshuffle(&selection, &stats, ratio, seed)?,
                Some(seed),
                None,
            )
        }
        ModeName::Disjoint => {
            let path = stats_path.ok_or_else(|| {
                CliError::Usage("--mode disjoint needs --stats (entropies are required)".into())
            })?;
            let stats = io::read_stats(path)?;
            (
                split_disjoint(&selection, &stats, ratio, low_to_train)?,
                None,
                Some(low_to_train),
            )
        }
    };
    let (train, val) = io::write_split(out_prefix, &split, flag, written_seed)?;
    Ok(format!(
        "train={} ({}) val={} ({})\n",
        split.train().len(),
        train.display(),
        split.val().len(),
        val.display()
    ))
}

pub fn cmd_report(
    selection_path: &Path,
    stats_path: &Path,
    bin_width: f64,
    floor: f64,
    out: Option<&Path>,
) -> CliResult<String> {
    let selection = io::read_selection(selection_path)?;
    let stats = io::read_stats(stats_path)?;
    let text = composition_report(&selection, &stats, bin_width, floor)?.render();
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(Error::from)?;
    }
    Ok(text)
}
