//! Proxy dataset construction from per-example classifier statistics.
//!
//! The pipeline turns raw logits into per-example predictive entropy
//! ([`entropy`]), bins the entropies on a log10 axis ([`histogram`]), picks a
//! subset with one of the [`selectors`], and partitions the subset into
//! training and validation halves ([`splitter`]). [`report`] summarizes what
//! a subset looks like relative to the full table, and [`cli`] exposes all of
//! it as a batch tool over the delimited-text formats in [`io`].
//!
//! ```
//! use proxy_data::{selectors, ExampleStat, StatsTable, WeightScheme};
//!
//! let stats = StatsTable::from_rows(
//!     (0..100).map(|i| ExampleStat::new(i, 0, 0.01 * (i + 1) as f64).unwrap()).collect(),
//! )?;
//! let sel = selectors::select_histogram_weighted(&stats, 10, WeightScheme::W1, 0.25, 1e-12, 7)?;
//! assert_eq!(sel.k(), 10);
//! # Ok::<(), proxy_data::Error>(())
//! ```

pub mod cli;
pub mod entropy;
mod error;
pub mod histogram;
pub mod io;
pub mod report;
pub mod rng;
pub mod selectors;
pub mod splitter;
mod types;

pub use error::{Error, Result};
pub use types::*;
