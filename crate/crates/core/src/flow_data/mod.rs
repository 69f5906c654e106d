//! NetFlow ingestion, preprocessing, partitioning, and attack taxonomy.
//!
//! A [`FlowRecord`] is one bidirectional NetFlow-v9 sample. The nine
//! feature-bearing columns are the four categoricals (protocol, ports,
//! TCP flags) and the five numerics (ingress/egress bytes and packets,
//! flow duration in milliseconds). A fitted [`FeatureCodec`] maps records
//! to model vectors: numerics are compressed with `ln(1 + x)` and min-max
//! scaled to `[0, 1]`, categoricals are one-hot encoded against a fitted
//! vocabulary with an explicit "other" bucket.

mod codec;
mod io;
mod record;
mod split;
mod synth;

pub use codec::{
    CatFeature, Dataset, DecodedFlow, FeatureCodec, NumericFeature, NUMERIC_FEATURES,
};
pub use io::{load_netflow, write_netflow_csv, ColumnSchema, LoadReport};
pub use record::{categorize, AttackCategory, FlowRecord};
pub use split::{partition, DataSplit};
pub use synth::{generate_synthetic, CategoryMix, SynthSpec, TrafficFlavor};

use thiserror::Error;

/// Errors raised by ingestion, fitting, and partitioning.
#[derive(Debug, Error)]
pub enum FlowError {
    #[error("missing column: {0}")]
    MissingColumn(String),
    #[error("malformed row {index}: {reason}")]
    MalformedRow { index: usize, reason: String },
    #[error("empty dataset")]
    EmptyDataset,
    #[error("a split would not contain both classes")]
    InsufficientClassSamples,
    #[error("split fractions must be positive and sum to 1 (got sum {sum})")]
    InvalidFractions { sum: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("codec serialization error: {0}")]
    CodecFormat(String),
}
