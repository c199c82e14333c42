use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by dataset handling, tree induction and perturbation.
#[derive(Error, Debug)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("header mismatch: expected columns [{expected}], found [{found}]")]
    HeaderMismatch { expected: String, found: String },

    #[error("CSV body is empty (header only)")]
    EmptyBody,

    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column}: cannot parse {value:?} as a number")]
    ParseNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}, column {column}: missing value")]
    MissingValue { row: usize, column: String },

    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("unknown attribute {0:?}")]
    UnknownAttribute(String),

    #[error("attribute {0:?} is not numeric")]
    NotNumeric(String),

    #[error("attribute {0:?} is not categorical")]
    NotCategorical(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("dataset has no feature attributes")]
    NoFeatures,

    #[error("datasets are not comparable: {0}")]
    DatasetMismatch(String),

    #[error("missing normal fit for attribute {0:?}")]
    MissingFit(String),

    #[error("missing domain for attribute {0:?}")]
    MissingDomain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
