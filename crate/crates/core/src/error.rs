use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("schema parse error: {0}")]
    SchemaParse(#[from] serde_json::Error),

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    /// The schema document is well-formed JSON but violates a schema invariant.
    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("non-binary relationship `{name}`: declares {arity} arguments")]
    NonBinaryRelationship { name: String, arity: usize },

    #[error("missing file {0}")]
    MissingFile(PathBuf),

    #[error("table `{table}`: unknown column `{column}`")]
    UnknownColumn { table: String, column: String },

    #[error("table `{table}`: missing column `{column}`")]
    MissingColumn { table: String, column: String },

    #[error("table `{table}`: key `{key}` does not exist in population `{population}`")]
    DanglingForeignKey {
        table: String,
        key: String,
        population: String,
    },

    #[error("table `{table}`: value `{value}` of `{column}` is outside its declared domain")]
    ValueOutsideDomain {
        table: String,
        column: String,
        value: String,
    },

    #[error("table `{table}`: duplicate key `{key}`")]
    DuplicateKey { table: String, key: String },

    #[error("table `{table}`: duplicate relationship pair ({first}, {second})")]
    DuplicatePair {
        table: String,
        first: String,
        second: String,
    },

    #[error("unknown population `{0}`")]
    UnknownPopulation(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("column `{0}` already present")]
    DuplicateColumn(String),

    #[error("column sets differ: {left:?} vs {right:?}")]
    ColumnMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },

    #[error("count overflow")]
    CountOverflow,

    /// Subtraction was asked to remove a row the minuend does not have, or
    /// more than the minuend holds. Always an upstream inconsistency.
    #[error("subtraction undefined at row {row:?}: {have} - {take}")]
    SubtractionUndefined {
        row: Vec<String>,
        have: u64,
        take: u64,
    },

    #[error("disjoint union: row {0:?} present in both operands")]
    SharedRow(Vec<String>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no table available for relationship set {0:?}")]
    MissingLowerTable(Vec<String>),

    #[error("cross product of {size} instantiations exceeds the cap of {cap}")]
    OracleCapExceeded { size: u128, cap: u128 },

    #[error("structure contains a cycle through `{0}`")]
    CyclicStructure(String),

    #[error("empty contingency table")]
    EmptyTable,

    #[error("malformed contingency table file: {0}")]
    MalformedTable(String),

    #[error("identity check failed: {0}")]
    IdentityViolation(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
