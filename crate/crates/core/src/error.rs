use thiserror::Error;

use crate::algebra::AxiomReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("table `{table}` has entry {value} at position {position}, but the universe has {size} elements")]
    EntryOutOfRange {
        table: String,
        position: usize,
        value: usize,
        size: usize,
    },

    #[error("table `{table}` has {found} entries, expected {expected}")]
    BadShape {
        table: String,
        expected: usize,
        found: usize,
    },

    #[error("universe size {0} is outside the supported range 1..=64")]
    UnsupportedSize(usize),

    #[error("no residual b -> c exists for b = {b}, c = {c}: the product is not residuated")]
    NotResiduated { b: usize, c: usize },

    #[error("axioms violated: {0}")]
    AxiomsViolated(AxiomReport),

    #[error("invalid modal signature: {0}")]
    Signature(String),

    #[error("unknown modal symbol `{0}`")]
    UnknownModal(String),

    #[error("unbound variable v{0}")]
    UnboundVariable(u32),

    #[error("subset is not an I-filter")]
    NotAFilter,

    #[error("partition is not a congruence: {0}")]
    NotACongruence(String),

    #[error("size cap exceeded: {what} needs n <= {cap}, got {n}")]
    SizeCap { what: &'static str, n: usize, cap: usize },

    #[error("the trivial one-element algebra is not accepted here")]
    TrivialAlgebra,

    #[error("algebra is not in R_C(I): {0}")]
    NotInRc(String),

    #[error("function is not compatible")]
    NotCompatible,

    #[error("{0}")]
    InvalidArgument(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("input error at `{path}`: {message}")]
    Input { path: String, message: String },

    #[error("catalog version mismatch: expected {expected}, found `{found}`")]
    CatalogVersion { expected: String, found: String },

    #[error("no catalog algebra interprets every modal symbol in use")]
    SignatureMismatch,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
