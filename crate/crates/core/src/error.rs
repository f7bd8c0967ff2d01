use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("decoration {0} out of range 0..=5")]
    DecorationRange(i64),

    #[error("cyclic arithmetic on the degree marker 0")]
    ZeroArithmetic,

    #[error("malformed tile: {0}")]
    MalformedTile(String),

    #[error("malformed edge: {0}")]
    MalformedEdge(String),

    #[error("malformed vertex: {0}")]
    MalformedVertex(String),

    #[error("{file}:{line}:{column}: {message}")]
    Parse {
        file: String,
        line: u64,
        column: usize,
        message: String,
    },

    #[error("{file}: duplicate id {id}")]
    DuplicateId { file: String, id: usize },

    #[error("{file}: missing {kind} ids: {{{}}}", join_ids(.ids))]
    MissingIds {
        file: String,
        kind: &'static str,
        ids: Vec<usize>,
    },

    #[error("rule {parent}: child id {child} out of range 1..={max}")]
    ChildOutOfRange {
        parent: usize,
        child: usize,
        max: usize,
    },

    #[error("{file}: row {id} is not canonical, expected {canonical}")]
    NonCanonical {
        file: String,
        id: usize,
        canonical: String,
    },

    #[error("enumeration mismatch: missing {missing:?}, extra {extra:?}")]
    EnumerationMismatch {
        missing: Vec<String>,
        extra: Vec<String>,
    },

    #[error("placement: {0}")]
    Placement(String),

    #[error("derivation: {0}")]
    Derivation(String),

    #[error("malformed thread: {0}")]
    MalformedThread(String),

    #[error("cannot shift a depth-0 thread")]
    InsufficientDepth,

    #[error("invalid extension: child {position} of tile {parent} is {actual}, not {expected}")]
    InvalidExtension {
        parent: usize,
        position: usize,
        actual: usize,
        expected: usize,
    },

    #[error("substitution: {0}")]
    Substitution(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn join_ids(ids: &[usize]) -> String {
    ids.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
