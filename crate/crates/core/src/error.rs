use thiserror::Error;

/// Errors raised by graph construction, analysis and the oracle.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {index} out of range for graph on {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("induced subgraph needs a nonempty vertex set")]
    EmptyKeepSet,
    #[error("cannot drop every site of a Pauli string")]
    DropAllSites,
    #[error("Pauli strings have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("graph has no edges (n_max = 0); the Bell operator is degenerate")]
    DegenerateGraph,
    #[error("vertex {0} is not a root (degree below n_max)")]
    NotARoot(usize),
    #[error("loss set covers every vertex")]
    LossCoversAll,
    #[error("vertex {0} is in the loss set")]
    LostIndex(usize),
    #[error("{qubits} qubits exceeds the oracle cap of {cap}")]
    SizeCapExceeded { qubits: usize, cap: usize },
    #[error("graph state failed eigenvalue check for S_{vertex} (deviation {deviation})")]
    EigenvalueVerification { vertex: usize, deviation: String },
    #[error("subset enumeration needs {count} evaluations, over the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(String),
    #[error("negative probability {0}")]
    NegativeProbability(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("loss configuration outside the formula's validity range: {0}")]
    OutOfValidityRange(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
