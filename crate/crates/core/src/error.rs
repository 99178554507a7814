use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group order {0}: must be at least 2")]
    InvalidOrder(usize),
    #[error("element index {index} out of range for group of order {order}")]
    InvalidElement { index: usize, order: usize },
    #[error("irrep `{0}` does not belong to this group")]
    MismatchedIrrep(String),
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("site {site} out of range for chain of length {len}")]
    InvalidSite { site: usize, len: usize },
    #[error("invalid operator term: {0}")]
    InvalidTerm(String),
    #[error("exponent ({v1}, {v2}) out of range for local dimension {d}")]
    InvalidExponent { d: usize, v1: usize, v2: usize },

    #[error("invalid model configuration: {0}")]
    Config(String),

    #[error("solver did not converge after {iterations} iterations (best residual {residual:.3e})")]
    Convergence { iterations: usize, residual: f64 },
    #[error("Hamiltonian is not invariant under the global symmetry: commutator norm {0:.3e}")]
    SymmetryViolation(f64),

    #[error("state is not normalized: norm {0}")]
    NotNormalized(f64),
    #[error("work budget exceeded: {required} Pauli strings needed, limit is {limit}")]
    BudgetExceeded { required: u128, limit: u128 },
    #[error("unsupported local dimension {0}: only qubits (d = 2) are supported here")]
    UnsupportedDimension(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),

    #[error("state file: {0}")]
    StateFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
