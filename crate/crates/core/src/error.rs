use thiserror::Error;

/// Errors produced by the library.
///
/// Variants fall into three buckets that the CLI maps to exit codes:
/// invalid input, exceeded resource caps, and everything else.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("invalid Pauli string {0:?}")]
    ParsePauli(String),

    #[error("generators {0} and {1} anticommute")]
    Anticommuting(usize, usize),

    #[error("generator {0} is a product of earlier generators")]
    DependentGenerator(usize),

    #[error("generators are inconsistent: -I is in the group (generator {0})")]
    InconsistentPhase(usize),

    #[error("operator {0} anticommutes with generator {1}")]
    NotInCentralizer(String, usize),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("group is not lattice-local: {0}")]
    NonLatticeGroup(String),

    #[error("expected a stabilizer state (q = n), got q = {q} for n = {n}")]
    NotAState { q: usize, n: usize },

    #[error("invalid noise model: {0}")]
    InvalidNoise(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular fit: {0}")]
    SingularFit(String),

    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
}

impl Error {
    /// True for failures caused by a configured size limit rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
