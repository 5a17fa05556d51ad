use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("qubit {qubit} out of range for {count}-qubit circuit")]
    QubitOutOfRange { qubit: usize, count: usize },

    #[error("matrix `{name}` is not unitary (deviation {deviation:.3e})")]
    NonUnitary { name: String, deviation: f64 },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("state too large: {qubits} qubits exceeds the cap of {cap}")]
    SizeCap { qubits: usize, cap: usize },

    #[error("post-selection onto a zero-probability branch")]
    ZeroProbabilityPostSelection,

    #[error("boolean function over {0} variables exceeds the 20-variable cap")]
    TooManyVariables(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("probabilities sum to {0}, expected 1")]
    BadProbabilities(f64),

    #[error("referee decision is tied at probability 1/2")]
    Tie,

    #[error("no branch for measurement outcome {0:#b}")]
    MissingBranch(u64),

    #[error("garden-hose protocol: {0}")]
    GardenHose(String),

    #[error("search space too large: {0}")]
    SearchCap(String),

    #[error("condition is not XOR-separable across players")]
    NotSeparable,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
