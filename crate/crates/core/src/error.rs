use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("circuit must have at least one qubit")]
    NoQubits,
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("gate {kind} expects {expected} qubits, got {got}")]
    Arity {
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("gate uses qubit {0} more than once")]
    DuplicateQubit(usize),
    #[error("invalid role map: {0}")]
    Roles(String),
    #[error("bit width must be at least 1 (got {0})")]
    BitWidth(usize),
    #[error("operand {value} out of range for {n}-bit input")]
    Operand { value: u64, n: usize },
    #[error("{0} has no carry-in qubit; cin must be 0")]
    NoCarryIn(&'static str),
    #[error("unknown adder family `{0}`")]
    UnknownFamily(String),
    #[error("circuit contains non-classical gate {0}; basis-state simulation unavailable")]
    NotClassical(&'static str),
    #[error("invalid channel parameter: {0}")]
    Parameter(String),
    #[error("{qubits} qubits exceed the simulation budget of {limit}")]
    QubitBudget { qubits: usize, limit: usize },
    #[error("bitstring length {got} does not match {expected} qubits")]
    BitstringLength { expected: usize, got: usize },
    #[error("qasm line {line}: {msg}")]
    Qasm { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
