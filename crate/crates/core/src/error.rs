use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("qubit {index} out of range for a {n_qubits}-qubit register")]
    TargetOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit {0} listed more than once")]
    DuplicateTarget(usize),

    #[error("value {value} does not fit in {n_qubits} qubits")]
    ValueOutOfRange { value: u64, n_qubits: usize },

    #[error("{0} qubits requested; the simulator is capped at {max}", max = crate::state::MAX_QUBITS)]
    TooManyQubits(usize),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("both sides of a bipartition must be nonempty")]
    EmptyPartition,

    #[error("measurement outcome {outcome} has zero probability")]
    ZeroProbability { outcome: usize },

    #[error("block index {index} out of range for width {width}")]
    IndexOutOfRange { index: usize, width: usize },

    #[error("bit width {width} outside the supported range {min}..={max}")]
    WidthOutOfRange { width: usize, min: usize, max: usize },

    #[error("modulus {modulus} does not fit the network width {width}")]
    ModulusTooLarge { modulus: u64, width: usize },

    #[error("invalid operand: {0}")]
    InvalidOperand(String),

    #[error("circuit is not a classical reversible network: {0}")]
    NonClassical(String),

    #[error("network does not compute |x>|0> -> |x>|f(x)>: {0}")]
    NotAFunctionNetwork(String),

    #[error("register of {width} qubits cannot hold values up to {max_value}")]
    RegisterTooNarrow { width: usize, max_value: u64 },

    #[error("{a} and {modulus} are not coprime")]
    NotCoprime { a: u64, modulus: u64 },

    #[error("{0} is not an odd composite number")]
    NotComposite(u64),

    #[error("{n} = {base}^{exponent} is a prime power")]
    PrimePower { n: u64, base: u64, exponent: u32 },

    #[error("gcd(0, 0) is undefined")]
    BothZero,

    #[error("no factors found after {attempts} attempts")]
    RetriesExhausted {
        attempts: usize,
        log: Vec<crate::report::Record>,
    },

    #[error("invalid pulse: {0}")]
    InvalidPulse(String),

    #[error("phonon population {population:.3e} at the cutoff exceeds the leakage bound")]
    PhononLeakage { population: f64 },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
