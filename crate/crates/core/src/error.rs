use thiserror::Error;

pub type Result<T> = std::result::Result<T, CellError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellError {
    #[error("empty input")]
    EmptyInput,
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("order violation: {0}")]
    OrderViolation(String),
    #[error("odd part present: {0}")]
    OddPartPresent(String),
    #[error("range error: {0}")]
    RangeError(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("dimension too large: {0}")]
    DimensionTooLarge(String),
    #[error("element not in subgroup: {0}")]
    ElementNotInSubgroup(String),
    #[error("non-integral average: {0}")]
    NonIntegralAverage(String),
    #[error("incompatible pair: {0}")]
    IncompatiblePair(String),
    #[error("partition is not distinguished: {0}")]
    NotDistinguished(String),
    #[error("negative result: {0}")]
    NegativeResult(String),
    #[error("missing dimension: {0}")]
    MissingDim(String),
    #[error("unsupported subgroup: {0}")]
    UnsupportedSubgroup(String),
    #[error("even part too large: {0}")]
    EvenPartTooLarge(String),
    #[error("too many rows: {0}")]
    TooManyRows(String),
    #[error("flavor does not match interval parity: {0}")]
    FlavorParityMismatch(String),
    #[error("not a good expression: {0}")]
    NotGoodExpression(String),
    #[error("unknown base model: {0}")]
    UnknownBase(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("no fixture for {0}")]
    NoFixture(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(String),
}

impl CellError {
    /// Process exit code for the CLI: 2 for contract violations, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CellError::NegativeResult(_) | CellError::NonIntegralAverage(_) => 2,
            _ => 1,
        }
    }
}
