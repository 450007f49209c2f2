use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("duplicate column {0} in row")]
    DuplicateColumn(usize),
    #[error("duplicate stencil offset {0}")]
    DuplicateOffset(usize),
    #[error("generator failed at row {row}: {reason}")]
    GeneratorFailure { row: usize, reason: String },
    #[error("pivot column {column} already owned by row {row}")]
    PivotCollision { column: usize, row: usize },
    #[error("certificate violation at stage {stage}: pivot column {column} below promised floor {floor}")]
    CertificateViolation {
        stage: usize,
        column: usize,
        floor: usize,
    },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("rows {first} and {second} share row-length {column}")]
    DuplicateLength {
        first: usize,
        second: usize,
        column: usize,
    },
    #[error("representatives {first} and {second} do not have strictly increasing lengths")]
    NonIncreasingLengths { first: usize, second: usize },
    #[error("rows are neither in LRRF nor in LREF")]
    NotReduced,
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            line,
            reason: reason.into(),
        }
    }
}
