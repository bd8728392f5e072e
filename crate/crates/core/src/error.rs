use thiserror::Error;

/// Errors raised by the library. Variant names double as the machine-readable
/// error kinds reported by the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("non-finite entry in {0}")]
    NonFinite(String),
    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("map is not trace preserving (residual {0:.3e})")]
    NotTracePreserving(f64),
    #[error("map is not unital (residual {0:.3e})")]
    NotUnital(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("control and target coincide (qubit {0})")]
    ControlEqualsTarget(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("input vectors are linearly dependent (vector {0})")]
    DependentInput(usize),
    #[error("unknown code `{0}`")]
    UnknownCode(String),
    #[error("correctability condition violated: {0}")]
    ConditionViolated(String),
    #[error("operator space is not a unital *-algebra: {0}")]
    NotAnAlgebra(String),
    #[error("could not resolve algebra structure: {0}")]
    StructureResolutionFailed(String),
    #[error("wrong oracle arity: {0}")]
    WrongArity(String),
    #[error("oracle is neither constant nor balanced: {0}")]
    PromiseViolated(String),
    #[error("invalid oracle: {0}")]
    InvalidOracle(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable identifier of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::DimMismatch(_) => "DimMismatch",
            Error::NonFinite(_) => "NonFinite",
            Error::NotHermitian(_) => "NotHermitian",
            Error::NotUnitary(_) => "NotUnitary",
            Error::NotPsd(_) => "NotPSD",
            Error::NotTracePreserving(_) => "NotTracePreserving",
            Error::NotUnital(_) => "NotUnital",
            Error::InvalidState(_) => "InvalidState",
            Error::InvalidMeasurement(_) => "InvalidMeasurement",
            Error::UnknownGate(_) => "UnknownGate",
            Error::IndexOutOfRange(_) => "IndexOutOfRange",
            Error::ControlEqualsTarget(_) => "ControlEqualsTarget",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::DependentInput(_) => "DependentInput",
            Error::UnknownCode(_) => "UnknownCode",
            Error::ConditionViolated(_) => "ConditionViolated",
            Error::NotAnAlgebra(_) => "NotAnAlgebra",
            Error::StructureResolutionFailed(_) => "StructureResolutionFailed",
            Error::WrongArity(_) => "WrongArity",
            Error::PromiseViolated(_) => "PromiseViolated",
            Error::InvalidOracle(_) => "InvalidOracle",
            Error::Parse(_) => "Parse",
        }
    }

    /// True for failures of a mathematical precondition, as opposed to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian(_)
                | Error::NotUnitary(_)
                | Error::NotPsd(_)
                | Error::NotTracePreserving(_)
                | Error::NotUnital(_)
                | Error::DependentInput(_)
                | Error::ConditionViolated(_)
                | Error::NotAnAlgebra(_)
                | Error::StructureResolutionFailed(_)
                | Error::PromiseViolated(_)
                | Error::InvalidMeasurement(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
