use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
}

/// Classes of rejected expression text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParseErrorKind {
    Syntax,
    LatticeViolation,
    NonImaginaryExponent,
    NonConstantDivisor,
}

/// A rejected expression, with the character offset where the problem starts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind_name} at offset {offset}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
    pub message: String,
    kind_name: &'static str,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, offset: usize, message: impl Into<String>) -> Self {
        let kind_name = match kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::LatticeViolation => "lattice violation",
            ParseErrorKind::NonImaginaryExponent => "non-imaginary exponent",
            ParseErrorKind::NonConstantDivisor => "non-constant divisor",
        };
        ParseError { kind, offset, message: message.into(), kind_name }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpinorError {
    #[error("specialize requires a generalized two-direction spinor, got {0}")]
    NotGeneralized(String),
    #[error("phase must be a single atom with a unit-modulus coefficient")]
    NotUnimodular,
    #[error("unknown spinor identifier `{0}`")]
    UnknownIdentifier(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("unknown operator identifier `{0}`")]
    UnknownIdentifier(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnsatzError {
    #[error("ansatz needs at least one eigenpair")]
    NoEigenpairs,
    #[error("eigenpair {0} has a zero spinor")]
    ZeroSpinor(usize),
    #[error("basis atom {0} listed more than once")]
    DuplicateBasisAtom(String),
    #[error("derivative order {0} listed more than once")]
    DuplicateDerivative(String),
    #[error("reconstruct requires a unique solution, got {0}")]
    NotUnique(&'static str),
}

/// Errors from reading an ansatz document.
#[derive(Debug, Error)]
pub enum AnsatzFileError {
    #[error("ansatz file is not valid JSON for the ansatz schema: {0}")]
    Schema(String),
    #[error("eigenpair {index}, {field}: {source}")]
    Expression {
        index: usize,
        field: &'static str,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Spinor(#[from] SpinorError),
    #[error(transparent)]
    Ansatz(#[from] AnsatzError),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
