use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown symbol '{0}' (not in the base alphabet)")]
    UnknownSymbol(String),
    #[error("jet nesting too deep at {0}")]
    JetTooDeep(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not linear in {symbol} (degree {degree})")]
    NotLinear { symbol: String, degree: u32 },
    #[error("expression {0} is not a constant")]
    NotConstant(String),
    #[error("nonflat required: c must be nonzero")]
    FlatAmbient,
    #[error("non-Hopf data requires beta != 0")]
    ZeroBeta,
    #[error("shape operator is not symmetric")]
    NotSymmetric,
    #[error("eta(A xi) = {found} does not match alpha = {alpha}")]
    AlphaMismatch { alpha: String, found: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid point data: {0}")]
    InvalidPoint(String),
    #[error("parameter {param} out of range for {model}: requires {range}")]
    ParamOutOfRange {
        model: String,
        param: String,
        range: String,
    },
    #[error("unknown {kind} '{given}' (valid: {valid})")]
    UnknownChoice {
        kind: &'static str,
        given: String,
        valid: String,
    },
    #[error("script error at line {line}: {message}")]
    Script { line: usize, message: String },
}
