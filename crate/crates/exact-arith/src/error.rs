use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("incompatible fields: sqrt({0}) and sqrt({1})")]
    IncompatibleField(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse number: {0}")]
    Parse(String),
    #[error("radicand must be positive, got {0}")]
    BadRadicand(i64),
}
