use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("invalid precision policy: {0}")]
    InvalidPolicy(String),
    #[error("precision cap of {max_bits} bits reached; achieved width {achieved_width}")]
    PrecisionCap { max_bits: u32, achieved_width: String },
    #[error("undecidable at {bits} bits: {what}")]
    Undecidable { what: String, bits: u32 },
    #[error("sigma_{n} undecided between {lower} and {upper} at {bits} bits")]
    SigmaUndecided { n: u64, lower: u64, upper: u64, bits: u32 },
    #[error("inconsistent enclosures: {0}")]
    Inconsistent(String),
    #[error("cannot parse number: {0}")]
    Parse(String),
}
