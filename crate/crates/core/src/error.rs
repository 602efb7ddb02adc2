use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("p = 2 is not supported; the characteristic must be odd")]
    EvenPrime,
    #[error("p = {p} exceeds the configured ceiling {ceiling}")]
    PrimeTooLarge { p: u32, ceiling: u32 },
    #[error("operands live over different primes ({left} vs {right})")]
    PrimeMismatch { left: u32, right: u32 },
    #[error("element has augmentation 0 and is not a unit")]
    NotAUnit,
    #[error("expected {expected} coefficients, got {got}")]
    Length { expected: usize, got: usize },
    #[error("d-vector has length {got}, but b lies in the (g-1)-adic class k = {k}")]
    DLengthMismatch { k: usize, got: usize },
    #[error("{what} at p = {p} exceeds the brute-force guard (p <= {limit})")]
    TooLarge {
        what: &'static str,
        p: u32,
        limit: u32,
    },
    #[error("degree bound {got} is outside the supported range {min}..={max}")]
    DegreeBound { got: usize, min: usize, max: usize },
    #[error("parse error at byte {pos} in {input:?}: {msg}")]
    Parse {
        input: String,
        pos: usize,
        msg: String,
    },
    #[error("malformed parameter data: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
