use thiserror::Error;

/// Everything that can go wrong in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("negative exponent at byte {offset}")]
    NegativeExponent { offset: usize },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("{q} is not a power of the characteristic {p}")]
    InvalidQ { q: u64, p: u32 },
    #[error("operands live in different rings or use different monomial orders")]
    RingMismatch,
    #[error("exponent {requested} exceeds the configured cap {cap}")]
    ExponentCapExceeded { requested: u128, cap: u64 },
    #[error("iteration cap {cap} exceeded while {context}")]
    IterationCapExceeded { cap: usize, context: String },
    #[error("the ideal is not a Cartier submodule: C(M) is not contained in M")]
    NotCartierSubmodule,
    #[error("the module is not F-pure: C(M) != M")]
    NotFPure,
    #[error("zero input where a nonzero element is required: {0}")]
    ZeroDivisorInput(String),
    #[error("denominator {den} is not invertible modulo {modulus}")]
    DenominatorNotInvertible { den: i128, modulus: u128 },
    #[error("a periodic digit block needs a nonempty period")]
    EmptyPeriod,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("internal mismatch between independent computations: {0}")]
    InternalMismatch(String),
    #[error("no oracle supports this job: {0}")]
    UnsupportedRegime(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by a configured resource cap rather than by the input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ExponentCapExceeded { .. } | Error::IterationCapExceeded { .. })
    }
}
