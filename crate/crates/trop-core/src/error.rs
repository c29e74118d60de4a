use crate::rational::Rational;

/// Error type shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("tropical division by -inf (0_o has no multiplicative inverse)")]
    DivisionByBottom,
    #[error("-inf raised to the nonpositive power {0}")]
    BottomPower(Rational),
    #[error("argument {x} lies outside the validity window [{lo}, {hi}]")]
    OutOfWindow { x: Rational, lo: Rational, hi: Rational },
    #[error("validity windows do not match")]
    WindowMismatch,
    #[error("empty window intersection")]
    EmptyWindow,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{what}: {got} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("function is not representable over the given basis")]
    NotRepresentable,
    #[error("representation has empty support")]
    EmptySupport,
    #[error("projective point must have at least one coordinate above -inf")]
    AllBottom,
    #[error("component {0} is not a tropical entire function")]
    NotEntire(usize),
    #[error("components share a common root at {0}")]
    CommonRoot(Rational),
}

pub type Result<T> = std::result::Result<T, Error>;
