use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The target is not strictly inside the guaranteed ball around the product.
    #[error("infeasible request: defect {defect:e} is not below the bound {bound:e}")]
    Feasibility { defect: f64, bound: f64 },

    /// Floating-point evaluation could not confirm a strict radius bound.
    #[error("rounding broke a strict bound at index {index}: {detail}")]
    Rounding { index: usize, detail: String },

    #[error("functions live on different measure spaces")]
    SpaceMismatch,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("duplicate atom id {0:?}")]
    DuplicateAtom(String),

    #[error("invalid measure {0}: measures must be nonnegative or \"inf\"")]
    InvalidMeasure(f64),

    #[error("invalid exponent {0}: exponents must lie in [1, inf]")]
    InvalidExponent(f64),

    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),

    #[error("{what} has infinite norm")]
    InfiniteNorm { what: &'static str },

    #[error("value {value} at index {index} exceeds the bound {bound}")]
    OutOfRange { index: usize, value: f64, bound: f64 },

    #[error("the total measure of the space is infinite")]
    InfiniteMeasure,

    #[error("sequence has no positive entry")]
    ZeroSequence,

    #[error("no exponent given for an L_p instance")]
    MissingExponent,

    #[error("certificate shape does not match the instance: {0}")]
    ShapeMismatch(String),
}
