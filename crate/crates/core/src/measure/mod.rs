//! Finite atomic measure spaces, simple functions on them and their `L_p`
//! norms.
//!
//! Every function in this crate is constant on the atoms of one shared
//! partition, so integrals are finite sums in atom order. Measures may be
//! `inf`; the product `0 * inf` is taken to be `0`.

mod exponent;
mod extended;
mod function;
mod space;
mod truncate;

pub use exponent::Exponent;
pub use extended::ExtReal;
pub use function::{norm, pointwise_product, product_defect, product_residual, SimpleFunction};
pub(crate) use function::norm_of;
pub use space::{Atom, MeasureSpace};
pub use truncate::{truncate_support, TruncationResult};
