//! Constructive factorization for the multiplication maps
//! `L_p x L_q -> L_1` and `l_1 x c_0 -> l_1`.
//!
//! Given `f`, `g` and a target `h` with `||h - fg||_1 < eps^2/4`, the
//! solvers return `u`, `v` with `uv = h`, `||u - f||_p < eps` and
//! `||v - g||_q < eps`, packaged as a [`FactorizationCertificate`] that
//! [`verify_certificate`] checks from scratch. Measure spaces are atomic:
//! a function is one value per atom.
//!
//! ```
//! use lpfactor::{factor_scalar, ScalarBox};
//!
//! let b = ScalarBox::new(1.0, 1.0, 1.0, 1.0).unwrap();
//! let pair = factor_scalar(&b, 1.2).unwrap();
//! assert!((pair.u * pair.v - 1.2).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificate;
pub mod countable;
pub mod error;
pub mod gen;
pub mod instance;
pub mod lp;
pub mod measure;
pub mod scalar;
pub mod seq;
pub mod solve;
pub mod sweep;
pub mod verify;

pub use certificate::{AgreementSplit, Factorization, FactorizationCertificate, WeightScheme, DEFAULT_PRODUCT_TOLERANCE};
pub use countable::factor_countable;
pub use error::{Error, Result};
pub use gen::{gen_instance, InstanceKind, InstanceSpec};
pub use instance::{Instance, LpInstance, SeqInstance};
pub use lp::{factor_bounded, factor_general, select_params, QuantizationParams};
pub use measure::{norm, product_defect, truncate_support, Exponent, ExtReal, MeasureSpace, SimpleFunction};
pub use scalar::{factor_scalar, ScalarBox, ScalarCase, ScalarFactorPair};
pub use seq::{factor_seq, tail_weights, Sequence, Strategy, TailWeights};
pub use solve::{solve_lp, Solution, Solver};
pub use sweep::{run_sweep, SweepConfig, SweepKind, SweepReport};
pub use verify::{verify_certificate, Verdict, VerificationReport};
