//! Factorization for general `L_p x L_q -> L_1` instances.
//!
//! [`factor_bounded`] handles finite total measure with bounded data by
//! quantizing the three functions and calling the countable solver;
//! [`factor_general`] first truncates to a finite-measure core where the
//! data is bounded and fills in the tail explicitly. Both guarantee open
//! balls of radius `eps` on either side whenever `||h - fg||_1 < eps^2/4`.

mod bounded;
mod general;
mod params;
mod quantize;

pub use bounded::{factor_bounded, BoundedFactorization, BoundedStages};
pub use general::{factor_general, gamma_grid_point, GeneralFactorization, GeneralPlan};
pub use params::{select_params, GeometricRatio, QuantizationParams, BISECTION_STEPS};
pub use quantize::{geometric_point, grid_point, quantize_geometric, quantize_grid};
