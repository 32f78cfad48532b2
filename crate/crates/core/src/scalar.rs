//! Factorization of a single real number.
//!
//! For `r, R > 0` every `z` with `|z - xy| < rR/4` can be written as
//! `z = uv` with `|u - x| < r` and `|v - y| < R`. Every other solver in the
//! crate reduces to this kernel, one atom at a time.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::product_residual;

/// A point `(x, y)` with the two radii `r` (for `u`) and `R` (for `v`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalarBox {
    pub x: f64,
    pub y: f64,
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
}

impl ScalarBox {
    pub fn new(x: f64, y: f64, r: f64, big_r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter { name: "r", value: r });
        }
        if !(big_r > 0.0 && big_r.is_finite()) {
            return Err(Error::InvalidParameter { name: "R", value: big_r });
        }
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::NonFinite(0));
        }
        Ok(Self { x, y, r, big_r })
    }

    /// `rR/4`, the guaranteed radius around `xy`.
    pub fn bound(&self) -> f64 {
        self.r * self.big_r / 4.0
    }

    /// `z` is inside the open interval `(xy - rR/4, xy + rR/4)`.
    pub fn admits(&self, z: f64) -> bool {
        product_residual(self.x, self.y, z) < self.bound()
    }
}

/// Which branch of the construction produced a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScalarCase {
    /// `|x| > r/4`: keep `u = x`, put `v = z/x`.
    KeepX,
    /// `|y| > R/4`: keep `v = y`, put `u = z/y`.
    KeepY,
    /// Both small: split `|z|` geometrically between the radii.
    Split,
}

impl fmt::Display for ScalarCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarCase::KeepX => "1",
            ScalarCase::KeepY => "2",
            ScalarCase::Split => "3",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalarFactorPair {
    pub u: f64,
    pub v: f64,
    pub case: ScalarCase,
}

fn sgn(z: f64) -> f64 {
    if z > 0.0 {
        1.0
    } else if z < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Writes `z = uv` with `|u - x| < r` and `|v - y| < R`.
///
/// Cases are tried in order: `|x| > r/4`, then `|y| > R/4`, then the split
/// `u = sqrt(|z| r/R)`, `v = sqrt(|z| R/r) sgn z`. The boundary `|x| = r/4`
/// falls through to the later cases. The strict radius bounds are re-checked
/// on the computed floats and a violation is reported as
/// [`Error::Rounding`] rather than returned.
pub fn factor_scalar(b: &ScalarBox, z: f64) -> Result<ScalarFactorPair> {
    if !z.is_finite() {
        return Err(Error::NonFinite(0));
    }
    let defect = product_residual(b.x, b.y, z);
    let bound = b.bound();
    if !(defect < bound) {
        return Err(Error::Feasibility { defect, bound });
    }

    let pair = if b.x.abs() > b.r / 4.0 {
        ScalarFactorPair { u: b.x, v: z / b.x, case: ScalarCase::KeepX }
    } else if b.y.abs() > b.big_r / 4.0 {
        ScalarFactorPair { u: z / b.y, v: b.y, case: ScalarCase::KeepY }
    } else {
        let a = z.abs();
        ScalarFactorPair {
            u: (a * b.r / b.big_r).sqrt(),
            v: (a * b.big_r / b.r).sqrt() * sgn(z),
            case: ScalarCase::Split,
        }
    };

    let du = (pair.u - b.x).abs();
    let dv = (pair.v - b.y).abs();
    if !(du < b.r && dv < b.big_r) {
        return Err(Error::Rounding {
            index: 0,
            detail: format!("case {}: |u-x| = {du:e} vs r = {:e}, |v-y| = {dv:e} vs R = {:e}", pair.case, b.r, b.big_r),
        });
    }
    Ok(pair)
}
