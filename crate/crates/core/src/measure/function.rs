use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Exponent, ExtReal, MeasureSpace};
use crate::error::{Error, Result};

/// A function constant on every atom of a shared [`MeasureSpace`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFunction")]
pub struct SimpleFunction {
    space: Arc<MeasureSpace>,
    coefficients: Vec<f64>,
}

#[derive(Deserialize)]
struct RawFunction {
    space: MeasureSpace,
    coefficients: Vec<f64>,
}

impl TryFrom<RawFunction> for SimpleFunction {
    type Error = Error;

    fn try_from(raw: RawFunction) -> Result<Self> {
        SimpleFunction::new(Arc::new(raw.space), raw.coefficients)
    }
}

impl SimpleFunction {
    pub fn new(space: Arc<MeasureSpace>, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != space.len() {
            return Err(Error::LengthMismatch { expected: space.len(), found: coefficients.len() });
        }
        if let Some(i) = coefficients.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { space, coefficients })
    }

    pub fn zero(space: Arc<MeasureSpace>) -> Self {
        let n = space.len();
        Self { space, coefficients: vec![0.0; n] }
    }

    pub fn constant(space: Arc<MeasureSpace>, c: f64) -> Self {
        let n = space.len();
        Self { space, coefficients: vec![c; n] }
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<f64> {
        self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn same_space(&self, other: &SimpleFunction) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || self.space == other.space
    }

    fn check_space(&self, other: &SimpleFunction) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Same space, coefficients mapped atom by atom.
    pub fn map(&self, op: impl Fn(f64) -> f64) -> SimpleFunction {
        SimpleFunction {
            space: Arc::clone(&self.space),
            coefficients: self.coefficients.iter().map(|&c| op(c)).collect(),
        }
    }

    pub fn zip_with(&self, other: &SimpleFunction, op: impl Fn(f64, f64) -> f64) -> Result<SimpleFunction> {
        self.check_space(other)?;
        Ok(SimpleFunction {
            space: Arc::clone(&self.space),
            coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    pub fn sub(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn norm(&self, p: Exponent) -> ExtReal {
        norm(self, p)
    }

    /// Largest `|value|` over all atoms, null ones included.
    pub fn sup_abs(&self) -> f64 {
        self.coefficients.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Restriction to the listed atoms, on the matching sub-space.
    pub fn restrict(&self, indices: &[usize], space: &Arc<MeasureSpace>) -> SimpleFunction {
        debug_assert_eq!(space.len(), indices.len());
        SimpleFunction {
            space: Arc::clone(space),
            coefficients: indices.iter().map(|&i| self.coefficients[i]).collect(),
        }
    }
}

/// `L_p` norm on an atomic space.
///
/// For finite `p` this is `(sum |a_n|^p mu(A_n))^(1/p)` with `0 * inf = 0`;
/// a nonzero value on an infinite atom makes the norm `Infinite`. For
/// `p = inf` it is the largest `|a_n|` over atoms of positive measure.
pub fn norm(f: &SimpleFunction, p: Exponent) -> ExtReal {
    norm_of(f.space(), f.coefficients(), p)
}

pub(crate) fn norm_of(space: &MeasureSpace, coefficients: &[f64], p: Exponent) -> ExtReal {
    if p.is_infinite() {
        let sup = coefficients
            .iter()
            .enumerate()
            .filter(|&(i, _)| !space.is_null(i))
            .fold(0.0f64, |m, (_, c)| m.max(c.abs()));
        return ExtReal::Finite(sup);
    }
    let mut sum = 0.0;
    for (i, &c) in coefficients.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        match space.measure(i) {
            ExtReal::Finite(m) => sum += p.power(c.abs()) * m,
            ExtReal::Infinite => return ExtReal::Infinite,
        }
    }
    ExtReal::Finite(p.root(sum))
}

/// `(fg)(x) = f(x) g(x)` atom by atom.
pub fn pointwise_product(f: &SimpleFunction, g: &SimpleFunction) -> Result<SimpleFunction> {
    f.zip_with(g, |a, b| a * b)
}

/// `|h - fg|` on one atom, with a single rounding.
#[inline]
pub fn product_residual(x: f64, y: f64, z: f64) -> f64 {
    (-x).mul_add(y, z).abs()
}

/// `||h - fg||_1`, each atom's residual evaluated with one rounding.
pub fn product_defect(f: &SimpleFunction, g: &SimpleFunction, h: &SimpleFunction) -> Result<ExtReal> {
    f.check_space(g)?;
    f.check_space(h)?;
    let space = f.space();
    let mut sum = 0.0;
    for i in 0..space.len() {
        let r = product_residual(f.coefficients[i], g.coefficients[i], h.coefficients[i]);
        if r == 0.0 {
            continue;
        }
        match space.measure(i) {
            ExtReal::Finite(m) => sum += r * m,
            ExtReal::Infinite => return Ok(ExtReal::Infinite),
        }
    }
    Ok(ExtReal::Finite(sum))
}
