use std::sync::Arc;

use serde::Serialize;

use super::{quantize_geometric, quantize_grid, select_params, QuantizationParams};
use crate::certificate::{Factorization, FactorizationCertificate};
use crate::countable::factor_countable;
use crate::error::{Error, Result};
use crate::measure::{product_defect, Exponent, SimpleFunction};

/// Intermediate functions of the bounded-case reduction, all living on the
/// sub-space of atoms where `h != fg`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundedStages {
    /// Indices (in the input space) of the atoms the reduction ran on.
    pub support: Vec<usize>,
    pub params: QuantizationParams,
    pub f_grid: SimpleFunction,
    pub g_grid: SimpleFunction,
    pub h_geometric: SimpleFunction,
    /// `h / h'` where `h' != 0`, else 1.
    pub alpha: Vec<f64>,
    /// Answer of the countable solver for `(f', g', h')` at radius `eps_bar`.
    pub inner: Factorization,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundedFactorization {
    pub certificate: FactorizationCertificate,
    /// `None` when `h = fg` on every atom.
    pub stages: Option<BoundedStages>,
}

/// Largest `|value|` relevant to the bound `M`: all atoms, or only atoms of
/// positive measure when `ess_only`.
fn value_bound(f: &SimpleFunction, ess_only: bool) -> f64 {
    if ess_only {
        f.norm(Exponent::INFINITE).to_f64()
    } else {
        f.sup_abs()
    }
}

/// Factorization on a space of finite measure with bounded data.
///
/// Atoms where `h = fg` already are kept as `(f, g)`. On the rest, `f` and
/// `g` are snapped to a fine arithmetic grid, `h` to a geometric grid, the
/// countable solver runs at the enlarged radius `eps_bar`, and the `u`
/// factor is rescaled by `alpha = h / h'` to land back on `h`. For `p = 1`
/// only the essential bound of `g` enters `M`.
pub fn factor_bounded(
    f: &SimpleFunction,
    g: &SimpleFunction,
    h: &SimpleFunction,
    p: Exponent,
    eps: f64,
) -> Result<BoundedFactorization> {
    if p.is_infinite() {
        let out = factor_bounded(g, f, h, Exponent::ONE, eps)?;
        return Ok(BoundedFactorization { certificate: out.certificate.swapped(), stages: out.stages });
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter { name: "eps", value: eps });
    }
    if !f.same_space(g) || !f.same_space(h) {
        return Err(Error::SpaceMismatch);
    }
    let space = f.space();
    if space.total_measure().is_infinite() {
        return Err(Error::InfiniteMeasure);
    }
    let bound = eps * eps / 4.0;
    let defect = product_defect(f, g, h)?.to_f64();
    if !(defect < bound) {
        return Err(Error::Feasibility { defect, bound });
    }

    let (x, y, z) = (f.coefficients(), g.coefficients(), h.coefficients());
    let support: Vec<usize> = (0..space.len()).filter(|&i| z[i] != x[i] * y[i]).collect();
    let mut cert = FactorizationCertificate::new(x.to_vec(), y.to_vec(), eps, Some(p));
    if support.is_empty() {
        return Ok(BoundedFactorization { certificate: cert, stages: None });
    }

    let sub = Arc::new(space.restrict(&support));
    let (fs, gs, hs) = (f.restrict(&support, &sub), g.restrict(&support, &sub), h.restrict(&support, &sub));
    let m = sub
        .total_measure()
        .to_f64()
        .max(fs.sup_abs())
        .max(value_bound(&gs, p.is_one()))
        .max(hs.sup_abs())
        + 1.0;
    let sub_defect = product_defect(&fs, &gs, &hs)?.to_f64();
    let params = select_params(sub_defect, m, p, eps)?;

    let f_grid = quantize_grid(&fs, params.delta)?;
    let g_grid = quantize_grid(&gs, params.delta)?;
    let h_geometric = quantize_geometric(&hs, params.ratio, m)?;
    let inner = factor_countable(&f_grid, &g_grid, &h_geometric, p, params.eps_bar)?;

    let alpha: Vec<f64> = hs
        .coefficients()
        .iter()
        .zip(h_geometric.coefficients())
        .map(|(&a, &b)| if b == 0.0 { 1.0 } else { a / b })
        .collect();
    for (j, &i) in support.iter().enumerate() {
        cert.u[i] = alpha[j] * inner.certificate.u[j];
        cert.v[i] = inner.certificate.v[j];
    }

    Ok(BoundedFactorization {
        certificate: cert,
        stages: Some(BoundedStages { support, params, f_grid, g_grid, h_geometric, alpha, inner }),
    })
}
