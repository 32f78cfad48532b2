//! Factorization of simple functions sharing one partition.
//!
//! Given `f in L_p`, `g in L_q` and `h` with `||fg - h||_1 < eps^2/4`, the
//! defect is spread over the disagreeing atoms with weights `lambda_n`
//! summing to one, and each atom is handed to the scalar kernel with radii
//! scaled so that the `L_p` and `L_q` contributions add up to `eps`. With
//! counting measure this is the `l_p x l_q` case.

use std::collections::BTreeMap;

use crate::certificate::{AgreementSplit, Factorization, FactorizationCertificate, WeightScheme};
use crate::error::{Error, Result};
use crate::measure::{product_residual, Exponent, ExtReal, SimpleFunction};
use crate::scalar::{factor_scalar, ScalarBox};

/// Solves `h = uv` with `||u - f||_p < eps` and `||v - g||_q < eps`.
///
/// For `p = 1` the `v` side is only guaranteed in the closed ball
/// (`strict_v = false`); `p = inf` is answered by exchanging the roles of
/// `f` and `g`.
pub fn factor_countable(
    f: &SimpleFunction,
    g: &SimpleFunction,
    h: &SimpleFunction,
    p: Exponent,
    eps: f64,
) -> Result<Factorization> {
    if p.is_infinite() {
        let swapped = factor_countable(g, f, h, Exponent::ONE, eps)?;
        return Ok(Factorization { certificate: swapped.certificate.swapped(), split: swapped.split });
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter { name: "eps", value: eps });
    }
    if !f.same_space(g) || !f.same_space(h) {
        return Err(Error::SpaceMismatch);
    }
    let q = p.conjugate();
    if f.norm(p).is_infinite() {
        return Err(Error::InfiniteNorm { what: "f" });
    }
    if g.norm(q).is_infinite() {
        return Err(Error::InfiniteNorm { what: "g" });
    }
    if h.norm(Exponent::ONE).is_infinite() {
        return Err(Error::InfiniteNorm { what: "h" });
    }

    let space = f.space();
    let (x, y, z) = (f.coefficients(), g.coefficients(), h.coefficients());
    let n = space.len();
    let mut u = x.to_vec();
    let mut v = y.to_vec();
    let mut agree = Vec::new();
    // (index, pointwise residual) for atoms outside the agreement set
    let mut disagree = Vec::new();
    let mut eta = 0.0;

    for i in 0..n {
        if z[i] == x[i] * y[i] {
            agree.push(i);
            continue;
        }
        let residual = product_residual(x[i], y[i], z[i]);
        match space.measure(i) {
            ExtReal::Finite(0.0) => {
                agree.push(i);
                let root = z[i].abs().sqrt();
                u[i] = root;
                v[i] = root.copysign(z[i]);
            }
            _ if residual == 0.0 => agree.push(i),
            ExtReal::Finite(m) => {
                eta += residual * m;
                disagree.push((i, residual, m));
            }
            ExtReal::Infinite => {
                return Err(Error::Feasibility { defect: f64::INFINITY, bound: eps * eps / 4.0 });
            }
        }
    }

    let certificate = |u: Vec<f64>, v: Vec<f64>| {
        let mut c = FactorizationCertificate::new(u, v, eps, Some(p));
        c.strict_v = !p.is_one();
        c
    };

    if disagree.is_empty() {
        return Ok(Factorization {
            certificate: certificate(u, v),
            split: AgreementSplit { agree, ..AgreementSplit::trivial(0, WeightScheme::Normalized) },
        });
    }

    let bound = eps * eps / 4.0;
    if !(eta < bound) {
        return Err(Error::Feasibility { defect: eta, bound });
    }

    let mut lambdas = BTreeMap::new();
    let mut radii = BTreeMap::new();
    for &(i, residual, m) in &disagree {
        lambdas.insert(i, residual * m / eta);
        // lambda / mu, taken without the round trip through mu
        let density = residual / eta;
        let (r, big_r) = if p.is_one() {
            (eps * density, eps)
        } else {
            (eps * p.root(density), eps * q.root(density))
        };
        radii.insert(i, (r, big_r));
        let b = ScalarBox::new(x[i], y[i], r, big_r).map_err(|_| Error::Rounding {
            index: i,
            detail: format!("degenerate radii r = {r:e}, R = {big_r:e}"),
        })?;
        let pair = factor_scalar(&b, z[i]).map_err(|e| with_index(e, i))?;
        u[i] = pair.u;
        v[i] = pair.v;
    }

    Ok(Factorization {
        certificate: certificate(u, v),
        split: AgreementSplit { agree, eta, lambdas, radii, scheme: WeightScheme::Normalized },
    })
}

pub(crate) fn with_index(e: Error, index: usize) -> Error {
    match e {
        Error::Rounding { detail, .. } => Error::Rounding { index, detail },
        Error::Feasibility { defect, bound } => Error::Rounding {
            index,
            detail: format!("atom residual {defect:e} not below its share {bound:e}"),
        },
        other => other,
    }
}
