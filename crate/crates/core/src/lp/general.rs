use std::sync::Arc;

use serde::Serialize;

use super::{factor_bounded, BoundedFactorization};
use crate::certificate::FactorizationCertificate;
use crate::error::{Error, Result};
use crate::measure::{product_defect, truncate_support, Exponent, SimpleFunction, TruncationResult};

/// How the general case was reduced to the bounded one.
#[derive(Clone, Debug, Serialize)]
pub struct GeneralPlan {
    /// Radius used on the truncated core; `||h - fg||_1 < delta^2/4`.
    pub delta: f64,
    /// Budget for each tail term; `delta + 2 gamma < eps`.
    pub gamma: f64,
    /// Tail allowance handed to the truncation.
    pub tail_bound: f64,
    pub truncation: TruncationResult,
    /// Essential supremum of `|g|` off the core (only for `p = 1`).
    pub g_tail_sup: Option<f64>,
    pub core: BoundedFactorization,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneralFactorization {
    pub certificate: FactorizationCertificate,
    /// `None` when `h = fg` on every atom.
    pub plan: Option<GeneralPlan>,
}

/// `(k+1) gamma` for `g in [k gamma, (k+1) gamma)` and `-(k+1) gamma` for
/// `g in [-(k+1) gamma, -k gamma)`; always `|v| >= gamma` and `|v - g| <= gamma`.
pub fn gamma_grid_point(g: f64, gamma: f64) -> f64 {
    let m = g.abs();
    let cell = |k: f64| {
        let (lo, hi) = (k * gamma, (k + 1.0) * gamma);
        if g >= 0.0 {
            lo <= m && m < hi
        } else {
            lo < m && m <= hi
        }
    };
    let k = if g >= 0.0 { (m / gamma).floor() } else { (m / gamma).ceil() - 1.0 }.max(0.0);
    let k = [k + 1.0, k, k - 1.0].into_iter().filter(|&j| j >= 0.0).find(|&j| cell(j)).unwrap_or(k);
    let level = ((k + 1.0) * gamma).max(gamma);
    if g >= 0.0 {
        level
    } else {
        -level
    }
}

/// Factorization for arbitrary `f in L_p`, `g in L_q`, `h in L_1`.
///
/// A finite-measure core where the data is bounded is cut out, solved at the
/// radius `delta`, and the tail is filled in by hand: for `p > 1` with
/// `u = |h|^(1/p)`, `v = |h|^(1/q) sgn h`; for `p = 1` with `v` on the
/// `gamma`-grid above `g` and `u = h/v`.
pub fn factor_general(
    f: &SimpleFunction,
    g: &SimpleFunction,
    h: &SimpleFunction,
    p: Exponent,
    eps: f64,
) -> Result<GeneralFactorization> {
    if p.is_infinite() {
        let out = factor_general(g, f, h, Exponent::ONE, eps)?;
        return Ok(GeneralFactorization { certificate: out.certificate.swapped(), plan: out.plan });
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
    let bound = eps * eps / 4.0;
    let defect = product_defect(f, g, h)?.to_f64();
    if !(defect < bound) {
        return Err(Error::Feasibility { defect, bound });
    }

    let space = f.space();
    let (x, y, z) = (f.coefficients(), g.coefficients(), h.coefficients());
    let mut cert = FactorizationCertificate::new(x.to_vec(), y.to_vec(), eps, Some(p));
    if (0..space.len()).all(|i| z[i] == x[i] * y[i]) {
        return Ok(GeneralFactorization { certificate: cert, plan: None });
    }

    let delta = 0.5 * (2.0 * defect.sqrt() + eps);
    let gamma = 0.25 * (eps - delta);
    if !(defect < delta * delta / 4.0 && gamma > 0.0) {
        return Err(Error::Feasibility { defect, bound });
    }

    let (dominant, tail_bound) = if p.is_one() {
        (f.zip_with(h, |a, c| a.abs().max(c.abs()))?, gamma.min(gamma * gamma))
    } else {
        let fp = f.map(|a| p.power(a.abs()));
        let gq = g.map(|b| q.power(b.abs()));
        let joint = fp.zip_with(&gq, f64::max)?.zip_with(h, |a, c| a.max(c.abs()))?;
        (joint, p.power(gamma).min(q.power(gamma)))
    };
    let truncation = truncate_support(&dominant, tail_bound)?;
    let kept = &truncation.kept_atoms;

    let core_space = Arc::new(space.restrict(kept));
    let core = factor_bounded(
        &f.restrict(kept, &core_space),
        &g.restrict(kept, &core_space),
        &h.restrict(kept, &core_space),
        p,
        delta,
    )?;
    for (j, &i) in kept.iter().enumerate() {
        cert.u[i] = core.certificate.u[j];
        cert.v[i] = core.certificate.v[j];
    }

    let mut in_core = vec![false; space.len()];
    for &i in kept {
        in_core[i] = true;
    }
    let off_core = (0..space.len()).filter(|&i| !in_core[i]);

    let g_tail_sup = if p.is_one() {
        let sup = (0..space.len())
            .filter(|&i| !in_core[i] && !space.is_null(i))
            .fold(0.0f64, |m, i| m.max(y[i].abs()));
        for i in off_core {
            let v = if y[i].abs() <= sup { gamma_grid_point(y[i], gamma) } else { 1.0 };
            cert.v[i] = v;
            cert.u[i] = z[i] / v;
        }
        Some(sup)
    } else {
        for i in off_core {
            let a = z[i].abs();
            cert.u[i] = p.root(a);
            cert.v[i] = if a == 0.0 { 0.0 } else { q.root(a).copysign(z[i]) };
        }
        None
    };

    Ok(GeneralFactorization {
        certificate: cert,
        plan: Some(GeneralPlan { delta, gamma, tail_bound, truncation, g_tail_sup, core }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_grid_examples() {
        let v = gamma_grid_point(0.25, 0.1);
        assert!((v - 0.3).abs() < 1e-15);
        assert!((gamma_grid_point(-0.25, 0.1) + 0.3).abs() < 1e-15);
        assert_eq!(gamma_grid_point(0.0, 0.5), 0.5);
        assert_eq!(gamma_grid_point(0.5, 0.5), 1.0);
        assert_eq!(gamma_grid_point(-0.5, 0.5), -0.5);
    }

    #[test]
    fn gamma_grid_bounds() {
        for i in -300..300 {
            let g = i as f64 * 0.0173;
            let v = gamma_grid_point(g, 0.07);
            assert!(v.abs() >= 0.07 && (v - g).abs() <= 0.07 + 1e-15, "g = {g}, v = {v}");
        }
    }
}
