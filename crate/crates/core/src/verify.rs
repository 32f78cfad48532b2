//! Independent checking of certificates.
//!
//! Everything here is recomputed from the instance and the certificate
//! alone; no solver module is imported.

use std::sync::Arc;

use serde::Serialize;

use crate::certificate::FactorizationCertificate;
use crate::error::{Error, Result};
use crate::instance::{Instance, LpInstance, SeqInstance};
use crate::measure::{norm, product_residual, Exponent, SimpleFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    /// Largest `|uv - h| / max(|h|, 1)` over all atoms or entries.
    pub product_max_rel_error: f64,
    pub norm_u_dist: f64,
    pub norm_v_dist: f64,
    pub radius_u: f64,
    pub radius_v: f64,
    pub strict_u: bool,
    pub strict_v: bool,
    pub product_ok: bool,
    pub u_ok: bool,
    pub v_ok: bool,
    /// The feasibility constant for the instance, `eps^2/4` or `eps^2/16`.
    pub constant_used: f64,
    /// `||h - fg||_1` of the instance.
    pub defect: f64,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn within(dist: f64, radius: f64, strict: bool) -> bool {
    if strict {
        dist < radius
    } else {
        dist <= radius
    }
}

fn product_error(u: f64, v: f64, target: f64) -> f64 {
    product_residual(u, v, target) / target.abs().max(1.0)
}

#[allow(clippy::too_many_arguments)]
fn report(
    cert: &FactorizationCertificate,
    product_max_rel_error: f64,
    norm_u_dist: f64,
    norm_v_dist: f64,
    tol: f64,
    constant_used: f64,
    defect: f64,
) -> VerificationReport {
    let product_ok = product_max_rel_error <= tol;
    let u_ok = within(norm_u_dist, cert.radius_u, cert.strict_u);
    let v_ok = within(norm_v_dist, cert.radius_v, cert.strict_v);
    VerificationReport {
        product_max_rel_error,
        norm_u_dist,
        norm_v_dist,
        radius_u: cert.radius_u,
        radius_v: cert.radius_v,
        strict_u: cert.strict_u,
        strict_v: cert.strict_v,
        product_ok,
        u_ok,
        v_ok,
        constant_used,
        defect,
        verdict: if product_ok && u_ok && v_ok { Verdict::Pass } else { Verdict::Fail },
    }
}

/// Checks `uv = h` (relative tolerance `tol`, absolute below 1) and both
/// norm bounds, honouring the certificate's open/closed flags.
pub fn verify_certificate(instance: &Instance, cert: &FactorizationCertificate, tol: f64) -> Result<VerificationReport> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter { name: "tol", value: tol });
    }
    match instance {
        Instance::Lp(inst) => verify_lp(inst, cert, tol),
        Instance::Seq(inst) => verify_seq(inst, cert, tol),
    }
}

pub fn verify_lp(inst: &LpInstance, cert: &FactorizationCertificate, tol: f64) -> Result<VerificationReport> {
    let p = match (cert.p, inst.p) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::ShapeMismatch(format!("certificate answers p = {a}, instance asks p = {b}")))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(Error::MissingExponent),
    };
    let n = inst.space.len();
    for (name, len) in [("f", inst.f.len()), ("g", inst.g.len()), ("h", inst.h.len()), ("u", cert.u.len()), ("v", cert.v.len())] {
        if len != n {
            return Err(Error::ShapeMismatch(format!("{name} has {len} entries, the space has {n} atoms")));
        }
    }
    let space = Arc::new(inst.space.clone());
    let fun = |c: &[f64]| SimpleFunction::new(Arc::clone(&space), c.to_vec());
    let (f, g) = (fun(&inst.f)?, fun(&inst.g)?);
    let (u, v) = (fun(&cert.u)?, fun(&cert.v)?);

    let product = (0..n).map(|i| product_error(cert.u[i], cert.v[i], inst.h[i])).fold(0.0, f64::max);
    let du = norm(&u.sub(&f)?, p).to_f64();
    let dv = norm(&v.sub(&g)?, p.conjugate()).to_f64();
    let mut defect = 0.0;
    for i in 0..n {
        let r = product_residual(inst.f[i], inst.g[i], inst.h[i]);
        if r != 0.0 {
            defect += inst.space.measure(i).scale(r).to_f64();
        }
    }
    let eps = inst.eps.unwrap_or(cert.radius_u);
    Ok(report(cert, product, du, dv, tol, eps * eps / 4.0, defect))
}

pub fn verify_seq(inst: &SeqInstance, cert: &FactorizationCertificate, tol: f64) -> Result<VerificationReport> {
    if let Some(p) = cert.p {
        if p != Exponent::ONE {
            return Err(Error::ShapeMismatch(format!("sequence certificates use p = 1, got {p}")));
        }
    }
    let n = [inst.x.prefix_len(), inst.y.prefix_len(), inst.z.prefix_len(), cert.u.len(), cert.v.len()]
        .into_iter()
        .max()
        .unwrap_or(0);
    let at = |s: &[f64], i: usize| s.get(i).copied().unwrap_or(0.0);
    let mut product = 0.0f64;
    let mut du = 0.0;
    let mut dv = 0.0f64;
    let mut defect = 0.0;
    for i in 0..n {
        let (x, y, z) = (inst.x.get(i), inst.y.get(i), inst.z.get(i));
        let (u, v) = (at(&cert.u, i), at(&cert.v, i));
        product = product.max(product_error(u, v, z));
        du += (u - x).abs();
        dv = dv.max((v - y).abs());
        defect += product_residual(x, y, z);
    }
    let eps = inst.eps.unwrap_or(cert.radius_u);
    Ok(report(cert, product, du, dv, tol, eps * eps / 16.0, defect))
}
