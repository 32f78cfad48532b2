//! Factorization for `l_1 x c_0 -> l_1`.
//!
//! Sequences are finite prefixes followed by an implicit zero tail, so
//! membership in `l_1` and in `c_0` is automatic. The guaranteed radius
//! around `xy` is `eps^2/16`.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::certificate::{AgreementSplit, Factorization, FactorizationCertificate, WeightScheme};
use crate::countable::with_index;
use crate::error::{Error, Result};
use crate::measure::{product_residual, Exponent};
use crate::scalar::{factor_scalar, ScalarBox};

/// A real sequence given by a finite prefix; every later entry is zero.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sequence(pub Vec<f64>);

impl Sequence {
    pub fn get(&self, n: usize) -> f64 {
        self.0.get(n).copied().unwrap_or(0.0)
    }

    pub fn prefix_len(&self) -> usize {
        self.0.len()
    }

    pub fn l1_norm(&self) -> f64 {
        self.0.iter().map(|a| a.abs()).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, a| m.max(a.abs()))
    }
}

impl From<Vec<f64>> for Sequence {
    fn from(v: Vec<f64>) -> Self {
        Sequence(v)
    }
}

/// Square roots of the tails of a nonnegative sequence,
/// `w_k = (sum_{n >= k} a_n)^(1/2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailWeights {
    pub a: Vec<f64>,
    pub w: Vec<f64>,
    /// `sum a_n / w_n`, skipping terms with `a_n = 0`.
    pub ratio_sum: f64,
}

impl TailWeights {
    /// `2 w_1 - sum a_n / w_n`, nonnegative up to rounding.
    pub fn slack(&self) -> f64 {
        2.0 * self.w[0] - self.ratio_sum
    }
}

/// Computes the tail weights with one backward scan.
pub fn tail_weights(a: &[f64]) -> Result<TailWeights> {
    if let Some(i) = a.iter().position(|&t| !(t >= 0.0 && t.is_finite())) {
        return Err(Error::NonFinite(i));
    }
    if !a.iter().any(|&t| t > 0.0) {
        return Err(Error::ZeroSequence);
    }
    let mut tails = vec![0.0; a.len()];
    let mut acc = 0.0;
    for k in (0..a.len()).rev() {
        acc += a[k];
        tails[k] = acc;
    }
    let w: Vec<f64> = tails.iter().map(|t| t.sqrt()).collect();
    let ratio_sum = a.iter().zip(&w).filter(|(&t, _)| t > 0.0).map(|(&t, &wk)| t / wk).sum();
    let weights = TailWeights { a: a.to_vec(), w, ratio_sum };
    if weights.slack() < -1e-12 * weights.w[0].max(1.0) {
        return Err(Error::Rounding { index: 0, detail: format!("tail weight sum exceeds 2 w_1 by {:e}", -weights.slack()) });
    }
    Ok(weights)
}

/// Weighting scheme for `factor_seq`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Finite disagreement set: normalised weights, `R = eps/2`.
    #[default]
    Auto,
    Finite,
    /// Tail-weighted radii `R_k = 2 (sum_{n>=k} |z_n - x_n y_n|)^(1/2)`, which
    /// also works for infinitely many disagreements.
    Tail,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Strategy::Auto),
            "finite" => Ok(Strategy::Finite),
            "tail" => Ok(Strategy::Tail),
            other => Err(format!("unknown strategy {other:?}")),
        }
    }
}

/// Solves `z = uv` with `||u - x||_1 < eps`, `||v - y||_inf < eps` and
/// `v in c_0`, whenever `||z - xy||_1 < eps^2/16`.
///
/// `Auto` picks `Finite`, which is always applicable to finite prefixes and
/// gives the sharper bound `sup |v_n - y_n| < eps/2`.
pub fn factor_seq(x: &Sequence, y: &Sequence, z: &Sequence, eps: f64, strategy: Strategy) -> Result<Factorization> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter { name: "eps", value: eps });
    }
    let n = x.prefix_len().max(y.prefix_len()).max(z.prefix_len());
    if let Some(i) = (0..n).find(|&i| !(x.get(i).is_finite() && y.get(i).is_finite() && z.get(i).is_finite())) {
        return Err(Error::NonFinite(i));
    }
    let mut u: Vec<f64> = (0..n).map(|i| x.get(i)).collect();
    let mut v: Vec<f64> = (0..n).map(|i| y.get(i)).collect();
    let mut agree = Vec::new();
    let mut residuals = vec![0.0; n];
    for (i, slot) in residuals.iter_mut().enumerate() {
        let (xi, yi, zi) = (x.get(i), y.get(i), z.get(i));
        let r = product_residual(xi, yi, zi);
        if zi == xi * yi || r == 0.0 {
            agree.push(i);
        } else {
            *slot = r;
        }
    }
    let scheme = match strategy {
        Strategy::Auto | Strategy::Finite => WeightScheme::Normalized,
        Strategy::Tail => WeightScheme::TailWeighted,
    };
    let certificate = |u, v| FactorizationCertificate::new(u, v, eps, Some(Exponent::ONE));
    if agree.len() == n {
        return Ok(Factorization {
            certificate: certificate(u, v),
            split: AgreementSplit { agree, ..AgreementSplit::trivial(0, scheme) },
        });
    }

    let bound = eps * eps / 16.0;
    let mut tails = vec![0.0; n];
    let mut acc = 0.0;
    for k in (0..n).rev() {
        acc += residuals[k];
        tails[k] = acc;
    }
    let defect = tails[0];
    if !(defect < bound) {
        return Err(Error::Feasibility { defect, bound });
    }

    let eta = match scheme {
        WeightScheme::Normalized => defect,
        WeightScheme::TailWeighted => 2.0 * defect.sqrt(),
    };
    let mut lambdas = BTreeMap::new();
    let mut radii = BTreeMap::new();
    for k in (0..n).filter(|&k| residuals[k] > 0.0) {
        let (lambda, r, big_r) = match scheme {
            WeightScheme::Normalized => {
                let lambda = residuals[k] / eta;
                (lambda, lambda * eps / 2.0, eps / 2.0)
            }
            WeightScheme::TailWeighted => {
                let root = tails[k].sqrt();
                let lambda = residuals[k] / (eta * root);
                (lambda, lambda * eps, 2.0 * root)
            }
        };
        lambdas.insert(k, lambda);
        radii.insert(k, (r, big_r));
        let (xk, yk, zk) = (x.get(k), y.get(k), z.get(k));
        let pair = ScalarBox::new(xk, yk, r, big_r)
            .and_then(|b| factor_scalar(&b, zk))
            .map(|p| (p.u, p.v))
            .or_else(|e| exact_division(xk, yk, zk, r, big_r).ok_or(with_index(e, k)))?;
        u[k] = pair.0;
        v[k] = pair.1;
    }

    Ok(Factorization {
        certificate: certificate(u, v),
        split: AgreementSplit { agree, eta, lambdas, radii, scheme },
    })
}

/// `u = x`, `v = z/x`, accepted only if it meets both radii on the floats.
fn exact_division(x: f64, y: f64, z: f64, r: f64, big_r: f64) -> Option<(f64, f64)> {
    if x == 0.0 || !(r > 0.0) {
        return None;
    }
    let v = z / x;
    ((v - y).abs() < big_r).then_some((x, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> Sequence {
        Sequence(v.to_vec())
    }

    #[test]
    fn tail_weight_examples() {
        let t = tail_weights(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(t.w[0], 1.0);
        assert_eq!(t.ratio_sum, 1.0);
        let t = tail_weights(&[0.0, 4.0]).unwrap();
        assert_eq!(t.w, vec![2.0, 2.0]);
        assert_eq!(t.ratio_sum, 2.0);
        assert!(t.slack() >= 0.0);
    }

    #[test]
    fn tail_weights_reject_zero() {
        assert_eq!(tail_weights(&[0.0, 0.0]).unwrap_err(), Error::ZeroSequence);
        assert!(tail_weights(&[1.0, -1.0]).is_err());
    }

    #[test]
    fn exact_target_is_trivial() {
        let x = s(&[1.0, -2.0]);
        let y = s(&[0.5, 0.25]);
        let z = s(&[0.5, -0.5]);
        for strategy in [Strategy::Finite, Strategy::Tail] {
            let out = factor_seq(&x, &y, &z, 0.1, strategy).unwrap();
            assert_eq!(out.certificate.u, x.0);
            assert_eq!(out.certificate.v, y.0);
        }
    }

    #[test]
    fn finite_single_entry() {
        let out = factor_seq(&s(&[1.0]), &s(&[1.0]), &s(&[1.05]), 1.0, Strategy::Finite).unwrap();
        assert_eq!(out.certificate.u, vec![1.0]);
        assert_eq!(out.certificate.v, vec![1.05]);
        assert_eq!(out.split.lambdas[&0], 1.0);
        assert_eq!(out.split.radii[&0], (0.5, 0.5));
    }

    #[test]
    fn tail_single_entry() {
        let out = factor_seq(&s(&[1.0]), &s(&[1.0]), &s(&[1.05]), 1.0, Strategy::Tail).unwrap();
        let eta = 2.0 * 0.05f64.sqrt();
        assert!((out.split.eta - eta).abs() < 1e-15);
        assert!((out.split.lambdas[&0] - 0.5).abs() < 1e-12);
        let (r, big_r) = out.split.radii[&0];
        assert!((r - 0.5).abs() < 1e-12);
        assert!((big_r - eta).abs() < 1e-15);
        assert_eq!(out.certificate.v, vec![1.05]);
    }

    #[test]
    fn mismatched_prefix_lengths_pad_with_zeros() {
        let out = factor_seq(&s(&[1.0, 0.5]), &s(&[1.0]), &s(&[1.02, 0.01]), 1.0, Strategy::Tail).unwrap();
        assert_eq!(out.certificate.u.len(), 2);
        assert!((out.certificate.u[1] * out.certificate.v[1] - 0.01).abs() < 1e-15);
        assert!(out.split.lambda_sum() <= 1.0 + 1e-12);
    }

    #[test]
    fn infeasible_is_rejected() {
        let err = factor_seq(&s(&[0.0]), &s(&[0.0]), &s(&[0.0625]), 1.0, Strategy::Finite).unwrap_err();
        assert_eq!(err, Error::Feasibility { defect: 0.0625, bound: 0.0625 });
    }

    #[test]
    fn strategy_parses() {
        assert_eq!("TAIL".parse::<Strategy>().unwrap(), Strategy::Tail);
        assert!("other".parse::<Strategy>().is_err());
    }
}
