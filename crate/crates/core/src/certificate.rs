use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::measure::Exponent;

pub const DEFAULT_PRODUCT_TOLERANCE: f64 = 1e-9;

fn default_tolerance() -> f64 {
    DEFAULT_PRODUCT_TOLERANCE
}

fn yes() -> bool {
    true
}

/// A factor pair together with the radii it promises.
///
/// The certificate carries no solver internals: checking it needs only the
/// instance it answers (see [`crate::verify`]).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationCertificate {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub radius_u: f64,
    pub radius_v: f64,
    /// Open ball on the `u` side. Only `false` for `p = inf` answers of the
    /// countable solver, where the roles of the two sides are swapped.
    #[serde(default = "yes")]
    pub strict_u: bool,
    /// Open ball on the `v` side; `false` means the closed ball.
    pub strict_v: bool,
    #[serde(default = "default_tolerance")]
    pub product_tolerance: f64,
    /// Exponent of the `u` side; the `v` side uses its conjugate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Exponent>,
}

impl FactorizationCertificate {
    pub fn new(u: Vec<f64>, v: Vec<f64>, radius: f64, p: Option<Exponent>) -> Self {
        Self {
            u,
            v,
            radius_u: radius,
            radius_v: radius,
            strict_u: true,
            strict_v: true,
            product_tolerance: DEFAULT_PRODUCT_TOLERANCE,
            p,
        }
    }

    /// Exchanges the roles of the two factors.
    pub fn swapped(self) -> Self {
        Self {
            u: self.v,
            v: self.u,
            radius_u: self.radius_v,
            radius_v: self.radius_u,
            strict_u: self.strict_v,
            strict_v: self.strict_u,
            product_tolerance: self.product_tolerance,
            p: self.p.map(Exponent::conjugate),
        }
    }
}

/// How the disagreement weights were normalised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WeightScheme {
    /// `lambda_n = defect_n / eta`, summing to exactly 1.
    Normalized,
    /// `lambda_k = a_k / (eta * sqrt(sum_{n>=k} a_n))`, summing to at most 1.
    TailWeighted,
}

/// The agreement set and the per-index radii driving the scalar kernel.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgreementSplit {
    /// Indices where the target already equals the product, or the atom is null.
    pub agree: Vec<usize>,
    pub eta: f64,
    pub lambdas: BTreeMap<usize, f64>,
    /// `(r_k, R_k)` for every index outside the agreement set.
    pub radii: BTreeMap<usize, (f64, f64)>,
    pub scheme: WeightScheme,
}

impl AgreementSplit {
    pub fn trivial(n: usize, scheme: WeightScheme) -> Self {
        Self { agree: (0..n).collect(), eta: 0.0, lambdas: BTreeMap::new(), radii: BTreeMap::new(), scheme }
    }

    pub fn lambda_sum(&self) -> f64 {
        self.lambdas.values().sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.lambdas.is_empty()
    }
}

/// A solver answer: the certificate plus the split that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Factorization {
    pub certificate: FactorizationCertificate,
    pub split: AgreementSplit,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_defaults() {
        let c: FactorizationCertificate =
            serde_json::from_str(r#"{"u":[1],"v":[2],"radius_u":1,"radius_v":1,"strict_v":false}"#).unwrap();
        assert!(c.strict_u);
        assert!(!c.strict_v);
        assert_eq!(c.product_tolerance, DEFAULT_PRODUCT_TOLERANCE);
        assert_eq!(c.p, None);
    }

    #[test]
    fn swap_is_an_involution() {
        let mut c = FactorizationCertificate::new(vec![1.0], vec![2.0], 0.5, Some(Exponent::ONE));
        c.strict_v = false;
        assert_eq!(c.clone().swapped().swapped(), c);
        let s = c.swapped();
        assert_eq!(s.p, Some(Exponent::INFINITE));
        assert!(!s.strict_u && s.strict_v);
    }
}
