//! Dispatch from an instance to the matching solver.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::certificate::FactorizationCertificate;
use crate::countable::factor_countable;
use crate::error::Result;
use crate::instance::LpInstance;
use crate::lp::{factor_bounded, factor_general, QuantizationParams};
use crate::measure::Exponent;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    /// `general` when the instance needs truncation, `countable` otherwise.
    #[default]
    Auto,
    Countable,
    Bounded,
    General,
}

impl FromStr for Solver {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Solver::Auto),
            "countable" => Ok(Solver::Countable),
            "bounded" => Ok(Solver::Bounded),
            "general" => Ok(Solver::General),
            other => Err(format!("unknown solver {other:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub certificate: FactorizationCertificate,
    /// Quantization parameters, when a quantizing pipeline ran.
    pub params: Option<QuantizationParams>,
}

/// Runs `solver` on `inst` with exponent `p` and radius `eps`.
pub fn solve_lp(inst: &LpInstance, p: Exponent, eps: f64, solver: Solver) -> Result<Solution> {
    let (f, g, h) = inst.functions()?;
    let solver = match solver {
        Solver::Auto if inst.needs_general() => Solver::General,
        Solver::Auto => Solver::Countable,
        other => other,
    };
    Ok(match solver {
        Solver::Countable => Solution { certificate: factor_countable(&f, &g, &h, p, eps)?.certificate, params: None },
        Solver::Bounded => {
            let out = factor_bounded(&f, &g, &h, p, eps)?;
            Solution { certificate: out.certificate, params: out.stages.map(|s| s.params) }
        }
        Solver::General | Solver::Auto => {
            let out = factor_general(&f, &g, &h, p, eps)?;
            let params = out.plan.and_then(|plan| plan.core.stages).map(|s| s.params);
            Solution { certificate: out.certificate, params }
        }
    })
}
