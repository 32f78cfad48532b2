//! Problem instances and their JSON form.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measure::{Exponent, MeasureSpace, SimpleFunction};
use crate::seq::Sequence;

/// `f`, `g`, `h` on one atomic space; the request is `h = uv` near `(f, g)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpInstance {
    pub space: MeasureSpace,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Exponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Requests the general (truncating) pipeline.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unbounded: bool,
}

impl LpInstance {
    pub fn functions(&self) -> Result<(SimpleFunction, SimpleFunction, SimpleFunction)> {
        let space = Arc::new(self.space.clone());
        Ok((
            SimpleFunction::new(Arc::clone(&space), self.f.clone())?,
            SimpleFunction::new(Arc::clone(&space), self.g.clone())?,
            SimpleFunction::new(space, self.h.clone())?,
        ))
    }

    /// True when the bounded-data assumptions fail and truncation is needed.
    pub fn needs_general(&self) -> bool {
        self.unbounded || self.space.total_measure().is_infinite()
    }
}

/// `x in l_1`, `y in c_0` and the target `z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeqInstance {
    pub x: Sequence,
    pub y: Sequence,
    pub z: Sequence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Instance {
    Lp(LpInstance),
    Seq(SeqInstance),
}

impl Instance {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances serialize")
    }

    pub fn eps(&self) -> Option<f64> {
        match self {
            Instance::Lp(i) => i.eps,
            Instance::Seq(i) => i.eps,
        }
    }
}
