use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A nonnegative extended real: either a finite value or `Infinite`.
///
/// `Infinite` is never produced by overflow. It only enters through input
/// (an atom of infinite measure) or through a divergent norm.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }

    /// `Infinite` maps to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::Infinite => f64::INFINITY,
        }
    }

    pub fn is_zero(self) -> bool {
        self == ExtReal::ZERO
    }

    /// `self * c` for a finite nonnegative `c`, with `0 * Infinite = 0`.
    pub fn scale(self, c: f64) -> ExtReal {
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(v * c),
            ExtReal::Infinite if c == 0.0 => ExtReal::ZERO,
            ExtReal::Infinite => ExtReal::Infinite,
        }
    }

}

impl std::ops::Add for ExtReal {
    type Output = ExtReal;

    fn add(self, other: ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::Infinite,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => serializer.serialize_f64(*v),
            ExtReal::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Shared visitor for "number or the string inf" fields.
pub(crate) struct NumberOrInf;

impl<'de> Visitor<'de> for NumberOrInf {
    type Value = f64;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a number or the string \"inf\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
        Ok(v)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
        Ok(v as f64)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
        Ok(v as f64)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
        match v {
            "inf" | "infinity" | "Infinity" => Ok(f64::INFINITY),
            other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = deserializer.deserialize_any(NumberOrInf)?;
        if v == f64::INFINITY {
            Ok(ExtReal::Infinite)
        } else if v.is_finite() && v >= 0.0 {
            Ok(ExtReal::Finite(v))
        } else {
            Err(de::Error::custom(format!("expected a nonnegative extended real, got {v}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_times_infinite_is_zero() {
        assert_eq!(ExtReal::Infinite.scale(0.0), ExtReal::ZERO);
        assert_eq!(ExtReal::Infinite.scale(2.0), ExtReal::Infinite);
    }

    #[test]
    fn json_forms() {
        let v: Vec<ExtReal> = serde_json::from_str(r#"[1.5, "inf", 0]"#).unwrap();
        assert_eq!(v, vec![ExtReal::Finite(1.5), ExtReal::Infinite, ExtReal::ZERO]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[1.5,"inf",0.0]"#);
        assert!(serde_json::from_str::<ExtReal>("-1").is_err());
    }
}
