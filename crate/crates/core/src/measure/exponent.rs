use std::fmt;

use serde::de;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::extended::NumberOrInf;
use crate::error::{Error, Result};

/// Largest denominator tried when recognising a float as an exact ratio.
const MAX_DENOMINATOR: u64 = 1000;

/// An integrability exponent `p` in `[1, inf]`.
///
/// Exponents are kept as reduced ratios `num/den` whenever the input allows
/// it, so `conjugate(conjugate(p)) == p` holds exactly. Arbitrary floats fall
/// back to `p / (p - 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponent(Repr);

#[derive(Clone, Copy, Debug, PartialEq)]
enum Repr {
    Ratio { num: u64, den: u64 },
    Real(f64),
    Infinite,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Exponent {
    pub const ONE: Exponent = Exponent(Repr::Ratio { num: 1, den: 1 });
    pub const TWO: Exponent = Exponent(Repr::Ratio { num: 2, den: 1 });
    pub const INFINITE: Exponent = Exponent(Repr::Infinite);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p == f64::INFINITY {
            return Ok(Self::INFINITE);
        }
        for den in 1..=MAX_DENOMINATOR {
            let num = p * den as f64;
            if num.fract() == 0.0 && num < (1u64 << 53) as f64 && num / den as f64 == p {
                return Self::ratio(num as u64, den);
            }
        }
        Ok(Exponent(Repr::Real(p)))
    }

    /// The exponent `num / den`; requires `num >= den > 0`.
    pub fn ratio(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num < den {
            return Err(Error::InvalidExponent(num as f64 / den as f64));
        }
        let k = gcd(num, den);
        Ok(Exponent(Repr::Ratio { num: num / k, den: den / k }))
    }

    pub fn value(self) -> f64 {
        match self.0 {
            Repr::Ratio { num, den } => num as f64 / den as f64,
            Repr::Real(p) => p,
            Repr::Infinite => f64::INFINITY,
        }
    }

    /// `1/p`, with `1/inf = 0`.
    pub fn reciprocal(self) -> f64 {
        match self.0 {
            Repr::Ratio { num, den } => den as f64 / num as f64,
            Repr::Real(p) => 1.0 / p,
            Repr::Infinite => 0.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self.0, Repr::Infinite)
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    /// The Hölder conjugate `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Exponent {
        match self.0 {
            Repr::Ratio { num, den } if num == den => Self::INFINITE,
            Repr::Ratio { num, den } => {
                Self::ratio(num, num - den).expect("conjugate of a valid ratio is valid")
            }
            Repr::Real(p) => Exponent(Repr::Real(p / (p - 1.0))),
            Repr::Infinite => Self::ONE,
        }
    }

    /// `t^(1/p)` for `t >= 0`, using `t^0 = 1` when `p` is infinite.
    pub fn root(self, t: f64) -> f64 {
        match self.0 {
            Repr::Ratio { num: 1, den: 1 } => t,
            Repr::Ratio { num: 2, den: 1 } => t.sqrt(),
            Repr::Infinite => 1.0,
            _ => t.powf(self.reciprocal()),
        }
    }

    /// `t^p` for finite `p`.
    pub fn power(self, t: f64) -> f64 {
        match self.0 {
            Repr::Ratio { num: 1, den: 1 } => t,
            Repr::Ratio { num: 2, den: 1 } => t * t,
            Repr::Ratio { num, den: 1 } if num <= 16 => t.powi(num as i32),
            _ => t.powf(self.value()),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Repr::Ratio { num, den: 1 } => write!(f, "{num}"),
            Repr::Ratio { num, den } => write!(f, "{num}/{den}"),
            Repr::Real(p) => write!(f, "{p}"),
            Repr::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "Infinity") {
            return Ok(Self::INFINITE);
        }
        if let Some((n, d)) = s.split_once('/') {
            let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| Error::InvalidExponent(f64::NAN));
            return Self::ratio(parse(n)?, parse(d)?);
        }
        let p: f64 = s.parse().map_err(|_| Error::InvalidExponent(f64::NAN))?;
        Self::new(p)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.value())
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let p = deserializer.deserialize_any(NumberOrInf)?;
        Exponent::new(p).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_examples() {
        assert_eq!(Exponent::TWO.conjugate(), Exponent::TWO);
        assert_eq!(Exponent::ONE.conjugate(), Exponent::INFINITE);
        assert_eq!(Exponent::INFINITE.conjugate(), Exponent::ONE);
        let q = Exponent::new(4.0).unwrap().conjugate();
        assert_eq!(q, Exponent::ratio(4, 3).unwrap());
        assert!((q.value() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn round_trip_is_exact_for_ratios() {
        for p in [1.0, 1.5, 2.0, 3.0, 4.0 / 3.0, 1.25, 7.0, 2.5] {
            let e = Exponent::new(p).unwrap();
            assert_eq!(e.conjugate().conjugate(), e, "p = {p}");
        }
    }

    #[test]
    fn irrational_exponent_round_trips_to_tolerance() {
        let e = Exponent::new(std::f64::consts::PI).unwrap();
        let back = e.conjugate().conjugate().value();
        assert!((back - std::f64::consts::PI).abs() <= 1e-12 * std::f64::consts::PI);
    }

    #[test]
    fn rejects_below_one() {
        assert!(Exponent::new(0.5).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
        assert!(Exponent::ratio(1, 2).is_err());
    }

    #[test]
    fn parse_and_json() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::INFINITE);
        assert_eq!("3/2".parse::<Exponent>().unwrap(), Exponent::new(1.5).unwrap());
        let v: Vec<Exponent> = serde_json::from_str(r#"[1, 1.5, "inf"]"#).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[1.0,1.5,"inf"]"#);
    }
}
