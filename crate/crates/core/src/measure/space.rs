use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::ExtReal;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub id: String,
    pub measure: ExtReal,
}

/// A finite atomic measure space: one cell of the partition per atom.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct MeasureSpace {
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawSpace {
    atoms: Vec<Atom>,
}

impl TryFrom<RawSpace> for MeasureSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        MeasureSpace::new(raw.atoms)
    }
}

impl MeasureSpace {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(atoms.len());
        for atom in &atoms {
            if let ExtReal::Finite(m) = atom.measure {
                if !(m >= 0.0 && m.is_finite()) {
                    return Err(Error::InvalidMeasure(m));
                }
            }
            if !seen.insert(atom.id.as_str()) {
                return Err(Error::DuplicateAtom(atom.id.clone()));
            }
        }
        Ok(Self { atoms })
    }

    /// Atoms named `a0, a1, ...` with the given measures.
    pub fn from_measures<I>(measures: I) -> Result<Self>
    where
        I: IntoIterator<Item = ExtReal>,
    {
        let atoms = measures
            .into_iter()
            .enumerate()
            .map(|(i, measure)| Atom { id: format!("a{i}"), measure })
            .collect();
        Self::new(atoms)
    }

    pub fn from_finite(measures: &[f64]) -> Result<Self> {
        Self::from_measures(measures.iter().map(|&m| ExtReal::Finite(m)))
    }

    /// Counting measure on `n` points; turns `L_p` into `l_p`.
    pub fn counting(n: usize) -> Self {
        Self::from_measures(std::iter::repeat_n(ExtReal::Finite(1.0), n))
            .expect("unit measures are valid")
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn measure(&self, i: usize) -> ExtReal {
        self.atoms[i].measure
    }

    pub fn is_null(&self, i: usize) -> bool {
        self.atoms[i].measure.is_zero()
    }

    pub fn total_measure(&self) -> ExtReal {
        self.atoms.iter().fold(ExtReal::ZERO, |acc, a| acc + a.measure)
    }

    /// The sub-space made of the listed atoms, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> MeasureSpace {
        MeasureSpace {
            atoms: indices.iter().map(|&i| self.atoms[i].clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_negative_measure() {
        let dup = vec![
            Atom { id: "a".into(), measure: ExtReal::Finite(1.0) },
            Atom { id: "a".into(), measure: ExtReal::Finite(2.0) },
        ];
        assert_eq!(MeasureSpace::new(dup), Err(Error::DuplicateAtom("a".into())));
        assert!(MeasureSpace::from_finite(&[1.0, -0.5]).is_err());
    }

    #[test]
    fn parses_json() {
        let s: MeasureSpace =
            serde_json::from_str(r#"{"atoms":[{"id":"x","measure":2},{"id":"y","measure":"inf"}]}"#).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.total_measure(), ExtReal::Infinite);
        let bad = r#"{"atoms":[{"id":"x","measure":1},{"id":"x","measure":1}]}"#;
        assert!(serde_json::from_str::<MeasureSpace>(bad).is_err());
    }
}
