use serde::Serialize;

use super::{ExtReal, SimpleFunction};
use crate::error::{Error, Result};

/// A finite-measure set `A` on which `f` is bounded and off which `f` has
/// small integral.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncationResult {
    /// Indices of the atoms making up `A`, ascending.
    pub kept_atoms: Vec<usize>,
    /// The level `k` with `A = {1/k <= |f| <= k}`.
    pub level: f64,
    /// `integral over X \ A of |f|`.
    pub tail_value: f64,
    pub sup_on_a: f64,
    pub measure_of_a: f64,
}

/// Smallest `k` at which the atom with value `a != 0` enters `{1/k <= |f| <= k}`.
fn entry_level(a: f64) -> f64 {
    let a = a.abs();
    let mut k = a.max(1.0 / a).ceil().max(1.0);
    while !(1.0 / k <= a && a <= k) {
        k = (k + 1.0).max(k.next_up());
    }
    k
}

/// Finds the smallest `k` such that `A_k = {1/k <= |f| <= k}` carries all
/// but less than `eps` of `||f||_1`.
///
/// Atoms where `f = 0` never belong to any `A_k`, so infinite atoms (on which
/// an `L_1` function must vanish) are always excluded.
pub fn truncate_support(f: &SimpleFunction, eps: f64) -> Result<TruncationResult> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter { name: "eps", value: eps });
    }
    let space = f.space();
    let coeffs = f.coefficients();
    let mut mass = vec![0.0; coeffs.len()];
    let mut levels = vec![f64::INFINITY; coeffs.len()];
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        mass[i] = match space.measure(i) {
            ExtReal::Finite(m) => c.abs() * m,
            ExtReal::Infinite => return Err(Error::InfiniteNorm { what: "truncated function" }),
        };
        levels[i] = entry_level(c);
    }

    let tail_at = |k: f64| -> f64 {
        levels.iter().zip(&mass).filter(|(&lvl, _)| lvl > k).map(|(_, &m)| m).sum()
    };

    let mut candidates: Vec<f64> = levels.iter().copied().filter(|l| l.is_finite()).collect();
    candidates.push(1.0);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let mut level = *candidates.last().expect("candidate list holds 1");
    let mut tail_value = tail_at(level);
    for &k in &candidates {
        let t = tail_at(k);
        if t < eps {
            level = k;
            tail_value = t;
            break;
        }
    }

    let kept_atoms: Vec<usize> = (0..coeffs.len()).filter(|&i| levels[i] <= level).collect();
    let sup_on_a = kept_atoms.iter().fold(0.0f64, |m, &i| m.max(coeffs[i].abs()));
    let measure_of_a = kept_atoms.iter().map(|&i| space.measure(i).to_f64()).sum();
    Ok(TruncationResult { kept_atoms, level, tail_value, sup_on_a, measure_of_a })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::measure::MeasureSpace;

    #[test]
    fn picks_smallest_level() {
        let space = Arc::new(MeasureSpace::from_finite(&[1.0, 1.0, 1.0]).unwrap());
        let f = SimpleFunction::new(space, vec![10.0, 0.5, 0.001]).unwrap();
        let t = truncate_support(&f, 0.01).unwrap();
        assert_eq!(t.kept_atoms, vec![0, 1]);
        assert_eq!(t.level, 10.0);
        assert!((t.tail_value - 0.001).abs() < 1e-18);
        assert_eq!(t.sup_on_a, 10.0);
    }

    #[test]
    fn zero_function_keeps_nothing() {
        let space = Arc::new(MeasureSpace::from_finite(&[1.0, 2.0]).unwrap());
        let t = truncate_support(&SimpleFunction::zero(space), 0.3).unwrap();
        assert!(t.kept_atoms.is_empty());
        assert_eq!(t.tail_value, 0.0);
    }

    #[test]
    fn infinite_atom_is_excluded() {
        let space = Arc::new(MeasureSpace::from_measures([ExtReal::Infinite, ExtReal::Finite(1.0)]).unwrap());
        let f = SimpleFunction::new(space, vec![0.0, 5.0]).unwrap();
        let t = truncate_support(&f, 0.5).unwrap();
        assert_eq!(t.kept_atoms, vec![1]);
        assert_eq!(t.tail_value, 0.0);
        assert_eq!(t.measure_of_a, 1.0);
    }

    #[test]
    fn non_integrable_is_rejected() {
        let space = Arc::new(MeasureSpace::from_measures([ExtReal::Infinite]).unwrap());
        let f = SimpleFunction::new(space, vec![1.0]).unwrap();
        assert!(truncate_support(&f, 0.5).is_err());
    }

    #[test]
    fn entry_levels() {
        assert_eq!(entry_level(0.5), 2.0);
        assert_eq!(entry_level(1.0), 1.0);
        assert_eq!(entry_level(2.5), 3.0);
        assert_eq!(entry_level(-0.1), 10.0);
    }
}
