use super::GeometricRatio;
use crate::error::{Error, Result};
use crate::measure::SimpleFunction;

/// Snaps one value onto the `delta`-grid.
///
/// `[k delta, (k+1) delta) -> k delta` and `[-(k+1) delta, -k delta) -> -k delta`.
/// When the grid is finer than the float spacing at `a` the grid point is not
/// representable and `a` itself is returned.
pub fn grid_point(a: f64, delta: f64) -> f64 {
    let m = a.abs();
    let inside = |c: f64| {
        if a >= 0.0 {
            c <= m && m - c < delta
        } else {
            c < m && m - c <= delta
        }
    };
    let k = if a >= 0.0 { (m / delta).floor() } else { (m / delta).ceil() - 1.0 };
    let k = k.max(0.0);
    let snapped = [k + 1.0, k, k - 1.0]
        .into_iter()
        .filter(|&j| j >= 0.0)
        .map(|j| j * delta)
        .find(|&c| inside(c))
        .unwrap_or(m);
    if a >= 0.0 || snapped == 0.0 {
        snapped
    } else {
        -snapped
    }
}

/// Quantizes `f` toward zero onto the arithmetic grid `delta Z`.
pub fn quantize_grid(f: &SimpleFunction, delta: f64) -> Result<SimpleFunction> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter { name: "delta", value: delta });
    }
    Ok(f.map(|a| grid_point(a, delta)))
}

/// Snaps `|a|` down onto the geometric grid `a_n = d^n M`, keeping the sign.
///
/// The returned `a'` satisfies `1 <= a / a' <= 1/d`. The value `|a| = M`
/// lands on `a_1`. When the grid is finer than the float spacing at `a`,
/// `a` itself is returned.
pub fn geometric_point(a: f64, ratio: GeometricRatio, m: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let mag = a.abs();
    let ok = |c: f64| c > 0.0 && c <= mag && mag - c <= ratio.one_minus_d * mag;
    // smallest j >= 1 with a_j <= |a|
    let j = ((m / mag).ln() / ratio.log_step()).ceil().max(1.0);
    let snapped = [j - 1.0, j, j + 1.0]
        .into_iter()
        .filter(|&i| i >= 1.0)
        .map(|i| grid_level(ratio, m, i))
        .find(|&c| ok(c))
        .unwrap_or(mag);
    snapped.copysign(a)
}

/// `M d^i`.
fn grid_level(ratio: GeometricRatio, m: f64, i: f64) -> f64 {
    if ratio.one_minus_d > 1e-8 && i < i32::MAX as f64 {
        m * ratio.d.powi(i as i32)
    } else {
        m * (-i * ratio.log_step()).exp()
    }
}

/// Quantizes `h` onto the two-sided geometric grid `{0} U {+-d^n M}`.
pub fn quantize_geometric(h: &SimpleFunction, ratio: GeometricRatio, m: f64) -> Result<SimpleFunction> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidParameter { name: "M", value: m });
    }
    if let Some((index, &value)) = h.coefficients().iter().enumerate().find(|(_, c)| c.abs() > m) {
        return Err(Error::OutOfRange { index, value, bound: m });
    }
    Ok(h.map(|a| geometric_point(a, ratio, m)))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::measure::MeasureSpace;

    fn one(a: f64) -> SimpleFunction {
        SimpleFunction::new(Arc::new(MeasureSpace::counting(1)), vec![a]).unwrap()
    }

    #[test]
    fn grid_examples() {
        assert!((grid_point(0.37, 0.1) - 0.3).abs() < 1e-15);
        assert!((grid_point(-0.37, 0.1) + 0.3).abs() < 1e-15);
        assert_eq!(quantize_grid(&one(0.37), 0.1).unwrap().coefficients()[0], grid_point(0.37, 0.1));
    }

    #[test]
    fn nonnegative_grid_points_are_fixed() {
        for k in 0..40 {
            let a = k as f64 * 0.25;
            assert_eq!(grid_point(a, 0.25), a);
        }
    }

    #[test]
    fn negative_grid_points_step_toward_zero() {
        // -k delta lies in [-(k) delta, -(k-1) delta), so it maps to -(k-1) delta.
        assert_eq!(grid_point(-0.75, 0.25), -0.5);
        assert_eq!(grid_point(-0.25, 0.25), 0.0);
        assert_eq!(grid_point(-0.1, 0.25), 0.0);
    }

    #[test]
    fn grid_bounds_hold() {
        for i in -200..200 {
            let a = i as f64 * 0.0137;
            let c = grid_point(a, 0.05);
            assert!((a - c).abs() <= 0.05 && c.abs() <= a.abs(), "a = {a}, c = {c}");
        }
    }

    #[test]
    fn sub_resolution_grid_returns_value() {
        let a = 1.0e6 + 0.123;
        let c = grid_point(a, 1e-15);
        assert!(c <= a && a - c <= 1e-15);
    }

    #[test]
    fn geometric_examples() {
        let half = GeometricRatio::from_d(0.5).unwrap();
        assert_eq!(geometric_point(0.0, half, 1.0), 0.0);
        assert_eq!(geometric_point(0.75, half, 1.0), 0.5);
        assert_eq!(geometric_point(-0.75, half, 1.0), -0.5);
        assert_eq!(geometric_point(0.5, half, 1.0), 0.5);
        assert_eq!(geometric_point(1.0, half, 1.0), 0.5);
        assert_eq!(geometric_point(0.3, half, 1.0), 0.25);
    }

    #[test]
    fn geometric_ratio_bounds() {
        let ratio = GeometricRatio::from_d(0.9).unwrap();
        for i in 1..500 {
            let a = i as f64 * 0.0199;
            let c = geometric_point(a, ratio, 10.0);
            let t = a / c;
            assert!((1.0..=1.0 / 0.9 + 1e-15).contains(&t), "a = {a}, c = {c}");
            assert!(a - c <= 0.1 * 10.0);
        }
    }

    #[test]
    fn geometric_rejects_values_above_bound() {
        let ratio = GeometricRatio::from_d(0.5).unwrap();
        assert!(matches!(quantize_geometric(&one(2.0), ratio, 1.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn near_one_ratio_keeps_invariants() {
        let ratio = GeometricRatio::from_gap(1e-17).unwrap();
        let c = geometric_point(123.456, ratio, 1e6);
        assert!(c <= 123.456 && 123.456 - c <= 1e-17 * 123.456);
    }
}
