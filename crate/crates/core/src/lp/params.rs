use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::Exponent;

/// Iterations of every parameter bisection.
pub const BISECTION_STEPS: usize = 64;

/// The shrink factor `d` of the geometric grid, stored with `1 - d` so that
/// factors extremely close to one keep their precision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeometricRatio {
    pub d: f64,
    pub one_minus_d: f64,
}

impl GeometricRatio {
    pub fn from_d(d: f64) -> Result<Self> {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::InvalidParameter { name: "d", value: d });
        }
        Ok(Self { d, one_minus_d: 1.0 - d })
    }

    /// The ratio with `1 - d = gap`.
    pub fn from_gap(gap: f64) -> Result<Self> {
        if !(gap > 0.0 && gap < 1.0) {
            return Err(Error::InvalidParameter { name: "one_minus_d", value: gap });
        }
        Ok(Self { d: 1.0 - gap, one_minus_d: gap })
    }

    /// `-ln d`.
    pub fn log_step(&self) -> f64 {
        -(-self.one_minus_d).ln_1p()
    }

    /// `1/d - 1 = (1 - d)/d`.
    pub fn excess(&self) -> f64 {
        self.one_minus_d / self.d
    }
}

/// Parameters of the bounded-case reduction to the countable solver.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantizationParams {
    /// `M`, bounding the total measure and every value of `f`, `g`, `h`.
    pub m: f64,
    pub eps: f64,
    pub p: Exponent,
    /// `||h - fg||_1` as measured on the reduced space.
    pub defect: f64,
    pub eps1: f64,
    /// Step of the arithmetic grid for `f` and `g`.
    pub delta: f64,
    pub ratio: GeometricRatio,
    /// `sqrt(4 defect + 8 eps1)`, the radius handed to the countable solver.
    pub eps_bar: f64,
}

/// Largest feasible point of a monotone predicate on `[lo, hi)`, by linear
/// bisection; `pred(lo)` must hold.
fn bisect_linear(mut lo: f64, mut hi: f64, pred: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// As [`bisect_linear`] but halving the bracket on a log scale, so the
/// answer keeps full relative precision however small it is.
fn bisect_geometric(mut lo: f64, mut hi: f64, pred: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..BISECTION_STEPS {
        let mid = (lo.ln() + 0.5 * (hi.ln() - lo.ln())).exp();
        if !(mid > lo && mid < hi) {
            break;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

impl QuantizationParams {
    fn inequality_b(defect: f64, eps: f64, eps1: f64) -> bool {
        eps1 + (4.0 * defect + 8.0 * eps1).sqrt() < eps
    }

    fn delta_cap(m: f64, p: Exponent, eps1: f64) -> f64 {
        let q = p.conjugate();
        let cap = (1.0 / p.root(m)).min(1.0 / q.root(m)).min(1.0 / (2.0 * m * m));
        eps1 * cap
    }

    fn inequality_e5(m: f64, eps1: f64, gap: f64) -> bool {
        gap * m * m < eps1
    }

    fn inequality_e2(m: f64, p: Exponent, eps: f64, eps1: f64, eps_bar: f64, gap: f64) -> bool {
        let d = 1.0 - gap;
        eps1 + gap / d * m * p.root(m) + eps_bar / d < eps
    }

    /// All defining strict inequalities, re-evaluated on the stored floats.
    pub fn check(&self) -> bool {
        let gap = self.ratio.one_minus_d;
        Self::inequality_b(self.defect, self.eps, self.eps1)
            && self.delta > 0.0
            && self.delta < Self::delta_cap(self.m, self.p, self.eps1)
            && gap > 0.0
            && Self::inequality_e5(self.m, self.eps1, gap)
            && Self::inequality_e2(self.m, self.p, self.eps, self.eps1, self.eps_bar, gap)
    }
}

/// Chooses `eps1`, `delta` and `d` for the bounded-case reduction.
///
/// `eps1` is half the supremum of the admissible interval for
/// `eps1 + sqrt(4 defect + 8 eps1) < eps`, `delta` is half of
/// `eps1 min{M^(-1/p), M^(-1/q), 1/(2M^2)}`, and `1 - d` is half the supremum
/// of the admissible gaps for `(1-d) M^2 < eps1` together with
/// `eps1 + (1-d)/d M^(1+1/p) + eps_bar/d < eps`.
pub fn select_params(defect: f64, m: f64, p: Exponent, eps: f64) -> Result<QuantizationParams> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter { name: "eps", value: eps });
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidParameter { name: "M", value: m });
    }
    let bound = eps * eps / 4.0;
    if !(defect >= 0.0 && defect < bound && QuantizationParams::inequality_b(defect, eps, 0.0)) {
        return Err(Error::Feasibility { defect, bound });
    }

    let eps1_sup = bisect_linear(0.0, eps, |e| QuantizationParams::inequality_b(defect, eps, e));
    let eps1 = 0.5 * eps1_sup;
    if !(eps1 > 0.0) {
        return Err(Error::Feasibility { defect, bound });
    }
    let delta = 0.5 * QuantizationParams::delta_cap(m, p, eps1);
    let eps_bar = (4.0 * defect + 8.0 * eps1).sqrt();

    let admissible = |gap: f64| {
        QuantizationParams::inequality_e5(m, eps1, gap)
            && QuantizationParams::inequality_e2(m, p, eps, eps1, eps_bar, gap)
    };
    if !admissible(f64::MIN_POSITIVE) {
        return Err(Error::InvalidParameter { name: "M", value: m });
    }
    let gap_sup = bisect_geometric(f64::MIN_POSITIVE, 1.0, admissible);
    let ratio = GeometricRatio::from_gap(0.5 * gap_sup)?;

    let params = QuantizationParams { m, eps, p, defect, eps1, delta, ratio, eps_bar };
    if !params.check() {
        return Err(Error::Rounding { index: 0, detail: format!("parameter selection failed: {params:?}") });
    }
    Ok(params)
}
