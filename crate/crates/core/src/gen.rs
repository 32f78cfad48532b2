//! Seeded generation of feasible instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, LpInstance, SeqInstance};
use crate::measure::{norm_of, product_residual, Exponent, ExtReal, MeasureSpace};
use crate::seq::Sequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Lp,
    Seq,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub kind: InstanceKind,
    /// Number of atoms, or prefix length for sequences.
    pub size: usize,
    pub p: Exponent,
    pub eps: f64,
    /// Target defect as a fraction of `eps^2/4` (or `eps^2/16`).
    pub defect_fraction: f64,
    pub seed: u64,
    /// Rescale `f` and `g` to norms drawn log-uniformly from this range.
    #[serde(default)]
    pub norm_range: Option<(f64, f64)>,
    /// Allow atoms of infinite measure (where the data vanishes as needed).
    #[serde(default)]
    pub infinite_atoms: bool,
}

impl InstanceSpec {
    pub fn lp(size: usize, p: Exponent, eps: f64, defect_fraction: f64, seed: u64) -> Self {
        Self { kind: InstanceKind::Lp, size, p, eps, defect_fraction, seed, norm_range: None, infinite_atoms: false }
    }

    pub fn seq(size: usize, eps: f64, defect_fraction: f64, seed: u64) -> Self {
        Self { kind: InstanceKind::Seq, size, p: Exponent::ONE, eps, defect_fraction, seed, norm_range: None, infinite_atoms: false }
    }

    /// The feasibility radius, `eps^2/4` or `eps^2/16`.
    pub fn bound(&self) -> f64 {
        let denom = match self.kind {
            InstanceKind::Lp => 4.0,
            InstanceKind::Seq => 16.0,
        };
        self.eps * self.eps / denom
    }

    /// The defect the generated instance carries.
    pub fn target_defect(&self) -> f64 {
        self.defect_fraction * self.bound()
    }
}

fn value(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.1) {
        0.0
    } else {
        rng.gen_range(-2.0..2.0)
    }
}

fn direction(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.2) {
        0.0
    } else {
        let t: f64 = rng.gen_range(0.05..1.0);
        if rng.gen_bool(0.5) {
            t
        } else {
            -t
        }
    }
}

/// Adds `scale * dir` to the products and rescales until the measured
/// defect matches `target`.
fn perturb(base_f: &[f64], base_g: &[f64], dir: &[f64], weight: impl Fn(usize) -> f64, target: f64, ceiling: f64) -> Vec<f64> {
    let raw: f64 = dir.iter().enumerate().map(|(i, d)| d.abs() * weight(i)).sum();
    let build = |c: f64| -> Vec<f64> {
        (0..dir.len()).map(|i| base_f[i].mul_add(base_g[i], c * dir[i])).collect()
    };
    let measure = |h: &[f64]| -> f64 {
        (0..h.len()).map(|i| product_residual(base_f[i], base_g[i], h[i]) * weight(i)).sum()
    };
    let mut c = target / raw;
    let mut h = build(c);
    for _ in 0..3 {
        let d = measure(&h);
        if d == 0.0 || (d / target - 1.0).abs() < 1e-14 {
            break;
        }
        c *= target / d;
        h = build(c);
    }
    while measure(&h) >= ceiling && c > 0.0 {
        c *= 1.0 - 1e-12;
        h = build(c);
    }
    h
}

/// Draws a feasible instance; the same spec always gives the same instance.
pub fn gen_instance(spec: &InstanceSpec) -> Result<Instance> {
    if !(spec.defect_fraction > 0.0 && spec.defect_fraction < 1.0) {
        return Err(Error::InvalidParameter { name: "defect_fraction", value: spec.defect_fraction });
    }
    if !(spec.eps > 0.0 && spec.eps.is_finite()) {
        return Err(Error::InvalidParameter { name: "eps", value: spec.eps });
    }
    if spec.size == 0 {
        return Err(Error::InvalidParameter { name: "size", value: 0.0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        InstanceKind::Lp => gen_lp(spec, &mut rng).map(Instance::Lp),
        InstanceKind::Seq => Ok(Instance::Seq(gen_seq(spec, &mut rng))),
    }
}

fn gen_lp(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Result<LpInstance> {
    let n = spec.size;
    let p = spec.p;
    let q = p.conjugate();
    let mut measures: Vec<ExtReal> = (0..n)
        .map(|_| {
            let t: f64 = rng.gen();
            if spec.infinite_atoms && t < 0.05 {
                ExtReal::Infinite
            } else if t < 0.15 {
                ExtReal::ZERO
            } else {
                ExtReal::Finite(10.0 * (1.0 - rng.gen::<f64>()))
            }
        })
        .collect();
    let positive = |m: &ExtReal| matches!(m, ExtReal::Finite(v) if *v > 0.0);
    if !measures.iter().any(positive) {
        measures[0] = ExtReal::Finite(10.0 * (1.0 - rng.gen::<f64>()));
    }
    let space = MeasureSpace::from_measures(measures.iter().copied())?;

    let mut f: Vec<f64> = (0..n).map(|_| value(rng)).collect();
    let mut g: Vec<f64> = (0..n).map(|_| value(rng)).collect();
    for i in 0..n {
        if measures[i].is_infinite() {
            if !p.is_infinite() {
                f[i] = 0.0;
            }
            if !q.is_infinite() {
                g[i] = 0.0;
            }
        }
    }
    if let Some((lo, hi)) = spec.norm_range {
        for (coeffs, e) in [(&mut f, p), (&mut g, q)] {
            let current = norm_of(&space, coeffs, e).to_f64();
            if current > 0.0 {
                let target = rng.gen_range(lo.ln()..=hi.ln()).exp();
                let c = target / current;
                coeffs.iter_mut().for_each(|a| *a *= c);
            }
        }
    }

    let mut dir: Vec<f64> = (0..n).map(|i| if positive(&measures[i]) { direction(rng) } else { 0.0 }).collect();
    if !dir.iter().any(|&d| d != 0.0) {
        let first = measures.iter().position(positive).expect("a positive atom exists");
        dir[first] = 0.5;
    }
    let weight = |i: usize| measures[i].finite().unwrap_or(0.0);
    let mut h = perturb(&f, &g, &dir, weight, spec.target_defect(), spec.bound());
    for i in 0..n {
        if measures[i].is_zero() && rng.gen_bool(0.5) {
            h[i] = f[i] * g[i] + rng.gen_range(-1.0..1.0);
        }
    }

    Ok(LpInstance { space, f, g, h, p: Some(p), eps: Some(spec.eps), unbounded: spec.infinite_atoms })
}

fn gen_seq(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> SeqInstance {
    let n = spec.size;
    let x: Vec<f64> = (0..n).map(|_| value(rng)).collect();
    let y: Vec<f64> = (0..n).map(|_| value(rng)).collect();
    let mut dir: Vec<f64> = (0..n).map(|_| direction(rng)).collect();
    if !dir.iter().any(|&d| d != 0.0) {
        dir[0] = 0.5;
    }
    let z = perturb(&x, &y, &dir, |_| 1.0, spec.target_defect(), spec.bound());
    SeqInstance { x: Sequence(x), y: Sequence(y), z: Sequence(z), eps: Some(spec.eps) }
}
