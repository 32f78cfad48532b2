//! Batch runs of generator, solver and verifier.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::gen::{gen_instance, InstanceSpec};
use crate::instance::Instance;
use crate::measure::Exponent;
use crate::seq::{factor_seq, Strategy};
use crate::solve::{solve_lp, Solver};
use crate::verify::verify_certificate;

/// Caps the number of worker threads used by sweeps.
pub const THREADS_VAR: &str = "LPFACTOR_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SweepKind {
    Lp { p: Exponent, solver: Solver },
    Seq { strategy: Strategy },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub count: usize,
    pub seed: u64,
    pub eps: f64,
    /// Largest defect fraction drawn; every tenth instance uses exactly this.
    pub max_fraction: f64,
    pub max_size: usize,
    pub norm_range: Option<(f64, f64)>,
    /// Every fourth instance gets atoms of infinite measure.
    pub infinite_atoms: bool,
    pub tol: f64,
}

impl SweepConfig {
    pub fn lp(p: Exponent, count: usize, seed: u64) -> Self {
        Self {
            kind: SweepKind::Lp { p, solver: Solver::General },
            count,
            seed,
            eps: 1.0,
            max_fraction: 0.99,
            max_size: 40,
            norm_range: None,
            infinite_atoms: true,
            tol: crate::certificate::DEFAULT_PRODUCT_TOLERANCE,
        }
    }

    pub fn seq(strategy: Strategy, count: usize, seed: u64) -> Self {
        Self { kind: SweepKind::Seq { strategy }, max_size: 100, infinite_atoms: false, ..Self::lp(Exponent::ONE, count, seed) }
    }

    /// The generator spec for instance `i`.
    pub fn instance_spec(&self, i: usize) -> InstanceSpec {
        let seed = self.seed.wrapping_add(i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);
        let size = rng.gen_range(1..=self.max_size.max(1));
        let fraction = if i.is_multiple_of(10) { self.max_fraction } else { rng.gen_range(0.01..self.max_fraction) };
        let mut spec = match self.kind {
            SweepKind::Lp { p, .. } => InstanceSpec::lp(size, p, self.eps, fraction, seed),
            SweepKind::Seq { .. } => InstanceSpec::seq(size, self.eps, fraction, seed),
        };
        spec.norm_range = self.norm_range;
        spec.infinite_atoms = self.infinite_atoms && i % 4 == 3;
        spec
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepFailure {
    pub index: usize,
    pub seed: u64,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepReport {
    pub total: usize,
    pub passed: usize,
    pub max_product_error: f64,
    /// Largest `||u - f|| / radius_u`.
    pub max_u_ratio: f64,
    pub max_v_ratio: f64,
    /// Certificates promising a closed ball on either side.
    pub closed_ball: usize,
    /// Sequence sweeps: instances whose `sup |v - y|` met the sharper bound
    /// (`eps/2` for finite weights, `eta < eps/2` for tail weights).
    pub sharp_ok: usize,
    pub max_sharp_ratio: f64,
    /// First failures, at most [`SweepReport::MAX_LISTED`].
    pub failures: Vec<SweepFailure>,
}

impl SweepReport {
    pub const MAX_LISTED: usize = 20;

    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

struct Outcome {
    product: f64,
    u_ratio: f64,
    v_ratio: f64,
    closed: bool,
    sharp: Option<f64>,
    failure: Option<String>,
}

fn run_one(config: &SweepConfig, i: usize) -> Outcome {
    let fail = |reason: String| Outcome { product: 0.0, u_ratio: 0.0, v_ratio: 0.0, closed: false, sharp: None, failure: Some(reason) };
    let attempt = || -> Result<Outcome> {
        let instance = gen_instance(&config.instance_spec(i))?;
        let (cert, sharp) = match (&instance, config.kind) {
            (Instance::Lp(inst), SweepKind::Lp { p, solver }) => (solve_lp(inst, p, config.eps, solver)?.certificate, None),
            (Instance::Seq(inst), SweepKind::Seq { strategy }) => {
                let out = factor_seq(&inst.x, &inst.y, &inst.z, config.eps, strategy)?;
                let sup = out.certificate.v.iter().enumerate().fold(0.0f64, |m, (k, v)| m.max((v - inst.y.get(k)).abs()));
                let limit = match strategy {
                    Strategy::Tail if !out.split.is_trivial() => out.split.eta.min(config.eps / 2.0),
                    _ => config.eps / 2.0,
                };
                let ratio = if limit > 0.0 { sup / limit } else { 0.0 };
                let ok = sup <= limit && (strategy != Strategy::Tail || out.split.is_trivial() || out.split.eta < config.eps / 2.0);
                (out.certificate, Some(if ok { ratio } else { f64::INFINITY }))
            }
            _ => unreachable!("generator kind follows the sweep kind"),
        };
        let report = verify_certificate(&instance, &cert, config.tol)?;
        let failure = (!report.passed()).then(|| {
            format!(
                "verification failed: product {:e}, u {:e}/{:e}, v {:e}/{:e}",
                report.product_max_rel_error, report.norm_u_dist, report.radius_u, report.norm_v_dist, report.radius_v
            )
        });
        let failure = failure.or_else(|| match sharp {
            Some(r) if !r.is_finite() => Some("sup bound on v - y exceeded".to_string()),
            _ => None,
        });
        Ok(Outcome {
            product: report.product_max_rel_error,
            u_ratio: report.norm_u_dist / report.radius_u,
            v_ratio: report.norm_v_dist / report.radius_v,
            closed: !(cert.strict_u && cert.strict_v),
            sharp,
            failure,
        })
    };
    attempt().unwrap_or_else(|e| fail(e.to_string()))
}

/// Thread count from [`THREADS_VAR`], if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_VAR).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Generates, solves and verifies `config.count` instances in parallel.
pub fn run_sweep(config: &SweepConfig) -> SweepReport {
    let work = || (0..config.count).into_par_iter().map(|i| (i, run_one(config, i))).collect::<Vec<_>>();
    let outcomes = match thread_cap().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(work),
        None => work(),
    };
    let mut report = SweepReport { total: outcomes.len(), ..Default::default() };
    for (i, o) in outcomes {
        report.max_product_error = report.max_product_error.max(o.product);
        report.max_u_ratio = report.max_u_ratio.max(o.u_ratio);
        report.max_v_ratio = report.max_v_ratio.max(o.v_ratio);
        report.closed_ball += o.closed as usize;
        if let Some(r) = o.sharp {
            if r.is_finite() {
                report.sharp_ok += 1;
                report.max_sharp_ratio = report.max_sharp_ratio.max(r);
            }
        }
        match o.failure {
            None => report.passed += 1,
            Some(reason) if report.failures.len() < SweepReport::MAX_LISTED => {
                report.failures.push(SweepFailure { index: i, seed: config.seed.wrapping_add(i as u64), reason })
            }
            Some(_) => {}
        }
    }
    report
}
