use std::sync::Arc;

use lpfactor::lp::{grid_point, quantize_geometric, quantize_grid, GeometricRatio};
use lpfactor::verify::verify_lp;
use lpfactor::{
    factor_bounded, factor_general, gen_instance, norm, product_defect, Exponent, ExtReal, Instance, InstanceSpec,
    LpInstance, MeasureSpace, SimpleFunction,
};
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::ONE),
        Just(Exponent::ratio(3, 2).unwrap()),
        Just(Exponent::TWO),
        Just(Exponent::new(3.0).unwrap()),
    ]
}

fn lp_instance(spec: &InstanceSpec) -> LpInstance {
    match gen_instance(spec).unwrap() {
        Instance::Lp(inst) => inst,
        Instance::Seq(_) => unreachable!(),
    }
}

fn on(space: &Arc<MeasureSpace>, c: &[f64]) -> SimpleFunction {
    SimpleFunction::new(Arc::clone(space), c.to_vec()).unwrap()
}

fn finite(mu: &[f64]) -> Arc<MeasureSpace> {
    Arc::new(MeasureSpace::from_finite(mu).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn bounded_stages_respect_their_budgets(size in 1usize..50, p in exponent(), fraction in 0.01f64..0.99, seed in any::<u64>()) {
        let inst = lp_instance(&InstanceSpec::lp(size, p, 1.0, fraction, seed));
        let (f, g, h) = inst.functions().unwrap();
        let out = factor_bounded(&f, &g, &h, p, 1.0).unwrap();
        let report = verify_lp(&inst, &out.certificate, 1e-9).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
        let Some(st) = out.stages else { return Ok(()) };
        let params = &st.params;
        prop_assert!(params.check());

        let excess = params.ratio.excess();
        for &a in &st.alpha {
            prop_assert!(a >= 1.0);
            prop_assert!(a - 1.0 <= excess * (1.0 + 1e-9) + 1e-15);
        }

        let sub = st.f_grid.space();
        let (fs, gs, hs) = (f.restrict(&st.support, sub), g.restrict(&st.support, sub), h.restrict(&st.support, sub));
        let q = p.conjugate();
        prop_assert!(norm(&fs.sub(&st.f_grid).unwrap(), p).to_f64() < params.eps1);
        prop_assert!(norm(&gs.sub(&st.g_grid).unwrap(), q).to_f64() < params.eps1);
        let fg = lpfactor::measure::pointwise_product(&fs, &gs).unwrap();
        let fg_grid = lpfactor::measure::pointwise_product(&st.f_grid, &st.g_grid).unwrap();
        prop_assert!(norm(&fg.sub(&fg_grid).unwrap(), Exponent::ONE).to_f64() < params.eps1);

        let inner_defect = product_defect(&st.f_grid, &st.g_grid, &st.h_geometric).unwrap().to_f64();
        let eps_bar = params.eps_bar;
        prop_assert!(inner_defect < eps_bar * eps_bar / 4.0);
        let hd = product_defect(&fs, &gs, &hs).unwrap().to_f64();
        prop_assert!(inner_defect < hd + 2.0 * params.eps1);
    }

    #[test]
    fn general_pipeline_verifies(size in 1usize..50, p in exponent(), fraction in 0.01f64..0.99, seed in any::<u64>(), infinite in any::<bool>()) {
        let spec = InstanceSpec { infinite_atoms: infinite, ..InstanceSpec::lp(size, p, 1.0, fraction, seed) };
        let inst = lp_instance(&spec);
        let (f, g, h) = inst.functions().unwrap();
        let out = factor_general(&f, &g, &h, p, 1.0).unwrap();
        prop_assert!(out.certificate.strict_u && out.certificate.strict_v);
        let report = verify_lp(&inst, &out.certificate, 1e-9).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
        if let Some(plan) = out.plan {
            prop_assert!(plan.delta + 2.0 * plan.gamma < 1.0);
            prop_assert!(report.defect < plan.delta * plan.delta / 4.0);
        }
    }

    #[test]
    fn uniform_under_large_norms(size in 1usize..50, p in exponent(), seed in any::<u64>()) {
        let spec = InstanceSpec { norm_range: Some((1e3, 1e6)), ..InstanceSpec::lp(size, p, 1.0, 0.99, seed) };
        let inst = lp_instance(&spec);
        let (f, g, h) = inst.functions().unwrap();
        let out = factor_general(&f, &g, &h, p, 1.0).unwrap();
        let report = verify_lp(&inst, &out.certificate, 1e-9).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn grid_quantization_rounds_toward_zero(a in -100.0f64..100.0, delta in 1e-6f64..1.0) {
        let b = grid_point(a, delta);
        prop_assert!(b.abs() <= a.abs());
        prop_assert!((a - b).abs() <= delta);
    }
}

#[test]
fn grid_examples() {
    let s = finite(&[1.0, 1.0, 1.0]);
    let out = quantize_grid(&on(&s, &[0.37, -0.37, 0.5]), 0.1).unwrap();
    let c = out.coefficients();
    assert!((c[0] - 0.3).abs() < 1e-15);
    assert!((c[1] + 0.3).abs() < 1e-15);
    assert_eq!(c[2], 0.5);
}

#[test]
fn geometric_examples() {
    let s = finite(&[1.0, 1.0, 1.0]);
    let d = GeometricRatio::from_d(0.5).unwrap();
    let out = quantize_geometric(&on(&s, &[0.0, 0.75, -0.75]), d, 1.0).unwrap();
    assert_eq!(out.coefficients(), &[0.0, 0.5, -0.5]);
    assert!(quantize_geometric(&on(&s, &[0.0, 1.5, 0.0]), d, 1.0).is_err());
}

#[test]
fn two_atom_bounded_example() {
    let inst = LpInstance {
        space: MeasureSpace::from_finite(&[1.0, 1.0]).unwrap(),
        f: vec![1.0, 2.0],
        g: vec![1.0, 1.0],
        h: vec![1.01, 2.02],
        p: Some(Exponent::TWO),
        eps: Some(1.0),
        unbounded: false,
    };
    let (f, g, h) = inst.functions().unwrap();
    let out = factor_bounded(&f, &g, &h, Exponent::TWO, 1.0).unwrap();
    let report = verify_lp(&inst, &out.certificate, 1e-9).unwrap();
    assert!(report.passed());
    assert!(report.norm_u_dist < 1.0 && report.norm_v_dist < 1.0);
}

#[test]
fn p_one_sup_of_g_on_a_null_atom() {
    let inst = LpInstance {
        space: MeasureSpace::from_finite(&[1.0, 0.0]).unwrap(),
        f: vec![1.0, 3.0],
        g: vec![0.5, 1e6],
        h: vec![0.6, -7.0],
        p: Some(Exponent::ONE),
        eps: Some(1.0),
        unbounded: false,
    };
    let (f, g, h) = inst.functions().unwrap();
    let out = factor_bounded(&f, &g, &h, Exponent::ONE, 1.0).unwrap();
    let stages = out.stages.as_ref().unwrap();
    assert!(stages.params.m < 1e6);
    assert!(verify_lp(&inst, &out.certificate, 1e-9).unwrap().passed());
    let general = factor_general(&f, &g, &h, Exponent::ONE, 1.0).unwrap();
    assert!(verify_lp(&inst, &general.certificate, 1e-9).unwrap().passed());
}

#[test]
fn bounded_data_reduces_to_the_bounded_solver() {
    let inst = LpInstance {
        space: MeasureSpace::from_finite(&[1.0, 2.0, 0.5]).unwrap(),
        f: vec![1.0, 0.5, -1.0],
        g: vec![1.0, 1.0, 2.0],
        h: vec![1.01, 0.52, -2.0],
        p: Some(Exponent::TWO),
        eps: Some(1.0),
        unbounded: false,
    };
    let (f, g, h) = inst.functions().unwrap();
    let general = factor_general(&f, &g, &h, Exponent::TWO, 1.0).unwrap();
    let plan = general.plan.unwrap();
    assert_eq!(plan.truncation.kept_atoms, vec![0, 1, 2]);
    let direct = factor_bounded(&f, &g, &h, Exponent::TWO, plan.delta).unwrap();
    assert_eq!(direct.certificate.u, general.certificate.u);
    assert_eq!(direct.certificate.v, general.certificate.v);
}

#[test]
fn small_tail_atom_uses_roots_of_h() {
    let space = Arc::new(MeasureSpace::from_finite(&[1.0, 1.0]).unwrap());
    let f = on(&space, &[1.0, 1e-6]);
    let g = on(&space, &[1.0, 1e-6]);
    let h = on(&space, &[1.1, 1e-6]);
    let out = factor_general(&f, &g, &h, Exponent::TWO, 1.0).unwrap();
    let plan = out.plan.as_ref().unwrap();
    assert_eq!(plan.truncation.kept_atoms, vec![0]);
    assert!((out.certificate.u[1] - 1e-3).abs() < 1e-15);
    assert!((out.certificate.v[1] - 1e-3).abs() < 1e-15);
    let inst = LpInstance {
        space: (*space).clone(),
        f: f.coefficients().to_vec(),
        g: g.coefficients().to_vec(),
        h: h.coefficients().to_vec(),
        p: Some(Exponent::TWO),
        eps: Some(1.0),
        unbounded: true,
    };
    assert!(verify_lp(&inst, &out.certificate, 1e-9).unwrap().passed());
}

#[test]
fn p_one_tail_uses_the_gamma_grid() {
    // The core atom carries the defect; the tail atom has |f|, |h| tiny and g = 0.25.
    let space = Arc::new(MeasureSpace::from_finite(&[1.0, 1.0]).unwrap());
    let f = on(&space, &[1.0, 1e-9]);
    let g = on(&space, &[1.0, 0.25]);
    let h = on(&space, &[1.0 + 0.0016, 0.25e-9]);
    let out = factor_general(&f, &g, &h, Exponent::ONE, 1.0).unwrap();
    let plan = out.plan.as_ref().unwrap();
    assert!(!plan.truncation.kept_atoms.contains(&1));
    let gamma = plan.gamma;
    let k = (0.25 / gamma).floor();
    let expect = (k + 1.0) * gamma;
    assert!((out.certificate.v[1] - expect).abs() <= 1e-12 * expect);
    assert!((out.certificate.u[1] * out.certificate.v[1] - 0.25e-9).abs() <= 1e-24);
    assert_eq!(lpfactor::lp::gamma_grid_point(0.25, 0.1), 0.30000000000000004);
}

#[test]
fn infinite_atoms_need_the_general_solver() {
    let inst = LpInstance {
        space: MeasureSpace::from_measures([ExtReal::Finite(1.0), ExtReal::Infinite]).unwrap(),
        f: vec![1.0, 0.0],
        g: vec![1.0, 0.0],
        h: vec![1.1, 0.0],
        p: Some(Exponent::TWO),
        eps: Some(1.0),
        unbounded: false,
    };
    assert!(inst.needs_general());
    let (f, g, h) = inst.functions().unwrap();
    assert!(factor_bounded(&f, &g, &h, Exponent::TWO, 1.0).is_err());
    let out = factor_general(&f, &g, &h, Exponent::TWO, 1.0).unwrap();
    assert!(verify_lp(&inst, &out.certificate, 1e-9).unwrap().passed());
}
