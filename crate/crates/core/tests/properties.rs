//! Cross-module invariants on random inputs.

use proptest::prelude::*;

use grandlorentz::grand::grand_fun_norm;
use grandlorentz::hardy::{hardy_head_check, hardy_tail_check, HardyParams};
use grandlorentz::kfun::{gor_chain_check, KCouple, KProfile};
use grandlorentz::norms::lorentz_fun_norm;
use grandlorentz::verify::{
    bochkarev_chain_check, hy_lorentz_ratio, imboch_check, remark38_check, run_suites, theorem16_check, Suite,
    SuiteConfig, SystemChoice,
};
use grandlorentz::{Complex64, DyadicStepFunction, EpsGrid, GrandParams, NormParams, Sequence, Verdict};

fn step_fn() -> impl Strategy<Value = DyadicStepFunction> {
    (0u32..6).prop_flat_map(|level| {
        prop::collection::vec(-5.0f64..5.0, 1usize << level)
            .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
            .prop_map(move |v| DyadicStepFunction::from_real(level, &v).unwrap())
    })
}

fn sequence() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, 1..24).prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
}

fn scaled(f: &DyadicStepFunction, c: f64) -> DyadicStepFunction {
    let v: Vec<Complex64> = f.values().iter().map(|z| z * c).collect();
    DyadicStepFunction::new(f.level(), v).unwrap()
}

fn grid() -> EpsGrid {
    EpsGrid::with_samples(128)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hardy_checks_pass_and_scale(f in step_fn(), c in 0.1f64..10.0, alpha in 0.1f64..1.0, q in 1.0f64..4.0) {
        let hp = HardyParams::new(alpha, 1.0, q).unwrap();
        let a = hardy_head_check(&f, &hp, 1e-10);
        let b = hardy_head_check(&scaled(&f, c), &hp, 1e-10);
        prop_assert!(a.passed() && b.passed());
        prop_assert!((b.margin - c * a.margin).abs() <= 1e-9 * (c * a.rhs));
        let t = hardy_tail_check(&f, &hp, 1e-10);
        prop_assert!(t.passed());
    }

    #[test]
    fn sequence_checks_pass(v in sequence(), q in 2.05f64..6.0) {
        let a = Sequence::from_real(&v).unwrap();
        let g = grid();
        let n = v.len().max(2);
        prop_assert!(bochkarev_chain_check(&a, q, n, &g).unwrap().passed());
        prop_assert!(remark38_check(&a, q).unwrap().passed());
        prop_assert!(imboch_check(&a, 2.0, q, n, &g).unwrap().passed());
    }

    #[test]
    fn report_only_ratios_are_scale_invariant(f in step_fn(), c in 0.1f64..10.0) {
        let g = scaled(&f, c);
        let a = hy_lorentz_ratio(&f, 1.5, 2.0, SystemChoice::Walsh).unwrap();
        let b = hy_lorentz_ratio(&g, 1.5, 2.0, SystemChoice::Walsh).unwrap();
        prop_assert_eq!(a.verdict, Verdict::ReportOnly);
        prop_assert!((a.ratio - b.ratio).abs() <= 1e-9 * a.ratio);
        let a = theorem16_check(&f, 4.0, 4.0, SystemChoice::Walsh).unwrap();
        let b = theorem16_check(&g, 4.0, 4.0, SystemChoice::Walsh).unwrap();
        prop_assert!((a.ratio - b.ratio).abs() <= 1e-9 * a.ratio);
    }

    #[test]
    fn gor_ratio_ignores_order(v in sequence(), c in 0.1f64..10.0) {
        let k = KCouple::new(2.0, 3.0, f64::INFINITY).unwrap().with_grid(EpsGrid::with_samples(64));
        let a = Sequence::from_real(&v).unwrap();
        let mut w: Vec<f64> = v.iter().rev().map(|x| c * x).collect();
        w.rotate_left(v.len() / 2);
        let b = Sequence::from_real(&w).unwrap();
        let ra = gor_chain_check(&a, &k, 1.0 / 3.0, 3.0).unwrap();
        let rb = gor_chain_check(&b, &k, 1.0 / 3.0, 3.0).unwrap();
        prop_assert!((ra.ratio - rb.ratio).abs() <= 1e-8 * ra.ratio);
    }

    #[test]
    fn k_upper_is_an_envelope(v in sequence(), s in 0.01f64..100.0, lam in 1.0f64..50.0) {
        let k = KCouple::new(2.0, 3.0, f64::INFINITY).unwrap().with_grid(EpsGrid::with_samples(64));
        let prof = KProfile::new(&Sequence::from_real(&v).unwrap(), &k).unwrap();
        let (a, b) = (prof.k_upper(s), prof.k_upper(lam * s));
        prop_assert!(a <= b * (1.0 + 1e-12));
        prop_assert!(b <= lam * a * (1.0 + 1e-12));
    }

    #[test]
    fn grand_norm_is_monotone_in_theta(f in step_fn(), p in 1.0f64..4.0, q in 1.0f64..4.0) {
        let pr = NormParams::new(p, q);
        let plain = lorentz_fun_norm(&f, &pr).unwrap();
        let mut prev = f64::INFINITY;
        for theta in [0.0, 0.5, 1.0, 2.0] {
            let (v, _) = grand_fun_norm(&f, &GrandParams::new(theta, pr).with_samples(256)).unwrap();
            prop_assert!(v <= prev * (1.0 + 1e-12));
            prop_assert!(v <= plain * (1.0 + 1e-9));
            prev = v;
        }
    }
}

#[test]
fn suites_are_reproducible() {
    let cfg = SuiteConfig {
        seed: 11,
        count: Some(6),
        eps_samples: 128,
        ..SuiteConfig::default()
    };
    let suites = [Suite::Bochkarev, Suite::Remark38, Suite::GrandHy, Suite::Kfun];
    let a = run_suites(&suites, &cfg).unwrap();
    let b = run_suites(&suites, &cfg).unwrap();
    let lines = |r: &[grandlorentz::CheckReport]| r.iter().map(|x| x.to_json_line()).collect::<Vec<_>>();
    assert_eq!(lines(&a), lines(&b));
    assert!(a.iter().all(|r| !r.verdict.is_failure()));
}
