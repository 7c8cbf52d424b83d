//! Worked examples through the public API, each against a closed form or an
//! independently computed value.

use approx::assert_relative_eq;
use std::f64::consts::{E, PI};

use grandlorentz::families::ExtremalFamily;
use grandlorentz::fourier::walsh_coefficients;
use grandlorentz::grand::{eps_argmax_analytic, grand_fun_norm, grand_seq_star_norm};
use grandlorentz::hardy::{hardy_head_check, hardy_tail_check, HardyParams};
use grandlorentz::kfun::{gor_chain_check, KCouple};
use grandlorentz::norms::{
    lambda_norm, lorentz_fun_norm, lorentz_seq_norm, lorentz_seq_star_norm, lpqtau_fun_norm, xi_coefficients,
};
use grandlorentz::rearrange::{cesaro_mean, distribution_function, split_at_level};
use grandlorentz::verify::{
    bochkarev_chain_check, grand_hy_check, hy_classical_check, theorem16_check, SystemChoice,
};
use grandlorentz::{
    Complex64, DyadicStepFunction, EpsGrid, GrandParams, LevelCut, NormParams, Sequence, Verdict,
};

fn seq(v: &[f64]) -> Sequence {
    Sequence::from_real(v).unwrap()
}

fn constant(level: u32, c: f64) -> DyadicStepFunction {
    DyadicStepFunction::constant(level, Complex64::new(c, 0.0)).unwrap()
}

#[test]
fn rearrangement_examples() {
    let f = DyadicStepFunction::from_real(2, &[3.0, 2.0, 1.0, 0.0]).unwrap();
    assert_eq!(distribution_function(&f, 1.5).unwrap(), 0.5);
    let g = DyadicStepFunction::from_real(2, &[4.0, 3.0, 2.0, 1.0]).unwrap();
    let (f0, f1) = split_at_level(&g, LevelCut::new(1)).unwrap();
    assert_eq!(f1.rearranged(), vec![3.0, 3.0, 2.0, 1.0]);
    assert_eq!(f0.rearranged(), vec![1.0, 0.0, 0.0, 0.0]);
    assert_relative_eq!(cesaro_mean(&seq(&[3.0, 1.0]), 2.0, 2).unwrap(), 5f64.sqrt(), max_relative = 1e-15);
}

#[test]
fn lorentz_examples() {
    assert_relative_eq!(lorentz_seq_norm(&seq(&[1.0, 1.0]), &NormParams::new(1.0, f64::INFINITY)).unwrap(), 2.0);
    for (p, q) in [(2.0, 3.0), (1.5, 1.0), (3.0, 6.0)] {
        let v = lorentz_fun_norm(&constant(3, 2.5), &NormParams::new(p, q)).unwrap();
        assert_relative_eq!(v, 2.5 * (p / q).powf(1.0 / q), max_relative = 1e-13);
    }
    let xi = xi_coefficients(&constant(6, 1.0), 2.0).unwrap().entries();
    for (m, x) in xi.iter().enumerate() {
        let expect = if m < 6 { 2f64.powf(-((m + 1) as f64) / 2.0) } else { 2f64.powi(-3) };
        assert_relative_eq!(*x, expect, max_relative = 1e-13);
    }
}

#[test]
fn starred_norm_matches_zeta() {
    // a = e_1, p = 4, alpha = 2, q = 4: sum_k k^{(1/4 - 1/2) 4 - 1} = zeta(2)
    let v = lorentz_seq_star_norm(&seq(&[1.0]), &NormParams::new(4.0, 4.0)).unwrap();
    assert_relative_eq!(v.value, (PI * PI / 6.0).powf(0.25), max_relative = 1e-12);
    assert!(lorentz_seq_star_norm(&seq(&[1.0]), &NormParams::new(1.0, 1.0))
        .unwrap_err()
        .is_divergent());
}

#[test]
fn lpqtau_of_constant() {
    // xi*_k = 2^{-k/2} for k = 1..12, then the residual 2^{-6}
    let f = constant(12, 1.0);
    let v = lpqtau_fun_norm(&f, &NormParams::new(2.0, 4.0).with_tau(2.0)).unwrap();
    let term = |k: f64, x: f64| (k.powf(0.25) * x).powi(2) / k;
    let head: f64 = (1..=12).map(|k| term(k as f64, 2f64.powf(-(k as f64) / 2.0))).sum();
    let oracle = (head + term(13.0, 2f64.powi(-6))).sqrt();
    assert_relative_eq!(v, oracle, max_relative = 1e-10);
}

#[test]
fn lambda_of_flat_sequence() {
    // P(m) = min(2^m, 8); sup_{m >= k} (P(m)/m)^{1/2} then a 10^6-term sum
    let v = lambda_norm(&seq(&[1.0; 8]), &NormParams::new(2.0, 3.0)).unwrap();
    let mean = |m: usize| (2f64.powi(m as i32).min(8.0) / m as f64).sqrt();
    let sup = |k: usize| (k..k + 8).map(mean).fold(0.0, f64::max);
    let head: f64 = (1..1_000_000).map(|k| ((k as f64).powf(1.0 / 3.0) * sup(k)).powi(3) / k as f64).sum();
    // tail: sup = (8/k)^{1/2}, terms 8^{3/2} k^{-3/2}
    let n = 1_000_000f64;
    let tail = 8f64.powf(1.5) * (2.0 / (n - 0.5).sqrt());
    assert_relative_eq!(v.value, (head + tail).powf(1.0 / 3.0), max_relative = 1e-8);
}

#[test]
fn grand_examples() {
    let one = constant(3, 1.0);
    let gp = |theta| GrandParams::new(theta, NormParams::new(1.0, 1.0));
    let (v0, _) = grand_fun_norm(&one, &gp(0.0)).unwrap();
    assert_relative_eq!(v0, 1.0, max_relative = 1e-8);
    let (v1, prof) = grand_fun_norm(&one, &gp(1.0)).unwrap();
    assert_relative_eq!(v1, 0.5, max_relative = 1e-8);
    assert!(prof.at_boundary);
    let (s, _) = grand_seq_star_norm(
        &seq(&[1.0]),
        &GrandParams::new(0.3, NormParams::new(2.0, f64::INFINITY).with_alpha(2.0)),
    )
    .unwrap();
    assert_relative_eq!(s, 1.0, max_relative = 1e-8);
    assert_relative_eq!(eps_argmax_analytic(55, 2.0, 4.0).unwrap(), 0.25 / 55f64.ln());
    assert_relative_eq!(eps_argmax_analytic(3, 1.0, 2.0).unwrap(), 0.5 / 3f64.ln());
}

#[test]
fn hardy_examples() {
    let one = constant(3, 1.0);
    let r = hardy_head_check(&one, &HardyParams::new(0.5, 1.0, 1.0).unwrap(), 1e-12);
    assert_relative_eq!(r.lhs, 2.0, max_relative = 1e-10);
    assert_relative_eq!(r.rhs, 4.0, max_relative = 1e-10);
    assert!(r.passed());
    let r = hardy_tail_check(&one, &HardyParams::new(1.0, 1.0, 1.0).unwrap(), 1e-12);
    assert_relative_eq!(r.lhs, 0.5, max_relative = 1e-12);
    assert_relative_eq!(r.rhs, 0.5, max_relative = 1e-12);
    let r = hardy_tail_check(&one, &HardyParams::new(1.0, 1.0, f64::INFINITY).unwrap(), 1e-12);
    assert_relative_eq!(r.lhs, 0.25, max_relative = 1e-12);
    assert_relative_eq!(r.rhs, 1.0, max_relative = 1e-12);
}

#[test]
fn fourier_examples() {
    let w = walsh_coefficients(&constant(4, 1.0));
    assert_eq!(w.entries()[0], Complex64::new(1.0, 0.0));
    let half = DyadicStepFunction::from_real(1, &[1.0, 0.0]).unwrap();
    let r = hy_classical_check(&half, 2.0).unwrap();
    assert_relative_eq!(r.rhs, 0.5f64.sqrt(), max_relative = 1e-14);
    assert!(r.passed());
}

#[test]
fn bochkarev_spike() {
    let r = bochkarev_chain_check(&seq(&[1.0]), 4.0, 1, &EpsGrid::default()).unwrap();
    assert_relative_eq!(r.lhs, E.recip() * 2f64.ln().powf(-0.25), max_relative = 1e-14);
    assert!(r.passed() && r.margin > 0.0);
}

// Regression baselines, frozen from the first certified run.
const GRAND_HY_ONE: f64 = 1.0;
const THEOREM16_ONE: f64 = 1.490268205224175;
const GOR_SPIKE: f64 = 0.8124402247142418;

#[test]
fn regression_baselines() {
    let one = constant(6, 1.0);
    let r = grand_hy_check(&one, 0.0, f64::INFINITY, SystemChoice::Walsh, &EpsGrid::default()).unwrap();
    assert_eq!(r.verdict, Verdict::ReportOnly);
    assert_relative_eq!(r.ratio, GRAND_HY_ONE, max_relative = 1e-9);
    let r = theorem16_check(&one, 4.0, 4.0, SystemChoice::Walsh).unwrap();
    assert_relative_eq!(r.ratio, THEOREM16_ONE, max_relative = 1e-9);
    let c = KCouple::new(2.0, 3.0, f64::INFINITY).unwrap();
    let r = gor_chain_check(&ExtremalFamily::Spike.sequence(1).unwrap(), &c, 1.0 / 3.0, 4.5).unwrap();
    assert_relative_eq!(r.ratio, GOR_SPIKE, max_relative = 1e-9);
}
