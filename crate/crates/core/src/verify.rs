//! The inequality harness.
//!
//! Checks with an explicit constant produce pass/fail [`CheckReport`]s.
//! Comparisons whose constant is only known to exist produce report-only
//! ratios, aggregated over a corpus into bands or fitted slopes.

use std::f64::consts::E;

use crate::error::{invalid, Result};
use crate::families::{Corpus, ExtremalFamily};
use crate::fourier::{walsh_coefficients, TrigSpectrum, DEFAULT_DEFECT_SHARE};
use crate::grand::{
    grand_fun_norm, optimize_eps, EpsGrid, Extremum, GrandParams, StarredProfile,
};
use crate::hardy::{hardy_grand_head_check, hardy_grand_tail_check, hardy_head_check, hardy_tail_check, HardyParams};
use crate::kfun::{gor_chain_check, KCouple};
use crate::norms::{
    conjugate, lambda_from_blocks, lambda_norm, lorentz_fun_norm, lorentz_seq_norm,
    lorentz_seq_star_norm, lpqtau_fun_norm, recip, value_or_inf, DyadicBlocks, NormParams,
};
use crate::rearrange::{DyadicStepFunction, Sequence};
use crate::report::{CheckReport, Verdict};
use crate::sum::{hurwitz_tail, NeumaierSum};

/// Relative slack for exact-constant comparisons.
pub const EXACT_TOL: f64 = 1e-10;

/// Largest trigonometric frequency materialised by the harness.
pub const TRIG_CAP: usize = 1 << 14;

/// Coefficient system used by the Fourier-side checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemChoice {
    Trig,
    Walsh,
}

impl SystemChoice {
    pub fn name(&self) -> &'static str {
        match self {
            SystemChoice::Trig => "trig",
            SystemChoice::Walsh => "walsh",
        }
    }
}

/// Coefficients of `f` and the squared `l_2` mass left out by truncation.
pub fn coefficients(f: &DyadicStepFunction, sys: SystemChoice) -> (Sequence, f64) {
    match sys {
        SystemChoice::Walsh => (walsh_coefficients(f), 0.0),
        SystemChoice::Trig => {
            let sp = TrigSpectrum::new(f);
            let k = sp.auto_k(DEFAULT_DEFECT_SHARE).min(TRIG_CAP);
            let a = Sequence::new(sp.coefficients(k)).expect("finite coefficients");
            (a, sp.parseval_defect(k))
        }
    }
}

fn lp_seq(a: &Sequence, p: f64) -> f64 {
    let m = a.moduli();
    let top = m.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return top;
    }
    let s: NeumaierSum = m.iter().map(|x| (x / top).powf(p)).collect();
    top * s.value().powf(1.0 / p)
}

/// `||a||_{l_{p'}} <= ||f||_{L_p}` for trigonometric coefficients, `1 < p <= 2`.
///
/// The coefficient sequence is truncated at `|k| <= K`; the truncated norm
/// can only be smaller, and `sqrt(defect)` bounds what was left out.
pub fn hy_classical_check(f: &DyadicStepFunction, p: f64) -> Result<CheckReport> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(invalid(format!("Hausdorff-Young needs 1 < p <= 2, got {p}")));
    }
    let pp = conjugate(p).expect("p > 1");
    let sp = TrigSpectrum::new(f);
    let k = sp.auto_k(DEFAULT_DEFECT_SHARE).min(TRIG_CAP);
    let a = Sequence::new(sp.coefficients(k)).expect("finite coefficients");
    let lhs = lp_seq(&a, pp);
    let rhs = f.lp_norm(p);
    let allowance = sp.parseval_defect(k).max(0.0).sqrt();
    Ok(CheckReport::bound("hy_classical", lhs, rhs, 1.0, 1e-12)
        .param("p", p)
        .param("K", k)
        .note(format!("truncation allowance {allowance:.3e}")))
}

/// Exponent of `(1/p - 1/2)` in the Lorentz Hausdorff-Young bound:
/// `1/2` for `q >= 2`, `1/q` below.
pub fn blowup_exponent(q: f64) -> f64 {
    if q >= 2.0 {
        0.5
    } else {
        1.0 / q
    }
}

/// `||a||_{l*_{p',q}} / ((1/p - 1/2)^(-e(q)) ||f||_{L_{p,q}})`, report-only.
pub fn hy_lorentz_ratio(f: &DyadicStepFunction, p: f64, q: f64, sys: SystemChoice) -> Result<CheckReport> {
    if !(p > 1.0 && p < 2.0) {
        return Err(invalid(format!("need 1 < p < 2, got {p}")));
    }
    let name = "hy_lorentz";
    let pp = conjugate(p).expect("p > 1");
    let (a, defect) = coefficients(f, sys);
    let tag = |r: CheckReport| r.param("p", p).param("q", q).param("system", sys.name());
    let lhs = match lorentz_seq_star_norm(&a, &NormParams::new(pp, q)) {
        Ok(c) => c.value,
        Err(e) => return Ok(tag(CheckReport::diverged(name, e.to_string()))),
    };
    let gap = 1.0 / p - 0.5;
    let rhs = gap.powf(-blowup_exponent(q)) * lorentz_fun_norm(f, &NormParams::new(p, q))?;
    let mut rep = tag(CheckReport::ratio_only(name, lhs, rhs));
    if defect > 0.0 {
        rep = rep.note(format!("trig truncation defect {defect:.3e}"));
    }
    Ok(rep)
}

/// How the sweep picks `f_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepFamily {
    /// Power family with `beta = 1/p - delta`.
    NearExtremal { delta: f64 },
    /// The same function for every `p`.
    Fixed(ExtremalFamily),
}

impl SweepFamily {
    pub fn name(&self) -> String {
        match self {
            SweepFamily::NearExtremal { delta } => format!("power(1/p-{delta})"),
            SweepFamily::Fixed(f) => f.name(),
        }
    }

    fn member(&self, p: f64, level: u32) -> Result<DyadicStepFunction> {
        match self {
            SweepFamily::NearExtremal { delta } => {
                ExtremalFamily::Power { beta: 1.0 / p - delta }.step_function(level)
            }
            SweepFamily::Fixed(f) => f.step_function(level),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupRow {
    pub p: f64,
    /// `||a||_{l*_{p',q}} / ||f_p||_{L_{p,q}}`.
    pub c_emp: f64,
    /// Same with the plain `l_{p',q}` norm.
    pub c_emp_plain: f64,
    /// `c_emp (1/p - 1/2)^{e(q)}`.
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupTable {
    pub family: String,
    pub q: f64,
    pub level: u32,
    pub rows: Vec<BlowupRow>,
    /// Least-squares slope of `log c_emp` against `log(1/p - 1/2)`.
    pub slope: f64,
    pub slope_plain: f64,
    pub max_scaled: f64,
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub const SWEEP_LEVEL: u32 = 14;
pub const SWEEP_DELTA: f64 = 0.02;

/// Empirical constants along `p_grid` with Walsh coefficients at `level`.
pub fn blowup_sweep(family: SweepFamily, p_grid: &[f64], q: f64, level: u32) -> Result<BlowupTable> {
    if p_grid.len() < 2 {
        return Err(invalid("blow-up sweep needs at least two p values"));
    }
    if let Some(p) = p_grid.iter().find(|&&p| !(p > 1.0 && p < 2.0)) {
        return Err(invalid(format!("sweep points must lie in (1, 2), got {p}")));
    }
    let mut rows = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let f = family.member(p, level)?;
        let a = walsh_coefficients(&f);
        let pp = conjugate(p).expect("p > 1");
        let den = lorentz_fun_norm(&f, &NormParams::new(p, q))?;
        let star = lorentz_seq_star_norm(&a, &NormParams::new(pp, q))?.value;
        let plain = lorentz_seq_norm(&a, &NormParams::new(pp, q))?;
        let c_emp = star / den;
        rows.push(BlowupRow {
            p,
            c_emp,
            c_emp_plain: plain / den,
            scaled: c_emp * (1.0 / p - 0.5).powf(blowup_exponent(q)),
        });
    }
    let x: Vec<f64> = rows.iter().map(|r| (1.0 / r.p - 0.5).ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.c_emp.ln()).collect();
    let yp: Vec<f64> = rows.iter().map(|r| r.c_emp_plain.ln()).collect();
    Ok(BlowupTable {
        family: family.name(),
        q,
        level,
        slope: fit_slope(&x, &y),
        slope_plain: fit_slope(&x, &yp),
        max_scaled: rows.iter().map(|r| r.scaled).fold(0.0, f64::max),
        rows,
    })
}

/// `theta + 1/2` for `q >= 2`, `theta + 1/q` below.
pub fn grand_theta1(theta: f64, q: f64) -> f64 {
    theta + if q >= 2.0 { 0.5 } else { 1.0 / q }
}

fn zero_report(name: &str) -> CheckReport {
    let mut r = CheckReport::ratio_only(name, 0.0, 0.0).note("zero input");
    r.verdict = Verdict::Pass;
    r
}

/// `||a||_{G^{theta_1} l*_{2,q}} / ||f||_{G^theta L_{2,q}}`, report-only.
pub fn grand_hy_check(
    f: &DyadicStepFunction,
    theta: f64,
    q: f64,
    sys: SystemChoice,
    grid: &EpsGrid,
) -> Result<CheckReport> {
    let name = "grand_hy";
    let tag = |r: CheckReport| r.param("theta", theta).param("q", q).param("system", sys.name());
    if f.is_zero() {
        return Ok(tag(zero_report(name)));
    }
    let theta1 = grand_theta1(theta, q);
    let (a, defect) = coefficients(f, sys);
    let mut gp = GrandParams::new(theta1, NormParams::new(2.0, q).with_alpha(2.0));
    gp.eps_grid = *grid;
    let sp = StarredProfile::new(&a, 2.0, q, 2.0)?;
    let lhs = optimize_eps(|e| Ok(e.powf(theta1) * sp.at(e)?.mid()), grid, Extremum::Max, gp.refine_tol)?;
    gp.theta = theta;
    let (rhs, _) = grand_fun_norm(f, &gp)?;
    let mut rep = tag(CheckReport::ratio_only(name, lhs.sup_value, rhs)).param("theta1", theta1);
    if defect > 0.0 {
        rep = rep.note(format!("trig truncation defect {defect:.3e}"));
    }
    Ok(rep)
}

/// Lower bound from the Bochkarev-type chain at `eps = 1/ln(n+1)`:
/// `e^{-1} ln(n+1)^{-(1/2 - 1/q)} (sum_{m<=n} (a*_m)^2)^{1/2}`.
pub fn bochkarev_lhs(sorted: &[f64], q: f64, n: usize) -> f64 {
    let s: f64 = sorted.iter().take(n).map(|x| x * x).sum();
    E.recip() * ((n + 1) as f64).ln().powf(-(0.5 - recip(q))) * s.sqrt()
}

/// `sum_{k>=n} k^{-q eps - 1} >= (n+1)^{-q eps} / (q eps)` at `eps = 1/ln(n+1)`.
pub fn bochkarev_tail_step(q: f64, n: usize) -> Result<(f64, f64)> {
    let eps = 1.0 / ((n + 1) as f64).ln();
    let s = q * eps;
    let lhs = hurwitz_tail(1.0 + s, n as f64)?.lo;
    let rhs = ((n + 1) as f64).powf(-s) / s;
    Ok((lhs, rhs))
}

/// Grand starred norm `||a||_{G^{1/2} l*_{2,q}}` as the supremum over the
/// grid, also evaluated at the extra points `probes`.
fn grand_star_with_probes(sp: &StarredProfile, theta: f64, grid: &EpsGrid, probes: &[f64]) -> Result<f64> {
    let phi = |e: f64| Ok(e.powf(theta) * sp.at(e)?.mid());
    let prof = optimize_eps(phi, grid, Extremum::Max, 1e-8)?;
    let mut best = prof.sup_value;
    for &e in probes {
        if e > 0.0 && e < 1.0 {
            best = best.max(phi(e)?);
        }
    }
    Ok(best)
}

/// The Bochkarev-type lower bound with constant `e^{-1}` for one `n`.
pub fn bochkarev_chain_check(a: &Sequence, q: f64, n: usize, grid: &EpsGrid) -> Result<CheckReport> {
    bochkarev_impl(a, q, Some(n), grid)
}

/// Same over every `n <= len(a)`; the report carries the worst `n`.
pub fn bochkarev_chain_all_n(a: &Sequence, q: f64, grid: &EpsGrid) -> Result<CheckReport> {
    bochkarev_impl(a, q, None, grid)
}

fn bochkarev_impl(a: &Sequence, q: f64, n: Option<usize>, grid: &EpsGrid) -> Result<CheckReport> {
    if !(q > 2.0) {
        return Err(invalid(format!("the Bochkarev chain needs q > 2, got {q}")));
    }
    let name = "bochkarev_chain";
    let ns: Vec<usize> = match n {
        Some(n) if n >= 1 => vec![n],
        Some(_) => return Err(invalid("n must be >= 1")),
        None => (1..=a.len().max(1)).collect(),
    };
    let sorted = a.rearranged();
    let sp = StarredProfile::new(a, 2.0, q, 2.0)?;
    let probes: Vec<f64> = ns.iter().map(|&n| 1.0 / ((n + 1) as f64).ln()).collect();
    let rhs = if sp.is_zero() {
        0.0
    } else {
        grand_star_with_probes(&sp, 0.5, grid, &probes)?
    };
    let mut worst: Option<(usize, f64, f64)> = None;
    let mut sub_fail = None;
    for &n in &ns {
        let lhs = bochkarev_lhs(&sorted, q, n);
        let rel = if rhs > 0.0 { (rhs - lhs) / rhs } else { -lhs };
        if worst.is_none_or(|w| rel < (w.2 - w.1) / w.2.max(f64::MIN_POSITIVE)) {
            worst = Some((n, lhs, rhs));
        }
        if q.is_finite() {
            let (s_lhs, s_rhs) = bochkarev_tail_step(q, n)?;
            if s_lhs < s_rhs * (1.0 - 1e-12) {
                sub_fail = Some((n, s_lhs, s_rhs));
            }
        }
    }
    let (wn, lhs, rhs) = worst.expect("at least one n");
    let mut rep = CheckReport::bound(name, lhs, rhs, E.recip(), EXACT_TOL)
        .param("q", q)
        .param("n", wn);
    if n.is_none() {
        rep = rep.param("n_checked", ns.len()).param("len", a.len());
    }
    if let Some((sn, l, r)) = sub_fail {
        rep.verdict = Verdict::Fail;
        rep = rep.note(format!("integral-test step fails at n = {sn}: {l:.6e} < {r:.6e}"));
    }
    Ok(rep)
}

/// Intermediate step of the embedding proof with constant 1:
/// `sup_eps eps^{1/p} (sum_{k>=n} k^{-q eps - 1})^{1/q} (sum_{m<=n} (a*_m)^p)^{1/p}
///  <= ||a||_{G^{1/p} l*_{p,q}}` with Cesaro exponent `p`.
pub fn imboch_check(a: &Sequence, p: f64, q: f64, n: usize, grid: &EpsGrid) -> Result<CheckReport> {
    let sp = StarredProfile::new(a, p, q, p)?;
    imboch_with_profile(a, &sp, p, q, &[n], grid).map(|mut v| v.remove(0))
}

/// [`imboch_check`] for several `n`, sharing the right side.
pub fn imboch_with_profile(
    a: &Sequence,
    sp: &StarredProfile,
    p: f64,
    q: f64,
    ns: &[usize],
    grid: &EpsGrid,
) -> Result<Vec<CheckReport>> {
    if !(p >= 1.0 && p < q && q.is_finite()) {
        return Err(invalid(format!("need 1 <= p < q < inf, got p = {p}, q = {q}")));
    }
    let name = "imboch";
    let sorted = a.rearranged();
    let theta = 1.0 / p;
    let mut lefts = Vec::with_capacity(ns.len());
    for &n in ns {
        if n == 0 {
            return Err(invalid("n must be >= 1"));
        }
        let head: f64 = sorted.iter().take(n).map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p);
        let prof = optimize_eps(
            |e| Ok(e.powf(theta) * hurwitz_tail(1.0 + q * e, n as f64)?.mid().powf(1.0 / q) * head),
            grid,
            Extremum::Max,
            1e-8,
        )?;
        lefts.push((n, prof.sup_value, prof.argmax_eps));
    }
    let probes: Vec<f64> = lefts.iter().map(|l| l.2).collect();
    let rhs = if sp.is_zero() {
        0.0
    } else {
        grand_star_with_probes(sp, theta, grid, &probes)?
    };
    Ok(lefts
        .into_iter()
        .map(|(n, lhs, arg)| {
            CheckReport::bound(name, lhs, rhs, 1.0, EXACT_TOL)
                .param("p", p)
                .param("q", q)
                .param("n", n)
                .param("eps_lhs", arg)
        })
        .collect())
}

/// Dyadic comparison with constant 1: termwise
/// `k^{-1/2} P(k)^{1/2} <= sup_{s>=k} (P(s)/s)^{1/2}` and in aggregate
/// `(sum_k (P(k)/k)^{q/2})^{1/q} <= ||a||_{Lambda_{2,q,q}}`.
pub fn remark38_check(a: &Sequence, q: f64) -> Result<CheckReport> {
    if !(q > 2.0 && q.is_finite()) {
        return Err(invalid(format!("need 2 < q < inf, got {q}")));
    }
    let name = "remark38";
    let b = DyadicBlocks::new(a, 2.0)?;
    if b.total == 0.0 {
        let mut r = CheckReport::bound(name, 0.0, 0.0, 1.0, 1e-12).param("q", q);
        r.verdict = Verdict::Pass;
        return Ok(r);
    }
    let mut worst_term = f64::INFINITY;
    for k in 1..=b.m0 + 1 {
        let l = (b.block_sum(k) / k as f64).sqrt();
        let r = b.sup_mean(k);
        worst_term = worst_term.min((r - l) / r);
    }
    // aggregate: head k < m0 plus the tail S^{q/2} zeta(q/2, m0)
    let top = (1..=b.m0)
        .map(|k| (b.block_sum(k) / k as f64).sqrt())
        .fold(0.0, f64::max);
    let mut head = NeumaierSum::new();
    for k in 1..b.m0 {
        head.add(((b.block_sum(k) / k as f64).sqrt() / top).powf(q));
    }
    let tail = hurwitz_tail(q / 2.0, b.m0 as f64)?.mid() * (b.total.sqrt() / top).powf(q);
    let lhs = top * (head.value() + tail).powf(1.0 / q);
    let rhs = lambda_from_blocks(&b, q, q)?.value;
    let mut rep = CheckReport::bound(name, lhs, rhs, 1.0, 1e-12)
        .param("q", q)
        .note(format!("worst termwise relative margin {worst_term:.3e}"));
    if worst_term < -1e-12 {
        rep.verdict = Verdict::Fail;
    }
    Ok(rep)
}

/// `||a||_{Lambda_{2,q,tau}} / ||f||_{L_{2,q,tau}}`, report-only.
pub fn theorem16_check(f: &DyadicStepFunction, q: f64, tau: f64, sys: SystemChoice) -> Result<CheckReport> {
    if !(q > 2.0) {
        return Err(invalid(format!("need 2 < q <= inf, got {q}")));
    }
    let name = "theorem16";
    let tag = |r: CheckReport| r.param("q", q).param("tau", tau).param("system", sys.name());
    if f.is_zero() {
        return Ok(tag(zero_report(name)));
    }
    let (a, _) = coefficients(f, sys);
    let pr = NormParams::new(2.0, q).with_tau(tau);
    let lhs = value_or_inf(&lambda_norm(&a, &pr));
    let rhs = lpqtau_fun_norm(f, &pr)?;
    Ok(tag(CheckReport::ratio_only(name, lhs, rhs)))
}

/// `max / min` over the finite nonzero ratios of `reports`.
pub fn ratio_band<'a, I: IntoIterator<Item = &'a CheckReport>>(reports: I) -> Option<(f64, f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for r in reports {
        if r.ratio.is_finite() && r.ratio > 0.0 {
            lo = lo.min(r.ratio);
            hi = hi.max(r.ratio);
        }
    }
    (hi > 0.0).then(|| (lo, hi, hi / lo))
}

// ---------------------------------------------------------------------------
// suites

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Hardy,
    Bochkarev,
    Imboch,
    Remark38,
    Hy,
    GrandHy,
    Theorem16,
    Kfun,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Hardy,
        Suite::Bochkarev,
        Suite::Imboch,
        Suite::Remark38,
        Suite::Hy,
        Suite::GrandHy,
        Suite::Theorem16,
        Suite::Kfun,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Hardy => "hardy",
            Suite::Bochkarev => "bochkarev",
            Suite::Imboch => "imboch",
            Suite::Remark38 => "remark38",
            Suite::Hy => "hy",
            Suite::GrandHy => "grand-hy",
            Suite::Theorem16 => "theorem16",
            Suite::Kfun => "kfun",
        }
    }

    /// Parse a suite name; `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL
            .iter()
            .find(|x| x.name() == s)
            .map(|x| vec![*x])
            .ok_or_else(|| invalid(format!("unknown suite {s:?}")))
    }

    /// Corpus size used when none is configured.
    pub fn default_count(&self) -> usize {
        match self {
            Suite::Hardy => 100,
            Suite::Bochkarev => 1000,
            Suite::Imboch => 500,
            Suite::Remark38 => 500,
            Suite::Hy => 100,
            Suite::GrandHy => 50,
            Suite::Theorem16 => 50,
            Suite::Kfun => 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides every suite's default corpus size.
    pub count: Option<usize>,
    /// Overrides the suite's default `q` values where it has any.
    pub q_values: Option<Vec<f64>>,
    pub eps_samples: usize,
    pub system: SystemChoice,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            count: None,
            q_values: None,
            eps_samples: 2048,
            system: SystemChoice::Walsh,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == Some(0) {
            return Err(invalid("empty corpus: count must be positive"));
        }
        if let Some(qs) = &self.q_values {
            if qs.is_empty() {
                return Err(invalid("empty q grid"));
            }
        }
        EpsGrid::with_samples(self.eps_samples).validate()
    }

    fn count(&self, s: Suite) -> usize {
        self.count.unwrap_or_else(|| s.default_count())
    }

    fn qs(&self, default: &[f64]) -> Vec<f64> {
        self.q_values.clone().unwrap_or_else(|| default.to_vec())
    }

    fn grid(&self) -> EpsGrid {
        EpsGrid::with_samples(self.eps_samples)
    }

    /// Independent seed for one suite.
    fn suite_seed(&self, s: Suite) -> u64 {
        self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (s as u64 + 1)
    }
}

/// A unit of suite work.
pub type Job = Box<dyn Fn() -> Result<Vec<CheckReport>> + Send + Sync>;

fn job<F: Fn() -> Result<Vec<CheckReport>> + Send + Sync + 'static>(f: F) -> Job {
    Box::new(f)
}

const HARDY_LEVEL: u32 = 5;
const GRAND_HARDY_LEVEL: u32 = 4;
const FOURIER_LEVEL: u32 = 6;

/// Step functions used by the Fourier-side suites: random members plus a
/// few structured ones.
fn fourier_corpus(corpus: &mut Corpus, count: usize) -> Vec<(String, DyadicStepFunction)> {
    let mut out: Vec<(String, DyadicStepFunction)> = [
        ExtremalFamily::Flat,
        ExtremalFamily::Spike,
        ExtremalFamily::Power { beta: 0.3 },
        ExtremalFamily::Power { beta: 0.6 },
        ExtremalFamily::Lacunary { gamma: 0.5 },
    ]
    .iter()
    .map(|fam| (fam.name(), fam.step_function(FOURIER_LEVEL).expect("valid family")))
    .collect();
    let random = count.saturating_sub(out.len()).max(1);
    for i in 0..random {
        out.push((format!("random#{i}"), corpus.step_function(FOURIER_LEVEL)));
    }
    out
}

/// Independent jobs for `suite`; running them all and sorting the merged
/// output gives the suite's report set.
pub fn suite_jobs(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Job>> {
    cfg.validate()?;
    let seed = cfg.seed;
    let mut corpus = Corpus::new(cfg.suite_seed(suite));
    let count = cfg.count(suite);
    let grid = cfg.grid();
    let sys = cfg.system;
    let mut jobs: Vec<Job> = Vec::new();
    match suite {
        Suite::Hardy => {
            let qs_extra = cfg.qs(&[4.0]);
            for i in 0..count {
                let f = corpus.step_function(HARDY_LEVEL);
                let qs_extra = qs_extra.clone();
                jobs.push(job(move || {
                    let mut out = Vec::new();
                    for &r in &[0.5, 1.0, 2.0] {
                        for &alpha in &[0.1, 0.25, 0.4] {
                            let mut qs = vec![r];
                            qs.extend(qs_extra.iter().copied().filter(|&q| q > r));
                            for &q in &qs {
                                let hp = HardyParams::new(alpha, r, q)?;
                                if q.is_finite() {
                                    out.push(hardy_head_check(&f, &hp, EXACT_TOL));
                                }
                                out.push(hardy_tail_check(&f, &hp, EXACT_TOL));
                            }
                            let hp = HardyParams::new(alpha, r, f64::INFINITY)?;
                            out.push(hardy_tail_check(&f, &hp, EXACT_TOL));
                        }
                    }
                    Ok(out.into_iter().map(|r| r.param("member", i).with_seed(seed)).collect())
                }));
            }
            let grand_count = count.div_ceil(2);
            let grand_grid = EpsGrid::with_samples(cfg.eps_samples.min(256));
            for i in 0..grand_count {
                let f = corpus.step_function(GRAND_HARDY_LEVEL);
                jobs.push(job(move || {
                    let mut out = Vec::new();
                    for &(r, q, theta) in &[(0.5, 1.0, 0.0), (1.0, 1.0, 0.5), (1.0, 2.0, 0.0), (2.0, 4.0, 1.0)] {
                        out.push(hardy_grand_head_check(&f, r, q, theta, &grand_grid, EXACT_TOL)?);
                        out.push(hardy_grand_tail_check(&f, r, q, theta, &grand_grid, EXACT_TOL)?);
                    }
                    Ok(out.into_iter().map(|r| r.param("member", i).with_seed(seed)).collect())
                }));
            }
        }
        Suite::Bochkarev => {
            let qs = cfg.qs(&[3.0, 4.0, f64::INFINITY]);
            for i in 0..count {
                let a = corpus.sequence_up_to(128);
                let qs = qs.clone();
                jobs.push(job(move || {
                    qs.iter()
                        .map(|&q| {
                            Ok(bochkarev_chain_all_n(&a, q, &grid)?.param("member", i).with_seed(seed))
                        })
                        .collect()
                }));
            }
        }
        Suite::Imboch => {
            let pqs = [(1.0, 2.0), (2.0, 3.0), (2.0, 4.0)];
            for i in 0..count {
                let a = corpus.sequence_up_to(128);
                jobs.push(job(move || {
                    let mut out = Vec::new();
                    for &(p, q) in &pqs {
                        let sp = StarredProfile::new(&a, p, q, p)?;
                        out.extend(imboch_with_profile(&a, &sp, p, q, &[1, 4, 16], &grid)?);
                    }
                    Ok(out.into_iter().map(|r| r.param("member", i).with_seed(seed)).collect())
                }));
            }
        }
        Suite::Remark38 => {
            let qs = cfg.qs(&[3.0, 4.0]);
            let seqs: Vec<Sequence> = (0..count).map(|_| corpus.sequence_up_to(128)).collect();
            for chunk in seqs.chunks(50).enumerate().map(|(c, s)| (c * 50, s.to_vec())) {
                let qs = qs.clone();
                jobs.push(job(move || {
                    let mut out = Vec::new();
                    for (j, a) in chunk.1.iter().enumerate() {
                        for &q in &qs {
                            out.push(remark38_check(a, q)?.param("member", chunk.0 + j).with_seed(seed));
                        }
                    }
                    Ok(out)
                }));
            }
        }
        Suite::Hy => {
            let qs = cfg.qs(&[1.0, 2.0, 4.0]);
            let members = fourier_corpus(&mut corpus, count);
            for (label, f) in members {
                let qs = qs.clone();
                jobs.push(job(move || {
                    let mut out = Vec::new();
                    for &p in &[1.25, 1.5, 2.0] {
                        out.push(hy_classical_check(&f, p)?);
                    }
                    for &p in &[1.25, 1.5, 1.75] {
                        for &q in &qs {
                            out.push(hy_lorentz_ratio(&f, p, q, sys)?);
                        }
                    }
                    Ok(out.into_iter().map(|r| r.param("member", label.as_str()).with_seed(seed)).collect())
                }));
            }
        }
        Suite::GrandHy => {
            let qs = cfg.qs(&[1.0, 2.0, 4.0, f64::INFINITY]);
            let members = fourier_corpus(&mut corpus, count);
            for (label, f) in members {
                let qs = qs.clone();
                jobs.push(job(move || {
                    let mut out = Vec::new();
                    for &theta in &[0.0, 0.5] {
                        for &q in &qs {
                            out.push(grand_hy_check(&f, theta, q, sys, &grid)?);
                        }
                    }
                    Ok(out.into_iter().map(|r| r.param("member", label.as_str()).with_seed(seed)).collect())
                }));
            }
        }
        Suite::Theorem16 => {
            let qs = cfg.qs(&[3.0, 4.0, f64::INFINITY]);
            let members = fourier_corpus(&mut corpus, count);
            for (label, f) in members {
                let qs = qs.clone();
                jobs.push(job(move || {
                    let mut out = Vec::new();
                    for &q in qs.iter().filter(|&&q| q > 2.0) {
                        for tau in [2.0, 4.0, q] {
                            out.push(theorem16_check(&f, q, tau, sys)?);
                        }
                    }
                    Ok(out.into_iter().map(|r| r.param("member", label.as_str()).with_seed(seed)).collect())
                }));
            }
        }
        Suite::Kfun => {
            let couple = KCouple::new(2.0, 3.0, f64::INFINITY)?;
            let eta = 1.0 / 3.0;
            let mut members: Vec<(String, Sequence)> = vec![("spike".into(), ExtremalFamily::Spike.sequence(1)?)];
            for n in [4usize, 16, 64] {
                members.push((format!("flat{n}"), ExtremalFamily::Flat.sequence(n)?));
            }
            for i in 0..count {
                members.push((format!("random#{i}"), corpus.sequence_up_to(64)));
            }
            for (label, a) in members {
                jobs.push(job(move || {
                    let q = couple.target_q(eta);
                    let r = gor_chain_check(&a, &couple, eta, q)?;
                    Ok(vec![r.param("member", label.as_str()).with_seed(seed)])
                }));
            }
        }
    }
    Ok(jobs)
}

/// Sort reports into the canonical output order.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| a.sort_key_cmp(b));
}

/// Run `suites` sequentially and return the sorted reports.
pub fn run_suites(suites: &[Suite], cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for &s in suites {
        for j in suite_jobs(s, cfg)? {
            out.extend(j()?);
        }
    }
    sort_reports(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn grid() -> EpsGrid {
        EpsGrid::with_samples(256)
    }

    #[test]
    fn hy_classical_examples() {
        let c = DyadicStepFunction::constant(3, Complex64::new(2.5, 0.0)).unwrap();
        let r = hy_classical_check(&c, 2.0).unwrap();
        assert_relative_eq!(r.lhs, 2.5, max_relative = 1e-14);
        assert_relative_eq!(r.rhs, 2.5, max_relative = 1e-14);
        assert!(r.passed());
        let half = DyadicStepFunction::from_real(1, &[1.0, 0.0]).unwrap();
        let r = hy_classical_check(&half, 2.0).unwrap();
        assert_relative_eq!(r.rhs, 0.5f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(r.lhs, 0.5f64.sqrt(), max_relative = 1e-5);
        assert!(r.passed());
        let mut corpus = Corpus::new(1);
        for _ in 0..10 {
            let f = corpus.step_function(5);
            for p in [1.25, 1.5, 2.0] {
                assert!(hy_classical_check(&f, p).unwrap().passed());
            }
        }
    }

    #[test]
    fn hy_lorentz_ratio_is_scale_invariant() {
        let c = DyadicStepFunction::constant(4, Complex64::new(1.0, 0.0)).unwrap();
        let a = hy_lorentz_ratio(&c, 1.6, 2.0, SystemChoice::Walsh).unwrap();
        let b = hy_lorentz_ratio(&c.scaled(7.0), 1.6, 2.0, SystemChoice::Walsh).unwrap();
        assert!(a.ratio.is_finite());
        assert_relative_eq!(a.ratio, b.ratio, max_relative = 1e-13);
        let spike = ExtremalFamily::Spike.step_function(5).unwrap();
        for p in [1.25, 1.5, 1.75] {
            for q in [1.0, 2.0, 4.0] {
                assert!(hy_lorentz_ratio(&spike, p, q, SystemChoice::Walsh).unwrap().ratio.is_finite());
            }
        }
    }

    #[test]
    fn power_family_baseline() {
        let f = ExtremalFamily::Power { beta: 0.6 }.step_function(10).unwrap();
        let r = hy_lorentz_ratio(&f, 1.6, 2.0, SystemChoice::Walsh).unwrap();
        // frozen from the first certified run
        assert_relative_eq!(r.ratio, POWER_BASELINE, max_relative = 1e-9);
    }

    const POWER_BASELINE: f64 = 1.039255606154527;

    #[test]
    fn slope_fit() {
        let x = [0.0, 1.0, 2.0];
        let y = [1.0, 3.0, 5.0];
        assert_relative_eq!(fit_slope(&x, &y), 2.0);
    }

    #[test]
    fn bochkarev_examples() {
        let g = grid();
        let z = Sequence::zeros(3);
        assert!(bochkarev_chain_check(&z, 4.0, 2, &g).unwrap().passed());
        let spike = Sequence::from_real(&[1.0]).unwrap();
        let r = bochkarev_chain_check(&spike, 4.0, 1, &g).unwrap();
        assert_relative_eq!(r.lhs, E.recip() * 2f64.ln().powf(-0.25), max_relative = 1e-14);
        assert!(r.passed(), "{r:?}");
        let mut c = Corpus::new(3);
        for _ in 0..20 {
            let a = c.sequence_up_to(64);
            for q in [3.0, 4.0, f64::INFINITY] {
                let r = bochkarev_chain_all_n(&a, q, &g).unwrap();
                assert!(r.passed(), "{r:?}");
            }
        }
        assert!(bochkarev_chain_check(&spike, 2.0, 1, &g).is_err());
    }

    #[test]
    fn bochkarev_integral_step() {
        for q in [2.5, 3.0, 4.0, 10.0] {
            for n in 1..200 {
                let (l, r) = bochkarev_tail_step(q, n).unwrap();
                assert!(l >= r);
            }
        }
    }

    #[test]
    fn imboch_examples() {
        let g = grid();
        assert!(imboch_check(&Sequence::zeros(2), 2.0, 4.0, 1, &g).unwrap().passed());
        let spike = Sequence::from_real(&[1.0]).unwrap();
        let r = imboch_check(&spike, 2.0, 4.0, 1, &g).unwrap();
        assert!(r.passed(), "{r:?}");
        // a single entry makes every step of the chain an equality
        assert_relative_eq!(r.lhs, r.rhs, max_relative = 1e-12);
        let mut c = Corpus::new(5);
        for _ in 0..20 {
            let a = c.sequence_up_to(64);
            for (p, q) in [(1.0, 2.0), (2.0, 3.0), (2.0, 4.0)] {
                for n in [1, 4, 16] {
                    assert!(imboch_check(&a, p, q, n, &g).unwrap().passed());
                }
            }
        }
    }

    #[test]
    fn remark38_examples() {
        let spike = Sequence::from_real(&[1.0]).unwrap();
        let r = remark38_check(&spike, 3.0).unwrap();
        assert!(r.passed());
        assert!(r.notes.contains("0.000e0"), "{}", r.notes);
        assert!(remark38_check(&Sequence::zeros(4), 3.0).unwrap().passed());
        let mut c = Corpus::new(6);
        for _ in 0..50 {
            let a = c.sequence_up_to(128);
            for q in [3.0, 4.0] {
                assert!(remark38_check(&a, q).unwrap().passed());
            }
        }
    }

    #[test]
    fn report_only_checks() {
        let g = grid();
        let zero = DyadicStepFunction::constant(3, Complex64::new(0.0, 0.0)).unwrap();
        assert!(grand_hy_check(&zero, 0.0, 2.0, SystemChoice::Walsh, &g).unwrap().passed());
        assert!(theorem16_check(&zero, 4.0, 4.0, SystemChoice::Walsh).unwrap().passed());
        let one = DyadicStepFunction::constant(3, Complex64::new(1.0, 0.0)).unwrap();
        let r = grand_hy_check(&one, 0.0, f64::INFINITY, SystemChoice::Walsh, &g).unwrap();
        assert_eq!(r.verdict, Verdict::ReportOnly);
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
        let r = theorem16_check(&one, 4.0, 4.0, SystemChoice::Walsh).unwrap();
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
    }

    #[test]
    fn suites_reject_empty_corpus() {
        let cfg = SuiteConfig {
            count: Some(0),
            ..SuiteConfig::default()
        };
        assert!(suite_jobs(Suite::Remark38, &cfg).is_err());
    }

    #[test]
    fn small_suites_pass_and_are_deterministic() {
        let cfg = SuiteConfig {
            count: Some(3),
            eps_samples: 64,
            ..SuiteConfig::default()
        };
        let a = run_suites(&Suite::ALL, &cfg).unwrap();
        let b = run_suites(&Suite::ALL, &cfg).unwrap();
        assert_eq!(a, b);
        for r in &a {
            assert!(!r.verdict.is_failure(), "{r:?}");
        }
    }
}
