//! Closed-form Lorentz-type quasi-norms of sequences and dyadic step
//! functions.
//!
//! Sums over `k` that run to infinity (starred norms and `Lambda_{p,q,tau}`)
//! reduce to a pure power `c * k^(beta - 1)` once `k` passes the support of
//! the sequence; those tails go through [`crate::sum::power_tail`] and the
//! result carries the resulting bracket.

use crate::error::{invalid, Error, Result};
use crate::rearrange::{DyadicStepFunction, Sequence};
use crate::sum::{hurwitz_tail, Bracket, NeumaierSum};

/// `1/x`, with `1/inf = 0`.
pub(crate) fn recip(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

/// Index tuple selecting a quasi-norm.
///
/// `p`, `q` and `tau` are positive or `f64::INFINITY`; `inner_alpha` is the
/// Cesaro exponent used by starred norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormParams {
    pub p: f64,
    pub q: f64,
    pub tau: f64,
    pub inner_alpha: f64,
}

impl NormParams {
    pub fn new(p: f64, q: f64) -> Self {
        NormParams {
            p,
            q,
            tau: q,
            inner_alpha: 2.0,
        }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.inner_alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("q", self.q), ("tau", self.tau)] {
            if !(v > 0.0) {
                return Err(invalid(format!("{name} must be positive or inf, got {v}")));
            }
        }
        if !(self.inner_alpha >= 1.0) || !self.inner_alpha.is_finite() {
            return Err(invalid(format!(
                "inner alpha must be finite and >= 1, got {}",
                self.inner_alpha
            )));
        }
        Ok(())
    }

    /// `p' = p / (p - 1)`, defined for `p > 1`.
    pub fn conjugate_p(&self) -> Option<f64> {
        conjugate(self.p)
    }
}

/// Conjugate exponent of `p > 1` (`inf` maps to 1).
pub fn conjugate(p: f64) -> Option<f64> {
    if p.is_infinite() {
        Some(1.0)
    } else if p > 1.0 {
        Some(p / (p - 1.0))
    } else {
        None
    }
}

/// A value with a certified enclosure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certified {
    pub value: f64,
    pub bracket: Bracket,
}

impl Certified {
    pub fn exact(v: f64) -> Self {
        Certified {
            value: v,
            bracket: Bracket::exact(v),
        }
    }

    pub fn from_bracket(b: Bracket) -> Self {
        Certified {
            value: b.mid(),
            bracket: b,
        }
    }

    /// Half the bracket width.
    pub fn radius(&self) -> f64 {
        0.5 * self.bracket.width()
    }

    pub fn scale(self, c: f64) -> Self {
        Certified {
            value: self.value * c,
            bracket: self.bracket.scale(c),
        }
    }
}

/// Collapse a divergence into the `inf` sentinel.
pub fn value_or_inf(r: &Result<Certified>) -> f64 {
    match r {
        Ok(c) => c.value,
        Err(Error::Divergent(_)) => f64::INFINITY,
        Err(_) => f64::NAN,
    }
}

// ---------------------------------------------------------------------------
// sequence norms

/// `(sum_k (k^inv_p v_k)^q / k)^(1/q)` on sorted moduli, sup form for `q = inf`.
pub(crate) fn lorentz_seq_sorted(v: &[f64], inv_p: f64, q: f64) -> f64 {
    if v.first().is_none_or(|&x| x == 0.0) {
        return 0.0;
    }
    let x: Vec<f64> = v
        .iter()
        .enumerate()
        .map(|(i, &vk)| ((i + 1) as f64).powf(inv_p) * vk)
        .collect();
    let top = x.iter().cloned().fold(0.0, f64::max);
    if q.is_infinite() {
        return top;
    }
    let s: NeumaierSum = x
        .iter()
        .enumerate()
        .map(|(i, &xk)| (xk / top).powf(q) / (i + 1) as f64)
        .collect();
    top * s.value().powf(1.0 / q)
}

/// Smallest `c` with `||a||_{l_{p,inf}} <= c ||a||_{l_{p,q}}` for every `a`:
/// `max(1, q/p)^(1/q)`.
pub fn seq_embedding_constant(p: f64, q: f64) -> f64 {
    if q.is_infinite() {
        1.0
    } else {
        (q * recip(p)).max(1.0).powf(1.0 / q)
    }
}

/// `||a||_{l_{p,q}}`.
pub fn lorentz_seq_norm(a: &Sequence, pr: &NormParams) -> Result<f64> {
    pr.validate()?;
    Ok(lorentz_seq_sorted(&a.rearranged(), recip(pr.p), pr.q))
}

/// Log-domain data of `k^(1/p) c_k` with `c_k` the Cesaro mean of order
/// `alpha`, for `k = 1..n`. Shared by the plain and grand starred norms.
#[derive(Debug, Clone)]
pub(crate) struct StarredTerms {
    inv_p: f64,
    alpha: f64,
    ln_k: Vec<f64>,
    /// ln(k^(1/p) c_k)
    ln_head: Vec<f64>,
    /// ln of sum_{m <= n} (a*_m)^alpha
    ln_total: f64,
    zero: bool,
}

impl StarredTerms {
    pub(crate) fn new(sorted: &[f64], inv_p: f64, alpha: f64) -> Self {
        let n = sorted.len();
        let zero = sorted.first().is_none_or(|&x| x == 0.0);
        let mut acc = NeumaierSum::new();
        let mut ln_k = Vec::with_capacity(n);
        let mut ln_head = Vec::with_capacity(n);
        let mut ln_total = f64::NEG_INFINITY;
        if !zero {
            for (i, &v) in sorted.iter().enumerate() {
                acc.add(v.powf(alpha));
                let lk = ((i + 1) as f64).ln();
                let lp = acc.value().ln();
                ln_k.push(lk);
                ln_head.push(inv_p * lk + (lp - lk) / alpha);
                ln_total = lp;
            }
        }
        StarredTerms {
            inv_p,
            alpha,
            ln_k,
            ln_head,
            ln_total,
            zero,
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.zero
    }

    /// Exponent of `k` in `k^(1/p - shift) c_k` once `k >= n`.
    pub(crate) fn tail_exponent(&self, shift: f64) -> f64 {
        self.inv_p - shift - 1.0 / self.alpha
    }

    /// `(sum_k (k^(1/p - shift) c_k)^q / k)^(1/q)`, or the sup over `k` for
    /// `q = inf`.
    pub(crate) fn eval(&self, shift: f64, q: f64) -> Result<Bracket> {
        if self.zero {
            return Ok(Bracket::ZERO);
        }
        let n = self.ln_k.len();
        let e = self.tail_exponent(shift);
        let logs = self
            .ln_head
            .iter()
            .zip(&self.ln_k)
            .map(|(h, lk)| h - shift * lk);
        if q.is_infinite() {
            if e > 0.0 {
                return Err(Error::Divergent(format!(
                    "k^(1/p - shift - 1/alpha) grows (exponent {e:.6}); the supremum over k is infinite"
                )));
            }
            let top = logs.fold(f64::NEG_INFINITY, f64::max);
            return Ok(Bracket::exact(top.exp()));
        }
        let beta = q * e;
        if beta >= 0.0 {
            return Err(Error::Divergent(format!(
                "tail sum_k k^(beta - 1) with beta = q(1/p - shift - 1/alpha) = {beta:.6} >= 0 diverges"
            )));
        }
        let scaled: Vec<f64> = logs.map(|l| q * l).collect();
        let m = scaled.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut head = NeumaierSum::new();
        for k in 0..n - 1 {
            head.add((scaled[k] - m - self.ln_k[k]).exp());
        }
        let tail = hurwitz_tail(1.0 - beta, n as f64)?
            .scale((q / self.alpha * self.ln_total - m).exp());
        let total = tail.shift(head.value());
        Ok(total.powf(1.0 / q).scale((m / q).exp()))
    }
}

/// `||a||_{l*_{p,q}}` with Cesaro exponent `pr.inner_alpha`.
///
/// Diverges unless `1/p < 1/alpha` (for finite `q`) or `1/p <= 1/alpha`
/// (for `q = inf`), since the Cesaro means decay like `k^(-1/alpha)`.
pub fn lorentz_seq_star_norm(a: &Sequence, pr: &NormParams) -> Result<Certified> {
    pr.validate()?;
    let terms = StarredTerms::new(&a.rearranged(), recip(pr.p), pr.inner_alpha);
    terms.eval(0.0, pr.q).map(Certified::from_bracket)
}

// ---------------------------------------------------------------------------
// function norms

/// Weight of cell `i` (1-based) in `integral_0^1 t^(gamma - 1) dt` split
/// over cells of width `1/n`: `((i/n)^gamma - ((i-1)/n)^gamma) / gamma`.
pub(crate) fn cell_power_weight(i: usize, n: usize, gamma: f64) -> f64 {
    let nf = n as f64;
    if i == 1 {
        return (gamma * (1.0 / nf).ln()).exp() / gamma;
    }
    let left = (gamma * ((i - 1) as f64 / nf).ln()).exp();
    left * (gamma * (1.0 / (i - 1) as f64).ln_1p()).exp_m1() / gamma
}

/// `(integral_0^1 (t^s f*(t))^q dt/t)^(1/q)` for sorted cell values, the
/// supremum of `t^s f*(t)` for `q = inf`. Cells are `((i-1)/N, i/N]`.
pub(crate) fn lorentz_fun_sorted(v: &[f64], s: f64, q: f64) -> Result<f64> {
    if v.first().is_none_or(|&x| x == 0.0) {
        return Ok(0.0);
    }
    let n = v.len();
    let top = v[0];
    if q.is_infinite() {
        if s < 0.0 {
            return Err(Error::Divergent(format!(
                "t^s f*(t) with s = {s:.6} < 0 is unbounded near 0"
            )));
        }
        let nf = n as f64;
        return Ok(v
            .iter()
            .enumerate()
            .map(|(i, &x)| ((i + 1) as f64 / nf).powf(s) * x)
            .fold(0.0, f64::max));
    }
    if s <= 0.0 {
        return Err(Error::Divergent(format!(
            "integral of t^(q s - 1) near 0 diverges for s = {s:.6} <= 0"
        )));
    }
    let gamma = q * s;
    let acc: NeumaierSum = v
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0.0)
        .map(|(i, &x)| (x / top).powf(q) * cell_power_weight(i + 1, n, gamma))
        .collect();
    Ok(top * acc.value().powf(1.0 / q))
}

/// `||f||_{L_{p,q}}`, exact up to rounding.
pub fn lorentz_fun_norm(f: &DyadicStepFunction, pr: &NormParams) -> Result<f64> {
    pr.validate()?;
    lorentz_fun_sorted(&f.rearranged(), recip(pr.p), pr.q)
}

/// Dyadic block integrals `xi_m = (integral_{2^-m-1}^{2^-m} (f*)^p)^(1/p)`
/// for `m = 0..L-1`, plus the residual block `[0, 2^-L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct XiSequence {
    pub p: f64,
    pub blocks: Vec<f64>,
    pub residual: f64,
}

impl XiSequence {
    /// Blocks followed by the residual.
    pub fn entries(&self) -> Vec<f64> {
        let mut v = self.blocks.clone();
        v.push(self.residual);
        v
    }

    /// `sum xi^p` including the residual; equals `||f||_p^p`.
    pub fn total_power(&self) -> f64 {
        self.entries().iter().map(|x| x.powf(self.p)).sum()
    }
}

pub fn xi_coefficients(f: &DyadicStepFunction, p: f64) -> Result<XiSequence> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(invalid(format!("xi coefficients need finite p > 0, got {p}")));
    }
    let v = f.rearranged();
    let n = v.len();
    let width = f.cell_width();
    let level = f.level();
    let top = v[0];
    if top == 0.0 {
        return Ok(XiSequence {
            p,
            blocks: vec![0.0; level as usize],
            residual: 0.0,
        });
    }
    let block = |lo: usize, hi: usize| -> f64 {
        // sorted cells lo..hi (0-based, exclusive end)
        let s: NeumaierSum = v[lo..hi].iter().map(|x| (x / top).powf(p)).collect();
        top * (s.value() * width).powf(1.0 / p)
    };
    let blocks = (0..level)
        .map(|m| {
            let hi = n >> m;
            block(hi / 2, hi)
        })
        .collect();
    Ok(XiSequence {
        p,
        blocks,
        residual: block(0, 1),
    })
}

/// `||f||_{L_{p,q,tau}} = (sum_k (k^(1/q) xi*_k)^tau / k)^(1/tau)`.
pub fn lpqtau_fun_norm(f: &DyadicStepFunction, pr: &NormParams) -> Result<f64> {
    pr.validate()?;
    let xi = xi_coefficients(f, pr.p)?;
    let mut e = xi.entries();
    e.sort_by(|a, b| b.total_cmp(a));
    Ok(lorentz_seq_sorted(&e, recip(pr.q), pr.tau))
}

/// Dyadic block data behind `Lambda_{p,q,tau}`:
/// `P(m) = sum_{l <= 2^m} (a*_l)^p` and
/// `M_k = sup_{m >= k} (P(m)/m)^(1/p)` for `k = 1..=m0`, where `m0` is the
/// first `m >= 1` with `2^m >= n`. Beyond `m0`, `M_k = (S/k)^(1/p)`.
#[derive(Debug, Clone)]
pub struct DyadicBlocks {
    pub p: f64,
    pub m0: usize,
    /// `P(1), ..., P(m0)`.
    pub block_sums: Vec<f64>,
    /// `M_1, ..., M_{m0}`.
    pub sup_means: Vec<f64>,
    pub total: f64,
}

impl DyadicBlocks {
    pub fn new(a: &Sequence, p: f64) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(invalid(format!("dyadic blocks need finite p > 0, got {p}")));
        }
        let v = a.rearranged();
        let n = v.len();
        let mut m0 = 1usize;
        while (1usize << m0) < n {
            m0 += 1;
        }
        let mut prefix = Vec::with_capacity(n);
        let mut acc = NeumaierSum::new();
        for x in &v {
            acc.add(x.powf(p));
            prefix.push(acc.value());
        }
        let total = prefix.last().copied().unwrap_or(0.0);
        let block_sums: Vec<f64> = (1..=m0)
            .map(|m| {
                let upto = (1usize << m).min(n);
                if upto == 0 {
                    0.0
                } else {
                    prefix[upto - 1]
                }
            })
            .collect();
        let means: Vec<f64> = block_sums
            .iter()
            .enumerate()
            .map(|(i, s)| (s / (i + 1) as f64).powf(1.0 / p))
            .collect();
        let mut sup_means = means.clone();
        for i in (0..m0.saturating_sub(1)).rev() {
            sup_means[i] = sup_means[i].max(sup_means[i + 1]);
        }
        Ok(DyadicBlocks {
            p,
            m0,
            block_sums,
            sup_means,
            total,
        })
    }

    /// `M_k` for any `k >= 1`.
    pub fn sup_mean(&self, k: usize) -> f64 {
        assert!(k >= 1);
        if k <= self.m0 {
            self.sup_means[k - 1]
        } else {
            (self.total / k as f64).powf(1.0 / self.p)
        }
    }

    /// `P(m)` for any `m >= 1`.
    pub fn block_sum(&self, m: usize) -> f64 {
        assert!(m >= 1);
        if m <= self.m0 {
            self.block_sums[m - 1]
        } else {
            self.total
        }
    }
}

/// `||a||_{Lambda_{p,q,tau}}`; requires `p < q` for nonzero `a`.
pub fn lambda_norm(a: &Sequence, pr: &NormParams) -> Result<Certified> {
    pr.validate()?;
    if !pr.p.is_finite() {
        return Err(invalid("Lambda norm needs finite p"));
    }
    let blocks = DyadicBlocks::new(a, pr.p)?;
    lambda_from_blocks(&blocks, pr.q, pr.tau)
}

pub(crate) fn lambda_from_blocks(blocks: &DyadicBlocks, q: f64, tau: f64) -> Result<Certified> {
    if blocks.total == 0.0 {
        return Ok(Certified::exact(0.0));
    }
    let p = blocks.p;
    if p >= q {
        return Err(Error::Divergent(format!(
            "Lambda_{{p,q,tau}} is infinite for nonzero sequences when p >= q (p = {p}, q = {q})"
        )));
    }
    let inv_q = recip(q);
    let m0 = blocks.m0;
    let logs: Vec<f64> = (1..=m0)
        .map(|k| inv_q * (k as f64).ln() + blocks.sup_means[k - 1].ln())
        .collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if tau.is_infinite() {
        return Ok(Certified::exact(top.exp()));
    }
    let beta = tau * (inv_q - 1.0 / p);
    let mut head = NeumaierSum::new();
    for k in 1..m0 {
        head.add((tau * (logs[k - 1] - top) - (k as f64).ln()).exp());
    }
    let tail = hurwitz_tail(1.0 - beta, m0 as f64)?
        .scale((tau / p * blocks.total.ln() - tau * top).exp());
    let b = tail.shift(head.value()).powf(1.0 / tau).scale(top.exp());
    Ok(Certified::from_bracket(b))
}
