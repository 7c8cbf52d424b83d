//! K-functional upper bounds for couples `(G^{1/p} l*_{p,q0}, G^{1/p} l*_{p,q1})`.
//!
//! The true K-functional is an infimum over all splits `a = a0 + a1`. Here
//! it is bounded from above by a finite family of splits of the rearranged
//! moduli, so every quantity built on [`k_upper`] over-estimates its exact
//! counterpart.

use crate::error::{invalid, Result};
use crate::grand::{grand_seq_star_norm, EpsGrid, GrandParams};
use crate::norms::{lambda_norm, recip, value_or_inf, DyadicBlocks, NormParams};
use crate::rearrange::Sequence;
use crate::report::{CheckReport, Verdict};

/// Couple of grand Lorentz sequence spaces sharing `p`, with `theta = 1/p`
/// and Cesaro exponent `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KCouple {
    pub p: f64,
    pub q0: f64,
    pub q1: f64,
    /// Grid for the member-norm suprema.
    pub eps_grid: EpsGrid,
}

impl KCouple {
    pub fn new(p: f64, q0: f64, q1: f64) -> Result<Self> {
        if !(p >= 1.0 && p < q0 && q0 < q1) || p.is_infinite() || q0.is_infinite() {
            return Err(invalid(format!(
                "need 1 <= p < q0 < q1 <= inf, got p = {p}, q0 = {q0}, q1 = {q1}"
            )));
        }
        Ok(KCouple {
            p,
            q0,
            q1,
            eps_grid: EpsGrid::with_samples(256),
        })
    }

    pub fn with_grid(mut self, grid: EpsGrid) -> Self {
        self.eps_grid = grid;
        self
    }

    /// `2^{1/q0 - 1/q1}`.
    pub fn b(&self) -> f64 {
        (recip(self.q0) - recip(self.q1)).exp2()
    }

    /// `q` with `1/q = (1 - eta)/q0 + eta/q1`.
    pub fn target_q(&self, eta: f64) -> f64 {
        1.0 / ((1.0 - eta) * recip(self.q0) + eta * recip(self.q1))
    }

    /// `||a||_{G^{1/p} l*_{p,q_i}}`.
    pub fn member_norm(&self, a: &Sequence, q: f64) -> Result<f64> {
        let mut gp = GrandParams::new(1.0 / self.p, NormParams::new(self.p, q).with_alpha(self.p));
        gp.eps_grid = self.eps_grid;
        Ok(grand_seq_star_norm(a, &gp)?.0)
    }
}

/// One split of the family with its member norms.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    /// Cut index `j`: the head holds the `j` largest moduli.
    pub cut: usize,
    /// Whether the head was lowered by `a*_{j+1}`.
    pub shifted: bool,
    pub norm0: f64,
    pub norm1: f64,
}

/// Head part and remainder of the sorted moduli for one split.
pub fn decompose(sorted: &[f64], cut: usize, shifted: bool) -> (Vec<f64>, Vec<f64>) {
    let h = sorted.get(cut).copied().unwrap_or(0.0);
    let lam = if shifted { h } else { 0.0 };
    let a0: Vec<f64> = sorted.iter().take(cut).map(|&x| x - lam).collect();
    let a1: Vec<f64> = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| if i < cut { lam } else { x })
        .collect();
    (a0, a1)
}

/// The split family of `a` with member norms; `k_upper(t)` is the lower
/// envelope of the lines `norm0 + t norm1`.
#[derive(Debug, Clone, PartialEq)]
pub struct KProfile {
    pub splits: Vec<Split>,
    /// `||a||_{X0}` and `||a||_{X1}`.
    pub x0: f64,
    pub x1: f64,
}

impl KProfile {
    pub fn new(a: &Sequence, c: &KCouple) -> Result<Self> {
        let sorted = a.rearranged();
        let n = sorted.len();
        let mut splits = Vec::with_capacity(2 * n + 2);
        for cut in 0..=n {
            for shifted in [false, true] {
                // the shifted split coincides with the plain one at the ends
                if shifted && (cut == 0 || cut == n) {
                    continue;
                }
                let (a0, a1) = decompose(&sorted, cut, shifted);
                splits.push(Split {
                    cut,
                    shifted,
                    norm0: c.member_norm(&Sequence::from_real(&a0)?, c.q0)?,
                    norm1: c.member_norm(&Sequence::from_real(&a1)?, c.q1)?,
                });
            }
        }
        let x0 = splits.last().expect("cut n present").norm0;
        let x1 = splits[0].norm1;
        Ok(KProfile { splits, x0, x1 })
    }

    pub fn k_upper(&self, t: f64) -> f64 {
        self.splits
            .iter()
            .map(|s| s.norm0 + t * s.norm1)
            .fold(f64::INFINITY, f64::min)
    }

    /// `(sum_{k>=0} (b^{-eta k} k_upper(b^k))^tau)^{1/tau}`, with the tail
    /// after the last evaluated term bounded through `k_upper <= ||a||_{X0}`.
    pub fn interp_norm_upper(&self, c: &KCouple, eta: f64, tau: f64) -> Result<f64> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(invalid(format!("eta must lie in (0, 1), got {eta}")));
        }
        if !(tau > 0.0) {
            return Err(invalid(format!("tau must be positive, got {tau}")));
        }
        if self.x0 == 0.0 {
            return Ok(0.0);
        }
        let b = c.b();
        let decay = b.powf(-eta);
        if tau.is_infinite() {
            let mut best: f64 = 0.0;
            let mut w = 1.0;
            let mut t = 1.0;
            while w * self.x0 >= 1e-12 * best {
                best = best.max(w * self.k_upper(t));
                w *= decay;
                t *= b;
            }
            return Ok(best);
        }
        let mut total = 0.0;
        let mut w = 1.0;
        let mut t = 1.0;
        loop {
            total += (w * self.k_upper(t)).powf(tau);
            w *= decay;
            t *= b;
            let tail = (w * self.x0).powf(tau) / (1.0 - decay.powf(tau));
            if tail < 1e-12 * total {
                return Ok((total + tail).powf(1.0 / tau));
            }
        }
    }
}

/// Upper bound for `K(t, a; X0, X1)`.
pub fn k_upper(t: f64, a: &Sequence, c: &KCouple) -> Result<f64> {
    if !(t > 0.0) {
        return Err(invalid(format!("t must be positive, got {t}")));
    }
    Ok(KProfile::new(a, c)?.k_upper(t))
}

/// Upper bound for the discretised `(X0, X1)_{eta, tau}` norm.
pub fn interp_norm_upper(a: &Sequence, c: &KCouple, eta: f64, tau: f64) -> Result<f64> {
    KProfile::new(a, c)?.interp_norm_upper(c, eta, tau)
}

/// Per-`k` comparison `k^{1/q} sup_{s>=k} ((1/s) sum_{m<=2^s} (a*_m)^p)^{1/p}`
/// against `b^{-eta k} k_upper(b^k)`, and the aggregate ratio
/// `||a||_{Lambda_{p,q,tau}} / interp_norm_upper`. Report-only.
pub fn gor_chain_check(a: &Sequence, c: &KCouple, eta: f64, tau: f64) -> Result<CheckReport> {
    let name = "gor_chain";
    let q = c.target_q(eta);
    let tag = |r: CheckReport| {
        r.param("p", c.p)
            .param("q0", c.q0)
            .param("q1", c.q1)
            .param("eta", eta)
            .param("tau", tau)
    };
    if a.is_zero() {
        let mut r = CheckReport::ratio_only(name, 0.0, 0.0).note("zero input");
        r.verdict = Verdict::Pass;
        return Ok(tag(r));
    }
    let prof = KProfile::new(a, c)?;
    let blocks = DyadicBlocks::new(a, c.p)?;
    let b = c.b();
    let mut worst_k = 0.0f64;
    for k in 1..=(blocks.m0 + 2).max(8) {
        let lhs = (k as f64).powf(recip(q)) * blocks.sup_mean(k);
        let rhs = b.powf(-eta * k as f64) * prof.k_upper(b.powi(k as i32));
        worst_k = worst_k.max(lhs / rhs);
    }
    let lam = value_or_inf(&lambda_norm(a, &NormParams::new(c.p, q).with_tau(tau)));
    let interp = prof.interp_norm_upper(c, eta, tau)?;
    Ok(tag(CheckReport::ratio_only(name, lam, interp))
        .param("q", q)
        .note(format!(
            "K bounded above by {} splits, so the ratio bounds the embedding ratio from below; \
             largest per-k ratio {worst_k:.6e}",
            prof.splits.len()
        )))
}
