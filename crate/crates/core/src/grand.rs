//! Grand Lorentz quasi-norms: `sup_{0<eps<1} eps^theta N_eps(f)` with
//! `N_eps` an `eps`-shifted Lorentz norm.
//!
//! The supremum (or, for the "small" grand norms, the infimum) over `eps` is
//! located on a logarithmic grid and then polished by golden-section search
//! between the neighbours of the best sample.

use crate::error::{invalid, Error, Result};
use crate::norms::{lorentz_fun_sorted, recip, NormParams, StarredTerms};
use crate::rearrange::{DyadicStepFunction, Sequence};

/// Sampling window for `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsGrid {
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
}

pub const EPS_MIN: f64 = 1e-9;

impl Default for EpsGrid {
    fn default() -> Self {
        EpsGrid {
            lo: EPS_MIN,
            hi: 1.0 - EPS_MIN,
            samples: 2048,
        }
    }
}

impl EpsGrid {
    pub fn new(lo: f64, hi: f64, samples: usize) -> Result<Self> {
        let g = EpsGrid { lo, hi, samples };
        g.validate()?;
        Ok(g)
    }

    /// Default window, `samples` points.
    pub fn with_samples(samples: usize) -> Self {
        EpsGrid {
            samples,
            ..EpsGrid::default()
        }
    }

    /// Same sample count on `[EPS_MIN, upper * (1 - EPS_MIN)]`.
    pub fn capped(self, upper: f64) -> Self {
        EpsGrid {
            hi: self.hi.min(upper * (1.0 - EPS_MIN)),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0 && self.lo < self.hi && self.hi.is_finite()) || self.samples < 3 {
            return Err(invalid(format!(
                "eps grid needs 0 < lo < hi and >= 3 samples, got [{}, {}] x {}",
                self.lo, self.hi, self.samples
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let (a, b) = (self.lo.ln(), self.hi.ln());
        let m = (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| {
                if i == 0 {
                    self.lo
                } else if i + 1 == self.samples {
                    self.hi
                } else {
                    (a + (b - a) * i as f64 / m).exp()
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Max,
    Min,
}

/// Sampled profile `Phi(eps)` with its located extremum.
///
/// For a [`Extremum::Min`] search `argmax_eps` and `sup_value` hold the
/// minimiser and the minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsProfile {
    pub eps_values: Vec<f64>,
    pub profile_values: Vec<f64>,
    pub argmax_eps: f64,
    pub sup_value: f64,
    /// The extremum sits at an end of the search window, so the true value
    /// is a limit rather than an attained extremum.
    pub at_boundary: bool,
}

fn better(mode: Extremum, a: f64, b: f64) -> bool {
    match mode {
        Extremum::Max => a > b,
        Extremum::Min => a < b,
    }
}

/// Locate the extremum of `phi` on `grid`, then refine by golden section.
///
/// In max mode any divergent sample makes the whole supremum divergent; in
/// min mode divergent samples count as `+inf`.
pub fn optimize_eps<F>(phi: F, grid: &EpsGrid, mode: Extremum, refine_tol: f64) -> Result<EpsProfile>
where
    F: Fn(f64) -> Result<f64>,
{
    grid.validate()?;
    let eval = |e: f64| -> Result<f64> {
        match phi(e) {
            Err(Error::Divergent(_)) if mode == Extremum::Min => Ok(f64::INFINITY),
            other => other,
        }
    };
    let xs = grid.points();
    let mut ys = Vec::with_capacity(xs.len());
    for &x in &xs {
        ys.push(eval(x)?);
    }
    let mut best = 0;
    for i in 1..ys.len() {
        if better(mode, ys[i], ys[best]) {
            best = i;
        }
    }
    let mut arg = xs[best];
    let mut val = ys[best];
    let at_boundary = best == 0 || best + 1 == xs.len();

    if val.is_finite() {
        let mut a = xs[best.saturating_sub(1)];
        let mut b = xs[(best + 1).min(xs.len() - 1)];
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let mut fc = eval(c)?;
        let mut fd = eval(d)?;
        let mut iters = 0;
        while (b - a) > refine_tol * 0.5 * (a + b) && iters < 200 {
            if better(mode, fc, fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = eval(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = eval(d)?;
            }
            iters += 1;
        }
        for (x, y) in [(c, fc), (d, fd)] {
            if better(mode, y, val) {
                arg = x;
                val = y;
            }
        }
    }

    Ok(EpsProfile {
        eps_values: xs,
        profile_values: ys,
        argmax_eps: arg,
        sup_value: val,
        at_boundary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrandParams {
    pub theta: f64,
    pub base: NormParams,
    pub eps_grid: EpsGrid,
    pub refine_tol: f64,
}

impl GrandParams {
    pub fn new(theta: f64, base: NormParams) -> Self {
        GrandParams {
            theta,
            base,
            eps_grid: EpsGrid::default(),
            refine_tol: 1e-8,
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.eps_grid.samples = samples;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta >= 0.0) || !self.theta.is_finite() {
            return Err(invalid(format!("theta must be finite and >= 0, got {}", self.theta)));
        }
        if !(self.refine_tol > 0.0) {
            return Err(invalid("refine_tol must be positive"));
        }
        self.base.validate()?;
        self.eps_grid.validate()
    }
}

/// Cesaro exponent the grand starred norms use: 2 at `p = 2`, `p` otherwise.
pub fn default_inner_alpha(p: f64) -> f64 {
    if p == 2.0 {
        2.0
    } else {
        p
    }
}

/// `||f||_{G^theta L_{p,q}}` and the profile `eps -> eps^theta ||t^(1/p + eps) f*||`.
pub fn grand_fun_norm(f: &DyadicStepFunction, gp: &GrandParams) -> Result<(f64, EpsProfile)> {
    gp.validate()?;
    let v = f.rearranged();
    let inv_p = recip(gp.base.p);
    let (q, theta) = (gp.base.q, gp.theta);
    let prof = optimize_eps(
        |e| Ok(e.powf(theta) * lorentz_fun_sorted(&v, inv_p + e, q)?),
        &gp.eps_grid,
        Extremum::Max,
        gp.refine_tol,
    )?;
    Ok((prof.sup_value, prof))
}

/// Evaluator for `eps -> (sum_k (k^(1/p - eps) c_k)^q / k)^(1/q)` with
/// certified tails.
#[derive(Debug, Clone)]
pub struct StarredProfile {
    terms: StarredTerms,
    q: f64,
}

impl StarredProfile {
    pub fn new(a: &Sequence, p: f64, q: f64, alpha: f64) -> Result<Self> {
        NormParams::new(p, q).with_alpha(alpha).validate()?;
        Ok(StarredProfile {
            terms: StarredTerms::new(&a.rearranged(), recip(p), alpha),
            q,
        })
    }

    /// Enclosure of the shifted starred sum at `eps`.
    pub fn at(&self, eps: f64) -> Result<crate::sum::Bracket> {
        self.terms.eval(eps, self.q)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// The supremum over `eps` is finite only if the tail exponent
    /// `1/p - 1/alpha - eps` is negative for every `eps > 0`.
    pub fn check_summable(&self) -> Result<()> {
        let e0 = self.terms.tail_exponent(0.0);
        if !self.is_zero() && e0 > 0.0 {
            return Err(Error::Divergent(format!(
                "1/p - 1/alpha = {e0:.6} > 0: the starred sum diverges for eps < {e0:.6}"
            )));
        }
        Ok(())
    }
}

/// `||a||_{G^theta l*_{p,q}}` with Cesaro exponent `gp.base.inner_alpha`.
pub fn grand_seq_star_norm(a: &Sequence, gp: &GrandParams) -> Result<(f64, EpsProfile)> {
    gp.validate()?;
    let sp = StarredProfile::new(a, gp.base.p, gp.base.q, gp.base.inner_alpha)?;
    sp.check_summable()?;
    let theta = gp.theta;
    let prof = optimize_eps(
        |e| Ok(e.powf(theta) * sp.at(e)?.mid()),
        &gp.eps_grid,
        Extremum::Max,
        gp.refine_tol,
    )?;
    Ok((prof.sup_value, prof))
}

/// `||a||_{G^theta l_{p,q}}` (plain rearrangement, no Cesaro means).
pub fn grand_seq_norm(a: &Sequence, gp: &GrandParams) -> Result<(f64, EpsProfile)> {
    gp.validate()?;
    let v = a.rearranged();
    let inv_p = recip(gp.base.p);
    let (q, theta) = (gp.base.q, gp.theta);
    let prof = optimize_eps(
        |e| Ok(e.powf(theta) * crate::norms::lorentz_seq_sorted(&v, inv_p - e, q)),
        &gp.eps_grid,
        Extremum::Max,
        gp.refine_tol,
    )?;
    Ok((prof.sup_value, prof))
}

/// Stationary point `(1/p - 1/q) / ln n` of `eps^(1/p - 1/q) n^(-eps)`,
/// clamped into `(0, 1)`.
pub fn eps_argmax_analytic(n: usize, p: f64, q: f64) -> Result<f64> {
    if n < 2 {
        return Err(invalid(format!("eps_argmax_analytic needs n >= 2, got {n}")));
    }
    if !(p >= 1.0 && p < q) {
        return Err(invalid(format!("eps_argmax_analytic needs 1 <= p < q, got p = {p}, q = {q}")));
    }
    let e = (1.0 / p - recip(q)) / (n as f64).ln();
    Ok(e.clamp(EPS_MIN, 1.0 - EPS_MIN))
}

/// `eps^(1/p - 1/q) n^(-eps)`, the expression `eps_argmax_analytic` maximises.
pub fn lemma_profile(eps: f64, n: usize, p: f64, q: f64) -> f64 {
    (eps.ln() * (1.0 / p - recip(q)) - eps * (n as f64).ln()).exp()
}
