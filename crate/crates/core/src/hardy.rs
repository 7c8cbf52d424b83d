//! Hardy inequalities for the head operator `t -> (int_0^t f*^r)^(1/r)` and
//! the tail operator `t -> (int_t^1 f*^r)^(1/r)`, with their explicit
//! constant `(r alpha)^(-1/r)`, and the grand-norm corollaries.
//!
//! The left sides are integrated directly: on every cell the inner integral
//! is linear, `A + B t`, so the outer integrand is `t^(gamma-1) (A+Bt)^kappa`,
//! handled in closed form where possible and by adaptive quadrature
//! otherwise. The right sides go through the norms module.

use crate::error::{invalid, Error, Result};
use crate::grand::{optimize_eps, EpsGrid, Extremum};
use crate::norms::lorentz_fun_sorted;
use crate::quad::integrate;
use crate::rearrange::DyadicStepFunction;
use crate::report::CheckReport;
use crate::sum::NeumaierSum;

const CELL_TOL: f64 = 1e-13;

/// Parameters `(alpha, r, q)` with `alpha > 0` and `0 < r <= q <= inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyParams {
    pub alpha: f64,
    pub r: f64,
    pub q: f64,
}

impl HardyParams {
    pub fn new(alpha: f64, r: f64, q: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(invalid(format!("Hardy exponent alpha must be positive, got {alpha}")));
        }
        if !(r > 0.0) || !r.is_finite() || !(q >= r) {
            return Err(invalid(format!("need 0 < r <= q, got r = {r}, q = {q}")));
        }
        Ok(HardyParams { alpha, r, q })
    }

    /// `(r alpha)^(-1/r)`.
    pub fn constant(&self) -> f64 {
        (self.r * self.alpha).powf(-1.0 / self.r)
    }
}

/// Per-cell data of `F(t) = A + B t` on `((i-1)h, ih]`.
struct Linear {
    a: f64,
    b: f64,
    lo: f64,
    hi: f64,
}

/// `int_0^t f*^r = A + B t` on each cell (values normalised by `top`).
fn head_pieces(v: &[f64], r: f64) -> Vec<Linear> {
    let n = v.len();
    let h = 1.0 / n as f64;
    let mut below = NeumaierSum::new();
    let mut out = Vec::with_capacity(n);
    for (i, &x) in v.iter().enumerate() {
        let w = x.powf(r);
        let lo = i as f64 * h;
        out.push(Linear {
            a: below.value() * h - w * lo,
            b: w,
            lo,
            hi: (i + 1) as f64 * h,
        });
        below.add(w);
    }
    out
}

/// `int_t^1 f*^r = A + B t` on each cell.
fn tail_pieces(v: &[f64], r: f64) -> Vec<Linear> {
    let n = v.len();
    let h = 1.0 / n as f64;
    let mut above = NeumaierSum::new();
    let mut out = Vec::with_capacity(n);
    for (i, &x) in v.iter().enumerate().rev() {
        let w = x.powf(r);
        let hi = (i + 1) as f64 * h;
        out.push(Linear {
            a: above.value() * h + w * hi,
            b: -w,
            lo: i as f64 * h,
            hi,
        });
        above.add(w);
    }
    out.reverse();
    out
}

/// `int_lo^hi t^(gamma-1) (A + B t)^kappa dt` for `lo > 0`, or `lo = 0` with
/// `gamma > 0`.
fn cell_integral(c: &Linear, gamma: f64, kappa: f64) -> f64 {
    let lin = |t: f64| (c.a + c.b * t).max(0.0);
    if c.b == 0.0 {
        if c.a <= 0.0 {
            return 0.0;
        }
        let span = if c.lo == 0.0 {
            c.hi.powf(gamma) / gamma
        } else {
            (c.hi.powf(gamma) - c.lo.powf(gamma)) / gamma
        };
        return c.a.powf(kappa) * span;
    }
    if c.lo == 0.0 {
        // u = t^gamma removes the endpoint singularity.
        let upper = c.hi.powf(gamma);
        let g = |u: f64| lin(u.powf(1.0 / gamma)).powf(kappa);
        return integrate(g, 0.0, upper, CELL_TOL, 0.0).value / gamma;
    }
    let g = |t: f64| t.powf(gamma - 1.0) * lin(t).powf(kappa);
    integrate(g, c.lo, c.hi, CELL_TOL, 0.0).value
}

/// `(int_0^1 (t^(-alpha) (int_0^t f*^r)^(1/r))^q dt/t)^(1/q)`, `q < inf`.
pub fn head_lhs(f: &DyadicStepFunction, alpha: f64, r: f64, q: f64) -> Result<f64> {
    head_lhs_sorted(&f.rearranged(), alpha, r, q)
}

fn head_lhs_sorted(v: &[f64], alpha: f64, r: f64, q: f64) -> Result<f64> {
    if !q.is_finite() {
        return Err(invalid("the head inequality is stated for q < inf"));
    }
    let top = v[0];
    if top == 0.0 {
        return Ok(0.0);
    }
    let gamma0 = q * (1.0 / r - alpha);
    if gamma0 <= 0.0 {
        return Err(Error::Divergent(format!(
            "alpha = {alpha} >= 1/r = {}: t^(-alpha q) (int_0^t f*^r)^(q/r) is not integrable at 0",
            1.0 / r
        )));
    }
    let scaled: Vec<f64> = v.iter().map(|x| x / top).collect();
    let pieces = head_pieces(&scaled, r);
    let (gamma, kappa) = (-alpha * q, q / r);
    let mut acc = NeumaierSum::new();
    for (i, c) in pieces.iter().enumerate() {
        if i == 0 {
            // F(t) = v_1^r t on the first cell.
            acc.add(c.b.powf(kappa) * c.hi.powf(gamma0) / gamma0);
        } else {
            acc.add(cell_integral(c, gamma, kappa));
        }
    }
    Ok(top * acc.value().powf(1.0 / q))
}

/// `(int_0^1 (t^alpha (int_t^1 f*^r)^(1/r))^q dt/t)^(1/q)`, sup form at `q = inf`.
pub fn tail_lhs(f: &DyadicStepFunction, alpha: f64, r: f64, q: f64) -> f64 {
    tail_lhs_sorted(&f.rearranged(), alpha, r, q)
}

fn tail_lhs_sorted(v: &[f64], alpha: f64, r: f64, q: f64) -> f64 {
    let top = v[0];
    if top == 0.0 {
        return 0.0;
    }
    let scaled: Vec<f64> = v.iter().map(|x| x / top).collect();
    let pieces = tail_pieces(&scaled, r);
    if q.is_infinite() {
        // maximise t^(alpha r) (A + B t) on each cell
        let ar = alpha * r;
        let val = |c: &Linear, t: f64| t.powf(ar) * (c.a + c.b * t).max(0.0);
        let mut best: f64 = 0.0;
        for c in &pieces {
            best = best.max(val(c, c.hi));
            if c.b != 0.0 {
                let t = -ar * c.a / (c.b * (1.0 + ar));
                if t > c.lo && t < c.hi {
                    best = best.max(val(c, t));
                }
            }
        }
        return top * best.powf(1.0 / r);
    }
    let (gamma, kappa) = (alpha * q, q / r);
    let acc: NeumaierSum = pieces.iter().map(|c| cell_integral(c, gamma, kappa)).collect();
    top * acc.value().powf(1.0 / q)
}

fn hardy_params(r: f64, q: f64, alpha: f64) -> impl Fn(CheckReport) -> CheckReport {
    move |rep| rep.param("alpha", alpha).param("r", r).param("q", q)
}

/// Head inequality with constant `(r alpha)^(-1/r)`.
pub fn hardy_head_check(f: &DyadicStepFunction, hp: &HardyParams, rel_tol: f64) -> CheckReport {
    let name = "hardy_head";
    let tag = hardy_params(hp.r, hp.q, hp.alpha);
    let v = f.rearranged();
    let lhs = head_lhs_sorted(&v, hp.alpha, hp.r, hp.q);
    let rhs = lorentz_fun_sorted(&v, 1.0 / hp.r - hp.alpha, hp.q).map(|x| hp.constant() * x);
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => tag(CheckReport::bound(name, l, r, hp.constant(), rel_tol)),
        (Err(e), _) | (_, Err(e)) => tag(CheckReport::diverged(name, e.to_string())),
    }
}

/// Tail inequality with constant `(r alpha)^(-1/r)`.
pub fn hardy_tail_check(f: &DyadicStepFunction, hp: &HardyParams, rel_tol: f64) -> CheckReport {
    let name = "hardy_tail";
    let tag = hardy_params(hp.r, hp.q, hp.alpha);
    let v = f.rearranged();
    let lhs = tail_lhs_sorted(&v, hp.alpha, hp.r, hp.q);
    match lorentz_fun_sorted(&v, 1.0 / hp.r + hp.alpha, hp.q) {
        Ok(x) => tag(CheckReport::bound(name, lhs, hp.constant() * x, hp.constant(), rel_tol)),
        Err(e) => tag(CheckReport::diverged(name, e.to_string())),
    }
}

/// Constant of the grand corollaries: `max(1, r^(-1/r))`, which is what the
/// Hardy constant `(r eps)^(-1/r)` leaves after `eps^(-1/r)` is absorbed into
/// the grand weight.
pub fn grand_corollary_constant(r: f64) -> f64 {
    r.powf(-1.0 / r).max(1.0)
}

fn grand_validate(r: f64, q: f64, theta: f64) -> Result<()> {
    if !(r > 0.0 && q >= r && q.is_finite()) {
        return Err(invalid(format!("need 0 < r <= q < inf, got r = {r}, q = {q}")));
    }
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(invalid(format!("theta must be finite and >= 0, got {theta}")));
    }
    Ok(())
}

/// `inf_{0<eps<1/r} eps^(-theta) head_eps(f) <= c inf_{0<eps<1/r} eps^(-theta-1/r) ||t^(1/r - eps) f*||`,
/// where `head_eps` is the head left side at `alpha = eps`.
pub fn hardy_grand_head_check(
    f: &DyadicStepFunction,
    r: f64,
    q: f64,
    theta: f64,
    grid: &EpsGrid,
    rel_tol: f64,
) -> Result<CheckReport> {
    grand_validate(r, q, theta)?;
    let name = "hardy_grand_head";
    let theta1 = theta + 1.0 / r;
    let c = grand_corollary_constant(r);
    let v = f.rearranged();
    let tag = |rep: CheckReport| rep.param("r", r).param("q", q).param("theta", theta);
    if v[0] == 0.0 {
        return Ok(tag(CheckReport::bound(name, 0.0, 0.0, c, rel_tol)));
    }
    let grid = grid.capped(1.0 / r);
    let left = |e: f64| Ok(e.powf(-theta) * head_lhs_sorted(&v, e, r, q)?);
    let right = |e: f64| Ok(c * e.powf(-theta1) * lorentz_fun_sorted(&v, 1.0 / r - e, q)?);
    let lp = optimize_eps(left, &grid, Extremum::Min, 1e-8)?;
    let rp = optimize_eps(right, &grid, Extremum::Min, 1e-8)?;
    // The inequality holds at every eps, so the left infimum may also be
    // read off at the right minimiser.
    let lhs = lp.sup_value.min(left(rp.argmax_eps)?);
    let rep = CheckReport::bound(name, lhs, rp.sup_value, c, rel_tol)
        .param("eps_lhs", lp.argmax_eps)
        .param("eps_rhs", rp.argmax_eps);
    Ok(tag(rep))
}

/// `sup_{0<eps<min(1,1/r)} eps^(theta+1/r) tail_eps(f) <= c ||f||_{G^theta L_{r,q}}`.
pub fn hardy_grand_tail_check(
    f: &DyadicStepFunction,
    r: f64,
    q: f64,
    theta: f64,
    grid: &EpsGrid,
    rel_tol: f64,
) -> Result<CheckReport> {
    grand_validate(r, q, theta)?;
    let name = "hardy_grand_tail";
    let theta1 = theta + 1.0 / r;
    let c = grand_corollary_constant(r);
    let v = f.rearranged();
    let tag = |rep: CheckReport| rep.param("r", r).param("q", q).param("theta", theta);
    if v[0] == 0.0 {
        return Ok(tag(CheckReport::bound(name, 0.0, 0.0, c, rel_tol)));
    }
    let left = |e: f64| Ok(e.powf(theta1) * tail_lhs_sorted(&v, e, r, q));
    let right = |e: f64| Ok(c * e.powf(theta) * lorentz_fun_sorted(&v, 1.0 / r + e, q)?);
    let lp = optimize_eps(left, &grid.capped(1.0 / r), Extremum::Max, 1e-8)?;
    let rp = optimize_eps(right, grid, Extremum::Max, 1e-8)?;
    let rhs = rp.sup_value.max(right(lp.argmax_eps)?);
    let rep = CheckReport::bound(name, lp.sup_value, rhs, c, rel_tol)
        .param("eps_lhs", lp.argmax_eps)
        .param("eps_rhs", rp.argmax_eps);
    Ok(tag(rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn one(level: u32) -> DyadicStepFunction {
        DyadicStepFunction::constant(level, Complex64::new(1.0, 0.0)).unwrap()
    }

    fn random_f(rng: &mut ChaCha8Rng, level: u32) -> DyadicStepFunction {
        let vals: Vec<f64> = (0..1usize << level).map(|_| rng.random_range(-4.0..4.0)).collect();
        DyadicStepFunction::from_real(level, &vals).unwrap()
    }

    /// Reference integral on a fine uniform composite Simpson rule over
    /// `[delta, 1]` plus the exact `[0, delta]` piece for power-law heads.
    fn simpson<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = g(a) + g(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * g(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn head_constant_example() {
        let hp = HardyParams::new(0.5, 1.0, 1.0).unwrap();
        let rep = hardy_head_check(&one(3), &hp, 1e-12);
        assert_relative_eq!(rep.lhs, 2.0, max_relative = 1e-12);
        assert_relative_eq!(rep.rhs, 4.0, max_relative = 1e-12);
        assert_relative_eq!(rep.margin, 2.0, max_relative = 1e-12);
        assert!(rep.passed());
    }

    #[test]
    fn tail_equality_case() {
        let hp = HardyParams::new(1.0, 1.0, 1.0).unwrap();
        let rep = hardy_tail_check(&one(4), &hp, 1e-12);
        assert_relative_eq!(rep.lhs, 0.5, max_relative = 1e-13);
        assert_relative_eq!(rep.rhs, 0.5, max_relative = 1e-13);
        assert!(rep.margin.abs() < 1e-12);
        assert!(rep.passed());
        let hp = HardyParams::new(1.0, 1.0, f64::INFINITY).unwrap();
        let rep = hardy_tail_check(&one(4), &hp, 1e-12);
        assert_relative_eq!(rep.lhs, 0.25, max_relative = 1e-14);
        assert_relative_eq!(rep.rhs, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn zero_function() {
        let z = DyadicStepFunction::constant(2, Complex64::new(0.0, 0.0)).unwrap();
        let hp = HardyParams::new(0.3, 1.0, 2.0).unwrap();
        assert!(hardy_head_check(&z, &hp, 0.0).passed());
        assert!(hardy_tail_check(&z, &hp, 0.0).passed());
        let g = EpsGrid::with_samples(16);
        assert!(hardy_grand_head_check(&z, 1.0, 2.0, 0.0, &g, 0.0).unwrap().passed());
        assert!(hardy_grand_tail_check(&z, 1.0, 2.0, 0.0, &g, 0.0).unwrap().passed());
    }

    #[test]
    fn head_divergence_reported() {
        let hp = HardyParams::new(1.0, 1.0, 2.0).unwrap();
        let rep = hardy_head_check(&one(2), &hp, 0.0);
        assert_eq!(rep.verdict, Verdict::Diverged);
    }

    #[test]
    fn lhs_matches_simpson_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let f = random_f(&mut rng, 3);
            let v = f.rearranged();
            let n = v.len();
            let (r, q, alpha) = (2.0, 3.0, 0.25);
            let inner_head = |t: f64| {
                let mut s = 0.0;
                for (i, x) in v.iter().enumerate() {
                    let lo = i as f64 / n as f64;
                    let hi = (i + 1) as f64 / n as f64;
                    s += x.powf(r) * (t.min(hi) - lo).max(0.0);
                }
                s
            };
            let total = inner_head(1.0);
            // head: near 0, F(t) = v1^r t exactly, split at delta = 1/n
            let d = 1.0 / n as f64;
            let gamma0 = q * (1.0 / r - alpha);
            let near = v[0].powf(q) * d.powf(gamma0) / gamma0;
            let far = simpson(|t| t.powf(-alpha * q - 1.0) * inner_head(t).powf(q / r), d, 1.0, 200_000);
            let oracle = (near + far).powf(1.0 / q);
            assert_relative_eq!(head_lhs(&f, alpha, r, q).unwrap(), oracle, max_relative = 1e-9);

            let got1 = tail_lhs(&f, 0.5, r, q);
            let oracle1 = simpson(
                |t| t.powf(0.5 * q - 1.0) * (total - inner_head(t)).max(0.0).powf(q / r),
                0.0,
                1.0,
                200_000,
            )
            .powf(1.0 / q);
            assert_relative_eq!(got1, oracle1, max_relative = 1e-6);
        }
    }

    #[test]
    fn random_instances_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let f = random_f(&mut rng, 5);
            for &r in &[0.5, 1.0, 2.0] {
                for &alpha in &[0.1, 0.25, 0.4] {
                    for &q in &[r, 4.0, f64::INFINITY] {
                        let hp = HardyParams::new(alpha, r, q).unwrap();
                        if q.is_finite() && alpha < 1.0 / r {
                            let rep = hardy_head_check(&f, &hp, 1e-12);
                            assert!(rep.passed(), "{rep:?}");
                        }
                        let rep = hardy_tail_check(&f, &hp, 1e-12);
                        assert!(rep.passed(), "{rep:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn margins_scale_linearly() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_f(&mut rng, 4);
        let hp = HardyParams::new(0.3, 1.0, 2.0).unwrap();
        let a = hardy_tail_check(&f, &hp, 0.0);
        let b = hardy_tail_check(&f.scaled(3.0), &hp, 0.0);
        assert_relative_eq!(b.margin, 3.0 * a.margin, max_relative = 1e-10);
    }

    #[test]
    fn grand_corollaries() {
        let g = EpsGrid::with_samples(128);
        let rep = hardy_grand_head_check(&one(3), 1.0, 1.0, 0.0, &g, 1e-10).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let rep = hardy_grand_tail_check(&one(3), 1.0, 2.0, 0.0, &g, 1e-10).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for i in 0..10 {
            let f = random_f(&mut rng, 4);
            let (r, q, theta) = [(0.5, 1.0, 0.0), (1.0, 2.0, 0.5), (2.0, 2.0, 1.0)][i % 3];
            assert!(hardy_grand_head_check(&f, r, q, theta, &g, 1e-10).unwrap().passed());
            assert!(hardy_grand_tail_check(&f, r, q, theta, &g, 1e-10).unwrap().passed());
        }
    }
}
