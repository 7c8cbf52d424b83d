//! Compensated summation and certified tails of power series.
//!
//! Tails of the form `sum_{j >= 0} (x + j)^(-s)` are evaluated with the
//! Euler-Maclaurin formula. For `y -> y^(-s)` with `s > 0` every derivative
//! has constant sign, so the remainder after the last Bernoulli correction is
//! bounded by the first omitted correction. That gives an enclosure that is
//! orders of magnitude tighter than the plain integral test at the same cost.

use crate::error::{invalid, Result};

/// Two-sided enclosure `lo <= value <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub const ZERO: Bracket = Bracket { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "bracket [{lo}, {hi}] is inverted");
        Bracket { lo, hi }
    }

    pub fn exact(v: f64) -> Self {
        Bracket { lo: v, hi: v }
    }

    /// Symmetric enclosure around `mid`.
    pub fn around(mid: f64, radius: f64) -> Self {
        Bracket {
            lo: mid - radius.abs(),
            hi: mid + radius.abs(),
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Width relative to the midpoint; zero for the exact zero bracket.
    pub fn rel_width(&self) -> f64 {
        let m = self.mid().abs();
        if m == 0.0 {
            if self.width() == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.width() / m
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Multiply by a non-negative scalar.
    pub fn scale(self, c: f64) -> Self {
        debug_assert!(c >= 0.0);
        Bracket {
            lo: self.lo * c,
            hi: self.hi * c,
        }
    }

    pub fn shift(self, c: f64) -> Self {
        Bracket {
            lo: self.lo + c,
            hi: self.hi + c,
        }
    }

    /// Image under `x -> x^e` for `e > 0` on a non-negative bracket.
    pub fn powf(self, e: f64) -> Self {
        debug_assert!(e > 0.0);
        Bracket {
            lo: self.lo.max(0.0).powf(e),
            hi: self.hi.max(0.0).powf(e),
        }
    }
}

impl std::ops::Add for Bracket {
    type Output = Bracket;
    fn add(self, rhs: Bracket) -> Bracket {
        Bracket {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator, in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<NeumaierSum>().value()
}

// B_{2i} for i = 1..=10.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Number of Bernoulli corrections applied; the next one bounds the error.
const EM_TERMS: usize = 8;

/// Terms summed directly before Euler-Maclaurin takes over.
const EM_SHIFT: f64 = 24.0;

/// Direct-summation budget; beyond it the integral-test bracket is used.
const MAX_DIRECT: usize = 1 << 20;

/// Certified enclosure of `sum_{j >= 0} (x + j)^(-s)` for `s > 1`, `x > 0`.
pub fn hurwitz_tail(s: f64, x: f64) -> Result<Bracket> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(invalid(format!("hurwitz_tail needs finite s > 1, got {s}")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(invalid(format!("hurwitz_tail needs finite x > 0, got {x}")));
    }

    // Shift far enough that the asymptotic series is convergent-looking for
    // the first EM_TERMS + 1 corrections: X >= max(24, s).
    let target = EM_SHIFT.max(s);
    let direct = if x >= target {
        0
    } else {
        ((target - x).ceil() as usize).min(MAX_DIRECT)
    };

    let mut head = NeumaierSum::new();
    for j in 0..direct {
        head.add((x + j as f64).powf(-s));
    }
    let big_x = x + direct as f64;
    let head_v = head.value();

    if big_x < target {
        // Huge s with a tiny start: terms collapse geometrically, so the
        // integral test is already tight relative to the head.
        let integral = big_x.powf(1.0 - s) / (s - 1.0);
        let first = big_x.powf(-s);
        let slack = 4.0 * f64::EPSILON * head_v.abs();
        return Ok(Bracket::new(
            head_v + integral - slack,
            head_v + integral + first + slack,
        ));
    }

    let ln_x = big_x.ln();
    let integral = ((1.0 - s) * ln_x).exp() / (s - 1.0);
    let f_x = (-s * ln_x).exp();

    let mut corr = NeumaierSum::new();
    corr.add(integral);
    corr.add(0.5 * f_x);

    // T_i = B_{2i}/(2i)! * s(s+1)...(s+2i-2) * X^{-s-2i+1}
    let mut rising = s; // s (s+1) ... (s + 2i - 2)
    let mut fact = 2.0; // (2i)!
    let mut pow = f_x / big_x; // X^{-s-2i+1}
    let mut next_term = 0.0;
    for i in 1..=(EM_TERMS + 1) {
        let term = BERNOULLI_EVEN[i - 1] / fact * rising * pow;
        if i <= EM_TERMS {
            corr.add(term);
        } else {
            next_term = term;
        }
        let k = 2 * i as u32;
        rising *= (s + (k - 1) as f64) * (s + k as f64);
        fact *= ((k + 1) * (k + 2)) as f64;
        pow /= big_x * big_x;
    }

    let value = head_v + corr.value();
    let rounding = 8.0 * f64::EPSILON * (head_v.abs() + integral.abs() + f_x);
    let radius = 2.0 * next_term.abs() + rounding;
    Ok(Bracket::around(value, radius))
}

/// Certified enclosure of `sum_{k >= start} k^(beta - 1)` for `beta < 0`.
pub fn power_tail(beta: f64, start: usize) -> Result<Bracket> {
    if !(beta < 0.0) {
        return Err(invalid(format!(
            "power tail sum_k k^(beta-1) needs beta < 0, got {beta}"
        )));
    }
    if start == 0 {
        return Err(invalid("power tail must start at k >= 1"));
    }
    hurwitz_tail(1.0 - beta, start as f64)
}

/// Two-sided integral-test enclosure of `sum_{k >= start} k^(beta - 1)`.
///
/// Much looser than [`power_tail`]; kept as the textbook reference the tighter
/// bracket must always sit inside.
pub fn integral_test_tail(beta: f64, start: usize, partial_to: usize) -> Result<Bracket> {
    if !(beta < 0.0) || start == 0 || partial_to < start {
        return Err(invalid("integral_test_tail needs beta < 0 and 1 <= start <= partial_to"));
    }
    let partial = compensated_sum((start..=partial_to).map(|k| (k as f64).powf(beta - 1.0)));
    let k_max = partial_to as f64;
    let lo = (k_max + 1.0).powf(beta) / (-beta);
    let hi = k_max.powf(beta) / (-beta);
    Ok(Bracket::new(partial + lo, partial + hi))
}
