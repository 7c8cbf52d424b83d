//! Non-increasing rearrangements of finite sequences and dyadic step
//! functions, the distribution function, and the level-cut split
//! `f = f0 + f1`.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::sum::NeumaierSum;

/// A finite list of complex coefficients `a_1, ..., a_n`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Sequence {
    entries: Vec<Complex64>,
}

impl Sequence {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(invalid(format!("sequence entry {} is not finite", i + 1)));
        }
        Ok(Sequence { entries })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Sequence {
            entries: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.norm()).collect()
    }

    /// `a*`: the moduli sorted non-increasingly.
    pub fn rearranged(&self) -> Vec<f64> {
        sorted_desc(self.moduli())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.norm_sqr() == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Sequence {
        Sequence {
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }
}

/// Piecewise-constant function on `[0, 1]` with `2^level` equal cells; value
/// `i` is held on `[i/N, (i+1)/N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicStepFunction {
    level: u32,
    values: Vec<Complex64>,
}

/// Largest supported grid level (`2^24` cells).
pub const MAX_LEVEL: u32 = 24;

impl DyadicStepFunction {
    pub fn new(level: u32, values: Vec<Complex64>) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(invalid(format!("level {level} exceeds {MAX_LEVEL}")));
        }
        let n = 1usize << level;
        if values.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(invalid(format!("cell value {i} is not finite")));
        }
        Ok(DyadicStepFunction { level, values })
    }

    pub fn from_real(level: u32, values: &[f64]) -> Result<Self> {
        Self::new(level, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn constant(level: u32, c: Complex64) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(invalid(format!("level {level} exceeds {MAX_LEVEL}")));
        }
        Self::new(level, vec![c; 1usize << level])
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn cells(&self) -> usize {
        self.values.len()
    }

    pub fn cell_width(&self) -> f64 {
        1.0 / self.values.len() as f64
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm()).collect()
    }

    /// Cell values of `f*`, non-increasing.
    pub fn rearranged(&self) -> Vec<f64> {
        sorted_desc(self.moduli())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|z| z.norm_sqr() == 0.0)
    }

    pub fn scaled(&self, c: f64) -> DyadicStepFunction {
        DyadicStepFunction {
            level: self.level,
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }

    /// `(integral |f|^p)^(1/p)` for finite `p > 0`, or `max |f|` for `p = inf`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let m = self.moduli();
        if p.is_infinite() {
            return m.iter().cloned().fold(0.0, f64::max);
        }
        let top = m.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return 0.0;
        }
        let s: NeumaierSum = m.iter().map(|&v| (v / top).powf(p)).collect();
        top * (s.value() * self.cell_width()).powf(1.0 / p)
    }
}

/// Stable descending sort; ties keep their original order.
pub(crate) fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `a*`: moduli of `a` sorted non-increasingly, as a real sequence.
pub fn decreasing_rearrangement(a: &Sequence) -> Sequence {
    Sequence {
        entries: a
            .rearranged()
            .into_iter()
            .map(|v| Complex64::new(v, 0.0))
            .collect(),
    }
}

/// `f*` on the same grid.
pub fn step_rearrangement(f: &DyadicStepFunction) -> DyadicStepFunction {
    DyadicStepFunction {
        level: f.level,
        values: f
            .rearranged()
            .into_iter()
            .map(|v| Complex64::new(v, 0.0))
            .collect(),
    }
}

/// `D_f(lambda)`: measure of `{ |f| > lambda }`.
pub fn distribution_function(f: &DyadicStepFunction, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(invalid(format!("distribution function needs lambda >= 0, got {lambda}")));
    }
    let count = f.values.iter().filter(|z| z.norm() > lambda).count();
    Ok(count as f64 * f.cell_width())
}

/// Cut at measure `2^-k`; the cut must fall on a grid line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelCut {
    k: u32,
}

impl LevelCut {
    pub fn new(k: u32) -> Self {
        LevelCut { k }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn tau(&self) -> f64 {
        (-(self.k as f64)).exp2()
    }
}

/// Split `f = f0 + f1` at the level `h = f*(2^-k)`.
///
/// On cells with `|f| >= h`, `f1` is `h` times the phase of `f` and `f0` is
/// the remainder; elsewhere `f0 = 0`. The cut value is the rearrangement on
/// the cell ending at `2^-k`, so `f1*` equals `h` on `[0, 2^-k)` and `f*`
/// afterwards.
pub fn split_at_level(
    f: &DyadicStepFunction,
    cut: LevelCut,
) -> Result<(DyadicStepFunction, DyadicStepFunction)> {
    if cut.k > f.level {
        return Err(invalid(format!(
            "cut 2^-{} is finer than the grid 2^-{}",
            cut.k, f.level
        )));
    }
    let sorted = f.rearranged();
    let j = f.cells() >> cut.k; // number of cells in [0, 2^-k]
    let h = sorted[j - 1];

    let zero = Complex64::new(0.0, 0.0);
    let mut f0 = Vec::with_capacity(f.cells());
    let mut f1 = Vec::with_capacity(f.cells());
    for &z in &f.values {
        let m = z.norm();
        if m > h {
            let top = z * (h / m);
            f1.push(top);
            f0.push(z - top);
        } else {
            f1.push(z);
            f0.push(zero);
        }
    }
    Ok((
        DyadicStepFunction {
            level: f.level,
            values: f0,
        },
        DyadicStepFunction {
            level: f.level,
            values: f1,
        },
    ))
}

/// `((1/k) sum_{m <= min(k, n)} (a*_m)^alpha)^(1/alpha)`.
pub fn cesaro_mean(a: &Sequence, alpha: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(invalid("cesaro_mean needs k >= 1"));
    }
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(invalid(format!("cesaro_mean needs finite alpha >= 1, got {alpha}")));
    }
    let s: NeumaierSum = a.rearranged().iter().take(k).map(|v| v.powf(alpha)).collect();
    Ok((s.value() / k as f64).powf(1.0 / alpha))
}
