//! Exact coefficients of dyadic step functions against orthonormal systems
//! on `[0, 1]`: trigonometric, Walsh (Paley order) and user-supplied
//! discrete systems.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{invalid, Error, Result};
use crate::rearrange::{DyadicStepFunction, Sequence};
use crate::sum::{hurwitz_tail, NeumaierSum};

/// Default share of `||f||_2^2` the trigonometric tail may leave out.
pub const DEFAULT_DEFECT_SHARE: f64 = 1e-6;

/// Cell values against the characters `e^{-2 pi i k x}`.
///
/// With `V` the DFT of the cell values,
/// `a_k = V[k mod N] e^{-i pi k / N} sin(pi k / N) / (pi k)` and `a_0 = V[0] / N`,
/// so any coefficient costs O(1) after one FFT.
#[derive(Debug, Clone)]
pub struct TrigSpectrum {
    dft: Vec<Complex64>,
    l2_squared: f64,
}

impl TrigSpectrum {
    pub fn new(f: &DyadicStepFunction) -> Self {
        let n = f.cells();
        let mut buf = f.values().to_vec();
        let fft = FftPlanner::new().plan_fft_forward(n);
        fft.process(&mut buf);
        let l2_squared = f.values().iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        TrigSpectrum {
            dft: buf,
            l2_squared,
        }
    }

    pub fn cells(&self) -> usize {
        self.dft.len()
    }

    /// `||f||_2^2`.
    pub fn l2_squared(&self) -> f64 {
        self.l2_squared
    }

    /// `a_k` for any integer `k`.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        let n = self.dft.len() as i64;
        let v = self.dft[k.rem_euclid(n) as usize];
        if k == 0 {
            return v / n as f64;
        }
        let theta = PI * k as f64 / n as f64;
        v * Complex64::from_polar(theta.sin() / (PI * k as f64), -theta)
    }

    /// `a_{-K}, ..., a_K` in order of increasing frequency.
    pub fn coefficients(&self, k_max: usize) -> Vec<Complex64> {
        let k = k_max as i64;
        (-k..=k).map(|j| self.coefficient(j)).collect()
    }

    /// `sum_{|k| > K} |a_k|^2`, summed exactly per residue class mod `N`.
    pub fn parseval_defect(&self, k_max: usize) -> f64 {
        let n = self.dft.len();
        let nf = n as f64;
        let mut acc = NeumaierSum::new();
        for r in 1..n {
            let s = (PI * r as f64 / nf).sin();
            let w = (self.dft[r].norm_sqr() + self.dft[n - r].norm_sqr()) * s * s / (PI * PI);
            if w == 0.0 {
                continue;
            }
            // smallest k > K with k = r mod N
            let k0 = {
                let base = k_max + 1;
                let off = (r + n - base % n) % n;
                base + off
            };
            let z = hurwitz_tail(2.0, k0 as f64 / nf).expect("valid Hurwitz arguments");
            acc.add(w * z.mid() / (nf * nf));
        }
        acc.value()
    }

    /// Smallest `K` with `parseval_defect(K) < share * ||f||_2^2`.
    pub fn auto_k(&self, share: f64) -> usize {
        let target = share * self.l2_squared;
        if self.parseval_defect(0) < target {
            return 0;
        }
        let mut hi = 1usize;
        while self.parseval_defect(hi) >= target {
            hi *= 2;
            if hi > 1 << 50 {
                return hi;
            }
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.parseval_defect(mid) < target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// `a_k = int_0^1 f(x) e^{-2 pi i k x} dx` for `k = -K..K`.
pub fn trig_coefficients(f: &DyadicStepFunction, k_max: usize) -> Sequence {
    Sequence::new(TrigSpectrum::new(f).coefficients(k_max)).expect("finite coefficients")
}

/// In-place Walsh-Hadamard transform in natural (Hadamard) order.
fn fwht(v: &mut [Complex64]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for start in (0..n).step_by(2 * h) {
            for i in start..start + h {
                let (x, y) = (v[i], v[i + h]);
                v[i] = x + y;
                v[i + h] = x - y;
            }
        }
        h *= 2;
    }
}

fn bit_reverse(j: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        j.reverse_bits() >> (usize::BITS - bits)
    }
}

/// All `2^L` Walsh-Paley coefficients.
pub fn walsh_coefficients(f: &DyadicStepFunction) -> Sequence {
    let n = f.cells();
    let level = f.level();
    let mut h = f.values().to_vec();
    fwht(&mut h);
    let scale = 1.0 / n as f64;
    let out = (0..n).map(|j| h[bit_reverse(j, level)] * scale).collect();
    Sequence::new(out).expect("finite coefficients")
}

/// Walsh-Paley function `w_j` on the level-`L` grid.
pub fn walsh_row(level: u32, j: usize) -> Result<DyadicStepFunction> {
    let n = 1usize << level;
    if j >= n {
        return Err(invalid(format!("Walsh index {j} out of range for level {level}")));
    }
    let h = bit_reverse(j, level);
    let vals: Vec<f64> = (0..n)
        .map(|c| if (h & c).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    DyadicStepFunction::from_real(level, &vals)
}

/// Orthonormality tolerance for user-supplied systems.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Square matrix whose rows are orthonormal for `(1/N) sum_i u_i conj(v_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomSystem {
    n: usize,
    rows: Arc<Vec<Complex64>>,
}

impl CustomSystem {
    /// Rows given row-major; rejects non-square input and rows that are not
    /// orthonormal to [`ORTHONORMAL_TOL`].
    pub fn new(n: usize, rows: Vec<Complex64>) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: rows.len(),
            });
        }
        if !n.is_power_of_two() {
            return Err(invalid(format!("system size {n} is not a power of two")));
        }
        let sys = CustomSystem {
            n,
            rows: Arc::new(rows),
        };
        let dev = sys.orthonormality_defect();
        if !(dev <= ORTHONORMAL_TOL) {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(sys)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        &self.rows[k * self.n..(k + 1) * self.n]
    }

    fn inner(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let mut re = NeumaierSum::new();
        let mut im = NeumaierSum::new();
        for (a, b) in u.iter().zip(v) {
            let z = a * b.conj();
            re.add(z.re);
            im.add(z.im);
        }
        Complex64::new(re.value(), im.value()) / self.n as f64
    }

    /// `max_{j,k} |<u_j, u_k> - delta_jk|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.n {
            for k in j..self.n {
                let g = self.inner(self.row(j), self.row(k));
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrthonormalSystem {
    /// Characters `e^{2 pi i k x}`, `|k| <= k_max`.
    Trig { k_max: usize },
    Walsh,
    Custom(CustomSystem),
}

impl OrthonormalSystem {
    pub fn name(&self) -> &'static str {
        match self {
            OrthonormalSystem::Trig { .. } => "trig",
            OrthonormalSystem::Walsh => "walsh",
            OrthonormalSystem::Custom(_) => "custom",
        }
    }
}

/// Coefficients `int_0^1 f conj(phi_k)` against `sys`.
pub fn ons_coefficients(f: &DyadicStepFunction, sys: &OrthonormalSystem) -> Result<Sequence> {
    match sys {
        OrthonormalSystem::Trig { k_max } => Ok(trig_coefficients(f, *k_max)),
        OrthonormalSystem::Walsh => Ok(walsh_coefficients(f)),
        OrthonormalSystem::Custom(c) => {
            if c.size() != f.cells() {
                return Err(Error::DimensionMismatch {
                    expected: c.size(),
                    found: f.cells(),
                });
            }
            let out = (0..c.size()).map(|k| c.inner(f.values(), c.row(k))).collect();
            Sequence::new(out)
        }
    }
}
