//! Test-function generators: structured families and the seeded random corpus.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Pareto};

use crate::error::{invalid, Result};
use crate::rearrange::{DyadicStepFunction, Sequence};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtremalFamily {
    /// Cell means of `t^(-beta)`, `beta < 1`.
    Power { beta: f64 },
    /// Value `2^(-gamma j)` on the `j`-th dyadic block.
    Lacunary { gamma: f64 },
    /// One unit cell or entry.
    Spike,
    /// Identically one.
    Flat,
}

impl ExtremalFamily {
    pub fn name(&self) -> String {
        match self {
            ExtremalFamily::Power { beta } => format!("power({beta})"),
            ExtremalFamily::Lacunary { gamma } => format!("lacunary({gamma})"),
            ExtremalFamily::Spike => "spike".into(),
            ExtremalFamily::Flat => "flat".into(),
        }
    }

    pub fn step_function(&self, level: u32) -> Result<DyadicStepFunction> {
        let n = 1usize << level;
        let nf = n as f64;
        let vals: Vec<f64> = match *self {
            ExtremalFamily::Power { beta } => {
                if !(beta < 1.0) {
                    return Err(invalid(format!("power family needs beta < 1, got {beta}")));
                }
                let e = 1.0 - beta;
                (0..n)
                    .map(|i| {
                        let hi = ((i + 1) as f64 / nf).powf(e);
                        let lo = (i as f64 / nf).powf(e);
                        nf * (hi - lo) / e
                    })
                    .collect()
            }
            ExtremalFamily::Lacunary { gamma } => (0..n)
                .map(|i| {
                    // cell i lies in [2^-(j+1), 2^-j) with j = L - 1 - floor(log2 i) for i >= 1
                    let j = if i == 0 { level } else { level - 1 - i.ilog2() };
                    (-gamma * j as f64).exp2()
                })
                .collect(),
            ExtremalFamily::Spike => (0..n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect(),
            ExtremalFamily::Flat => vec![1.0; n],
        };
        DyadicStepFunction::from_real(level, &vals)
    }

    pub fn sequence(&self, n: usize) -> Result<Sequence> {
        let vals: Vec<f64> = match *self {
            ExtremalFamily::Power { beta } => (1..=n).map(|k| (k as f64).powf(-beta)).collect(),
            ExtremalFamily::Lacunary { gamma } => {
                (1..=n).map(|k| (-gamma * k.ilog2() as f64).exp2()).collect()
            }
            ExtremalFamily::Spike => (0..n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect(),
            ExtremalFamily::Flat => vec![1.0; n],
        };
        Sequence::from_real(&vals)
    }
}

/// Seeded generator of random sequences and step functions with
/// heavy-tailed moduli (Pareto, index 1.5) and uniform phases.
#[derive(Debug, Clone)]
pub struct Corpus {
    rng: ChaCha8Rng,
    moduli: Pareto<f64>,
}

pub const PARETO_INDEX: f64 = 1.5;

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
            moduli: Pareto::new(1.0, PARETO_INDEX).expect("valid Pareto parameters"),
        }
    }

    fn value(&mut self) -> Complex64 {
        let r = self.moduli.sample(&mut self.rng);
        let phase = self.rng.random_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(r, phase)
    }

    pub fn sequence(&mut self, n: usize) -> Sequence {
        let v = (0..n).map(|_| self.value()).collect();
        Sequence::new(v).expect("finite samples")
    }

    /// Sequence of random length in `1..=max_len`.
    pub fn sequence_up_to(&mut self, max_len: usize) -> Sequence {
        let n = self.rng.random_range(1..=max_len);
        self.sequence(n)
    }

    pub fn step_function(&mut self, level: u32) -> DyadicStepFunction {
        let v = (0..1usize << level).map(|_| self.value()).collect();
        DyadicStepFunction::new(level, v).expect("finite samples")
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.random_range(lo..=hi_inclusive)
    }
}
