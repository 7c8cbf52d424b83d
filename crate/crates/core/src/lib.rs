//! Numerical toolkit for Lorentz and grand Lorentz spaces on `[0, 1]` and
//! their sequence analogues.
//!
//! Everything operates on two finite objects: a [`Sequence`] of complex
//! coefficients and a [`DyadicStepFunction`] holding one value on each of
//! `2^L` equal cells. Rearrangements, norms and Fourier coefficients of these
//! objects have closed forms, and every infinite series that appears (tails of
//! Lorentz sums, Hurwitz-type sums) is evaluated with a two-sided
//! [`Bracket`] rather than truncated silently.
//!
//! Modules:
//! - [`rearrange`]: non-increasing rearrangement, distribution function, level cuts.
//! - [`norms`]: `l_{p,q}`, starred `l*_{p,q}`, `L_{p,q}`, `L_{p,q,tau}` and `Lambda_{p,q,tau}`.
//! - [`grand`]: grand Lorentz norms and the epsilon-supremum search.
//! - [`hardy`]: Hardy inequalities with explicit constants.
//! - [`fourier`]: trigonometric, Walsh and custom orthonormal-system coefficients.
//! - [`verify`]: the inequality harness producing [`CheckReport`]s.
//! - [`kfun`]: K-functional upper bounds and interpolation-norm estimates.

pub mod error;
pub mod families;
pub mod fourier;
pub mod grand;
pub mod hardy;
pub mod io;
pub mod kfun;
pub mod norms;
pub mod quad;
pub mod rearrange;
pub mod report;
pub mod sum;
pub mod verify;

pub use error::{Error, Result};
pub use grand::{EpsGrid, EpsProfile, GrandParams};
pub use norms::{Certified, NormParams};
pub use rearrange::{DyadicStepFunction, LevelCut, Sequence};
pub use report::{CheckReport, Verdict};
pub use sum::Bracket;

pub use num_complex::Complex64;
