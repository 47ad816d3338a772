//! Analytic quasi-periodic `2 x 2` cocycles with singular determinant.
//!
//! The crate is organised bottom-up:
//!
//! * [`analytic`]: trigonometric polynomials on a strip, zero counting,
//!   log-integrals and sublevel-set measures.
//! * [`arithmetic`]: continued fractions and Diophantine constants of the frequency.
//! * [`cocycle`]: cocycle construction, iteration and Lyapunov exponents.
//! * [`lab`]: experiment drivers (large deviations, Birkhoff sums, scans).
//! * [`checks`]: the invariant suite behind `qpc check`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod arithmetic;
pub mod checks;
pub mod cocycle;
pub mod error;
pub mod lab;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/trig-polys.md")]
    mod trig_polys {}
    #[doc = include_str!("../../../book/src/zeros.md")]
    mod zeros {}
    #[doc = include_str!("../../../book/src/frequencies.md")]
    mod frequencies {}
    #[doc = include_str!("../../../book/src/cocycles.md")]
    mod cocycles {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/determinism.md")]
    mod determinism {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
