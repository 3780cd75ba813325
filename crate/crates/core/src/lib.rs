//! Real zeros of random Kac–Geronimus polynomials `Σ η_i φ_i(x; α)`.
//!
//! [`geron`] evaluates the orthonormal polynomials, [`intensity`] the density
//! of real zeros, [`expectation`] its integral and the constants of the
//! large-`n` expansion, and [`montecarlo`] samples polynomials and counts
//! their roots. The guide in `book/` walks through each layer.

pub mod cli;
pub mod error;
pub mod expectation;
pub mod geron;
pub mod intensity;
pub mod montecarlo;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
pub use geron::GeronimusParams;

// Book chapters double as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/intensity.md")]
    mod intensity {}
    #[doc = include_str!("../../../book/src/expectation.md")]
    mod expectation {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
