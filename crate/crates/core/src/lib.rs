//! Generalized holomorphically contractible families on model domains.
//!
//! The crate evaluates the generalized Möbius function `m_G`, the generalized
//! pluricomplex Green function `g_G`, and the extremal families `d^min` and
//! `d^max` exactly wherever a closed form exists (disc, polydisc, balanced
//! gauge balls, Reinhardt power domains, products), and brackets them with
//! certified variational bounds elsewhere.
//!
//! Layout:
//!
//! - [`disc`]: the one-variable kernel (Möbius distance, automorphisms,
//!   weighted Blaschke-type products, truncated infinite products).
//! - [`weights`]: finite-support weight functions and their transfer calculus.
//! - [`domains`]: model domains, gauges, structured holomorphic maps and
//!   analytic discs.
//! - [`exact`]: closed-form evaluators.
//! - [`variational`]: lower bounds for `d^min` through candidate maps into the
//!   disc, upper bounds for the Lempert function, `d^max` and the Coman
//!   function through analytic discs.
//! - [`harness`]: seeded randomized checks of the axioms and properties.
//!
//! The guide under `book/` walks through the mathematics; its code samples
//! are compiled as doc-tests of this crate.

pub mod disc;
pub mod domains;
mod error;
pub mod exact;
pub mod harness;
mod point;
pub mod simplex;
pub mod variational;
pub mod weights;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use point::Point;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/disc.md")]
    mod disc {}
    #[doc = include_str!("../../../book/src/weights.md")]
    mod weights {}
    #[doc = include_str!("../../../book/src/domains.md")]
    mod domains {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/variational.md")]
    mod variational {}
    #[doc = include_str!("../../../book/src/properties.md")]
    mod properties {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
