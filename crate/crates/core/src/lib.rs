//! Exact radially symmetric transonic shock for steady, irrotational,
//! polytropic flow between two circles, and a numerical check that the shock
//! solution is a saddle point of the associated variational functional.
//!
//! The entry points are [`radial::make_config`], [`radial::assemble_solution`]
//! and [`variational::saddle_report`]. The `transonic` binary wraps them.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod gas;
pub mod numerics;
pub mod radial;
pub mod variational;
pub mod verify;

pub use error::{Error, Result};
pub use gas::{GasParameters, RadialState, Regime};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/gas.md")]
    mod gas {}
    #[doc = include_str!("../../../book/src/branches.md")]
    mod branches {}
    #[doc = include_str!("../../../book/src/shock.md")]
    mod shock {}
    #[doc = include_str!("../../../book/src/variational.md")]
    mod variational {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
