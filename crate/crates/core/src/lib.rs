//! Exact q-series, partial theta functions, quasimodular Laurent data and
//! asymptotic expansions for the characters of `sl_l` at level `-1`.
//!
//! The crate is `no_std` with `alloc`. Exact work is done over
//! `num_rational::BigRational`; numeric work uses the multiprecision
//! [`PrecFloat`] and [`PrecComplex`] types defined here.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod asymptotics;
pub mod bernoulli;
pub mod characters;
pub mod complex;
mod consts;
pub mod decomposition;
pub mod error;
pub mod float;
pub mod modular;
pub mod modular_transform;
pub mod partial_theta;
pub mod pigraded;
pub mod series;

pub use complex::PrecComplex;
pub use error::{Error, Result};
pub use float::PrecFloat;
