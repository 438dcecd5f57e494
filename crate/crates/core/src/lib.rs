//! Simulation and analytics for the distance between two skew Brownian
//! motions driven by one Brownian motion.
//!
//! The gap process, read on the local-time clock of the process started at
//! zero, is a piecewise-deterministic Markov process: it drifts down at rate
//! `beta1` and jumps by amounts proportional to its current level. This crate
//! simulates that process exactly ([`chain`]), evaluates the closed-form laws
//! of its absorption time ([`analytic`]), and provides an independent
//! mollified-drift path simulator ([`path_sim`]) plus the statistics used to
//! compare them ([`stats`]).
//!
//! The crate is `no_std` (it needs `alloc`). All transcendental functions go
//! through `libm`, so results are bit-identical with or without `std`.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analytic;
pub mod chain;
pub mod config;
mod error;
pub(crate) mod math;
pub mod path_sim;
pub mod quad;
pub mod rng;
pub mod samplers;
pub mod special;
pub mod stats;

pub use config::{DerivedConstants, Regime, RegimeTag, SkewConfig};
pub use error::{Error, Result};
pub use rng::RngStream;
