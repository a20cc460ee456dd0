//! Sharpness-aware minimization (SAM) with a constant perturbation size.
//!
//! The crate bundles the update rules ([`optimizers`]), a catalog of
//! analytic worst-case functions ([`catalog`]), virtual-gradient and
//! virtual-loss tools ([`virtual_loss`]), theorem step-size schedules and
//! bounds ([`schedules`]), and an experiment harness that runs, sweeps,
//! fits and checks trajectories ([`harness`]). The [`cli`] module backs
//! the `samlab` binary.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod error;
pub mod harness;
pub mod optimizers;
pub mod schedules;
pub mod vecops;
pub mod virtual_loss;

pub use error::{Result, SamError};
