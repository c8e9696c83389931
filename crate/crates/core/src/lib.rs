//! Secrecy-rate analysis of regularized channel inversion (RCI) precoding in
//! the MISO broadcast channel with confidential messages.
//!
//! Two independent routes are provided and checked against each other:
//!
//! * [`rmt`] holds the closed-form large-system (deterministic equivalent)
//!   expressions, the optimal regularization and load, the power-reduced
//!   precoder and the CSI-error laws.
//! * [`mc`] draws finite channels, builds RCI / RCI-PR precoders and evaluates
//!   the exact per-realization secrecy rates.
//!
//! [`optimize`] holds the scalar searches, [`experiments`] turns both routes
//! into data tables, and [`cli`] is the command-line front end.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiments;
pub mod mc;
pub mod optimize;
pub mod rmt;

pub use error::{Error, Result};
