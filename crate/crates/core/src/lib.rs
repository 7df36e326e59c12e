//! Reduced-order simulator of synchronous and synthetic inertia from hydro
//! units.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // NaN-rejecting guards

pub mod analytics;
pub mod cli;
pub mod config;
pub mod control;
pub mod engine;
pub mod error;
pub mod hydraulics;
pub mod machines;
pub mod plot;

pub use error::{Error, Result};
