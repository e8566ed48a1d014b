//! Steady states, transient dynamics and ergotropy of a four-level heat engine
//! with a coherently driven lower doublet.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamics;
pub mod engine;
pub mod ergotropy;
pub mod error;
pub mod io;
pub mod par;

pub use error::{Error, Result};
