//! Boundary integral equation solver for time-harmonic flexural waves in
//! thin plates with clamped, supported or free edges.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod checks;
pub mod error;
pub mod geometry;
pub mod greens;
pub mod kernels;
pub mod potential;
pub mod quadrature;
pub mod special;
pub mod surfaceops;
pub mod system;

pub use error::{FlexError, Result};
