//! Numerical verification of definite-integral and infinite-series
//! identities from classical integral tables.

// Domain guards are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accel;
pub mod expr;
pub mod numeric;
pub mod quad;
pub mod quantity;
pub mod series;
pub mod specfun;
pub mod verify;

pub use numeric::NumericResult;
