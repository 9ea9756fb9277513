//! Special-function kernel: Γ, ln Γ, ζ, Li₂, the Dirichlet beta function
//! and its derivative, and harmonic numbers.

mod dilog;
mod gamma;
mod series_fns;

use thiserror::Error;

pub use dilog::dilog;
pub use gamma::{gamma, ln_gamma};
pub use series_fns::{dbeta, dbeta_prime, dbeta_prime_at_1, eta, zeta, ACCEL_TERMS};

pub const PI: f64 = std::f64::consts::PI;
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const LN2: f64 = std::f64::consts::LN_2;

/// Largest `n` accepted by `harmonic` when called from an expression.
pub const HARMONIC_MAX: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("{function}({arg}): argument outside domain")]
pub struct DomainError {
    pub function: &'static str,
    pub arg: f64,
}

impl DomainError {
    pub fn new(function: &'static str, arg: f64) -> Self {
        Self { function, arg }
    }
}

/// `H_n = 1 + 1/2 + ... + 1/n`, with `H_0 = 0`.
pub fn harmonic(n: u64) -> f64 {
    // smallest terms first, compensated
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for j in (1..=n).rev() {
        let term = 1.0 / j as f64;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
