//! Chebyshev-weighted acceleration of alternating series
//! (Cohen, Rodriguez Villegas and Zagier, "Algorithm 1").
//!
//! For `S = Σ_{k≥0} (-1)^k a_k` with `a_k` a moment sequence the error
//! after `n` terms is about `2·|a_0| / 5.828^n`.

/// Convergence base `3 + √8` of the scheme.
pub const CVZ_RATE: f64 = 5.828_427_124_746_19;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accelerated {
    pub value: f64,
    /// `Σ |w_k a_k|`, the scale against which rounding error accumulates.
    pub magnitude: f64,
}

/// Sums `Σ_{k≥0} (-1)^k a(k)` from the first `n` magnitudes.
pub fn alternating_sum(n: usize, mut a: impl FnMut(usize) -> f64) -> Accelerated {
    let nf = n as f64;
    let e = CVZ_RATE.powf(nf);
    let d = 0.5 * (e + 1.0 / e);
    let mut b = -1.0;
    let mut c = -d;
    let mut s = 0.0;
    let mut magnitude = 0.0;
    for k in 0..n {
        c = b - c;
        let term = c * a(k);
        s += term;
        magnitude += term.abs();
        let kf = k as f64;
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    Accelerated {
        value: s / d,
        magnitude: magnitude / d,
    }
}

/// Heuristic truncation error of an `n`-term acceleration.
pub fn truncation_estimate(n: usize, first: f64) -> f64 {
    3.0 * first.abs() * CVZ_RATE.powf(-(n as f64))
}
