use super::DomainError;
use crate::accel::alternating_sum;

/// Number of terms used by every accelerated alternating sum in this module.
pub const ACCEL_TERMS: usize = 40;

/// Dirichlet eta function `Σ_{n≥1} (-1)^(n-1) n^(-s)`, for s > 0.
pub fn eta(s: f64) -> Result<f64, DomainError> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(DomainError::new("eta", s));
    }
    Ok(alternating_sum(ACCEL_TERMS, |k| ((k + 1) as f64).powf(-s)).value)
}

/// Riemann zeta for s > 1 via `ζ(s) = η(s) / (1 - 2^(1-s))`.
pub fn zeta(s: f64) -> Result<f64, DomainError> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(DomainError::new("zeta", s));
    }
    let factor = 1.0 - (1.0 - s).exp2();
    Ok(eta(s)? / factor)
}

/// Dirichlet beta `L(s) = Σ_{k≥0} (-1)^k (2k+1)^(-s)`, for s > 0.
pub fn dbeta(s: f64) -> Result<f64, DomainError> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(DomainError::new("dbeta", s));
    }
    Ok(alternating_sum(ACCEL_TERMS, |k| ((2 * k + 1) as f64).powf(-s)).value)
}

/// `L'(s) = Σ_{k≥0} (-1)^(k+1) ln(2k+1) (2k+1)^(-s)`, for s > 0.
pub fn dbeta_prime(s: f64) -> Result<f64, DomainError> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(DomainError::new("dbeta_prime", s));
    }
    let sum = alternating_sum(ACCEL_TERMS, |k| {
        let m = (2 * k + 1) as f64;
        m.ln() * m.powf(-s)
    });
    Ok(-sum.value)
}

/// `L'(1) ≈ 0.1929013168`.
pub fn dbeta_prime_at_1() -> f64 {
    dbeta_prime(1.0).expect("s = 1 is inside the domain")
}
