use super::{DomainError, PI};

const ZETA2: f64 = PI * PI / 6.0;

/// `Σ x^k / k²` for |x| ≤ 1/2.
fn power_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = x;
    let mut k = 1.0f64;
    loop {
        let term = power / (k * k);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() || power == 0.0 {
            return sum;
        }
        power *= x;
        k += 1.0;
    }
}

/// Dilogarithm `Li₂(x) = Σ_{k≥1} x^k/k²` for real x ≤ 1.
pub fn dilog(x: f64) -> Result<f64, DomainError> {
    if !(x <= 1.0) || x.is_nan() {
        return Err(DomainError::new("dilog", x));
    }
    if x == f64::NEG_INFINITY {
        return Err(DomainError::new("dilog", x));
    }
    if x.abs() <= 0.5 {
        return Ok(power_series(x));
    }
    if x > 0.5 {
        // Li₂(x) + Li₂(1-x) = π²/6 - ln x ln(1-x); the product vanishes as x → 1
        let y = 1.0 - x;
        let product = if y < 1e-14 { 0.0 } else { x.ln() * y.ln() };
        return Ok(ZETA2 - product - power_series(y));
    }
    // x < -1/2: Li₂(x) = -Li₂(x/(x-1)) - ln²(1-x)/2 with x/(x-1) in (1/3, 1)
    let y = x / (x - 1.0);
    let l = (-x).ln_1p();
    Ok(-dilog(y)? - 0.5 * l * l)
}
