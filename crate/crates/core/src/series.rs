//! Series summation: direct summation with geometric tail bounds,
//! accelerated alternating sums, and the harmonic-weighted transform
//! `Σ c_r H_r α^r = ∫₀¹ (f(α) - f(αx)) / (1 - x) dx`.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::accel::{alternating_sum, truncation_estimate};
use crate::expr::{bind_univariate, BindError, Expression};
use crate::numeric::NumericResult;
use crate::quad::{self, QuadError};

/// Largest ratio of consecutive term magnitudes accepted for a geometric tail bound.
pub const RATIO_CLAMP: f64 = 0.999;
/// Number of consecutive ratios inspected for the tail bound.
pub const RATIO_WINDOW: usize = 10;
pub const DEFAULT_MAX_TERMS: usize = 1_000_000;
pub const DEFAULT_ACCEL_TERMS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignPattern {
    General,
    Alternating,
    PositiveDecreasing,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("no convergence after {terms} terms (tail bound {tail_bound:e})")]
    NonConvergence { terms: usize, tail_bound: f64 },
    #[error("non-finite term at index {index}")]
    NonFiniteTerm { index: i64 },
    #[error("alternating precondition violated at index {index}: {reason}")]
    SignPattern { index: i64, reason: &'static str },
    #[error("direct summation does not apply to alternating series")]
    WrongPattern,
    #[error("coefficients do not match the generating function: {0}")]
    GeneratorMismatch(String),
    #[error(transparent)]
    Bind(#[from] BindError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

type TermFn = dyn Fn(i64) -> f64 + Send + Sync;

/// An infinite series `Σ_{k ≥ start} term(k)`.
#[derive(Clone)]
pub struct SeriesSpec {
    term: Arc<TermFn>,
    start: i64,
    pattern: SignPattern,
}

impl fmt::Debug for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeriesSpec")
            .field("start", &self.start)
            .field("pattern", &self.pattern)
            .finish_non_exhaustive()
    }
}

impl SeriesSpec {
    pub fn from_fn(
        start: i64,
        pattern: SignPattern,
        term: impl Fn(i64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            term: Arc::new(term),
            start,
            pattern,
        }
    }

    /// Series whose summand is `body` with `var` running over integers from `start`.
    /// Evaluation failures surface as non-finite terms.
    pub fn from_expression(
        var: &str,
        start: i64,
        body: &Expression,
        pattern: SignPattern,
    ) -> Result<Self, SeriesError> {
        let f = bind_univariate(body, var)?;
        Ok(Self::from_fn(start, pattern, move |k| f.sample(k as f64)))
    }

    /// Like [`SeriesSpec::from_expression`] with the sign pattern inferred
    /// from the first terms.
    pub fn from_expression_detect(var: &str, start: i64, body: &Expression) -> Result<Self, SeriesError> {
        let mut spec = Self::from_expression(var, start, body, SignPattern::General)?;
        spec.pattern = spec.detect_pattern(20);
        Ok(spec)
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn pattern(&self) -> SignPattern {
        self.pattern
    }

    pub fn with_pattern(mut self, pattern: SignPattern) -> Self {
        self.pattern = pattern;
        self
    }

    pub fn term(&self, k: i64) -> f64 {
        (self.term)(k)
    }

    /// Classifies the first `n` terms. Zero terms are skipped for the sign test.
    pub fn detect_pattern(&self, n: usize) -> SignPattern {
        let terms: Vec<f64> = (0..n as i64).map(|i| self.term(self.start + i)).collect();
        if terms.iter().any(|t| !t.is_finite()) {
            return SignPattern::General;
        }
        let nonzero: Vec<f64> = terms.iter().copied().filter(|&t| t != 0.0).collect();
        if nonzero.len() >= 2 && nonzero.windows(2).all(|w| w[0].signum() != w[1].signum()) {
            return SignPattern::Alternating;
        }
        if terms.iter().all(|&t| t >= 0.0) && terms.windows(2).all(|w| w[1] <= w[0]) {
            return SignPattern::PositiveDecreasing;
        }
        SignPattern::General
    }

    /// Sums using the method matching the sign pattern.
    pub fn sum(&self, tol: f64, max_terms: usize, n_accel: usize) -> Result<NumericResult, SeriesError> {
        match self.pattern {
            SignPattern::Alternating => sum_alternating(self, n_accel),
            _ => sum_direct(self, tol, max_terms),
        }
    }
}

/// Compensated (Neumaier) running sum.
#[derive(Debug, Default, Clone, Copy)]
struct Accumulator {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl Accumulator {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn max_ratio(recent: &VecDeque<f64>) -> f64 {
    recent
        .iter()
        .zip(recent.iter().skip(1))
        .map(|(&prev, &next)| {
            if next == 0.0 {
                0.0
            } else if prev == 0.0 {
                f64::INFINITY
            } else {
                next / prev
            }
        })
        .fold(0.0, f64::max)
}

/// Sums term by term until a geometric tail bound drops below `tol`.
///
/// The bound is `|a_k|·r/(1-r)` with `r` the largest ratio of consecutive
/// term magnitudes over the last [`RATIO_WINDOW`] terms. A decreasing tail
/// whose ratio reaches [`RATIO_CLAMP`] is sub-geometric and reported as
/// non-convergent.
pub fn sum_direct(s: &SeriesSpec, tol: f64, max_terms: usize) -> Result<NumericResult, SeriesError> {
    assert!(tol > 0.0, "tolerance must be positive");
    if s.pattern == SignPattern::Alternating {
        return Err(SeriesError::WrongPattern);
    }
    let mut acc = Accumulator::default();
    let mut recent: VecDeque<f64> = VecDeque::with_capacity(RATIO_WINDOW + 1);
    let mut tail = f64::INFINITY;
    for i in 0..max_terms {
        let k = s.start + i as i64;
        let t = s.term(k);
        if !t.is_finite() {
            return Err(SeriesError::NonFiniteTerm { index: k });
        }
        acc.add(t);
        if recent.len() == RATIO_WINDOW + 1 {
            recent.pop_front();
        }
        recent.push_back(t.abs());
        if recent.len() <= RATIO_WINDOW {
            continue;
        }
        let r = max_ratio(&recent);
        if r >= 1.0 {
            // still in the growing prefix
            continue;
        }
        tail = t.abs() * r / (1.0 - r);
        if r >= RATIO_CLAMP && tail > tol {
            return Err(SeriesError::NonConvergence {
                terms: i + 1,
                tail_bound: tail,
            });
        }
        if tail <= tol {
            let err = tail + 4.0 * f64::EPSILON * acc.abs;
            return Ok(NumericResult::new(acc.value(), err, i + 1));
        }
    }
    Err(SeriesError::NonConvergence {
        terms: max_terms,
        tail_bound: tail,
    })
}

/// Accelerated sum of an alternating series from its first `n_accel` terms.
pub fn sum_alternating(s: &SeriesSpec, n_accel: usize) -> Result<NumericResult, SeriesError> {
    assert!(n_accel >= 2, "need at least two terms");
    let terms: Vec<f64> = (0..n_accel as i64).map(|i| s.term(s.start + i)).collect();
    if let Some(i) = terms.iter().position(|t| !t.is_finite()) {
        return Err(SeriesError::NonFiniteTerm {
            index: s.start + i as i64,
        });
    }
    let Some(first) = terms.iter().position(|&t| t != 0.0) else {
        return Ok(NumericResult::exact(0.0));
    };
    // sign of the k = 0 slot in Σ σ (-1)^k |a_k|
    let sigma = terms[first].signum() * if first % 2 == 0 { 1.0 } else { -1.0 };
    for (k, &t) in terms.iter().enumerate() {
        let expected = sigma * if k % 2 == 0 { 1.0 } else { -1.0 };
        if t != 0.0 && t.signum() != expected {
            return Err(SeriesError::SignPattern {
                index: s.start + k as i64,
                reason: "signs do not alternate",
            });
        }
    }
    let magnitudes: Vec<f64> = terms.iter().map(|t| t.abs()).collect();
    let half = n_accel / 2;
    for k in half..n_accel - 1 {
        if magnitudes[k + 1] > magnitudes[k] {
            return Err(SeriesError::SignPattern {
                index: s.start + k as i64 + 1,
                reason: "term magnitudes increase",
            });
        }
    }
    if magnitudes[n_accel - 1] >= magnitudes[half] {
        return Err(SeriesError::SignPattern {
            index: s.start + n_accel as i64 - 1,
            reason: "term magnitudes do not decrease",
        });
    }
    let acc = alternating_sum(n_accel, |k| magnitudes[k]);
    let scale = magnitudes.iter().copied().fold(0.0, f64::max);
    let err = truncation_estimate(n_accel, scale) + 8.0 * f64::EPSILON * acc.magnitude;
    Ok(NumericResult::new(sigma * acc.value, err, n_accel))
}

/// `Σ_{m=1}^{r-1} 1/((r-m) m)`, the coefficient of `2^-r` in the square of `Σ 1/(n 2^n)`.
pub fn cauchy_square_weights(r: u64) -> f64 {
    assert!(r >= 2, "r must be at least 2");
    (1..r).map(|m| 1.0 / ((r - m) as f64 * m as f64)).sum()
}

/// `Σ_{r≥1} c_r H_r α^r` evaluated as `∫₀¹ (f(α) - f(αx)) / (1 - x) dx`,
/// where `f(x) = Σ c_r x^r` is supplied in closed form.
///
/// The pairing of `c` and `f` is checked at `α/2`, where the power series
/// converges geometrically.
pub fn harmonic_weighted_sum(
    c: impl Fn(u64) -> f64 + Send + Sync + 'static,
    alpha: f64,
    f: impl Fn(f64) -> f64,
    tol: f64,
) -> Result<NumericResult, SeriesError> {
    let probe = 0.5 * alpha;
    let series = SeriesSpec::from_fn(1, SignPattern::General, move |r| c(r as u64) * probe.powi(r as i32));
    let generated = sum_direct(&series, 1e-14, DEFAULT_MAX_TERMS)?;
    let closed = f(probe);
    if !closed.is_finite() || (generated.value - closed).abs() > 1e-9 * (1.0 + closed.abs()) {
        return Err(SeriesError::GeneratorMismatch(format!(
            "Σ c_r x^r = {} but f(x) = {closed} at x = {probe}",
            generated.value
        )));
    }
    let f_alpha = f(alpha);
    if !f_alpha.is_finite() {
        return Err(SeriesError::GeneratorMismatch(format!("f({alpha}) is not finite")));
    }
    let integrand = |x: f64| (f_alpha - f(alpha * x)) / (1.0 - x);
    Ok(quad::integrate_finite(integrand, 0.0, 1.0, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::specfun::{dbeta, dilog, harmonic, zeta, LN2, PI};

    fn series(src: &str) -> SeriesSpec {
        match parse(src).unwrap() {
            Expression::Sum { var, start, body } => SeriesSpec::from_expression_detect(&var, start, &body).unwrap(),
            other => panic!("not a sum: {other}"),
        }
    }

    #[test]
    fn log_series_at_half() {
        let s = series("sum(k, 1, exp(-k*ln(2))/k)");
        assert_eq!(s.pattern(), SignPattern::PositiveDecreasing);
        let r = sum_direct(&s, 1e-14, DEFAULT_MAX_TERMS).unwrap();
        assert!((r.value - LN2).abs() <= 10.0 * r.err, "{r}");
        assert!((r.value - std::f64::consts::LN_2).abs() < 1e-10);
    }

    #[test]
    fn two_power_weighted_squares() {
        let s = series("sum(k, 1, 1/(2^(k-1)*k^2))");
        let r = sum_direct(&s, 1e-15, DEFAULT_MAX_TERMS).unwrap();
        // 200-term direct oracle
        let oracle: f64 = (1..=200).rev().map(|k| 1.0 / (2f64.powi(k - 1) * (k * k) as f64)).sum();
        assert!((r.value - oracle).abs() < 1e-15);
        assert!((r.value - (PI * PI / 6.0 - LN2 * LN2)).abs() < 1e-15);
        assert!((r.value - 1.1644810529).abs() < 1e-10);
    }

    #[test]
    fn inverse_squares_do_not_converge_directly() {
        let s = series("sum(k, 1, 1/k^2)");
        let err = sum_direct(&s, 1e-12, DEFAULT_MAX_TERMS).unwrap_err();
        assert!(matches!(err, SeriesError::NonConvergence { .. }), "{err}");
    }

    #[test]
    fn growing_prefix_is_tolerated() {
        // k 2^-k grows for k = 1 before the geometric tail
        let s = series("sum(k, 1, k*2^-k)");
        let r = sum_direct(&s, 1e-14, DEFAULT_MAX_TERMS).unwrap();
        assert!((r.value - 2.0).abs() <= 10.0 * r.err);
    }

    #[test]
    fn finite_support() {
        let s = SeriesSpec::from_fn(1, SignPattern::General, |k| if k <= 3 { k as f64 } else { 0.0 });
        let r = sum_direct(&s, 1e-14, 100).unwrap();
        assert_eq!(r.value, 6.0);
        let bad = SeriesSpec::from_fn(1, SignPattern::General, |k| if k == 5 { f64::NAN } else { 1.0 / (k * k) as f64 });
        assert_eq!(sum_direct(&bad, 1e-14, 100), Err(SeriesError::NonFiniteTerm { index: 5 }));
    }

    #[test]
    fn alternating_inverse_squares() {
        let s = series("sum(k, 1, (-1)^(k-1)/k^2)");
        assert_eq!(s.pattern(), SignPattern::Alternating);
        let r = sum_alternating(&s, 40).unwrap();
        assert!((r.value - PI * PI / 12.0).abs() <= 1e-15);
        assert!((r.value - 0.8224670334).abs() < 1e-10);
    }

    #[test]
    fn alternating_inverse_square_roots() {
        let s = series("sum(k, 0, (-1)^k / sqrt(2*k+1))");
        let r = sum_alternating(&s, 40).unwrap();
        // van Wijngaarden-free oracle: mean of two consecutive partial sums
        // of the raw series at 10^5 terms is accurate to ~1e-8
        let mut partial = 0.0;
        let mut prev = 0.0;
        for k in 0..100_000u64 {
            prev = partial;
            let t = 1.0 / ((2 * k + 1) as f64).sqrt();
            partial += if k % 2 == 0 { t } else { -t };
        }
        let oracle = 0.5 * (partial + prev);
        assert!((r.value - oracle).abs() < 1e-7);
        assert!((r.value - dbeta(0.5).unwrap()).abs() < 1e-15);
        assert!((r.value - 0.6676914572).abs() < 1e-10);
    }

    #[test]
    fn non_alternating_rejected() {
        let s = series("sum(k, 0, (-1)^k)");
        assert!(matches!(sum_alternating(&s, 40), Err(SeriesError::SignPattern { .. })));
        let s = SeriesSpec::from_fn(0, SignPattern::Alternating, |k| 1.0 / (k + 1) as f64);
        assert!(matches!(sum_alternating(&s, 40), Err(SeriesError::SignPattern { .. })));
        assert_eq!(sum_direct(&s, 1e-10, 10), Err(SeriesError::WrongPattern));
    }

    #[test]
    fn acceleration_depth_consistency() {
        for src in [
            "sum(k, 1, (-1)^(k-1)/k^2)",
            "sum(k, 0, (-1)^k / sqrt(2*k+1))",
            "sum(k, 0, (-1)^(k+1) * ln(2*k+1)/(2*k+1))",
        ] {
            let s = series(src);
            let a = sum_alternating(&s, 30).unwrap();
            let b = sum_alternating(&s, 40).unwrap();
            assert!((a.value - b.value).abs() < 1e-11, "{src}");
        }
    }

    #[test]
    fn cauchy_weights() {
        assert_eq!(cauchy_square_weights(2), 1.0);
        assert!((cauchy_square_weights(4) - 11.0 / 12.0).abs() < 1e-15);
        assert!((cauchy_square_weights(10) - 2.0 * harmonic(9) / 10.0).abs() < 1e-14);
    }

    #[test]
    fn transform_full_circle() {
        let r = harmonic_weighted_sum(
            |r| 1.0 / (r as f64 * 2f64.powi(r as i32 - 1)),
            1.0,
            |x| -2.0 * (-0.5 * x).ln_1p(),
            1e-12,
        )
        .unwrap();
        assert!((r.value - PI * PI / 6.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn transform_single_term() {
        let r = harmonic_weighted_sum(|r| if r == 1 { 1.0 } else { 0.0 }, 0.5, |x| x, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);
    }

    #[test]
    fn transform_euler_sum() {
        let r = harmonic_weighted_sum(|r| 1.0 / (r * r) as f64, 1.0, |x| dilog(x).unwrap(), 1e-12).unwrap();
        let z3 = zeta(3.0).unwrap();
        assert!((r.value - z3 - z3).abs() < 1e-10, "{r}");
        assert!((r.value - z3 - 1.2020569032).abs() < 1e-9);
    }

    #[test]
    fn transform_rejects_mismatched_generator() {
        let err = harmonic_weighted_sum(|r| 1.0 / r as f64, 0.5, |x| x, 1e-12).unwrap_err();
        assert!(matches!(err, SeriesError::GeneratorMismatch(_)));
    }
}
