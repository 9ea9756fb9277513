//! Double-exponential quadrature on finite and half-infinite intervals,
//! plus a window-based divergence classifier for improper integrals.
//!
//! Samples are never taken at an endpoint. A non-finite sample is accepted
//! only in an endpoint tail: at least four samples inward of it must be
//! finite, their contributions must already be shrinking, and the last
//! finite value times the weight at the failed node must be below `tol/10`.
//! Everything beyond it on that side is dropped. Levels coarser than the
//! one just before `min_level` skip the test and stop at the first
//! non-finite sample.

mod divergence;
mod engine;

use thiserror::Error;

use crate::expr::{bind_univariate, eval_closed, BindError, Constant, EvalError, Expression, Univariate};
use crate::numeric::NumericResult;

pub use divergence::{
    detect_divergence, Divergence, Window, WindowTable, CONVERGED_TAIL, DIVERGENT_FLOOR, MAX_WINDOW_EXPONENT,
    TREND_WINDOWS, WINDOW_TOL,
};
pub use engine::{QuadOptions, DECAY_RATIO};

use engine::{run_levels, ExpSinh, TanhSinh};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("no convergence by level {level}: estimate {estimate}, error {err:e}")]
    NoConvergence { estimate: f64, err: f64, level: u32 },
    #[error("non-finite integrand sample at interior point x = {x}")]
    SingularInterior { x: f64 },
    #[error("integrand does not decay at infinity (tail contribution {tail:e} vs peak {peak:e})")]
    NoDecay { tail: f64, peak: f64 },
    #[error("invalid interval [{lower}, {upper}]")]
    InvalidInterval { lower: f64, upper: f64 },
    #[error("integral bound: {0}")]
    Bound(EvalError),
    #[error(transparent)]
    Bind(#[from] BindError),
}

/// ∫_a^b f(x) dx by tanh-sinh quadrature.
pub fn integrate_finite(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<NumericResult, QuadError> {
    integrate_finite_with(f, a, b, &QuadOptions::new(tol))
}

pub fn integrate_finite_with(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<NumericResult, QuadError> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadError::InvalidInterval { lower: a, upper: b });
    }
    run_levels(&f, &TanhSinh { a, b }, opts, false)
}

/// ∫_a^∞ f(x) dx by exp-sinh quadrature. Fails with [`QuadError::NoDecay`]
/// when the outermost contributions have not died away.
pub fn integrate_half_infinite(f: impl Fn(f64) -> f64, a: f64, tol: f64) -> Result<NumericResult, QuadError> {
    integrate_half_infinite_with(f, a, &QuadOptions::new(tol))
}

pub fn integrate_half_infinite_with(
    f: impl Fn(f64) -> f64,
    a: f64,
    opts: &QuadOptions,
) -> Result<NumericResult, QuadError> {
    if !a.is_finite() {
        return Err(QuadError::InvalidInterval {
            lower: a,
            upper: f64::INFINITY,
        });
    }
    run_levels(&f, &ExpSinh { a }, opts, true)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Finite(f64),
    PosInf,
    NegInf,
}

impl Bound {
    /// Evaluates a bound expression; `inf` and `-inf` are recognised here only.
    pub fn from_expression(e: &Expression) -> Result<Self, QuadError> {
        match e {
            Expression::Const(Constant::Inf) => Ok(Bound::PosInf),
            Expression::Neg(inner) if **inner == Expression::Const(Constant::Inf) => Ok(Bound::NegInf),
            _ => {
                let v = eval_closed(e, &[] as &[(&str, f64)]).map_err(QuadError::Bound)?;
                Ok(Bound::Finite(v))
            }
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Bound::Finite(v) => v,
            Bound::PosInf => f64::INFINITY,
            Bound::NegInf => f64::NEG_INFINITY,
        }
    }
}

/// N₀,₄(a; m) = ∫₀^∞ dx / (x⁴ + 2a x² + 1)^(m+1), by quadrature.
pub fn quartic_moment(a: f64, m: u32, tol: f64) -> Result<NumericResult, QuadError> {
    let power = f64::from(m + 1);
    integrate_half_infinite(|x: f64| (x.powi(4) + 2.0 * a * x * x + 1.0).powf(-power), 0.0, tol)
}

/// A definite integral of a closed-form integrand.
#[derive(Debug, Clone)]
pub struct IntegralSpec {
    pub integrand: Univariate,
    pub lower: Bound,
    pub upper: Bound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Finite,
    HalfInfinite,
    /// (-∞, b], integrated as ∫_{-b}^∞ f(-x) dx.
    NegHalfInfinite,
    /// Split at 0.
    DoublyInfinite,
}

impl IntegralSpec {
    pub fn new(integrand: Univariate, lower: Bound, upper: Bound) -> Self {
        Self {
            integrand,
            lower,
            upper,
        }
    }

    /// Builds the spec for an `integral(var, lo, hi, body)` node.
    pub fn from_parts(var: &str, lower: &Expression, upper: &Expression, body: &Expression) -> Result<Self, QuadError> {
        let integrand = bind_univariate(body, var)?;
        Ok(Self::new(integrand, Bound::from_expression(lower)?, Bound::from_expression(upper)?))
    }

    pub fn from_expression(e: &Expression) -> Option<Result<Self, QuadError>> {
        match e {
            Expression::Integral {
                var,
                lower,
                upper,
                body,
            } => Some(Self::from_parts(var, lower, upper, body)),
            _ => None,
        }
    }

    pub fn route(&self) -> Result<Route, QuadError> {
        let invalid = || QuadError::InvalidInterval {
            lower: self.lower.value(),
            upper: self.upper.value(),
        };
        match (self.lower, self.upper) {
            (Bound::Finite(a), Bound::Finite(b)) if a < b => Ok(Route::Finite),
            (Bound::Finite(_), Bound::PosInf) => Ok(Route::HalfInfinite),
            (Bound::NegInf, Bound::Finite(_)) => Ok(Route::NegHalfInfinite),
            (Bound::NegInf, Bound::PosInf) => Ok(Route::DoublyInfinite),
            _ => Err(invalid()),
        }
    }
}

/// Integrates `spec`, dispatching on the finiteness of its bounds.
pub fn integrate(spec: &IntegralSpec, tol: f64) -> Result<NumericResult, QuadError> {
    integrate_with(spec, &QuadOptions::new(tol))
}

pub fn integrate_with(spec: &IntegralSpec, opts: &QuadOptions) -> Result<NumericResult, QuadError> {
    let f = |x: f64| spec.integrand.sample(x);
    let reflected = |x: f64| spec.integrand.sample(-x);
    match spec.route()? {
        Route::Finite => integrate_finite_with(f, spec.lower.value(), spec.upper.value(), opts),
        Route::HalfInfinite => integrate_half_infinite_with(f, spec.lower.value(), opts),
        Route::NegHalfInfinite => integrate_half_infinite_with(reflected, -spec.upper.value(), opts),
        Route::DoublyInfinite => {
            let right = integrate_half_infinite_with(f, 0.0, opts)?;
            let left = integrate_half_infinite_with(reflected, 0.0, opts)?;
            Ok(NumericResult::new(
                right.value + left.value,
                right.err + left.err,
                right.terms_used + left.terms_used,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::specfun::{gamma, zeta, PI};

    fn spec(src: &str) -> IntegralSpec {
        IntegralSpec::from_expression(&parse(src).unwrap()).unwrap().unwrap()
    }

    #[test]
    fn log_over_x_on_unit_interval() {
        let r = integrate_finite(|x: f64| x.ln_1p() / x, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - PI * PI / 12.0).abs() <= 1e-12, "{r}");
        assert!((r.value - PI * PI / 12.0).abs() <= 10.0 * r.err);
    }

    #[test]
    fn bose_type_integrand_on_short_interval() {
        let s = spec("integral(x, 0, ln(2), x / (1 - exp(-x)))");
        assert_eq!(s.route().unwrap(), Route::Finite);
        let r = integrate(&s, 1e-12).unwrap();
        assert!((r.value - PI * PI / 12.0).abs() <= 1e-12, "{r}");
        assert!((r.value - 0.8224670334).abs() < 1e-10);
    }

    #[test]
    fn log_log_tangent() {
        let s = spec("integral(x, pi/4, pi/2, ln(ln(tan(x))))");
        let r = integrate(&s, 1e-12).unwrap();
        let closed = PI / 2.0 * ((2.0 * PI).sqrt() * gamma(0.75).unwrap() / gamma(0.25).unwrap()).ln();
        assert!((r.value - closed).abs() < 1e-9, "{r} vs {closed}");
        assert!((r.value + 0.26044).abs() < 5e-6);
    }

    #[test]
    fn sech_squared() {
        let r = integrate_half_infinite(|x: f64| 1.0 / x.cosh().powi(2), 0.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-12, "{r}");
    }

    #[test]
    fn quartic_m0() {
        let r = integrate_half_infinite(|x: f64| 1.0 / (x.powi(4) + 2.0 * x * x + 1.0), 0.0, 1e-12).unwrap();
        assert!((r.value - PI / 4.0).abs() <= 1e-12, "{r}");
    }

    #[test]
    fn zeta_integral_representation() {
        // ∫ x^(ν-1)/(e^(μx) - 1) = Γ(ν) ζ(ν) / μ^ν at (ν, μ) = (3, 2)
        let s = spec("integral(x, 0, inf, x^2/(exp(2*x) - 1))");
        let r = integrate(&s, 1e-12).unwrap();
        let expected = gamma(3.0).unwrap() * zeta(3.0).unwrap() / 8.0;
        assert!((r.value - expected).abs() <= 1e-12, "{r} vs {expected}");
    }

    #[test]
    fn routes() {
        assert_eq!(spec("integral(x, pi/4, pi/2, x)").route().unwrap(), Route::Finite);
        assert_eq!(spec("integral(x, 0, inf, exp(-x))").route().unwrap(), Route::HalfInfinite);
        assert_eq!(spec("integral(x, -inf, 0, exp(x))").route().unwrap(), Route::NegHalfInfinite);
        assert_eq!(spec("integral(x, -inf, inf, exp(-x^2))").route().unwrap(), Route::DoublyInfinite);
        assert!(spec("integral(x, 1, 0, x)").route().is_err());
        assert!(spec("integral(x, inf, 0, x)").route().is_err());
    }

    #[test]
    fn infinite_routes_integrate() {
        let r = integrate(&spec("integral(x, -inf, inf, exp(-x^2))"), 1e-12).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-12);
        let r = integrate(&spec("integral(x, -inf, 1, exp(x))"), 1e-12).unwrap();
        assert!((r.value - 1f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn bound_expression_matches_literal_bitwise() {
        let a = integrate(&spec("integral(x, 0, ln(2), x / (1 - exp(-x)))"), 1e-12).unwrap();
        let b = integrate(&spec("integral(x, 0, 0.6931471805599453, x / (1 - exp(-x)))"), 1e-12).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn interior_singularity_reported() {
        let err = integrate_finite(|x: f64| 1.0 / (x - 0.5), 0.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, QuadError::SingularInterior { .. }), "{err}");
    }

    #[test]
    fn non_decaying_integrand() {
        let err = integrate_half_infinite(|x: f64| x * (x * x).sin() * (2.0 * x).sin(), 0.0, 1e-10).unwrap_err();
        assert!(matches!(err, QuadError::NoDecay { .. }), "{err}");
        let err = integrate_half_infinite(|x: f64| 1.0 / (1.0 + x), 0.0, 1e-10).unwrap_err();
        assert!(matches!(err, QuadError::NoDecay { .. }), "{err}");
    }

    #[test]
    fn inverse_square_root_endpoint() {
        let r = integrate_finite(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn invalid_intervals() {
        assert!(integrate_finite(|x| x, 1.0, 1.0, 1e-10).is_err());
        assert!(integrate_finite(|x| x, 0.0, f64::INFINITY, 1e-10).is_err());
        assert!(integrate_half_infinite(|x| x, f64::NAN, 1e-10).is_err());
    }

    #[test]
    fn error_non_increasing_with_level_cap() {
        let f = |x: f64| (x * 20.0).sin().powi(2) / (1.0 + x * x);
        let mut last = f64::INFINITY;
        for cap in 3..=9 {
            let opts = QuadOptions::new(1e-14).with_level_cap(cap);
            let err = match integrate_finite_with(f, 0.0, 3.0, &opts) {
                Ok(r) => r.err,
                Err(QuadError::NoConvergence { err, .. }) => err,
                Err(e) => panic!("{e}"),
            };
            assert!(err <= last, "cap {cap}: {err} > {last}");
            last = err;
        }
    }
}
