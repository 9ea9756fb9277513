//! Numerical evaluation of expressions that may contain integrals and sums.
//!
//! Closed-form parts are evaluated exactly as [`eval_closed`] would. Each
//! integral or sum contributes its own error bound, which is carried through
//! the surrounding arithmetic by evaluating each operation at the corners of
//! its operands' error intervals.

use thiserror::Error;

use crate::expr::{apply, apply_binary, eval_closed, BinaryOp, EvalError, Expression};
use crate::numeric::NumericResult;
use crate::quad::{self, IntegralSpec, QuadError, QuadOptions};
use crate::series::{SeriesError, SeriesSpec, DEFAULT_ACCEL_TERMS, DEFAULT_MAX_TERMS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantityOptions {
    pub quad: QuadOptions,
    pub series_tol: f64,
    pub max_terms: usize,
    pub n_accel: usize,
}

impl Default for QuantityOptions {
    fn default() -> Self {
        Self {
            quad: QuadOptions::new(1e-12),
            series_tol: 1e-14,
            max_terms: DEFAULT_MAX_TERMS,
            n_accel: DEFAULT_ACCEL_TERMS,
        }
    }
}

#[derive(Debug, Error)]
pub enum QuantityError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("integral: {0}")]
    Quad(#[from] QuadError),
    #[error("sum: {0}")]
    Series(#[from] SeriesError),
    #[error("free variable `{0}`")]
    FreeVariable(String),
    #[error("error bound of {0} is not finite")]
    UnboundedError(String),
}

/// Evaluates a closed expression (no free variables) to a value with an
/// absolute error bound.
pub fn evaluate(e: &Expression, opts: &QuantityOptions) -> Result<NumericResult, QuantityError> {
    if let Some(v) = e.free_vars().into_iter().next() {
        return Err(QuantityError::FreeVariable(v));
    }
    eval(e, opts)
}

fn eval(e: &Expression, opts: &QuantityOptions) -> Result<NumericResult, QuantityError> {
    if e.is_closed_form() {
        let no_vars: [(&str, f64); 0] = [];
        return Ok(NumericResult::exact(eval_closed(e, &no_vars)?));
    }
    match e {
        Expression::Integral { .. } => {
            let spec = IntegralSpec::from_expression(e).expect("integral node")?;
            Ok(quad::integrate_with(&spec, &opts.quad)?)
        }
        Expression::Sum { var, start, body } => {
            let spec = SeriesSpec::from_expression_detect(var, *start, body)?;
            Ok(spec.sum(opts.series_tol, opts.max_terms, opts.n_accel)?)
        }
        Expression::Neg(c) => {
            let r = eval(c, opts)?;
            Ok(NumericResult::new(-r.value, r.err, r.terms_used))
        }
        Expression::Binary(op, l, r) => {
            let a = eval(l, opts)?;
            let b = eval(r, opts)?;
            binary(*op, a, b)
        }
        Expression::Call(f, args) => {
            let x = eval(&args[0], opts)?;
            let value = apply(*f, x.value)?;
            let err = corner_spread(value, &[x.value - x.err, x.value + x.err], |t| apply(*f, t).ok())
                .ok_or_else(|| QuantityError::UnboundedError(f.name().to_string()))?;
            Ok(NumericResult::new(value, err, x.terms_used))
        }
        // Closed-form leaves were handled above.
        Expression::Number(_) | Expression::Const(_) | Expression::Var(_) => unreachable!(),
    }
}

fn binary(op: BinaryOp, a: NumericResult, b: NumericResult) -> Result<NumericResult, QuantityError> {
    let value = apply_binary(op, a.value, b.value)?;
    let terms = a.terms_used + b.terms_used;
    let err = match op {
        BinaryOp::Add | BinaryOp::Sub => a.err + b.err,
        _ => {
            let mut corners = Vec::with_capacity(4);
            for x in [a.value - a.err, a.value + a.err] {
                for y in [b.value - b.err, b.value + b.err] {
                    corners.push((x, y));
                }
            }
            let spread = corners
                .iter()
                .map(|&(x, y)| apply_binary(op, x, y).ok().map(|v| (v - value).abs()))
                .try_fold(0.0f64, |m, d| d.map(|d| m.max(d)));
            spread.ok_or_else(|| QuantityError::UnboundedError(format!("`{}`", op.symbol())))?
        }
    };
    // Rounding of the operation itself.
    let err = if err > 0.0 { err + f64::EPSILON * value.abs() } else { 0.0 };
    if !err.is_finite() {
        return Err(QuantityError::UnboundedError(format!("`{}`", op.symbol())));
    }
    Ok(NumericResult::new(value, err, terms))
}

/// Largest deviation of `f` from `value` over the interval endpoints, or
/// `None` if `f` fails at one of them.
fn corner_spread(value: f64, xs: &[f64], f: impl Fn(f64) -> Option<f64>) -> Option<f64> {
    if xs[0] == xs[1] {
        return Some(0.0);
    }
    let mut m = 0.0f64;
    for &x in xs {
        m = m.max((f(x)? - value).abs());
    }
    m.is_finite().then_some(m)
}
