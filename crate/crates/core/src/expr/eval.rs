use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::ast::{BinaryOp, Constant, Expression, Function};
use super::{BindError, EvalError};
use crate::specfun::{self, DomainError};

/// Variable lookup used during evaluation.
pub trait Bindings {
    fn lookup(&self, name: &str) -> Option<f64>;
}

impl Bindings for HashMap<String, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Bindings for BTreeMap<String, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Bindings for [(&str, f64)] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

impl<const N: usize> Bindings for [(&str, f64); N] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.as_slice().lookup(name)
    }
}

struct Single<'a> {
    name: &'a str,
    value: f64,
}

impl Bindings for Single<'_> {
    fn lookup(&self, name: &str) -> Option<f64> {
        (name == self.name).then_some(self.value)
    }
}

fn finite(v: f64, what: impl FnOnce() -> String) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite(what()))
    }
}

/// Applies `f` to `x`, enforcing its domain and a finite result.
pub fn apply(f: Function, x: f64) -> Result<f64, EvalError> {
    let domain = |cond: bool| {
        if cond {
            Ok(())
        } else {
            Err(DomainError::new(f.name(), x))
        }
    };
    let v = match f {
        Function::Exp => x.exp(),
        Function::Ln => {
            domain(x > 0.0)?;
            x.ln()
        }
        Function::Sqrt => {
            domain(x >= 0.0)?;
            x.sqrt()
        }
        Function::Sin => x.sin(),
        Function::Cos => x.cos(),
        Function::Tan => x.tan(),
        Function::Sinh => x.sinh(),
        Function::Cosh => x.cosh(),
        Function::Tanh => x.tanh(),
        Function::Atanh => {
            domain(x.abs() < 1.0)?;
            x.atanh()
        }
        Function::Abs => x.abs(),
        Function::Gamma => specfun::gamma(x)?,
        Function::LnGamma => specfun::ln_gamma(x)?,
        Function::Zeta => specfun::zeta(x)?,
        Function::Dilog => specfun::dilog(x)?,
        Function::DirichletBeta => specfun::dbeta(x)?,
        Function::DirichletBetaPrime => specfun::dbeta_prime(x)?,
        Function::Harmonic => {
            domain(x >= 0.0 && x.fract() == 0.0 && x <= specfun::HARMONIC_MAX as f64)?;
            specfun::harmonic(x as u64)
        }
    };
    finite(v, || format!("{}({x})", f.name()))
}

/// `a op b`, rejecting non-finite results.
pub fn apply_binary(op: BinaryOp, a: f64, b: f64) -> Result<f64, EvalError> {
    let v = match op {
        BinaryOp::Add => a + b,
        BinaryOp::Sub => a - b,
        BinaryOp::Mul => a * b,
        BinaryOp::Div => a / b,
        BinaryOp::Pow => a.powf(b),
    };
    finite(v, || format!("{a} {} {b}", op.symbol()))
}

fn eval_with(e: &Expression, env: &(impl Bindings + ?Sized)) -> Result<f64, EvalError> {
    match e {
        Expression::Number(v) => Ok(*v),
        Expression::Const(Constant::Pi) => Ok(specfun::PI),
        Expression::Const(Constant::EulerGamma) => Ok(specfun::EULER_GAMMA),
        Expression::Const(Constant::Inf) => Err(EvalError::InfInArithmetic),
        Expression::Var(name) => env
            .lookup(name)
            .ok_or_else(|| EvalError::Unbound(name.clone())),
        Expression::Neg(c) => Ok(-eval_with(c, env)?),
        Expression::Binary(op, l, r) => {
            let a = eval_with(l, env)?;
            let b = eval_with(r, env)?;
            apply_binary(*op, a, b)
        }
        Expression::Call(f, args) => {
            let x = eval_with(&args[0], env)?;
            apply(*f, x)
        }
        Expression::Integral { .. } | Expression::Sum { .. } => Err(EvalError::NotClosedForm),
    }
}

/// Evaluates a closed-form expression under `bindings`.
pub fn eval_closed(e: &Expression, bindings: &(impl Bindings + ?Sized)) -> Result<f64, EvalError> {
    eval_with(e, bindings)
}

/// A closed-form expression in one variable, ready to be sampled.
#[derive(Debug, Clone)]
pub struct Univariate {
    expr: Arc<Expression>,
    var: String,
}

impl Univariate {
    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn expression(&self) -> &Expression {
        &self.expr
    }

    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        eval_with(
            &self.expr,
            &Single {
                name: &self.var,
                value: t,
            },
        )
    }

    /// Like [`Univariate::eval`], but reports any failure as NaN so the
    /// quadrature and summation engines can treat it as a non-finite sample.
    pub fn sample(&self, t: f64) -> f64 {
        self.eval(t).unwrap_or(f64::NAN)
    }
}

/// Binds the single free variable of `e` to `var`.
pub fn bind_univariate(e: &Expression, var: &str) -> Result<Univariate, BindError> {
    if !e.is_closed_form() {
        return Err(BindError::NotClosedForm(EvalError::NotClosedForm));
    }
    if let Some(other) = e.free_vars().into_iter().find(|v| v != var) {
        return Err(BindError::FreeVariable {
            expected: var.to_string(),
            found: other,
        });
    }
    Ok(Univariate {
        expr: Arc::new(e.clone()),
        var: var.to_string(),
    })
}
