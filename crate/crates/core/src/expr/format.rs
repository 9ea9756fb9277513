use std::fmt;

use super::ast::{BinaryOp, Expression};

// Binding strength of each production; a child printed in a slot that
// demands more is wrapped in parentheses.
const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_ATOM: u8 = 5;

fn precedence(e: &Expression) -> u8 {
    match e {
        Expression::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => PREC_SUM,
        Expression::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => PREC_PRODUCT,
        Expression::Neg(_) => PREC_UNARY,
        Expression::Binary(BinaryOp::Pow, ..) => 4,
        _ => PREC_ATOM,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expression, min: u8) -> fmt::Result {
    if precedence(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

pub(crate) fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        // Debug output is the shortest representation that reads back exactly.
        format!("{v:?}")
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Number(v) => f.write_str(&format_number(*v)),
            Expression::Const(c) => f.write_str(c.name()),
            Expression::Var(name) => f.write_str(name),
            Expression::Neg(child) => {
                f.write_str("-")?;
                write_child(f, child, PREC_UNARY)
            }
            Expression::Binary(op, l, r) => {
                let (lmin, rmin, spaced) = match op {
                    BinaryOp::Add | BinaryOp::Sub => (PREC_SUM, PREC_PRODUCT, true),
                    BinaryOp::Mul | BinaryOp::Div => (PREC_PRODUCT, PREC_UNARY, false),
                    BinaryOp::Pow => (PREC_ATOM, PREC_UNARY, false),
                };
                write_child(f, l, lmin)?;
                if spaced {
                    write!(f, " {} ", op.symbol())?;
                } else {
                    write!(f, "{}", op.symbol())?;
                }
                write_child(f, r, rmin)
            }
            Expression::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Expression::Integral {
                var,
                lower,
                upper,
                body,
            } => write!(f, "integral({var}, {lower}, {upper}, {body})"),
            Expression::Sum { var, start, body } => write!(f, "sum({var}, {start}, {body})"),
        }
    }
}

/// Canonical text for `e`; `parse(&format(e))` reproduces `e` exactly.
pub fn format(e: &Expression) -> String {
    e.to_string()
}
