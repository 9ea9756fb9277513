use std::collections::BTreeSet;
use std::fmt;

/// Byte range into the source text of a parsed expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Named constants recognised by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    EulerGamma,
    /// Only meaningful as an integral bound.
    Inf,
}

impl Constant {
    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::EulerGamma => "euler_gamma",
            Constant::Inf => "inf",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "pi" => Some(Constant::Pi),
            "euler_gamma" => Some(Constant::EulerGamma),
            "inf" => Some(Constant::Inf),
            _ => None,
        }
    }
}

/// The closed set of callable functions. Every function takes one argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Atanh,
    Abs,
    Gamma,
    LnGamma,
    Zeta,
    Dilog,
    DirichletBeta,
    DirichletBetaPrime,
    Harmonic,
}

impl Function {
    pub const ALL: [Function; 18] = [
        Function::Exp,
        Function::Ln,
        Function::Sqrt,
        Function::Sin,
        Function::Cos,
        Function::Tan,
        Function::Sinh,
        Function::Cosh,
        Function::Tanh,
        Function::Atanh,
        Function::Abs,
        Function::Gamma,
        Function::LnGamma,
        Function::Zeta,
        Function::Dilog,
        Function::DirichletBeta,
        Function::DirichletBetaPrime,
        Function::Harmonic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Exp => "exp",
            Function::Ln => "ln",
            Function::Sqrt => "sqrt",
            Function::Sin => "sin",
            Function::Cos => "cos",
            Function::Tan => "tan",
            Function::Sinh => "sinh",
            Function::Cosh => "cosh",
            Function::Tanh => "tanh",
            Function::Atanh => "atanh",
            Function::Abs => "abs",
            Function::Gamma => "gamma",
            Function::LnGamma => "lngamma",
            Function::Zeta => "zeta",
            Function::Dilog => "dilog",
            Function::DirichletBeta => "dbeta",
            Function::DirichletBetaPrime => "dbeta_prime",
            Function::Harmonic => "harmonic",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Function::ALL.iter().copied().find(|f| f.name() == name)
    }

    pub fn arity(self) -> usize {
        1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

/// Immutable expression tree.
///
/// `Integral` and `Sum` are binding forms: their body may refer to the
/// declared variable. They are not closed forms and are evaluated
/// numerically by [`crate::quantity`].
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    /// Non-negative finite literal; negation is always an explicit `Neg`.
    Number(f64),
    Const(Constant),
    Var(String),
    Neg(Box<Expression>),
    Binary(BinaryOp, Box<Expression>, Box<Expression>),
    Call(Function, Vec<Expression>),
    Integral {
        var: String,
        lower: Box<Expression>,
        upper: Box<Expression>,
        body: Box<Expression>,
    },
    Sum {
        var: String,
        start: i64,
        body: Box<Expression>,
    },
}

impl Expression {
    pub fn number(v: f64) -> Self {
        Expression::Number(v)
    }

    pub fn var(name: impl Into<String>) -> Self {
        Expression::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expression) -> Self {
        Expression::Neg(Box::new(e))
    }

    pub fn binary(op: BinaryOp, l: Expression, r: Expression) -> Self {
        Expression::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn call(f: Function, arg: Expression) -> Self {
        Expression::Call(f, vec![arg])
    }

    /// Free variables, with binders of `Integral`/`Sum` removed from their bodies.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Expression::Number(_) | Expression::Const(_) => {}
            Expression::Var(name) => {
                if !bound.contains(&name.as_str()) {
                    out.insert(name.clone());
                }
            }
            Expression::Neg(c) => c.collect_free(bound, out),
            Expression::Binary(_, l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Expression::Call(_, args) => {
                for a in args {
                    a.collect_free(bound, out);
                }
            }
            Expression::Integral {
                var,
                lower,
                upper,
                body,
            } => {
                lower.collect_free(bound, out);
                upper.collect_free(bound, out);
                bound.push(var);
                body.collect_free(bound, out);
                bound.pop();
            }
            Expression::Sum { var, body, .. } => {
                bound.push(var);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// True when the tree contains no `Integral` or `Sum` node.
    pub fn is_closed_form(&self) -> bool {
        match self {
            Expression::Number(_) | Expression::Const(_) | Expression::Var(_) => true,
            Expression::Neg(c) => c.is_closed_form(),
            Expression::Binary(_, l, r) => l.is_closed_form() && r.is_closed_form(),
            Expression::Call(_, args) => args.iter().all(Expression::is_closed_form),
            Expression::Integral { .. } | Expression::Sum { .. } => false,
        }
    }

    /// True when `inf` appears anywhere in the tree.
    pub fn mentions_inf(&self) -> bool {
        match self {
            Expression::Const(Constant::Inf) => true,
            Expression::Number(_) | Expression::Const(_) | Expression::Var(_) => false,
            Expression::Neg(c) => c.mentions_inf(),
            Expression::Binary(_, l, r) => l.mentions_inf() || r.mentions_inf(),
            Expression::Call(_, args) => args.iter().any(Expression::mentions_inf),
            Expression::Integral {
                lower, upper, body, ..
            } => lower.mentions_inf() || upper.mentions_inf() || body.mentions_inf(),
            Expression::Sum { body, .. } => body.mentions_inf(),
        }
    }
}
