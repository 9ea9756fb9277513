//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := NUMBER | 'pi' | 'euler_gamma' | 'inf' | IDENT
//!         | IDENT '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Two reserved call forms bind a variable:
//! `integral(x, lo, hi, body)` and `sum(k, start, body)`, where `start`
//! is an integer literal.

use super::ast::{BinaryOp, Constant, Expression, Function, SourceSpan};
use super::ExprError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn lex(text: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            i += 1;
            out.push(Token {
                tok,
                span: SourceSpan::new(start, i),
            });
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lexeme = &text[start..i];
            let span = SourceSpan::new(start, i);
            let value: f64 = lexeme.parse().map_err(|_| ExprError::Syntax {
                span,
                message: format!("malformed number `{lexeme}`"),
            })?;
            if !value.is_finite() {
                return Err(ExprError::Syntax {
                    span,
                    message: format!("number `{lexeme}` is out of range"),
                });
            }
            out.push(Token {
                tok: Tok::Num(value),
                span,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(text[start..i].to_string()),
                span: SourceSpan::new(start, i),
            });
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        return Err(ExprError::Syntax {
            span: SourceSpan::new(start, start + ch.len_utf8()),
            message: format!("unexpected character `{ch}`"),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan::new(text.len(), text.len()),
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str, from: Option<usize>) -> ExprError {
        let here = self.span();
        let span = match from {
            Some(s) => SourceSpan::new(s, here.end),
            None => here,
        };
        ExprError::Syntax {
            span,
            message: format!("expected {wanted}, found {}", self.peek().describe()),
        }
    }

    fn expect(&mut self, tok: Tok, wanted: &str, from: Option<usize>) -> Result<Token, ExprError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(wanted, from))
        }
    }

    fn expr(&mut self) -> Result<Expression, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expression, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expression, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expression::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, ExprError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expression::binary(BinaryOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expression, ExprError> {
        let start = self.span().start;
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expression::Number(v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`", Some(start))?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let ident = self.bump();
                if *self.peek() == Tok::LParen {
                    return self.call(&name, ident.span);
                }
                if let Some(c) = Constant::from_name(&name) {
                    return Ok(Expression::Const(c));
                }
                if Function::from_name(&name).is_some() || is_binder(&name) {
                    return Err(ExprError::Syntax {
                        span: ident.span,
                        message: format!("function `{name}` used without arguments"),
                    });
                }
                Ok(Expression::Var(name))
            }
            _ => Err(self.unexpected("an expression", None)),
        }
    }

    /// An argument of the call starting at `start`. Input that ends inside
    /// the argument list is reported against the whole call.
    fn arg(&mut self, start: usize) -> Result<Expression, ExprError> {
        self.expr().map_err(|e| match e {
            ExprError::Syntax { span, message } if *self.peek() == Tok::Eof => ExprError::Syntax {
                span: SourceSpan::new(start, span.end),
                message,
            },
            e => e,
        })
    }

    fn call(&mut self, name: &str, name_span: SourceSpan) -> Result<Expression, ExprError> {
        let start = name_span.start;
        match name {
            "integral" => return self.integral(start),
            "sum" => return self.sum(start),
            _ => {}
        }
        let Some(function) = Function::from_name(name) else {
            return Err(ExprError::UnknownFunction {
                span: name_span,
                name: name.to_string(),
            });
        };
        self.bump(); // '('
        let mut args = vec![self.arg(start)?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.arg(start)?);
        }
        let close = self.expect(Tok::RParen, "`,` or `)`", Some(start))?;
        if args.len() != function.arity() {
            return Err(ExprError::Arity {
                span: SourceSpan::new(start, close.span.end),
                name: name.to_string(),
                expected: function.arity(),
                found: args.len(),
            });
        }
        Ok(Expression::Call(function, args))
    }

    fn binder_var(&mut self, start: usize) -> Result<String, ExprError> {
        match self.peek().clone() {
            Tok::Ident(v)
                if Constant::from_name(&v).is_none()
                    && Function::from_name(&v).is_none()
                    && !is_binder(&v) =>
            {
                self.bump();
                Ok(v)
            }
            _ => Err(self.unexpected("a variable name", Some(start))),
        }
    }

    fn integral(&mut self, start: usize) -> Result<Expression, ExprError> {
        self.bump(); // '('
        let var = self.binder_var(start)?;
        self.expect(Tok::Comma, "`,`", Some(start))?;
        let lower = self.arg(start)?;
        self.expect(Tok::Comma, "`,`", Some(start))?;
        let upper = self.arg(start)?;
        self.expect(Tok::Comma, "`,`", Some(start))?;
        let body = self.arg(start)?;
        self.expect(Tok::RParen, "`)`", Some(start))?;
        Ok(Expression::Integral {
            var,
            lower: Box::new(lower),
            upper: Box::new(upper),
            body: Box::new(body),
        })
    }

    fn sum(&mut self, start: usize) -> Result<Expression, ExprError> {
        self.bump(); // '('
        let var = self.binder_var(start)?;
        self.expect(Tok::Comma, "`,`", Some(start))?;
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let index = match *self.peek() {
            Tok::Num(v) if v.fract() == 0.0 && v < 9.0e15 => {
                self.bump();
                v as i64
            }
            _ => return Err(self.unexpected("an integer start index", Some(start))),
        };
        self.expect(Tok::Comma, "`,`", Some(start))?;
        let body = self.arg(start)?;
        self.expect(Tok::RParen, "`)`", Some(start))?;
        Ok(Expression::Sum {
            var,
            start: if negative { -index } else { index },
            body: Box::new(body),
        })
    }
}

fn is_binder(name: &str) -> bool {
    name == "integral" || name == "sum"
}

/// Parses `text` into an expression tree.
pub fn parse(text: &str) -> Result<Expression, ExprError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("an operator or end of input", None));
    }
    Ok(e)
}
