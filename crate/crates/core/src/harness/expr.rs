//! Parameter expressions such as `exp(-2*pi)`, `3/2` or `pi*sqrt(2)/2`.
//!
//! Decimal and integer literals stay exact rationals until an operation
//! needs a real (a constant, a function or a non-integer power).

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;

#[derive(Debug, Clone)]
pub enum Value {
    Exact(Rational),
    Real(Float),
}

impl Value {
    pub fn to_float(&self, ctx: &PrecisionContext) -> Float {
        match self {
            Value::Exact(r) => ctx.float(r),
            Value::Real(f) => ctx.float(f),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Real(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> std::result::Result<Vec<Token>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push(Token::Number(chars[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> std::result::Result<Rational, String> {
    let lower = text.to_ascii_lowercase();
    let (mantissa, exponent) = match lower.split_once('e') {
        Some((m, e)) => (m.to_string(), e.parse::<i32>().map_err(|_| format!("bad exponent in `{text}`"))?),
        None => (lower, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((&mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("bad number `{text}`"));
    }
    let digits = format!("{int_part}{frac_part}");
    let n: rug::Integer = digits.parse().map_err(|_| format!("bad number `{text}`"))?;
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from(10);
    Ok(Rational::from(n) * ten.pow(scale))
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    ctx: &'a PrecisionContext,
}

type Parsed = std::result::Result<Value, String>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Parsed {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let rhs = self.term()?;
                acc = self.binary(acc, rhs, '+');
            } else if self.eat('-') {
                let rhs = self.term()?;
                acc = self.binary(acc, rhs, '-');
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Parsed {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = self.binary(acc, rhs, '*');
            } else if self.eat('/') {
                let rhs = self.unary()?;
                if matches!(&rhs, Value::Exact(r) if *r == 0) {
                    return Err("division by zero".into());
                }
                acc = self.binary(acc, rhs, '/');
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Parsed {
        if self.eat('-') {
            return Ok(match self.unary()? {
                Value::Exact(r) => Value::Exact(-r),
                Value::Real(f) => Value::Real(-f),
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Parsed {
        let base = self.atom()?;
        if self.eat('^') {
            // right associative; the exponent may carry its own sign
            let exponent = self.unary()?;
            return Ok(self.pow(base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Parsed {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Number(text)) => {
                self.pos += 1;
                Ok(Value::Exact(parse_decimal(&text)?))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "pi" => return Ok(Value::Real(self.ctx.pi())),
                    "e" => return Ok(Value::Real(self.ctx.float(1).exp())),
                    _ => {}
                }
                if !self.eat('(') {
                    return Err(format!("unknown constant `{name}`"));
                }
                let arg = self.expr()?;
                if !self.eat(')') {
                    return Err("missing `)`".into());
                }
                self.function(&name, arg)
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err("missing `)`".into());
                }
                Ok(v)
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }

    fn function(&self, name: &str, arg: Value) -> Parsed {
        let x = arg.to_float(self.ctx);
        let v = match name {
            "sqrt" => {
                if x < 0 {
                    return Err("sqrt of a negative number".into());
                }
                x.sqrt()
            }
            "exp" => x.exp(),
            "log" | "ln" => {
                if x <= 0 {
                    return Err("log of a non-positive number".into());
                }
                x.ln()
            }
            "gamma" => x.gamma(),
            other => return Err(format!("unknown function `{other}`")),
        };
        Ok(Value::Real(v))
    }

    fn binary(&self, a: Value, b: Value, op: char) -> Value {
        if let (Value::Exact(x), Value::Exact(y)) = (&a, &b) {
            let r = match op {
                '+' => Rational::from(x + y),
                '-' => Rational::from(x - y),
                '*' => Rational::from(x * y),
                _ => Rational::from(x / y),
            };
            return Value::Exact(r);
        }
        let (x, y) = (a.to_float(self.ctx), b.to_float(self.ctx));
        Value::Real(match op {
            '+' => x + y,
            '-' => x - y,
            '*' => x * y,
            _ => x / y,
        })
    }

    fn pow(&self, base: Value, exponent: Value) -> Value {
        if let (Value::Exact(b), Value::Exact(e)) = (&base, &exponent) {
            if *e.denom() == 1 {
                if let Some(n) = e.numer().to_i32() {
                    if n.unsigned_abs() <= 4096 && !(*b == 0 && n < 0) {
                        return Value::Exact(b.clone().pow(n));
                    }
                }
            }
        }
        Value::Real(base.to_float(self.ctx).pow(exponent.to_float(self.ctx)))
    }
}

/// Evaluate `src`; `name` labels errors.
pub fn evaluate(name: &str, src: &str, ctx: &PrecisionContext) -> Result<Value> {
    let fail = |reason: String| Error::InvalidParameter {
        name: name.to_string(),
        reason: format!("`{src}`: {reason}"),
    };
    let tokens = tokenize(src).map_err(fail)?;
    let mut parser = Parser { tokens, pos: 0, ctx };
    let v = parser.expr().map_err(fail)?;
    if parser.pos != parser.tokens.len() {
        return Err(fail("trailing input".into()));
    }
    if let Value::Real(f) = &v {
        if !f.is_finite() {
            return Err(fail("value is not finite".into()));
        }
    }
    Ok(v)
}
