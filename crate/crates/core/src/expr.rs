//! A small arithmetic expression language over the chart coordinates,
//! evaluated into jets.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('-' | '+')? base ('^' integer)?
//! base   := number | 'x0' | 'x1' | 'x2' | 'x3'
//!         | func '(' expr ')' | '(' expr ')'
//! func   := exp | ln | sqrt | sin | cos
//! ```

use crate::error::{Error, Result};
use crate::field::{Point, ScalarField};
use crate::jet::Jet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, p: &Point, order: usize) -> Result<Jet> {
        Ok(match self {
            Expr::Num(v) => Jet::constant(*v, order),
            Expr::Var(mu) => Jet::variable(*mu, p[*mu], order),
            Expr::Neg(a) => -a.eval(p, order)?,
            Expr::Add(a, b) => a.eval(p, order)? + b.eval(p, order)?,
            Expr::Sub(a, b) => a.eval(p, order)? - b.eval(p, order)?,
            Expr::Mul(a, b) => a.eval(p, order)? * b.eval(p, order)?,
            Expr::Div(a, b) => a.eval(p, order)?.div(&b.eval(p, order)?)?,
            Expr::Pow(a, n) => a.eval(p, order)?.powi(*n),
            Expr::Call(f, a) => {
                let x = a.eval(p, order)?;
                match f {
                    Func::Exp => x.exp(),
                    Func::Ln => x.ln()?,
                    Func::Sqrt => x.sqrt()?,
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                }
            }
        })
    }

    /// Field whose domain errors report the offending point.
    pub fn into_field(self) -> ScalarField {
        ScalarField::new(move |p, k| {
            self.eval(p, k).map_err(|e| match e {
                Error::Domain { func, .. } => Error::DomainAt { func, point: *p },
                other => other,
            })
        })
    }
}

/// Parses an expression.
pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(e)
}

/// Parses an expression into a scalar field.
pub fn parse_expression(src: &str) -> Result<ScalarField> {
    Ok(parse(src)?.into_field())
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        if self.eat(b'+') {
            return self.factor();
        }
        let base = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected integer exponent"));
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            let n = text.parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: "exponent too large".into(),
            })?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(self);
            if exp_start == self.pos {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse().map(Expr::Num).map_err(|_| Error::Syntax {
            pos: start,
            msg: format!("invalid number '{text}'"),
        })
    }

    fn ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let func = match name {
            "x0" | "x1" | "x2" | "x3" => return Ok(Expr::Var((name.as_bytes()[1] - b'0') as usize)),
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => {
                return Err(Error::UnknownIdentifier {
                    pos: start,
                    name: name.to_string(),
                })
            }
        };
        self.expect(b'(')?;
        let arg = self.expr()?;
        self.expect(b')')?;
        Ok(Expr::Call(func, Box::new(arg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::ONE;

    #[test]
    fn affine_expression() {
        let j = parse_expression("1 + 0.1*x1").unwrap().jet(&[0.0; 4], 2).unwrap();
        assert!((j.value() - ONE).norm() < 1e-15);
        assert!((j.derivative([0, 1, 0, 0]).re - 0.1).abs() < 1e-15);
        assert!(j.derivative([2, 0, 0, 0]).norm() < 1e-15);
    }

    #[test]
    fn mixed_partial_of_exp() {
        let j = parse_expression("exp(x0*x3)").unwrap().jet(&[0.0; 4], 3).unwrap();
        assert!((j.derivative([1, 0, 0, 1]) - ONE).norm() < 1e-14);
    }

    #[test]
    fn sqrt_domain_reports_point() {
        let f = parse_expression("sqrt(x0)").unwrap();
        let err = f.jet(&[-0.25, 0.0, 0.0, 0.0], 1).unwrap_err();
        assert_eq!(
            err,
            Error::DomainAt {
                func: "sqrt",
                point: [-0.25, 0.0, 0.0, 0.0]
            }
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert!(matches!(parse("1 + * x0"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse("(x0"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse("x0 x1"), Err(Error::Syntax { pos: 3, .. })));
        assert_eq!(
            parse("2*tan(x0)"),
            Err(Error::UnknownIdentifier {
                pos: 2,
                name: "tan".into()
            })
        );
    }

    #[test]
    fn precedence_and_powers() {
        let e = parse("2 + 3*x0^2 - -1").unwrap();
        let v = e.eval(&[2.0, 0.0, 0.0, 0.0], 0).unwrap().value().re;
        assert!((v - 15.0).abs() < 1e-14);
        let v = parse("1e-1*x2/2").unwrap().eval(&[0.0, 0.0, 4.0, 0.0], 0).unwrap().value().re;
        assert!((v - 0.2).abs() < 1e-15);
    }
}
