//! Expression syntax for numbers and univariate functions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' ['-'] int)?
//! atom  := int | 'w' int | 'x' | '(' expr ')'
//! ```
//! The function variable `x` is only accepted where a function is expected.

use num::BigInt;

use super::num::{Num, Scales};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Scale(usize),
    X,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// Targets an [`Expr`] can be evaluated into.
pub(crate) trait ExprField: Sized {
    fn from_int(n: BigInt) -> Self;
    fn scale(i: usize) -> Self;
    fn var() -> Result<Self>;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn pow(&self, e: i64) -> Result<Self>;
}

impl Expr {
    pub(crate) fn eval<F: ExprField>(&self) -> Result<F> {
        Ok(match self {
            Expr::Int(n) => F::from_int(n.clone()),
            Expr::Scale(i) => F::scale(*i),
            Expr::X => F::var()?,
            Expr::Neg(a) => a.eval::<F>()?.neg(),
            Expr::Add(a, b) => a.eval::<F>()?.add(&b.eval()?),
            Expr::Sub(a, b) => a.eval::<F>()?.sub(&b.eval()?),
            Expr::Mul(a, b) => a.eval::<F>()?.mul(&b.eval()?),
            Expr::Div(a, b) => a.eval::<F>()?.div(&b.eval()?)?,
            Expr::Pow(a, e) => a.eval::<F>()?.pow(*e)?,
        })
    }
}

impl ExprField for Num {
    fn from_int(n: BigInt) -> Self {
        Num::from(n)
    }
    fn scale(i: usize) -> Self {
        Num::scale(i)
    }
    fn var() -> Result<Self> {
        Err(Error::parse(0, "the variable x is not allowed in a number"))
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Result<Self> {
        self.checked_div(rhs)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn pow(&self, e: i64) -> Result<Self> {
        Num::pow(self, e)
    }
}

/// Parses an expression; `allow_x` admits the function variable.
pub fn parse_expr(text: &str, scales: Scales, allow_x: bool) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        scales,
        allow_x,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    Ok(e)
}

/// Parses and evaluates a number, returning its reduced canonical form.
pub fn parse_number(text: &str, scales: Scales) -> Result<Num> {
    parse_expr(text, scales, false)?.eval()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    scales: Scales,
    allow_x: bool,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        let at = self.pos;
        let digits = self.digits()?;
        let mag: i64 = digits
            .parse()
            .map_err(|_| Error::parse(at, "exponent too large"))?;
        if paren {
            if self.peek() != Some(b')') {
                return Err(Error::parse(self.pos, "expected ')' after exponent"));
            }
            self.pos += 1;
        }
        Ok(Expr::Pow(Box::new(base), if negative { -mag } else { mag }))
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected digits"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'w') => {
                let at = self.pos;
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return Err(Error::parse(at, "expected a scale index after 'w'"));
                }
                let i: usize = self
                    .digits()?
                    .parse()
                    .map_err(|_| Error::parse(at, "scale index too large"))?;
                self.scales.require(i)?;
                Ok(Expr::Scale(i))
            }
            Some(b'x') => {
                let at = self.pos;
                if !self.allow_x {
                    return Err(Error::parse(at, "the variable x is not allowed here"));
                }
                self.pos += 1;
                Ok(Expr::X)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                Ok(Expr::Int(d.parse().expect("ascii digits")))
            }
            Some(c) => Err(Error::parse(self.pos, format!("unexpected '{}'", c as char))),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::Label;

    fn n(s: &str) -> Num {
        s.parse().unwrap()
    }

    #[test]
    fn parses_mixed_scales() {
        let x = n("2 + 3/w0 + w1^-1");
        assert_eq!(x.support(), Label::new([0, 1]));
        assert_eq!(x, n("(2*w1*w0 + 3*w1 + w0)/(w1*w0)"));
    }

    #[test]
    fn reduces_common_factors() {
        assert_eq!(n("(w1*w0)/w1").to_string(), "w0");
        assert_eq!(n("(w1*w0)/w1").support(), Label::new([0]));
    }

    #[test]
    fn zero_denominator() {
        assert_eq!(
            parse_number("1/(w0 - w0)", Scales::default()).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_number("1 + * 2", Scales::default()) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_number("w8", Scales::default()).unwrap_err().kind(), "ScaleExhausted");
        assert!(parse_number("x + 1", Scales::default()).unwrap_err().is_parse_error());
        assert!(parse_number("(1", Scales::default()).unwrap_err().is_parse_error());
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(n("-w0^2"), -n("w0^2"));
        assert_eq!(n("2^(-1)"), Num::ratio(1, 2));
    }

    #[test]
    fn canonical_rendering() {
        assert_eq!(n("w0 + w1*w0 + 5 - w1").to_string(), "w1*w0 - w1 + w0 + 5");
        assert_eq!(n("3/(2*w0)").to_string(), "3/2/w0");
        assert_eq!(n("1/(w1*w0)").to_string(), "1/(w1*w0)");
        assert_eq!(n("-w0/w1").to_string(), "-w0/w1");
        assert_eq!(n("(w0+1)/(w1-2)").to_string(), "(w0 + 1)/(w1 - 2)");
        assert_eq!(n("0").to_string(), "0");
        assert_eq!(n("-7/3").to_string(), "-7/3");
    }

    #[test]
    fn rendering_round_trips() {
        for s in [
            "2 + 3/w0 + w1^-1",
            "3/(2*w0)",
            "-w0/w1",
            "(w0 + 1)/(w1 - 2)",
            "(w2^3 - w0)/(2*w1^2*w0 + 7)",
            "-(w0 + 1)/(3*w1)",
            "-5/7",
        ] {
            let x = n(s);
            assert_eq!(n(&x.to_string()), x, "{s}");
        }
    }
}
