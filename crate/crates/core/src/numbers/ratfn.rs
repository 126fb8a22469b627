//! Univariate rational functions `f(x) = P(x)/Q(x)` with coefficients in the
//! scale field, and their derivative computed as the shadow of a difference
//! quotient taken one scale above everything `f` and the point mention.

use std::fmt;

use num::BigInt;

use super::expr::{parse_expr, ExprField};
use super::modp;
use super::num::{Num, Scales};
use super::shadow::shadow;
use crate::error::{Error, Result};
use crate::labels::Label;

/// Dense univariate polynomial, coefficients in ascending degree order with
/// no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<Num>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Num>) -> Self {
        while coeffs.last().is_some_and(Num::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn constant(c: Num) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn x() -> Self {
        UniPoly(vec![Num::zero(), Num::one()])
    }

    pub fn coeffs(&self) -> &[Num] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> Option<&Num> {
        self.0.last()
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.0.len().max(rhs.0.len());
        let zero = Num::zero();
        UniPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) + rhs.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Num::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(out)
    }

    fn scale(&self, c: &Num) -> UniPoly {
        UniPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            Some(l) => self.scale(&l.recip().expect("leading coefficient is nonzero")),
            None => UniPoly::zero(),
        }
    }

    /// Quotient and remainder; `rhs` must be nonzero.
    pub fn div_rem(&self, rhs: &UniPoly) -> (UniPoly, UniPoly) {
        let d = rhs.degree().expect("division by the zero polynomial");
        let inv = rhs.lead().expect("nonzero").recip().expect("nonzero lead");
        let mut rem = self.0.clone();
        let mut quot = vec![Num::zero(); self.0.len().saturating_sub(d)];
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let t = &rem[rem.len() - 1] * &inv;
            for (j, c) in rhs.0.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&t * c);
            }
            quot[k] = t;
            rem.pop();
            while rem.last().is_some_and(Num::is_zero) {
                rem.pop();
            }
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn gcd(&self, rhs: &UniPoly) -> UniPoly {
        if self.degree() > Some(0) && rhs.degree() > Some(0) && modp::coprime_over_scales(&self.0, &rhs.0) {
            return UniPoly::constant(Num::one());
        }
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, at: &Num) -> Num {
        self.0
            .iter()
            .rev()
            .fold(Num::zero(), |acc, c| &(&acc * at) + c)
    }

    fn support(&self) -> Label {
        self.0
            .iter()
            .fold(Label::empty(), |acc, c| acc.union(&c.support()))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let x = match d {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{d}"),
            };
            match (d, c == &Num::one()) {
                (0, _) => write!(f, "({c})")?,
                (_, true) => f.write_str(&x)?,
                _ => write!(f, "({c})*{x}")?,
            }
        }
        Ok(())
    }
}

/// `P/Q` in lowest terms with `Q` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    numer: UniPoly,
    denom: UniPoly,
}

impl RationalFn {
    pub fn new(numer: UniPoly, denom: UniPoly) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if numer.is_zero() {
            return Ok(RationalFn {
                numer,
                denom: UniPoly::constant(Num::one()),
            });
        }
        let g = numer.gcd(&denom);
        let (n, d) = if g.degree() == Some(0) {
            (numer, denom)
        } else {
            (numer.div_rem(&g).0, denom.div_rem(&g).0)
        };
        let inv = d.lead().expect("nonzero").recip().expect("nonzero lead");
        Ok(RationalFn {
            numer: n.scale(&inv),
            denom: d.scale(&inv),
        })
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RationalFn {
            numer: p,
            denom: UniPoly::constant(Num::one()),
        }
    }

    pub fn parse(text: &str, scales: Scales) -> Result<Self> {
        parse_expr(text, scales, true)?.eval()
    }

    pub fn numer(&self) -> &UniPoly {
        &self.numer
    }

    pub fn denom(&self) -> &UniPoly {
        &self.denom
    }

    /// Union of the supports of all coefficients.
    pub fn support(&self) -> Label {
        self.numer.support().union(&self.denom.support())
    }

    pub fn eval(&self, at: &Num) -> Result<Num> {
        let q = self.denom.eval(at);
        if q.is_zero() {
            return Err(Error::PoleAtPoint(at.to_string()));
        }
        self.numer.eval(at).checked_div(&q)
    }
}

impl ExprField for RationalFn {
    fn from_int(n: BigInt) -> Self {
        RationalFn::from_poly(UniPoly::constant(Num::from(n)))
    }
    fn scale(i: usize) -> Self {
        RationalFn::from_poly(UniPoly::constant(Num::scale(i)))
    }
    fn var() -> Result<Self> {
        Ok(RationalFn::from_poly(UniPoly::x()))
    }
    fn add(&self, rhs: &Self) -> Self {
        let n = self.numer.mul(&rhs.denom).add(&rhs.numer.mul(&self.denom));
        RationalFn::new(n, self.denom.mul(&rhs.denom)).expect("nonzero denominator")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        RationalFn::new(self.numer.mul(&rhs.numer), self.denom.mul(&rhs.denom))
            .expect("nonzero denominator")
    }
    fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.numer.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFn::new(self.numer.mul(&rhs.denom), self.denom.mul(&rhs.numer))
    }
    fn neg(&self) -> Self {
        RationalFn {
            numer: self.numer.neg(),
            denom: self.denom.clone(),
        }
    }
    fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 {
            RationalFn::from_poly(UniPoly::constant(Num::one())).div(self)?
        } else {
            self.clone()
        };
        let mut acc = RationalFn::from_poly(UniPoly::constant(Num::one()));
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.degree() == Some(0) && self.denom.coeffs()[0] == Num::one() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "({})/({})", self.numer, self.denom)
        }
    }
}

/// Derivative of `f` at `a` as the shadow of `(f(a+h) - f(a))/h`, where
/// `h = 1/w_r` and `r` is one above every scale occurring in `f` or `a`.
pub fn derivative(f: &RationalFn, a: &Num, scales: Scales) -> Result<Num> {
    let fa = f.eval(a)?;
    let used = f.support().union(&a.support());
    let r = used.max_index().map_or(0, |m| m + 1);
    scales.require(r)?;
    let h = Num::scale(r).recip()?;
    let fah = f.eval(&(a + &h))?;
    let quotient = (&fah - &fa).checked_div(&h)?;
    shadow(&quotient, r, scales)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> RationalFn {
        RationalFn::parse(s, Scales::default()).unwrap()
    }

    fn n(s: &str) -> Num {
        s.parse().unwrap()
    }

    #[test]
    fn derivative_examples() {
        let sc = Scales::default();
        assert_eq!(derivative(&f("x^2"), &n("3"), sc).unwrap(), n("6"));
        assert_eq!(derivative(&f("x^3"), &n("w0"), sc).unwrap(), n("3*w0^2"));
        assert_eq!(
            derivative(&f("1/x"), &n("0"), sc).unwrap_err().kind(),
            "PoleAtPoint"
        );
    }

    #[test]
    fn derivative_needs_a_free_scale() {
        let sc = Scales::new(2).unwrap();
        assert_eq!(
            derivative(&f("w1*x"), &n("1"), sc).unwrap_err().kind(),
            "ScaleExhausted"
        );
        assert_eq!(derivative(&f("w0*x"), &n("1"), sc).unwrap(), n("w0"));
    }

    #[test]
    fn removable_singularity_is_not_a_pole() {
        // x^2/x reduces to x
        assert_eq!(f("x^2/x"), f("x"));
        assert_eq!(derivative(&f("x^2/x"), &n("0"), Scales::default()).unwrap(), n("1"));
    }

    #[test]
    fn reduction_over_scale_coefficients() {
        // (x^2 - w0^2)/(x - w0) = x + w0
        assert_eq!(f("(x^2 - w0^2)/(x - w0)"), f("x + w0"));
        assert_eq!(f("(x - w0)/(2*x - 2*w0)"), f("1/2"));
    }

    #[test]
    fn evaluation() {
        let g = f("(x + w1)/(x - 1)");
        assert_eq!(g.eval(&n("2")).unwrap(), n("2 + w1"));
        assert_eq!(g.eval(&n("1")).unwrap_err().kind(), "PoleAtPoint");
    }
}
