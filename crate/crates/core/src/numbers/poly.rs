//! Sparse multivariate polynomials over ℚ in the scale variables `w0, w1, …`.
//!
//! Monomials are ordered lexicographically with the highest-index variable
//! most significant. Under the scale ordering (each `w_{j+1}` larger than
//! every expression in lower scales) the lexicographic leading term decides
//! the sign of a polynomial, and it is also the term used for making
//! polynomials monic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use super::modp;

/// Hard upper bound on the number of scale variables.
pub const MAX_SCALES: usize = 16;

/// Exponent vector of a monomial in `w0 … w15`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; MAX_SCALES]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_SCALES])
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; MAX_SCALES];
        e[i] = 1;
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Monomial(e)
    }

    fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = a.checked_sub(*b)?;
        }
        Some(Monomial(e))
    }

    fn highest_var(&self) -> Option<usize> {
        (0..MAX_SCALES).rev().find(|i| self.0[*i] > 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in (0..MAX_SCALES).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", MonomialDisplay(self))
    }
}

/// Renders the factor part of a monomial, highest index first: `w1^2*w0`.
pub(crate) struct MonomialDisplay<'a>(pub &'a Monomial);

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in (0..MAX_SCALES).rev() {
            let e = self.0 .0[i];
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "w{i}")?;
            } else {
                write!(f, "w{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with exact rational coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::monomial(Monomial::one(), c)
    }

    pub fn var(i: usize) -> Self {
        Poly::monomial(Monomial::var(i), BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if this polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Sign of the polynomial under the scale ordering.
    pub fn signum(&self) -> Ordering {
        match self.leading() {
            None => Ordering::Equal,
            Some((_, c)) if c.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }

    /// Bitmask of the variables that occur.
    pub fn var_mask(&self) -> u32 {
        self.terms.keys().fold(0, |acc, m| {
            (0..MAX_SCALES).fold(acc, |acc, i| if m.0[i] > 0 { acc | 1 << i } else { acc })
        })
    }

    pub fn highest_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::highest_var).max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &BigRational) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k * c)).collect(),
        }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Coefficients in variable `v`, indexed by degree. Each coefficient is
    /// free of `v`. The zero polynomial yields an empty vector.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let mut out: Vec<Poly> = Vec::new();
        for (m, c) in &self.terms {
            let d = m.0[v] as usize;
            if out.len() <= d {
                out.resize_with(d + 1, Poly::zero);
            }
            let mut rest = *m;
            rest.0[v] = 0;
            out[d].terms.insert(rest, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: usize, coeffs: &[Poly]) -> Poly {
        let mut p = Poly::zero();
        for (d, c) in coeffs.iter().enumerate() {
            for (m, k) in &c.terms {
                let mut e = *m;
                e.0[v] += d as u32;
                p.add_term(e, k.clone());
            }
        }
        p
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading().map(|(m, c)| (*m, c.clone()))?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let mut q = Poly::zero();
        let mut r = self.clone();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (*m, c.clone())) {
            let tm = rm.checked_div(&dm)?;
            let tc = rc / &dc;
            r = &r - &d.mul_term(&tm, &tc);
            q.add_term(tm, tc);
        }
        Some(q)
    }

    /// Pseudo-remainder of `self` by `b` as univariate polynomials in `v`.
    pub fn prem_in(&self, b: &Poly, v: usize) -> Poly {
        let bc = b.coeffs_in(v);
        let db = bc.len() - 1;
        let lb = &bc[db];
        let mut r = self.coeffs_in(v);
        while !r.is_empty() && r.len() > db {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c = lb * &*c;
            }
            for (j, bj) in bc.iter().enumerate() {
                let k = j + dr - db;
                r[k] = &r[k] - &(&lr * bj);
            }
            while r.last().is_some_and(Poly::is_zero) {
                r.pop();
            }
        }
        Poly::from_coeffs_in(v, &r)
    }

    /// Monic gcd of the coefficients in `v`.
    pub fn content_in(&self, v: usize) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_in(&self, v: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.div_exact(&self.content_in(v))
            .expect("content divides its polynomial")
    }

    /// Applies a variable renaming. The map must be injective on the
    /// variables that occur.
    pub fn rename(&self, map: impl Fn(usize) -> usize) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut e = [0; MAX_SCALES];
            for (i, k) in m.0.iter().enumerate() {
                if *k > 0 {
                    e[map(i)] += k;
                }
            }
            (Monomial(e), c.clone())
        }))
    }

    /// Multiplies through by the lcm of coefficient denominators and divides
    /// by the gcd of numerators, keeping the leading sign.
    pub fn integer_content_free(&self) -> Poly {
        use num::Integer;
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let g = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&l / c.denom()))));
        self.scale(&BigRational::new(l, g))
    }
}

/// Monic greatest common divisor in ℚ[w0, w1, …].
///
/// Recursive: the polynomials are viewed as univariate in their highest
/// variable over the polynomial ring of the lower ones; contents are handled
/// recursively and the primitive parts by a primitive pseudo-remainder
/// sequence.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    if let Some(g) = monomial_gcd(a, b) {
        return g;
    }
    let v = a
        .highest_var()
        .max(b.highest_var())
        .expect("non-constant polynomials have a variable");
    if a.degree_in(v) == 0 {
        return gcd(a, &b.content_in(v));
    }
    if b.degree_in(v) == 0 {
        return gcd(&a.content_in(v), b);
    }
    if modp::coprime_in(&a.integer_content_free(), &b.integer_content_free(), v) {
        return coefficient_gcd(a, b, v);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = p.prem_in(&q, v).integer_content_free();
        if r.is_zero() {
            break q;
        }
        if r.degree_in(v) == 0 {
            break Poly::one();
        }
        p = q;
        q = r.primitive_in(v);
    };
    (&c * &g.primitive_in(v)).monic()
}

/// The gcd when one side is a single term: the largest monomial dividing
/// every term of both.
fn monomial_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    if a.num_terms() != 1 && b.num_terms() != 1 {
        return None;
    }
    let mut e = [u32::MAX; MAX_SCALES];
    for m in a.terms.keys().chain(b.terms.keys()) {
        for (x, y) in e.iter_mut().zip(m.0.iter()) {
            *x = (*x).min(*y);
        }
    }
    Some(Poly::monomial(Monomial(e), BigRational::one()))
}

/// Gcd of every coefficient of `a` and `b` in `v`.
fn coefficient_gcd(a: &Poly, b: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero();
    for c in a.coeffs_in(v).into_iter().chain(b.coeffs_in(v)) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (n, k) in &rhs.terms {
                out.add_term(m.mul(n), c * k);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let abs = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", MonomialDisplay(m))?;
            } else {
                write!(f, "{abs}*{}", MonomialDisplay(m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn w(i: usize) -> Poly {
        Poly::var(i)
    }

    fn c(n: i64) -> Poly {
        Poly::constant(q(n))
    }

    #[test]
    fn lex_order_highest_index_first() {
        // w1 > w0^5 as monomials
        assert!(Monomial::var(1) > Monomial([5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]));
        let p = &w(1) - &(&(&w(0) * &w(0)) * &w(0));
        assert_eq!(p.signum(), Ordering::Greater);
    }

    #[test]
    fn display_orders_terms() {
        let p = &(&(&w(1) * &w(0)).scale(&q(2)) + &w(0).scale(&q(-3))) + &c(5);
        assert_eq!(p.to_string(), "2*w1*w0 - 3*w0 + 5");
    }

    #[test]
    fn exact_division() {
        // (w1^2 - 1) / (w1 - 1) = w1 + 1
        let a = &(&w(1) * &w(1)) - &c(1);
        let b = &w(1) - &c(1);
        assert_eq!(a.div_exact(&b).unwrap(), &w(1) + &c(1));
        assert!(a.div_exact(&w(0)).is_none());
    }

    #[test]
    fn gcd_univariate() {
        let a = &(&w(0) * &w(0)) - &c(1);
        let b = &(&w(0) * &w(0)) + &(&w(0).scale(&q(2)) + &c(1));
        assert_eq!(gcd(&a, &b), &w(0) + &c(1));
    }

    #[test]
    fn gcd_multivariate_common_factor() {
        // g = w0*w1 + 2, a = g*(w1 - w0), b = g*(w2 + 1)
        let g = &(&w(0) * &w(1)) + &c(2);
        let a = &g * &(&w(1) - &w(0));
        let b = &g * &(&w(2) + &c(1));
        assert_eq!(gcd(&a, &b), g.monic());
        assert_eq!(gcd(&(&w(1) * &w(0)), &w(1)), w(1));
        assert!(gcd(&w(0), &w(1)).is_one());
    }

    #[test]
    fn gcd_with_content_in_lower_variables() {
        // a = w0*(w1+1)^2, b = w0^2*(w1+1)
        let s = &w(1) + &c(1);
        let a = &w(0) * &(&s * &s);
        let b = &(&w(0) * &w(0)) * &s;
        assert_eq!(gcd(&a, &b), &w(0) * &s);
    }

    #[test]
    fn rename_moves_variables() {
        let p = &(&w(0) * &w(0)) + &c(3);
        assert_eq!(p.rename(|i| i + 2), &(&w(2) * &w(2)) + &c(3));
    }
}
