use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One};

use super::poly::{gcd, Poly, MAX_SCALES};
use crate::error::{Error, Result};
use crate::labels::{size_mismatch, Label};

/// How many scale variables `w0 … w{L-1}` are available.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Scales {
    count: usize,
}

impl Scales {
    pub const DEFAULT: usize = 8;

    pub fn new(count: usize) -> Result<Self> {
        if count > MAX_SCALES {
            return Err(Error::TooLarge(format!(
                "{count} scales requested, at most {MAX_SCALES} supported"
            )));
        }
        Ok(Scales { count })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn require(&self, index: usize) -> Result<()> {
        if index < self.count {
            Ok(())
        } else {
            Err(Error::ScaleExhausted {
                needed: index,
                available: self.count,
            })
        }
    }
}

impl Default for Scales {
    fn default() -> Self {
        Scales {
            count: Self::DEFAULT,
        }
    }
}

/// An element of ℚ(w0, …, w15), ordered so that each `w_{j+1}` exceeds every
/// element of ℚ(w0, …, w_j).
///
/// Always stored reduced: numerator and denominator are coprime and the
/// denominator is monic with respect to its lexicographic leading term.
/// Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Num {
    numer: Poly,
    denom: Poly,
}

impl Num {
    pub fn zero() -> Self {
        Num {
            numer: Poly::zero(),
            denom: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Num::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        Num {
            numer: p,
            denom: Poly::one(),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Num::from_poly(Poly::constant(q))
    }

    pub fn from_int(n: i64) -> Self {
        Num::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Num::from_rational(BigRational::new(n.into(), d.into()))
    }

    /// The scale variable `w_i`.
    pub fn scale(i: usize) -> Self {
        assert!(i < MAX_SCALES, "scale index {i} out of range");
        Num::from_poly(Poly::var(i))
    }

    /// Builds `numer / denom` in reduced canonical form.
    pub fn new(numer: Poly, denom: Poly) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if numer.is_zero() {
            return Ok(Num::zero());
        }
        let g = gcd(&numer, &denom);
        let (n, d) = if g.is_one() {
            (numer, denom)
        } else {
            (
                numer.div_exact(&g).expect("gcd divides numerator"),
                denom.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Ok(Num::normalized(n, d))
    }

    fn normalized(n: Poly, d: Poly) -> Self {
        let lc = d.leading_coeff();
        if lc.is_one() {
            Num { numer: n, denom: d }
        } else {
            let inv = lc.recip();
            Num {
                numer: n.scale(&inv),
                denom: d.scale(&inv),
            }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.numer
    }

    pub fn denom(&self) -> &Poly {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.numer.as_constant()?;
        let d = self.denom.as_constant()?;
        Some(n / d)
    }

    /// Sign under the scale ordering.
    pub fn signum(&self) -> Ordering {
        // the denominator is monic, so its leading coefficient is positive
        self.numer.signum()
    }

    pub fn abs(&self) -> Num {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// The scale indices occurring in the reduced form.
    pub fn support(&self) -> Label {
        let mask = self.numer.var_mask() | self.denom.var_mask();
        Label::new((0..MAX_SCALES).filter(|i| mask >> i & 1 == 1))
    }

    /// Membership in the level `S_a`.
    pub fn in_level(&self, a: &Label) -> bool {
        self.support().is_subset(a)
    }

    pub fn highest_scale(&self) -> Option<usize> {
        self.numer.highest_var().max(self.denom.highest_var())
    }

    /// The embedding `I_a^b`: renames `w_s` to `w_t` along the order
    /// isomorphism `a → b`.
    pub fn embed(&self, a: &Label, b: &Label) -> Result<Num> {
        if a.len() != b.len() {
            return Err(size_mismatch(a, b));
        }
        if !self.in_level(a) {
            return Err(Error::NotInLevel {
                value: self.to_string(),
                label: a.to_string(),
            });
        }
        if let Some(&t) = b.indices().iter().find(|t| **t >= MAX_SCALES) {
            return Err(Error::ScaleExhausted {
                needed: t,
                available: MAX_SCALES,
            });
        }
        let iso = a.order_iso(b)?;
        let map = |s: usize| iso.apply(s).expect("support lies in the domain");
        // renaming along an order isomorphism keeps coprimality and the
        // leading monomial, so no further reduction is needed
        Ok(Num::normalized(
            self.numer.rename(map),
            self.denom.rename(map),
        ))
    }

    /// Renames every scale `w_s` to `w_{s+r}`.
    pub fn shift_scales(&self, r: usize) -> Result<Num> {
        let s = self.support();
        self.embed(&s, &s.oplus(r))
    }

    pub fn checked_div(&self, rhs: &Num) -> Result<Num> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g1 = gcd(&self.numer, &rhs.numer);
        let g2 = gcd(&self.denom, &rhs.denom);
        let n = &self.numer.div_exact(&g1).expect("gcd divides")
            * &rhs.denom.div_exact(&g2).expect("gcd divides");
        let d = &self.denom.div_exact(&g2).expect("gcd divides")
            * &rhs.numer.div_exact(&g1).expect("gcd divides");
        Ok(Num::normalized(n, d))
    }

    pub fn recip(&self) -> Result<Num> {
        Num::one().checked_div(self)
    }

    pub fn pow(&self, e: i64) -> Result<Num> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Num::one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }
}

impl From<i64> for Num {
    fn from(n: i64) -> Self {
        Num::from_int(n)
    }
}

impl From<BigInt> for Num {
    fn from(n: BigInt) -> Self {
        Num::from_rational(BigRational::from_integer(n))
    }
}

impl Add for &Num {
    type Output = Num;
    fn add(self, rhs: &Num) -> Num {
        if self.denom == rhs.denom {
            return Num::new(&self.numer + &rhs.numer, self.denom.clone())
                .expect("nonzero denominator");
        }
        // with g = gcd(d1, d2), the sum n/(d1 d2/g) can only cancel factors of g
        let g = gcd(&self.denom, &rhs.denom);
        let d1 = self.denom.div_exact(&g).expect("gcd divides");
        let d2 = rhs.denom.div_exact(&g).expect("gcd divides");
        let n = &(&self.numer * &d2) + &(&rhs.numer * &d1);
        if n.is_zero() {
            return Num::zero();
        }
        let h = gcd(&n, &g);
        let n = n.div_exact(&h).expect("gcd divides");
        let d = &(&d1 * &d2) * &g.div_exact(&h).expect("gcd divides");
        Num::normalized(n, d)
    }
}

impl Sub for &Num {
    type Output = Num;
    fn sub(self, rhs: &Num) -> Num {
        self + &(-rhs)
    }
}

impl Mul for &Num {
    type Output = Num;
    fn mul(self, rhs: &Num) -> Num {
        if self.is_zero() || rhs.is_zero() {
            return Num::zero();
        }
        let g1 = gcd(&self.numer, &rhs.denom);
        let g2 = gcd(&rhs.numer, &self.denom);
        let n = &self.numer.div_exact(&g1).expect("gcd divides")
            * &rhs.numer.div_exact(&g2).expect("gcd divides");
        let d = &self.denom.div_exact(&g2).expect("gcd divides")
            * &rhs.denom.div_exact(&g1).expect("gcd divides");
        Num::normalized(n, d)
    }
}

impl Neg for &Num {
    type Output = Num;
    fn neg(self) -> Num {
        Num {
            numer: -&self.numer,
            denom: self.denom.clone(),
        }
    }
}

impl Neg for Num {
    type Output = Num;
    fn neg(self) -> Num {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Num {
            type Output = Num;
            fn $m(self, rhs: Num) -> Num {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Ord for Num {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        (self - other).signum()
    }
}

impl PartialOrd for Num {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_one() {
            return write!(f, "{}", self.numer);
        }
        if self.numer.num_terms() > 1 {
            write!(f, "({})", self.numer)?;
        } else {
            write!(f, "{}", self.numer)?;
        }
        let bare = self.denom.num_terms() == 1
            && self
                .denom
                .leading()
                .is_some_and(|(m, _)| m.total_degree() == 1);
        if bare {
            write!(f, "/{}", self.denom)
        } else {
            write!(f, "/({})", self.denom)
        }
    }
}

impl fmt::Debug for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Num({self})")
    }
}

impl FromStr for Num {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        super::expr::parse_number(s, Scales::default())
    }
}
