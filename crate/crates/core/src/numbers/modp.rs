//! Evaluation images of polynomials over `F_p`, used to prove that two
//! polynomials are coprime before falling back to exact gcd sequences.

use num::{BigInt, Integer, ToPrimitive, Zero};

use super::num::Num;
use super::poly::{Poly, MAX_SCALES};

const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    acc
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(P)).to_u64().expect("residue fits")
}

/// Image of an integer polynomial in `F_p[v]` with the other variables set
/// to `point`. `None` when a coefficient is not an integer.
fn image(p: &Poly, v: usize, point: &[u64; MAX_SCALES]) -> Option<Vec<u64>> {
    let mut out = vec![0u64; p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        if !c.is_integer() {
            return None;
        }
        let mut t = reduce(c.numer());
        for (i, e) in m.0.iter().enumerate() {
            if i != v && *e > 0 {
                t = mul(t, pow(point[i], u64::from(*e)));
            }
        }
        let slot = &mut out[m.0[v] as usize];
        *slot = (*slot + t) % P;
    }
    Some(out)
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of the gcd in `F_p[v]`; `None` for two zero inputs.
fn gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> Option<usize> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let lb = inv(*b.last().expect("nonempty"));
        while a.len() >= b.len() {
            let q = mul(*a.last().expect("nonempty"), lb);
            let shift = a.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                a[j + shift] = (a[j + shift] + P - mul(q, *bj)) % P;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().checked_sub(1)
}

/// Value of a polynomial with rational coefficients at `point`; `None` when a
/// coefficient denominator vanishes mod p.
fn value(p: &Poly, point: &[u64; MAX_SCALES]) -> Option<u64> {
    let mut acc = 0;
    for (m, c) in p.terms() {
        let d = reduce(c.denom());
        if d == 0 {
            return None;
        }
        let mut t = mul(reduce(c.numer()), inv(d));
        for (i, e) in m.0.iter().enumerate() {
            if *e > 0 {
                t = mul(t, pow(point[i], u64::from(*e)));
            }
        }
        acc = (acc + t) % P;
    }
    Some(acc)
}

fn num_value(x: &Num, point: &[u64; MAX_SCALES]) -> Option<u64> {
    let d = value(x.denom(), point)?;
    if d == 0 {
        return None;
    }
    Some(mul(value(x.numer(), point)?, inv(d)))
}

/// Deterministic pseudo-random evaluation points.
fn points() -> impl Iterator<Item = [u64; MAX_SCALES]> {
    let mut seed: u64 = 0x9E37_79B9_7F4A_7C15;
    std::iter::repeat_with(move || {
        let mut point = [0u64; MAX_SCALES];
        for x in point.iter_mut() {
            seed = seed
                .wrapping_mul(6_364_136_223_846_793_005)
                .wrapping_add(1_442_695_040_888_963_407);
            *x = (seed >> 3) % P;
        }
        point
    })
    .take(3)
}

fn keeps_degree(img: &[u64]) -> bool {
    img.last().is_some_and(|c| !c.is_zero())
}

/// True only when two univariate polynomials over the scale field, given by
/// ascending coefficients without trailing zeros, are proved coprime.
pub(super) fn coprime_over_scales(a: &[Num], b: &[Num]) -> bool {
    for point in points() {
        let img = |cs: &[Num]| cs.iter().map(|c| num_value(c, &point)).collect::<Option<Vec<u64>>>();
        let (Some(ia), Some(ib)) = (img(a), img(b)) else {
            continue;
        };
        if keeps_degree(&ia) && keeps_degree(&ib) {
            return gcd_degree(ia, ib) == Some(0);
        }
    }
    false
}

/// True only when `gcd(a, b)` is proved free of `v`: the images at some point
/// keep both leading coefficients in `v` and are coprime. Inputs must have
/// integer coefficients. A `false` answer proves nothing.
pub(super) fn coprime_in(a: &Poly, b: &Poly, v: usize) -> bool {
    for point in points() {
        let (Some(ia), Some(ib)) = (image(a, v, &point), image(b, v, &point)) else {
            return false;
        };
        if keeps_degree(&ia) && keeps_degree(&ib) {
            return gcd_degree(ia, ib) == Some(0);
        }
    }
    false
}
