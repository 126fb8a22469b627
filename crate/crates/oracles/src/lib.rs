//! Slow reference computations used to cross-check the library. Nothing here
//! shares code paths with the functions under test beyond the basic field
//! operations on `Num`.

use std::cmp::Ordering;

use num::{BigInt, BigRational, Signed, Zero};
use strata::combinatorics::{Coloring, IntSet};
use strata::numbers::{Poly, RationalFn, UniPoly, MAX_SCALES};
use strata::{Error, Num};

// ---------------------------------------------------------------- numbers

/// `(10^6)^(3^i)`.
pub fn fixed_point(i: usize) -> BigRational {
    let m = BigInt::from(1_000_000u32);
    BigRational::from_integer(num::pow(m, 3usize.pow(i as u32)))
}

fn eval_poly(p: &Poly, point: &dyn Fn(usize) -> BigRational) -> BigRational {
    let mut total = BigRational::zero();
    for (m, c) in p.terms() {
        let mut term = c.clone();
        for i in 0..MAX_SCALES {
            let e = m.exponent(i);
            if e > 0 {
                term *= num::pow(point(i), e as usize);
            }
        }
        total += term;
    }
    total
}

/// `x` evaluated at `w_i = (10^6)^(3^i)`.
pub fn substitute(x: &Num) -> BigRational {
    eval_poly(x.numer(), &fixed_point) / eval_poly(x.denom(), &fixed_point)
}

/// Compares by evaluating both sides at the fixed point.
pub fn substitution_cmp(x: &Num, y: &Num) -> Ordering {
    substitute(x).cmp(&substitute(y))
}

/// Sign of a polynomial read off a point chosen for it: `w_i = M^(D^i)` with
/// `D` above every exponent, so distinct monomials land on distinct powers of
/// `M`, and `M` above the ratio of the total coefficient mass to the smallest
/// coefficient, so the largest power dominates the rest.
fn poly_sign_separated(p: &Poly) -> Ordering {
    if p.is_zero() {
        return Ordering::Equal;
    }
    let mut max_exp = 0;
    let mut mass = BigRational::zero();
    let mut smallest: Option<BigRational> = None;
    for (m, c) in p.terms() {
        for i in 0..MAX_SCALES {
            max_exp = max_exp.max(m.exponent(i));
        }
        mass += c.abs();
        if smallest.as_ref().is_none_or(|s| c.abs() < *s) {
            smallest = Some(c.abs());
        }
    }
    let base = BigRational::from_integer(
        (mass / smallest.expect("nonzero polynomial")).floor().to_integer() + 2,
    );
    let d = max_exp as usize + 1;
    let point = |i: usize| num::pow(base.clone(), d.pow(i as u32));
    eval_poly(p, &point).cmp(&BigRational::zero())
}

/// Sign of `x`, from a substitution point separated enough for `x`.
pub fn separated_sign(x: &Num) -> Ordering {
    let n = poly_sign_separated(x.numer());
    let d = poly_sign_separated(x.denom());
    if d == Ordering::Less {
        n.reverse()
    } else {
        n
    }
}

pub fn separated_cmp(x: &Num, y: &Num) -> Ordering {
    separated_sign(&(x - y))
}

fn horner(coeffs: &[Num], at: &Num) -> Num {
    coeffs.iter().rev().fold(Num::zero(), |acc, c| &(&acc * at) + c)
}

fn formal_derivative(p: &UniPoly) -> Vec<Num> {
    p.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * &Num::from_int(i as i64))
        .collect()
}

/// `(P'Q - PQ')/Q²` evaluated at `a`.
pub fn quotient_rule_at(f: &RationalFn, a: &Num) -> Result<Num, Error> {
    let (p, q) = (f.numer(), f.denom());
    let qa = horner(q.coeffs(), a);
    if qa.is_zero() {
        return Err(Error::PoleAtPoint(a.to_string()));
    }
    let pa = horner(p.coeffs(), a);
    let dp = horner(&formal_derivative(p), a);
    let dq = horner(&formal_derivative(q), a);
    (&(&dp * &qa) - &(&pa * &dq)).checked_div(&(&qa * &qa))
}

// ----------------------------------------------------------- combinatorics

fn count_in(set: &IntSet, start: usize, len: usize) -> usize {
    (start..start + len).filter(|x| set.as_slice().binary_search(x).is_ok()).count()
}

/// Best `(density, start, len)` over windows of `[0, size)` with length at
/// least `window_min` that pass `keep`, ties broken toward the least
/// `(start, len)`.
pub fn best_window_by_counting(
    set: &IntSet,
    size: usize,
    window_min: usize,
    keep: impl Fn(usize, usize) -> bool,
) -> Option<(BigRational, usize, usize)> {
    let mut all = Vec::new();
    for start in 0..size {
        for len in window_min.max(1)..=size - start {
            if keep(start, len) {
                let d = BigRational::new(count_in(set, start, len).into(), len.into());
                all.push((d, start, len));
            }
        }
    }
    all.into_iter()
        .min_by(|(d1, s1, l1), (d2, s2, l2)| d2.cmp(d1).then(s1.cmp(s2)).then(l1.cmp(l2)))
}

/// Upper Banach density over windows of `[0, bound)`.
pub fn banach_density_by_counting(set: &IntSet, window_min: usize) -> Option<(BigRational, usize, usize)> {
    best_window_by_counting(set, set.bound(), window_min, |_, _| true)
}

/// Relative density with windows of `[0, bound(ambient))`.
pub fn relative_density_by_counting(
    subset: &IntSet,
    ambient: &IntSet,
    window_min: usize,
    tol: &BigRational,
) -> Option<(BigRational, usize, usize)> {
    let (eta, _, _) = banach_density_by_counting(ambient, window_min)?;
    best_window_by_counting(subset, ambient.bound(), window_min, |start, len| {
        let here = BigRational::new(count_in(ambient, start, len).into(), len.into());
        (here - &eta).abs() <= *tol
    })
}

/// First `(start, step)` in lexicographic order whose `k` terms lie in `set`.
pub fn first_progression(set: &IntSet, k: usize) -> Option<(usize, usize)> {
    let n = set.bound();
    for start in 0..n {
        for step in 1..=n.max(1) {
            if (0..k).all(|i| set.as_slice().binary_search(&(start + i * step)).is_ok()) {
                return Some((start, step));
            }
        }
    }
    None
}

/// Largest progression-free subset of `[0, ground)` by trying every subset.
pub fn ap_free_by_subsets(ground: usize, k: usize) -> (usize, IntSet) {
    let mut best: Option<IntSet> = None;
    for mask in 0u32..1 << ground {
        let s = IntSet::new((0..ground).filter(|x| mask >> x & 1 == 1));
        if first_progression(&s, k).is_some() {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => s.len() > b.len() || s.len() == b.len() && s.as_slice() < b.as_slice(),
        };
        if better {
            best = Some(s);
        }
    }
    let best = best.unwrap_or_default();
    (best.len(), best)
}

fn subsets_lex(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, x) in items.iter().enumerate() {
        for mut rest in subsets_lex(&items[i + 1..], k - 1) {
            rest.insert(0, *x);
            out.push(rest);
        }
    }
    out
}

/// Whether every `n`-subset of `h` gets the same color.
pub fn constant_on(c: &Coloring, h: &[usize]) -> bool {
    let colors: Vec<usize> = subsets_lex(h, c.n()).iter().map(|s| c.color(s)).collect();
    colors.windows(2).all(|w| w[0] == w[1])
}

/// First `h`-subset in lexicographic order on which `c` is constant.
pub fn homogeneous_by_enumeration(c: &Coloring, h: usize) -> Option<IntSet> {
    let all: Vec<usize> = (0..c.size()).collect();
    subsets_lex(&all, h)
        .into_iter()
        .find(|s| constant_on(c, s))
        .map(IntSet::new)
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

