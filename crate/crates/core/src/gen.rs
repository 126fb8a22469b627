//! Seeded random generators shared by the randomized suites and the CLI.

use num::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::IntSet;
use crate::formulas::Formula;
use crate::labels::Label;
use crate::numbers::{Monomial, Num, Poly, MAX_SCALES};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of randomly generated field elements.
#[derive(Clone, Debug)]
pub struct NumShape {
    /// Scale indices that may occur.
    pub vars: Vec<usize>,
    /// Bound on the total degree of numerator and denominator.
    pub max_degree: u32,
    pub max_terms: usize,
    /// Integer coefficients lie in `[-height, height]`.
    pub height: i64,
}

impl Default for NumShape {
    fn default() -> Self {
        NumShape {
            vars: vec![0, 1, 2],
            max_degree: 4,
            max_terms: 3,
            height: 9,
        }
    }
}

impl NumShape {
    pub fn over(vars: impl IntoIterator<Item = usize>) -> Self {
        NumShape {
            vars: vars.into_iter().collect(),
            ..NumShape::default()
        }
    }
}

pub fn poly(rng: &mut impl Rng, shape: &NumShape) -> Poly {
    let terms = rng.gen_range(1..=shape.max_terms.max(1));
    Poly::from_terms((0..terms).map(|_| {
        let mut e = [0u32; MAX_SCALES];
        if !shape.vars.is_empty() {
            let deg = rng.gen_range(0..=shape.max_degree);
            for _ in 0..deg {
                e[*shape.vars.choose(rng).expect("nonempty")] += 1;
            }
        }
        let c = rng.gen_range(-shape.height..=shape.height);
        (Monomial(e), BigRational::from_integer(c.into()))
    }))
}

pub fn nonzero_poly(rng: &mut impl Rng, shape: &NumShape) -> Poly {
    loop {
        let p = poly(rng, shape);
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random quotient of two random polynomials.
pub fn num(rng: &mut impl Rng, shape: &NumShape) -> Num {
    let n = poly(rng, shape);
    let d = nonzero_poly(rng, shape);
    Num::new(n, d).expect("nonzero denominator")
}

pub fn nonzero_num(rng: &mut impl Rng, shape: &NumShape) -> Num {
    Num::new(nonzero_poly(rng, shape), nonzero_poly(rng, shape)).expect("nonzero denominator")
}

/// A polynomial element (denominator 1).
pub fn poly_num(rng: &mut impl Rng, shape: &NumShape) -> Num {
    Num::from_poly(poly(rng, shape))
}

/// A random label with indices below `bound`.
pub fn label(rng: &mut impl Rng, bound: usize, max_len: usize) -> Label {
    let len = rng.gen_range(0..=max_len.min(bound));
    let mut all: Vec<usize> = (0..bound).collect();
    all.shuffle(rng);
    Label::new(all.into_iter().take(len))
}

pub fn nonempty_label(rng: &mut impl Rng, bound: usize, max_len: usize) -> Label {
    loop {
        let l = label(rng, bound, max_len);
        if !l.is_empty() {
            return l;
        }
    }
}

/// A random subset of `[0, n)` where each element is kept with probability `p`.
pub fn int_set(rng: &mut impl Rng, n: usize, p: f64) -> IntSet {
    IntSet::new((0..n).filter(|_| rng.gen_bool(p)))
}

/// Random admissible formula over the given variable names.
#[derive(Clone, Debug)]
pub struct FormulaShape {
    pub vars: Vec<String>,
    pub max_depth: u32,
    pub label_bound: usize,
    pub max_label_len: usize,
    pub quantifiers: bool,
    pub membership: bool,
}

impl Default for FormulaShape {
    fn default() -> Self {
        FormulaShape {
            vars: ["u", "v", "w"].map(String::from).to_vec(),
            max_depth: 3,
            label_bound: 4,
            max_label_len: 3,
            quantifiers: true,
            membership: true,
        }
    }
}

pub fn formula(rng: &mut impl Rng, shape: &FormulaShape) -> Formula {
    formula_at(rng, shape, shape.max_depth)
}

fn formula_at(rng: &mut impl Rng, shape: &FormulaShape, depth: u32) -> Formula {
    let var = |rng: &mut dyn rand::RngCore| shape.vars.choose(rng).expect("variables").clone();
    if depth == 0 || rng.gen_bool(0.3) {
        let kinds = if shape.membership { 4 } else { 3 };
        return match rng.gen_range(0..kinds) {
            0 => Formula::Eq(var(rng), var(rng)),
            1 => Formula::InLevel(var(rng), label(rng, shape.label_bound, shape.max_label_len)),
            2 => {
                let a = label(rng, shape.label_bound, shape.max_label_len);
                let mut b = label(rng, shape.label_bound + 2, a.len());
                while b.len() != a.len() {
                    b = label(rng, shape.label_bound + 2, a.len());
                }
                Formula::Emb {
                    from: a,
                    to: b,
                    arg: var(rng),
                    value: var(rng),
                }
            }
            _ => Formula::Mem(var(rng), var(rng)),
        };
    }
    let sub = |rng: &mut _| Box::new(formula_at(rng, shape, depth - 1));
    let kinds = if shape.quantifiers { 7 } else { 5 };
    match rng.gen_range(0..kinds) {
        0 => Formula::Not(sub(rng)),
        1 => Formula::And(sub(rng), sub(rng)),
        2 => Formula::Or(sub(rng), sub(rng)),
        3 => Formula::Implies(sub(rng), sub(rng)),
        4 => Formula::Iff(sub(rng), sub(rng)),
        5 => Formula::ForallIn(
            var(rng),
            label(rng, shape.label_bound, shape.max_label_len),
            sub(rng),
        ),
        _ => Formula::ExistsIn(
            var(rng),
            label(rng, shape.label_bound, shape.max_label_len),
            sub(rng),
        ),
    }
}
