//! Prenex formulas with at most two variables and two quantifiers, and the
//! exhaustive comparison of ultrapower satisfaction with pointwise
//! satisfaction on a large index set.

use std::collections::HashMap;
use std::fmt;

use super::structure::{ultrapower, FiniteStructure, Ultrapower};
use super::SetFamily;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// Quantifier-free matrix over variable slots `0` and `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Rel(String, Vec<usize>),
    Eq(usize, usize),
    Not(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Implies(Box<Term>, Box<Term>),
    Iff(Box<Term>, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LosFormula {
    /// Variable names by slot.
    pub vars: Vec<String>,
    /// Outermost quantifier first.
    pub prefix: Vec<(Quantifier, usize)>,
    pub matrix: Term,
}

impl LosFormula {
    /// Free slots, in the order of their names.
    pub fn free_slots(&self) -> Vec<usize> {
        let mut free: Vec<usize> = (0..self.vars.len())
            .filter(|s| !self.prefix.iter().any(|(_, q)| q == s))
            .collect();
        free.sort_by(|a, b| self.vars[*a].cmp(&self.vars[*b]));
        free
    }

    pub fn free_variables(&self) -> Vec<&str> {
        self.free_slots().iter().map(|s| self.vars[*s].as_str()).collect()
    }

    fn check_signature(&self, m: &FiniteStructure) -> Result<()> {
        check_signature(&self.matrix, m)
    }
}

fn check_signature(matrix: &Term, m: &FiniteStructure) -> Result<()> {
    let mut stack = vec![matrix];
    while let Some(t) = stack.pop() {
        match t {
            Term::Rel(name, args) => match m.relations.get(name) {
                Some(r) if r.arity == args.len() => {}
                Some(r) => {
                    return Err(Error::UnsupportedFormula(format!(
                        "{name} has arity {} but is applied to {} arguments",
                        r.arity,
                        args.len()
                    )))
                }
                None => {
                    return Err(Error::UnsupportedFormula(format!(
                        "relation {name} is not in the signature"
                    )))
                }
            },
            Term::Eq(..) => {}
            Term::Not(a) => stack.push(a),
            Term::And(a, b) | Term::Or(a, b) | Term::Implies(a, b) | Term::Iff(a, b) => {
                stack.push(a);
                stack.push(b);
            }
        }
    }
    Ok(())
}

/// Truth tables of formulas in one structure, as bitmasks over all
/// assignments of both slots; the cell of `(x0, x1)` is `x0 + x1·|M|`.
struct Evaluator<'a> {
    structure: &'a FiniteStructure,
    size: usize,
    full: u64,
    row: u64,
    atoms: Vec<(&'a Term, u64)>,
}

impl<'a> Evaluator<'a> {
    fn new(structure: &'a FiniteStructure) -> Result<Self> {
        let size = structure.universe;
        if size == 0 || size * size > 64 {
            return Err(Error::TooLarge(format!(
                "evaluating over a universe of {size} elements"
            )));
        }
        let ones = |n: usize| if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Ok(Evaluator {
            structure,
            size,
            full: ones(size * size),
            row: ones(size),
            atoms: Vec::new(),
        })
    }

    fn atom(&mut self, t: &'a Term) -> u64 {
        if let Some((_, mask)) = self.atoms.iter().find(|(a, _)| *a == t) {
            return *mask;
        }
        let size = self.size;
        let mask = (0..size * size).fold(0u64, |acc, c| {
            let env = [c % size, c / size];
            let holds = match t {
                Term::Rel(name, args) => {
                    let point: Vec<usize> = args.iter().map(|s| env[*s]).collect();
                    self.structure.relations[name].holds(&point)
                }
                Term::Eq(a, b) => env[*a] == env[*b],
                _ => unreachable!("atoms only"),
            };
            if holds {
                acc | 1 << c
            } else {
                acc
            }
        });
        self.atoms.push((t, mask));
        mask
    }

    fn matrix(&mut self, t: &'a Term) -> u64 {
        match t {
            Term::Rel(..) | Term::Eq(..) => self.atom(t),
            Term::Not(a) => !self.matrix(a) & self.full,
            Term::And(a, b) => self.matrix(a) & self.matrix(b),
            Term::Or(a, b) => self.matrix(a) | self.matrix(b),
            Term::Implies(a, b) => (!self.matrix(a) | self.matrix(b)) & self.full,
            Term::Iff(a, b) => !(self.matrix(a) ^ self.matrix(b)) & self.full,
        }
    }

    fn quantify(&self, table: u64, q: Quantifier, slot: usize) -> u64 {
        let rows = (0..self.size).map(|x1| table >> (x1 * self.size) & self.row);
        if slot == 1 {
            // fold the rows together, then repeat the result in every row
            let folded = match q {
                Quantifier::Forall => rows.fold(self.row, |acc, r| acc & r),
                Quantifier::Exists => rows.fold(0, |acc, r| acc | r),
            };
            (0..self.size).fold(0, |acc, x1| acc | folded << (x1 * self.size))
        } else {
            rows.enumerate().fold(0, |acc, (x1, r)| {
                let holds = match q {
                    Quantifier::Forall => r == self.row,
                    Quantifier::Exists => r != 0,
                };
                if holds {
                    acc | self.row << (x1 * self.size)
                } else {
                    acc
                }
            })
        }
    }

    fn apply_prefix(&self, matrix: u64, prefix: &[(Quantifier, usize)]) -> u64 {
        prefix
            .iter()
            .rev()
            .fold(matrix, |t, (q, slot)| self.quantify(t, *q, *slot))
    }

    fn table(&mut self, phi: &'a LosFormula) -> u64 {
        let matrix = self.matrix(&phi.matrix);
        self.apply_prefix(matrix, &phi.prefix)
    }
}

fn truth_table(m: &FiniteStructure, phi: &LosFormula) -> Result<u64> {
    Ok(Evaluator::new(m)?.table(phi))
}

fn cell(values: [usize; 2], size: usize) -> usize {
    values[0] + values[1] * size
}

impl Ultrapower {
    /// Compares `M^I/U ⊨ φ([f₁], …)` with `{i : M ⊨ φ(f₁(i), …)} ∈ U`.
    /// Parameters are functions `I → M`, one per free variable in name order.
    pub fn los_check(&self, phi: &LosFormula, params: &[Vec<usize>]) -> Result<bool> {
        phi.check_signature(&self.base)?;
        let free = phi.free_slots();
        if params.len() != free.len() {
            return Err(Error::Invalid(format!(
                "{} free variables but {} parameters",
                free.len(),
                params.len()
            )));
        }
        let classes = params
            .iter()
            .map(|f| self.class(f))
            .collect::<Result<Vec<_>>>()?;
        let tables = (
            truth_table(&self.base, phi)?,
            truth_table(&self.structure, phi)?,
        );
        let params: Vec<&[usize]> = params.iter().map(Vec::as_slice).collect();
        Ok(self.agrees(tables, &free, &params, &classes))
    }

    fn agrees(
        &self,
        (pointwise, quotient): (u64, u64),
        free: &[usize],
        params: &[&[usize]],
        classes: &[usize],
    ) -> bool {
        let (m, q) = (self.base.universe, self.structure.universe);
        let mut at_classes = [0; 2];
        for (s, c) in free.iter().zip(classes) {
            at_classes[*s] = *c;
        }
        let lhs = quotient >> cell(at_classes, q) & 1 == 1;
        let large = (0..self.functions.arity).fold(0u32, |acc, i| {
            let mut at = [0; 2];
            for (s, f) in free.iter().zip(params) {
                at[*s] = f[i];
            }
            if pointwise >> cell(at, m) & 1 == 1 {
                acc | 1 << i
            } else {
                acc
            }
        });
        lhs == self.filter.contains(large)
    }
}

pub fn los_check(
    m: &FiniteStructure,
    u: &SetFamily,
    phi: &LosFormula,
    params: &[Vec<usize>],
) -> Result<bool> {
    ultrapower(m, u)?.los_check(phi, params)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LosSweep {
    pub formulas: usize,
    /// Formula and parameter combinations compared.
    pub cases: u64,
    /// Rendered formulas with parameter codes where the sides disagree.
    pub failures: Vec<String>,
}

impl LosSweep {
    pub fn merge(&mut self, other: LosSweep) {
        self.formulas += other.formulas;
        self.cases += other.cases;
        self.failures.extend(other.failures);
    }
}

/// A list of formulas prepared for repeated sweeps: matrices are shared and
/// free slots precomputed.
#[derive(Clone, Debug)]
pub struct LosBatch {
    formulas: Vec<LosFormula>,
    matrices: Vec<Term>,
    matrix_of: Vec<usize>,
    free: Vec<Vec<usize>>,
}

impl LosBatch {
    pub fn new(formulas: Vec<LosFormula>) -> Self {
        let mut index: HashMap<Term, usize> = HashMap::new();
        let mut matrices = Vec::new();
        let matrix_of = formulas
            .iter()
            .map(|phi| {
                *index.entry(phi.matrix.clone()).or_insert_with(|| {
                    matrices.push(phi.matrix.clone());
                    matrices.len() - 1
                })
            })
            .collect();
        let free = formulas.iter().map(LosFormula::free_slots).collect();
        LosBatch {
            formulas,
            matrices,
            matrix_of,
            free,
        }
    }

    pub fn formulas(&self) -> &[LosFormula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }
}

/// Runs the check for every formula of the batch and every choice of
/// parameters.
pub fn los_sweep(m: &FiniteStructure, u: &SetFamily, batch: &LosBatch) -> Result<LosSweep> {
    let up = ultrapower(m, u)?;
    let fns = up.functions.size();
    let values: Vec<Vec<usize>> = (0..fns).map(|c| up.functions.decode(c)).collect();
    let mut pointwise = Evaluator::new(m)?;
    let mut quotient = Evaluator::new(&up.structure)?;
    let mut matrix_tables = Vec::with_capacity(batch.matrices.len());
    for t in &batch.matrices {
        check_signature(t, m)?;
        matrix_tables.push((pointwise.matrix(t), quotient.matrix(t)));
    }
    let mut out = LosSweep::default();
    // formulas with the same truth tables and free slots give the same verdicts
    let mut settled: HashMap<(u64, u64, usize), bool> = HashMap::new();
    for (i, phi) in batch.formulas.iter().enumerate() {
        let free = &batch.free[i];
        let (mp, mq) = matrix_tables[batch.matrix_of[i]];
        let tables = (
            pointwise.apply_prefix(mp, &phi.prefix),
            quotient.apply_prefix(mq, &phi.prefix),
        );
        out.formulas += 1;
        let combos = fns.pow(free.len() as u32);
        out.cases += combos as u64;
        let free_code = free.iter().fold(1, |acc, s| acc * 3 + s);
        let key = (tables.0, tables.1, free_code);
        if let Some(&ok) = settled.get(&key) {
            if !ok {
                out.failures.push(phi.to_string());
            }
            continue;
        }
        let (m_size, q_size) = (m.universe, up.structure.universe);
        let mut ok = true;
        for combo in 0..combos {
            let codes = [combo % fns, combo / fns % fns];
            let mut at_classes = [0; 2];
            for (j, s) in free.iter().enumerate() {
                at_classes[*s] = up.class_of[codes[j]];
            }
            let lhs = tables.1 >> cell(at_classes, q_size) & 1 == 1;
            let mut large = 0u32;
            #[allow(clippy::needless_range_loop)]
            for i in 0..up.functions.arity {
                let mut at = [0; 2];
                for (j, s) in free.iter().enumerate() {
                    at[*s] = values[codes[j]][i];
                }
                if tables.0 >> cell(at, m_size) & 1 == 1 {
                    large |= 1 << i;
                }
            }
            if lhs != up.filter.contains(large) {
                ok = false;
                out.failures.push(format!(
                    "{phi} at functions {:?}",
                    &codes[..free.len()]
                ));
                break;
            }
        }
        settled.insert(key, ok);
    }
    Ok(out)
}

/// Every formula with at most two quantifiers over the variables `v0`, `v1`
/// whose matrix is a literal or a binary combination of two literals, over
/// the given relations and equality.
pub fn formula_family(signature: &[(&str, usize)]) -> Vec<LosFormula> {
    let mut atoms = vec![Term::Eq(0, 1)];
    for (name, arity) in signature {
        for code in 0..1usize << arity {
            let args = (0..*arity).map(|j| code >> j & 1).collect();
            atoms.push(Term::Rel(name.to_string(), args));
        }
    }
    let literals: Vec<Term> = atoms
        .iter()
        .flat_map(|a| [a.clone(), Term::Not(Box::new(a.clone()))])
        .collect();
    let mut matrices = literals.clone();
    for a in &literals {
        for b in &literals {
            let (a, b) = (Box::new(a.clone()), Box::new(b.clone()));
            matrices.push(Term::And(a.clone(), b.clone()));
            matrices.push(Term::Or(a.clone(), b.clone()));
            matrices.push(Term::Implies(a.clone(), b.clone()));
            matrices.push(Term::Iff(a, b));
        }
    }
    let qs = [Quantifier::Forall, Quantifier::Exists];
    let mut prefixes: Vec<Vec<(Quantifier, usize)>> = vec![vec![]];
    for slot in 0..2 {
        for q in qs {
            prefixes.push(vec![(q, slot)]);
        }
    }
    for first in 0..2 {
        for q1 in qs {
            for q2 in qs {
                prefixes.push(vec![(q1, first), (q2, 1 - first)]);
            }
        }
    }
    let vars = vec!["v0".to_string(), "v1".to_string()];
    prefixes
        .iter()
        .flat_map(|p| {
            matrices.iter().map(|mx| LosFormula {
                vars: vars.clone(),
                prefix: p.clone(),
                matrix: mx.clone(),
            })
        })
        .collect()
}

impl fmt::Display for LosFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, s) in &self.prefix {
            let q = match q {
                Quantifier::Forall => "A",
                Quantifier::Exists => "E",
            };
            write!(f, "{q} {}. ", self.vars[*s])?;
        }
        self.write_term(f, &self.matrix, false)
    }
}

impl LosFormula {
    fn write_term(&self, f: &mut fmt::Formatter<'_>, t: &Term, nested: bool) -> fmt::Result {
        let v = |s: &usize| self.vars[*s].as_str();
        let bin = |f: &mut fmt::Formatter<'_>, a: &Term, op: &str, b: &Term| {
            if nested {
                f.write_str("(")?;
            }
            self.write_term(f, a, true)?;
            write!(f, " {op} ")?;
            self.write_term(f, b, true)?;
            if nested {
                f.write_str(")")?;
            }
            Ok(())
        };
        match t {
            Term::Rel(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    f.write_str(v(a))?;
                }
                f.write_str(")")
            }
            Term::Eq(a, b) if nested => write!(f, "({} = {})", v(a), v(b)),
            Term::Eq(a, b) => write!(f, "{} = {}", v(a), v(b)),
            Term::Not(a) => {
                f.write_str("!")?;
                self.write_term(f, a, true)
            }
            Term::And(a, b) => bin(f, a, "&", b),
            Term::Or(a, b) => bin(f, a, "|", b),
            Term::Implies(a, b) => bin(f, a, "->", b),
            Term::Iff(a, b) => bin(f, a, "<->", b),
        }
    }
}

/// Parses `A x. E y. matrix` where the matrix uses `R(x,y)`, `x = y`, `!`,
/// `&`, `|`, `->`, `<->` and parentheses, binding in that order.
pub fn parse_los_formula(text: &str) -> Result<LosFormula> {
    let mut p = LosParser {
        src: text.as_bytes(),
        pos: 0,
        vars: Vec::new(),
    };
    let mut prefix = Vec::new();
    loop {
        p.skip_ws();
        let q = match p.src.get(p.pos) {
            Some(b'A') if !p.followed_by_paren() => Quantifier::Forall,
            Some(b'E') if !p.followed_by_paren() => Quantifier::Exists,
            _ => break,
        };
        p.pos += 1;
        let slot = p.var()?;
        p.expect(".")?;
        if prefix.iter().any(|(_, s)| *s == slot) {
            return Err(Error::UnsupportedFormula(format!(
                "{} is quantified twice",
                p.vars[slot]
            )));
        }
        prefix.push((q, slot));
    }
    if prefix.len() > 2 {
        return Err(Error::UnsupportedFormula("more than two quantifiers".into()));
    }
    let matrix = p.iff()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    Ok(LosFormula {
        vars: p.vars,
        prefix,
        matrix,
    })
}

struct LosParser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: Vec<String>,
}

impl LosParser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn followed_by_paren(&self) -> bool {
        let mut i = self.pos + 1;
        while self.src.get(i).is_some_and(u8::is_ascii_whitespace) {
            i += 1;
        }
        self.src.get(i) == Some(&b'(')
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{tok}'")))
        }
    }

    fn ident(&mut self, upper: bool) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        let first_ok = self.src.get(self.pos).is_some_and(|c| {
            if upper {
                c.is_ascii_uppercase()
            } else {
                c.is_ascii_lowercase()
            }
        });
        if !first_ok {
            return Err(Error::parse(
                start,
                if upper { "expected a relation name" } else { "expected a variable" },
            ));
        }
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn var(&mut self) -> Result<usize> {
        let name = self.ident(false)?;
        if let Some(s) = self.vars.iter().position(|v| *v == name) {
            return Ok(s);
        }
        if self.vars.len() == 2 {
            return Err(Error::UnsupportedFormula(format!(
                "a third variable {name}; at most two are supported"
            )));
        }
        self.vars.push(name);
        Ok(self.vars.len() - 1)
    }

    fn iff(&mut self) -> Result<Term> {
        let lhs = self.implies()?;
        if self.eat("<->") {
            return Ok(Term::Iff(Box::new(lhs), Box::new(self.iff()?)));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Term> {
        let lhs = self.or()?;
        if self.eat("->") {
            return Ok(Term::Implies(Box::new(lhs), Box::new(self.implies()?)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Term> {
        let mut lhs = self.and()?;
        while self.eat("|") {
            lhs = Term::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Term> {
        let mut lhs = self.not()?;
        while self.eat("&") {
            lhs = Term::And(Box::new(lhs), Box::new(self.not()?));
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Term> {
        if self.eat("!") {
            return Ok(Term::Not(Box::new(self.not()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Term> {
        if self.eat("(") {
            let t = self.iff()?;
            self.expect(")")?;
            return Ok(t);
        }
        self.skip_ws();
        if self.src.get(self.pos).is_some_and(u8::is_ascii_uppercase) {
            let name = self.ident(true)?;
            self.expect("(")?;
            let mut args = vec![];
            if !self.eat(")") {
                loop {
                    args.push(self.var()?);
                    if self.eat(")") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            return Ok(Term::Rel(name, args));
        }
        let a = self.var()?;
        self.expect("=")?;
        Ok(Term::Eq(a, self.var()?))
    }
}
