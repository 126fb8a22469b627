//! The level-bounded formula language.
//!
//! Quantifiers range over levels `S_a`; atoms are equality, membership,
//! level membership and the embeddings `I_a^b`. An unbounded universal
//! quantifier exists only to state transfer-schema conclusions.

mod eval;
mod parse;
mod schema;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::labels::Label;

pub use eval::{eval_formula, Domains, Env, Value};
pub use parse::{parse_formula, parse_formula_extended, parse_formula_file};
pub use schema::{gt_instance, ho_instance};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// `u = v`
    Eq(String, String),
    /// `u in v`
    Mem(String, String),
    /// `v in S a`
    InLevel(String, Label),
    /// `I a b (arg) = value`
    Emb {
        from: Label,
        to: Label,
        arg: String,
        value: String,
    },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForallIn(String, Label, Box<Formula>),
    ExistsIn(String, Label, Box<Formula>),
    /// `Aall v . body`, only inside transfer instances.
    UnboundedForall(String, Box<Formula>),
}

impl Formula {
    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }
    pub fn forall_in(v: impl Into<String>, a: Label, body: Formula) -> Formula {
        Formula::ForallIn(v.into(), a, Box::new(body))
    }
    pub fn exists_in(v: impl Into<String>, a: Label, body: Formula) -> Formula {
        Formula::ExistsIn(v.into(), a, Box::new(body))
    }

    /// True when no unbounded quantifier occurs.
    pub fn is_admissible(&self) -> bool {
        match self {
            Formula::UnboundedForall(..) => false,
            Formula::Eq(..) | Formula::Mem(..) | Formula::InLevel(..) | Formula::Emb { .. } => {
                true
            }
            Formula::Not(a) | Formula::ForallIn(_, _, a) | Formula::ExistsIn(_, _, a) => {
                a.is_admissible()
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_admissible() && b.is_admissible()
            }
        }
    }

    /// True when only `=`, `in` between variables, connectives and unbounded
    /// quantifiers occur.
    pub fn is_pure_membership(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Mem(..) => true,
            Formula::InLevel(..) | Formula::Emb { .. } => false,
            Formula::ForallIn(..) | Formula::ExistsIn(..) => false,
            Formula::Not(a) | Formula::UnboundedForall(_, a) => a.is_pure_membership(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_pure_membership() && b.is_pure_membership()
            }
        }
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut see = |v: &String, bound: &Vec<&str>| {
            if !bound.contains(&v.as_str()) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::Eq(u, v) | Formula::Mem(u, v) => {
                see(u, bound);
                see(v, bound);
            }
            Formula::InLevel(v, _) => see(v, bound),
            Formula::Emb { arg, value, .. } => {
                see(arg, bound);
                see(value, bound);
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::ForallIn(v, _, a) | Formula::ExistsIn(v, _, a) | Formula::UnboundedForall(v, a) => {
                bound.push(v);
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_names(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }

    fn visit_names(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::Eq(u, v) | Formula::Mem(u, v) => {
                f(u);
                f(v);
            }
            Formula::InLevel(v, _) => f(v),
            Formula::Emb { arg, value, .. } => {
                f(arg);
                f(value);
            }
            Formula::Not(a) => a.visit_names(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_names(f);
                b.visit_names(f);
            }
            Formula::ForallIn(v, _, a) | Formula::ExistsIn(v, _, a) | Formula::UnboundedForall(v, a) => {
                f(v);
                a.visit_names(f);
            }
        }
    }

    /// Replaces every label `a` by `r ⊞ a`.
    pub fn shift_up(&self, r: usize) -> Result<Formula> {
        if !self.is_admissible() {
            return Err(Error::Admissibility(
                "cannot shift a formula with an unbounded quantifier".into(),
            ));
        }
        Ok(self.map_labels(&|a| a.boxplus(r)))
    }

    fn map_labels(&self, f: &impl Fn(&Label) -> Label) -> Formula {
        let b = |x: &Formula| Box::new(x.map_labels(f));
        match self {
            Formula::Eq(..) | Formula::Mem(..) => self.clone(),
            Formula::InLevel(v, a) => Formula::InLevel(v.clone(), f(a)),
            Formula::Emb {
                from,
                to,
                arg,
                value,
            } => Formula::Emb {
                from: f(from),
                to: f(to),
                arg: arg.clone(),
                value: value.clone(),
            },
            Formula::Not(x) => Formula::Not(b(x)),
            Formula::And(x, y) => Formula::And(b(x), b(y)),
            Formula::Or(x, y) => Formula::Or(b(x), b(y)),
            Formula::Implies(x, y) => Formula::Implies(b(x), b(y)),
            Formula::Iff(x, y) => Formula::Iff(b(x), b(y)),
            Formula::ForallIn(v, a, x) => Formula::ForallIn(v.clone(), f(a), b(x)),
            Formula::ExistsIn(v, a, x) => Formula::ExistsIn(v.clone(), f(a), b(x)),
            Formula::UnboundedForall(v, x) => Formula::UnboundedForall(v.clone(), b(x)),
        }
    }

    /// Simultaneous capture-avoiding renaming of free variables.
    pub fn rename_free(&self, map: &[(String, String)]) -> Formula {
        let lookup = |v: &String| {
            map.iter()
                .find(|(from, _)| from == v)
                .map_or_else(|| v.clone(), |(_, to)| to.clone())
        };
        let b = |x: &Formula| Box::new(x.rename_free(map));
        match self {
            Formula::Eq(u, v) => Formula::Eq(lookup(u), lookup(v)),
            Formula::Mem(u, v) => Formula::Mem(lookup(u), lookup(v)),
            Formula::InLevel(v, a) => Formula::InLevel(lookup(v), a.clone()),
            Formula::Emb {
                from,
                to,
                arg,
                value,
            } => Formula::Emb {
                from: from.clone(),
                to: to.clone(),
                arg: lookup(arg),
                value: lookup(value),
            },
            Formula::Not(x) => Formula::Not(b(x)),
            Formula::And(x, y) => Formula::And(b(x), b(y)),
            Formula::Or(x, y) => Formula::Or(b(x), b(y)),
            Formula::Implies(x, y) => Formula::Implies(b(x), b(y)),
            Formula::Iff(x, y) => Formula::Iff(b(x), b(y)),
            Formula::ForallIn(v, a, x) => {
                let (v, x) = rename_binder(v, x, map);
                Formula::ForallIn(v, a.clone(), Box::new(x))
            }
            Formula::ExistsIn(v, a, x) => {
                let (v, x) = rename_binder(v, x, map);
                Formula::ExistsIn(v, a.clone(), Box::new(x))
            }
            Formula::UnboundedForall(v, x) => {
                let (v, x) = rename_binder(v, x, map);
                Formula::UnboundedForall(v, Box::new(x))
            }
        }
    }
}

fn rename_binder(v: &str, body: &Formula, map: &[(String, String)]) -> (String, Formula) {
    let free = body.free_variables();
    let inner: Vec<(String, String)> = map
        .iter()
        .filter(|(from, _)| from != v && free.contains(from))
        .cloned()
        .collect();
    if !inner.iter().any(|(_, to)| to == v) {
        return (v.to_string(), body.rename_free(&inner));
    }
    let taken: BTreeSet<String> = body
        .all_variables()
        .into_iter()
        .chain(inner.iter().map(|(_, to)| to.clone()))
        .collect();
    let fresh = (1..)
        .map(|i| format!("{v}_{i}"))
        .find(|c| !taken.contains(c))
        .expect("unbounded supply of names");
    let mut with_binder = inner;
    with_binder.push((v.to_string(), fresh.clone()));
    (fresh, body.rename_free(&with_binder))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(u, v) => write!(f, "{u} = {v}"),
            Formula::Mem(u, v) => write!(f, "{u} in {v}"),
            Formula::InLevel(v, a) => write!(f, "{v} in S{a}"),
            Formula::Emb {
                from,
                to,
                arg,
                value,
            } => write!(f, "I{from}{to}({arg}) = {value}"),
            Formula::Not(a) => write!(f, "!({a})"),
            Formula::And(a, b) => write!(f, "({a}) & ({b})"),
            Formula::Or(a, b) => write!(f, "({a}) | ({b})"),
            Formula::Implies(a, b) => write!(f, "({a}) -> ({b})"),
            Formula::Iff(a, b) => write!(f, "({a}) <-> ({b})"),
            Formula::ForallIn(v, a, body) => write!(f, "A {v} in S{a}. {body}"),
            Formula::ExistsIn(v, a, body) => write!(f, "E {v} in S{a}. {body}"),
            Formula::UnboundedForall(v, body) => write!(f, "Aall {v}. {body}"),
        }
    }
}

/// Canonical text of a formula.
pub fn render(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::Num;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn l(v: &[usize]) -> Label {
        Label::new(v.iter().copied())
    }

    #[test]
    fn parses_nested_quantifiers() {
        assert_eq!(
            p("A x in S{0}. E y in S{0,1}. I{0}{1}(x) = y"),
            Formula::forall_in(
                "x",
                l(&[0]),
                Formula::exists_in(
                    "y",
                    l(&[0, 1]),
                    Formula::Emb {
                        from: l(&[0]),
                        to: l(&[1]),
                        arg: "x".into(),
                        value: "y".into(),
                    }
                )
            )
        );
        assert_eq!(p("x in S{}"), Formula::InLevel("x".into(), Label::empty()));
        assert_eq!(p("x in S2"), Formula::InLevel("x".into(), l(&[0, 1])));
        assert_eq!(p("x in y"), Formula::Mem("x".into(), "y".into()));
    }

    #[test]
    fn unbounded_quantifier_is_not_admissible() {
        assert_eq!(parse_formula("A x . x = x").unwrap_err().kind(), "AdmissibilityError");
        assert_eq!(parse_formula("Aall x. x = x").unwrap_err().kind(), "AdmissibilityError");
        assert!(parse_formula_extended("Aall x. x = x").is_ok());
        assert_eq!(
            parse_formula_extended("Aall x. x in S{0}").unwrap_err().kind(),
            "AdmissibilityError"
        );
    }

    #[test]
    fn syntax_errors() {
        for bad in [
            "",
            "x =",
            "x = y & y = x",
            "(x = y",
            "!x = y",
            "A x in {0}. x = x",
            "I{0}{1}(x) = ",
            "X = y",
            "in = x",
            "x = y)",
        ] {
            assert!(parse_formula(bad).unwrap_err().is_parse_error(), "{bad}");
        }
        assert_eq!(
            parse_formula("I{0}{1,2}(x) = y").unwrap_err().kind(),
            "AdmissibilityError"
        );
    }

    #[test]
    fn renders_canonically() {
        assert_eq!(Formula::InLevel("v".into(), l(&[0, 1])).to_string(), "v in S{0,1}");
        assert_eq!(
            Formula::iff(Formula::Eq("u".into(), "v".into()), Formula::Eq("v".into(), "u".into()))
                .to_string(),
            "(u = v) <-> (v = u)"
        );
        assert_eq!(p("((x = y))").to_string(), "x = y");
        assert_eq!(p("!((x = y) | (y in S 3))").to_string(), "!((x = y) | (y in S{0,1,2}))");
    }

    #[test]
    fn free_variables() {
        let names = |s: &str| p(s).free_variables().into_iter().collect::<Vec<_>>();
        assert_eq!(names("A x in S{0}. x = y"), ["y"]);
        assert_eq!(names("x in S{1}"), ["x"]);
        assert!(names("A x in S{0}. E y in S{1}. x in y").is_empty());
        assert_eq!(names("(x = x) & (E x in S0. x = z)"), ["x", "z"]);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(p("x in S{0}").shift_up(1).unwrap(), p("x in S{0,1}"));
        assert_eq!(p("I{0}{1}(x) = y").shift_up(2).unwrap(), p("I{0,1,2}{0,1,3}(x) = y"));
        let f = p("A x in S{0,2}. (x in S{}) -> (E y in S{1}. I{1}{0}(y) = x)");
        assert_eq!(f.shift_up(0).unwrap(), f);
        assert_eq!(
            f.shift_up(1).unwrap().to_string(),
            "A x in S{0,1,3}. (x in S{0}) -> (E y in S{0,2}. I{0,2}{0,1}(y) = x)"
        );
        let gt = parse_formula_extended("Aall x. x = x").unwrap();
        assert_eq!(gt.shift_up(1).unwrap_err().kind(), "AdmissibilityError");
    }

    #[test]
    fn ho_examples() {
        assert_eq!(
            ho_instance(&p("v in S{0}"), 1, &l(&[0])).unwrap().to_string(),
            "A x in S{0}. A y in S{1}. (I{0}{1}(x) = y) -> ((x in S{0}) <-> (y in S{0,1}))"
        );
        let closed = p("A x in S{0}. x in S{0}");
        assert_eq!(
            ho_instance(&closed, 2, &l(&[3])).unwrap(),
            Formula::iff(closed.clone(), closed.shift_up(2).unwrap())
        );
        // 1⊞{0} = {0,1}, 1⊞{1} = {0,2}, 1⊕{0,1} = {1,2}
        assert_eq!(
            ho_instance(&p("I{0}{1}(u) = v"), 1, &l(&[0, 1])).unwrap().to_string(),
            "A x1 in S{0,1}. A x2 in S{0,1}. A y1 in S{1,2}. A y2 in S{1,2}. \
             ((I{0,1}{1,2}(x1) = y1) & (I{0,1}{1,2}(x2) = y2)) -> \
             ((I{0}{1}(x1) = x2) <-> (I{0,1}{0,2}(y1) = y2))"
        );
    }

    #[test]
    fn ho_renaming_avoids_capture() {
        let f = p("E x1 in S{0}. (x1 = u) | (x1 = w)");
        let inst = ho_instance(&f, 1, &l(&[0])).unwrap();
        assert!(inst.free_variables().is_empty());
        assert_eq!(
            inst.to_string(),
            "A x1 in S{0}. A x2 in S{0}. A y1 in S{1}. A y2 in S{1}. \
             ((I{0}{1}(x1) = y1) & (I{0}{1}(x2) = y2)) -> \
             ((E x1_1 in S{0}. (x1_1 = x1) | (x1_1 = x2)) <-> \
             (E x1 in S{0,1}. (x1 = y1) | (x1 = y2)))"
        );
    }

    #[test]
    fn gt_examples() {
        let inst = gt_instance(&p("v in v1"), &l(&[0])).unwrap();
        assert_eq!(
            inst,
            parse_formula_extended("A x1 in S{0}. ((A x in S{0}. x in x1) -> (Aall x. x in x1))")
                .unwrap()
        );
        assert_eq!(
            inst.to_string(),
            "A x1 in S{0}. (A x in S{0}. x in x1) -> (Aall x. x in x1)"
        );
        assert_eq!(
            gt_instance(&p("v = v"), &l(&[1])).unwrap().to_string(),
            "(A x in S{1}. x = x) -> (Aall x. x = x)"
        );
        assert_eq!(
            gt_instance(&p("v in S{0}"), &l(&[0])).unwrap_err().kind(),
            "NotPureInFormula"
        );
    }

    fn num(s: &str) -> Value {
        Value::Num(s.parse::<Num>().unwrap())
    }

    fn env(pairs: &[(&str, Value)]) -> Env {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn eval_examples() {
        let none = Domains::new();
        assert!(eval_formula(&p("x in S{0}"), &env(&[("x", num("w0"))]), &none).unwrap());
        assert!(eval_formula(
            &p("I{0}{1}(x) = y"),
            &env(&[("x", num("w0 + 1/2")), ("y", num("w1 + 1/2"))]),
            &none
        )
        .unwrap());
        let dom = Domains::from([("y".to_string(), vec![num("0"), num("1"), num("w0")])]);
        assert!(eval_formula(&p("E y in S{0}. y = x"), &env(&[("x", num("w0"))]), &dom).unwrap());
        assert!(!eval_formula(&p("E y in S{}. y = x"), &env(&[("x", num("w0"))]), &dom).unwrap());
    }

    #[test]
    fn eval_errors_and_sets() {
        let none = Domains::new();
        let set = Value::Set([Num::one(), Num::scale(0)].into_iter().collect());
        let e = env(&[("x", num("w0")), ("s", set), ("n", num("2"))]);
        assert!(eval_formula(&p("x in s"), &e, &none).unwrap());
        assert!(!eval_formula(&p("n in s"), &e, &none).unwrap());
        assert!(eval_formula(&p("s in S{0}"), &e, &none).unwrap());
        assert!(!eval_formula(&p("s = x"), &e, &none).unwrap());
        assert_eq!(eval_formula(&p("x in n"), &e, &none).unwrap_err().kind(), "TypeMismatch");
        assert_eq!(eval_formula(&p("x = z"), &e, &none).unwrap_err().kind(), "UnboundVariable");
        assert_eq!(
            eval_formula(&p("A y in S0. y = y"), &e, &none).unwrap_err().kind(),
            "MissingDomain"
        );
        // outside the source level the embedding atom is false
        assert!(!eval_formula(&p("I{1}{2}(x) = x"), &e, &none).unwrap());
    }
}
