//! Ultrafilters over small finite index sets: pushforwards, tensor products
//! and powers, label projections, and ultrapowers of finite structures with
//! an exhaustive Łoś checker.
//!
//! Every ultrafilter on a finite set is principal, so the content here is the
//! finite combinatorics of the constructions, checked by enumeration.

mod family;
mod los;
mod structure;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::labels::{size_mismatch, Label};

pub use family::{mask_of, points, FamilyRecord, SetFamily, MAX_GROUND, MAX_SERIALIZED_GROUND};
pub use los::{
    formula_family, los_check, los_sweep, parse_los_formula, LosBatch, LosFormula, LosSweep,
    Quantifier, Term,
};
pub use structure::{all_digraphs, ultrapower, FiniteStructure, Relation, Ultrapower};

/// Grounds up to this size are checked axiom by axiom.
pub const LITERAL_CHECK_GROUND: usize = 10;

/// Checks the ultrafilter axioms: `∅` excluded, upward closure, closure
/// under intersection, and exactly one of `Y`, `I∖Y` for every `Y`.
///
/// Grounds above [`LITERAL_CHECK_GROUND`] use the finite characterization
/// instead: the family is `{Y : p ∈ Y}` for a single point `p`.
pub fn is_ultrafilter(f: &SetFamily) -> bool {
    if f.ground() > LITERAL_CHECK_GROUND {
        return f.principal_point().is_some();
    }
    satisfies_axioms(f)
}

/// The literal axiom check, at any ground size.
pub fn satisfies_axioms(f: &SetFamily) -> bool {
    let full = f.full_mask();
    if f.contains(0) {
        return false;
    }
    let members: Vec<u32> = f.members().collect();
    let upward = members
        .iter()
        .all(|&y| (0..f.ground()).all(|p| f.contains(y | 1 << p)));
    let meets = upward
        && members
            .iter()
            .all(|&y| members.iter().all(|&z| f.contains(y & z)));
    meets && (0..=full).all(|y| f.contains(y) != f.contains(full & !y))
}

/// Every ultrafilter over `{0, …, k-1}`.
///
/// Without `exhaustive` these are the `k` principal ones. With it, every one
/// of the `2^(2^k)` families is filtered through [`is_ultrafilter`].
pub fn all_ultrafilters(k: usize, exhaustive: bool) -> Result<Vec<SetFamily>> {
    if !exhaustive {
        return (0..k).map(|p| SetFamily::principal(k, p)).collect();
    }
    if k > 4 {
        return Err(Error::TooLarge(format!(
            "exhaustive enumeration over {k} points needs 2^{} families",
            1u64 << k
        )));
    }
    let subsets = 1u32 << k;
    let mut out = Vec::new();
    for code in 0u64..1 << subsets {
        let f = SetFamily::from_members(k, (0..subsets).filter(|y| code >> y & 1 == 1))?;
        if is_ultrafilter(&f) {
            out.push(f);
        }
    }
    Ok(out)
}

/// `π[U] = {Y ⊆ J : π⁻¹[Y] ∈ U}` for `π : I → J` given as `map[i] = π(i)`
/// and `J = {0, …, target-1}`.
pub fn pushforward(map: &[usize], target: usize, u: &SetFamily) -> Result<SetFamily> {
    if map.len() != u.ground() {
        return Err(Error::Invalid(format!(
            "the map has {} points but the ultrafilter's ground has {}",
            map.len(),
            u.ground()
        )));
    }
    if let Some(j) = map.iter().find(|j| **j >= target) {
        return Err(Error::Invalid(format!(
            "the map sends a point to {j}, outside a target of {target} points"
        )));
    }
    if target == u.ground() && map.iter().enumerate().all(|(i, j)| i == *j) {
        return Ok(u.clone());
    }
    // preimages of each byte of a target mask
    let chunks = target.div_ceil(8);
    let mut tables = vec![[0u32; 256]; chunks];
    for (c, table) in tables.iter_mut().enumerate() {
        for (byte, pre) in table.iter_mut().enumerate() {
            *pre = map
                .iter()
                .enumerate()
                .filter(|(_, j)| **j / 8 == c && byte >> (**j % 8) & 1 == 1)
                .fold(0, |acc, (i, _)| acc | 1 << i);
        }
    }
    SetFamily::from_predicate(target, |y| {
        let pre = tables
            .iter()
            .enumerate()
            .fold(0, |acc, (c, t)| acc | t[(y >> (8 * c) & 0xFF) as usize]);
        u.contains(pre)
    })
}

/// `U ⊗ V` over `I × J`: `Z` belongs iff `{x : {y : (x,y) ∈ Z} ∈ V} ∈ U`.
/// The pair `(x, y)` has code `x·|J| + y`.
pub fn tensor(u: &SetFamily, v: &SetFamily) -> Result<SetFamily> {
    let (m, n) = (u.ground(), v.ground());
    if m * n > MAX_GROUND {
        return Err(Error::TooLarge(format!(
            "the tensor product ground has {} points, above the bound of {MAX_GROUND}",
            m * n
        )));
    }
    if m == 0 {
        return SetFamily::from_members(0, std::iter::empty());
    }
    // Within a block of 2^|J| codes only the section at x = 0 varies, so
    // each block is constant or a copy of V or of its complement.
    let section = family::full_mask(n);
    let v_bits: Vec<bool> = (0..=section).map(|y| v.contains(y)).collect();
    let mut out = SetFamily::empty(m * n)?;
    for hi in 0u32..1 << ((m - 1) * n) {
        let rest = (1..m).fold(0u32, |acc, x| {
            if v.contains(hi >> ((x - 1) * n) & section) {
                acc | 1 << x
            } else {
                acc
            }
        });
        let (without, with) = (u.contains(rest), u.contains(rest | 1));
        if !without && !with {
            continue;
        }
        out.fill_block(hi, n, |y| if v_bits[y as usize] { with } else { without });
    }
    Ok(out)
}

/// `⊗⁰U = {{∅}}` over the one-point `I⁰`, and `⊗ⁿ⁺¹U = U ⊗ (⊗ⁿU)`.
pub fn tensor_power(u: &SetFamily, n: usize) -> Result<SetFamily> {
    let mut acc = SetFamily::from_members(1, [1])?;
    for _ in 0..n {
        acc = tensor(u, &acc)?;
    }
    Ok(acc)
}

/// Tuples over `{0, …, base-1}` of a fixed length, coded in mixed radix with
/// the first coordinate most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleSpace {
    pub base: usize,
    pub arity: usize,
}

impl TupleSpace {
    pub fn size(&self) -> usize {
        self.base.pow(self.arity as u32)
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, t| acc * self.base + t)
    }

    pub fn decode(&self, mut code: usize) -> Vec<usize> {
        let mut out = vec![0; self.arity];
        for slot in out.iter_mut().rev() {
            *slot = code % self.base;
            code /= self.base;
        }
        out
    }
}

/// `U_a`: the pushforward of `⊗ⁿU` along the map `Iⁿ → I^a` induced by the
/// order isomorphism `n → a`. Points of `I^a` are tuples listed in the
/// increasing order of `a`.
pub fn project_to_label(u: &SetFamily, a: &Label, n: usize) -> Result<SetFamily> {
    Projections::new(u).project(a, n)
}

/// Checks `U_a = π[U_b]` for the restriction `π : I^b → I^a`, `a ⊆ b`.
pub fn check_coherence(u: &SetFamily, a: &Label, b: &Label) -> Result<bool> {
    Projections::new(u).coherent(a, b)
}

/// Caches tensor powers of one ultrafilter across projections.
pub struct Projections<'a> {
    u: &'a SetFamily,
    powers: BTreeMap<usize, SetFamily>,
}

impl<'a> Projections<'a> {
    pub fn new(u: &'a SetFamily) -> Self {
        Projections {
            u,
            powers: BTreeMap::new(),
        }
    }

    pub fn power(&mut self, n: usize) -> Result<&SetFamily> {
        if !self.powers.contains_key(&n) {
            let p = match n.checked_sub(1).and_then(|m| self.powers.get(&m)) {
                Some(prev) => tensor(self.u, prev)?,
                None => tensor_power(self.u, n)?,
            };
            self.powers.insert(n, p);
        }
        Ok(&self.powers[&n])
    }

    fn space(&self, arity: usize) -> TupleSpace {
        TupleSpace {
            base: self.u.ground(),
            arity,
        }
    }

    pub fn project(&mut self, a: &Label, n: usize) -> Result<SetFamily> {
        let numeral = Label::numeral(n);
        if a.len() != n {
            return Err(size_mismatch(&numeral, a));
        }
        let iso = numeral.order_iso(a)?;
        let (from, to) = (self.space(n), self.space(a.len()));
        let map: Vec<usize> = (0..from.size())
            .map(|code| {
                let t = from.decode(code);
                let mut s = vec![0; a.len()];
                for (j, tj) in t.iter().enumerate() {
                    let target = iso.apply(j).expect("j < n");
                    let pos = a.indices().binary_search(&target).expect("image lies in a");
                    s[pos] = *tj;
                }
                to.encode(&s)
            })
            .collect();
        pushforward(&map, to.size(), self.power(n)?)
    }

    pub fn coherent(&mut self, a: &Label, b: &Label) -> Result<bool> {
        if !a.is_subset(b) {
            return Err(Error::NotSubset {
                sub: a.to_string(),
                sup: b.to_string(),
            });
        }
        let ua = self.project(a, a.len())?;
        let ub = self.project(b, b.len())?;
        let (from, to) = (self.space(b.len()), self.space(a.len()));
        let keep: Vec<usize> = a
            .indices()
            .iter()
            .map(|s| b.indices().binary_search(s).expect("a ⊆ b"))
            .collect();
        let map: Vec<usize> = (0..from.size())
            .map(|code| {
                let t = from.decode(code);
                to.encode(&keep.iter().map(|&pos| t[pos]).collect::<Vec<_>>())
            })
            .collect();
        Ok(pushforward(&map, to.size(), &ub)? == ua)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn principal(k: usize, p: usize) -> SetFamily {
        SetFamily::principal(k, p).unwrap()
    }

    #[test]
    fn ultrafilter_examples() {
        assert!(is_ultrafilter(&principal(3, 1)));
        let everything = SetFamily::from_members(3, 0..8).unwrap();
        assert!(!is_ultrafilter(&everything));
        assert!(!is_ultrafilter(&SetFamily::empty(3).unwrap()));
        // upward closed and maximal-looking but not closed under meets
        let majority = SetFamily::from_predicate(3, |y| y.count_ones() >= 2).unwrap();
        assert!(!is_ultrafilter(&majority));
    }

    #[test]
    fn literal_and_kernel_checks_agree() {
        for k in 1..=4 {
            for f in all_ultrafilters(k, true).unwrap() {
                assert!(f.principal_point().is_some());
            }
        }
        let majority = SetFamily::from_predicate(5, |y| y.count_ones() >= 3).unwrap();
        assert!(!satisfies_axioms(&majority));
        assert_eq!(majority.principal_point(), None);
    }

    #[test]
    fn exhaustive_enumeration_finds_the_principal_ones() {
        // 16 families over two points
        assert_eq!(all_ultrafilters(2, true).unwrap().len(), 2);
        assert_eq!(all_ultrafilters(1, true).unwrap().len(), 1);
        assert_eq!(all_ultrafilters(4, true).unwrap(), all_ultrafilters(4, false).unwrap());
        assert_eq!(all_ultrafilters(5, true).unwrap_err().kind(), "TooLarge");
    }

    #[test]
    fn pushforward_examples() {
        let u = principal(4, 2);
        assert_eq!(pushforward(&[1, 0, 2, 1], 3, &u).unwrap(), principal(3, 2));
        assert_eq!(pushforward(&[0, 1, 2, 3], 4, &u).unwrap(), u);
        assert_eq!(pushforward(&[1, 1, 1, 1], 2, &u).unwrap(), principal(2, 1));
    }

    #[test]
    fn tensor_examples() {
        // (x, y) = (1, 2) has code 1·3 + 2
        assert_eq!(tensor(&principal(2, 1), &principal(3, 2)).unwrap(), principal(6, 5));
        assert_eq!(tensor(&principal(3, 2), &principal(1, 0)).unwrap(), principal(3, 2));
        assert_eq!(tensor(&principal(6, 0), &principal(5, 0)).unwrap_err().kind(), "TooLarge");
    }

    #[test]
    fn tensor_powers() {
        let u = principal(3, 1);
        assert_eq!(tensor_power(&u, 0).unwrap().member_lists(), vec![vec![0]]);
        assert_eq!(tensor_power(&u, 1).unwrap(), u);
        // (1, 1) has code 4
        assert_eq!(tensor_power(&u, 2).unwrap(), principal(9, 4));
    }

    #[test]
    fn label_projections() {
        let u = principal(3, 2);
        let a = Label::new([1, 3]);
        assert_eq!(project_to_label(&u, &a, 2).unwrap(), principal(9, 8));
        assert_eq!(
            project_to_label(&u, &Label::numeral(2), 2).unwrap(),
            tensor_power(&u, 2).unwrap()
        );
        assert_eq!(project_to_label(&u, &a, 3).unwrap_err().kind(), "SizeMismatch");
    }

    #[test]
    fn coherence_examples() {
        let u = principal(2, 0);
        let b = Label::new([0, 2]);
        assert!(check_coherence(&u, &b, &b).unwrap());
        assert!(check_coherence(&u, &Label::empty(), &b).unwrap());
        assert!(check_coherence(&u, &Label::new([2]), &b).unwrap());
        assert_eq!(
            check_coherence(&u, &Label::new([1]), &b).unwrap_err().kind(),
            "NotSubset"
        );
    }

    #[test]
    fn cube_power_of_a_principal_ultrafilter() {
        // (1, 1, 1) has code 9 + 3 + 1
        let cube = tensor_power(&principal(3, 1), 3).unwrap();
        assert_eq!(cube.principal_point(), Some(13));
        assert!(is_ultrafilter(&cube));
    }

    fn digraph(n: usize, edges: &[[usize; 2]]) -> FiniteStructure {
        FiniteStructure {
            universe: n,
            relations: BTreeMap::from([(
                "E".to_string(),
                Relation {
                    arity: 2,
                    tuples: edges.iter().map(|e| e.to_vec()).collect(),
                },
            )]),
        }
    }

    #[test]
    fn principal_ultrapower_is_isomorphic_to_the_base() {
        let m = digraph(3, &[[0, 1], [1, 2], [2, 2]]);
        let u = principal(2, 1);
        let up = ultrapower(&m, &u).unwrap();
        assert_eq!(up.structure.universe, 3);
        // f ↦ f(1) identifies classes with elements
        for code in 0..up.functions.size() {
            let f = up.functions.decode(code);
            assert_eq!(up.class_of[code], up.diagonal(f[1]));
        }
        let iso: Vec<usize> = (0..3).map(|x| up.diagonal(x)).collect();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(
                    m.relations["E"].holds(&[a, b]),
                    up.structure.relations["E"].holds(&[iso[a], iso[b]])
                );
            }
        }
    }

    #[test]
    fn los_on_a_single_edge() {
        let m = digraph(2, &[[0, 1]]);
        let family = LosBatch::new(formula_family(&[("E", 2)]));
        assert_eq!(family.len(), 13 * (10 + 4 * 10 * 10));
        for u in all_ultrafilters(2, false).unwrap() {
            let sweep = los_sweep(&m, &u, &family).unwrap();
            assert!(sweep.failures.is_empty(), "{:?}", sweep.failures);
        }
    }

    #[test]
    fn los_formula_syntax() {
        let phi = parse_los_formula("A x. E y. E(x,y) & !(x = y)").unwrap();
        assert_eq!(phi.to_string(), "A x. E y. E(x,y) & !(x = y)");
        assert!(phi.free_variables().is_empty());
        let psi = parse_los_formula("E(y, x) -> y = x").unwrap();
        assert_eq!(psi.free_variables(), ["x", "y"]);
        assert_eq!(parse_los_formula(&psi.to_string()).unwrap(), psi);
        assert_eq!(
            parse_los_formula("E(x,y) & E(y,z)").unwrap_err().kind(),
            "UnsupportedFormula"
        );
        assert_eq!(
            parse_los_formula("A x. E y. A x. x = y").unwrap_err().kind(),
            "UnsupportedFormula"
        );
        let m = digraph(2, &[[0, 1]]);
        let u = principal(3, 0);
        assert!(los_check(&m, &u, &psi, &[vec![1, 0, 0], vec![0, 1, 1]]).unwrap());
        let bad = parse_los_formula("R(x)").unwrap();
        assert_eq!(
            los_check(&m, &u, &bad, &[vec![0, 0, 0]]).unwrap_err().kind(),
            "UnsupportedFormula"
        );
    }
}
