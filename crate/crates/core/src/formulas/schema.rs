//! Instances of the homogeneous-shift and transfer schemata.

use super::Formula;
use crate::error::{Error, Result};
use crate::labels::Label;

/// The shift instance of `f` for `r` at level `a`.
///
/// Free variables `v1 < … < vk` (by name) become `x1..xk` over `S_a` and
/// `y1..yk` over `S_{r⊕a}`; with a single free variable the names are `x`
/// and `y`. The argument maps are `I_a^{r⊕a}(xi) = yi`.
pub fn ho_instance(f: &Formula, r: usize, a: &Label) -> Result<Formula> {
    let shifted = f.shift_up(r)?;
    let free: Vec<String> = f.free_variables().into_iter().collect();
    if free.is_empty() {
        return Ok(Formula::iff(f.clone(), shifted));
    }
    let (xs, ys) = if free.len() == 1 {
        (vec!["x".to_string()], vec!["y".to_string()])
    } else {
        (
            (1..=free.len()).map(|i| format!("x{i}")).collect(),
            (1..=free.len()).map(|i| format!("y{i}")).collect(),
        )
    };
    let target = a.oplus(r);
    let pairs = |names: &[String]| -> Vec<(String, String)> {
        free.iter().cloned().zip(names.iter().cloned()).collect()
    };
    let maps = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| Formula::Emb {
            from: a.clone(),
            to: target.clone(),
            arg: x.clone(),
            value: y.clone(),
        })
        .reduce(Formula::and)
        .expect("at least one free variable");
    let body = Formula::implies(
        maps,
        Formula::iff(f.rename_free(&pairs(&xs)), shifted.rename_free(&pairs(&ys))),
    );
    let body = ys
        .iter()
        .rev()
        .fold(body, |acc, y| Formula::forall_in(y.clone(), target.clone(), acc));
    Ok(xs
        .iter()
        .rev()
        .fold(body, |acc, x| Formula::forall_in(x.clone(), a.clone(), acc)))
}

/// The transfer instance of the membership formula `phi` at level `a`.
///
/// The free variable `v` is the distinguished one and becomes `x`; the
/// remaining free variables, in name order, become the parameters
/// `x1..xk`, quantified over `S_a`.
pub fn gt_instance(phi: &Formula, a: &Label) -> Result<Formula> {
    if !phi.is_pure_membership() {
        return Err(Error::NotPureInFormula(phi.to_string()));
    }
    let params: Vec<String> = phi
        .free_variables()
        .into_iter()
        .filter(|v| v != "v")
        .collect();
    let names: Vec<String> = (1..=params.len()).map(|i| format!("x{i}")).collect();
    let mut map: Vec<(String, String)> = params.iter().cloned().zip(names.iter().cloned()).collect();
    map.push(("v".into(), "x".into()));
    let body = phi.rename_free(&map);
    let conclusion = Formula::implies(
        Formula::forall_in("x", a.clone(), body.clone()),
        Formula::UnboundedForall("x".into(), Box::new(body)),
    );
    Ok(names
        .iter()
        .rev()
        .fold(conclusion, |acc, x| Formula::forall_in(x.clone(), a.clone(), acc)))
}
