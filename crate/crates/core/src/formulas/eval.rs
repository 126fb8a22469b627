//! Evaluation over finite domains of field elements and finite sets of them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::Formula;
use crate::error::{Error, Result};
use crate::labels::Label;
use crate::numbers::Num;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Value {
    Num(Num),
    Set(BTreeSet<Num>),
}

impl Value {
    /// A set lies in a level when all its elements do.
    pub fn in_level(&self, a: &Label) -> bool {
        match self {
            Value::Num(x) => x.in_level(a),
            Value::Set(s) => s.iter().all(|x| x.in_level(a)),
        }
    }

    pub fn embed(&self, a: &Label, b: &Label) -> Result<Value> {
        Ok(match self {
            Value::Num(x) => Value::Num(x.embed(a, b)?),
            Value::Set(s) => Value::Set(s.iter().map(|x| x.embed(a, b)).collect::<Result<_>>()?),
        })
    }
}

impl From<Num> for Value {
    fn from(x: Num) -> Self {
        Value::Num(x)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(x) => write!(f, "{x}"),
            Value::Set(s) => {
                f.write_str("[")?;
                for (i, x) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Values of free variables.
pub type Env = BTreeMap<String, Value>;

/// Candidate values for each bound variable, keyed by its name. A bounded
/// quantifier ranges over the candidates lying in its level.
pub type Domains = BTreeMap<String, Vec<Value>>;

pub fn eval_formula(f: &Formula, env: &Env, domains: &Domains) -> Result<bool> {
    let mut env = env.clone();
    eval(f, &mut env, domains)
}

fn lookup<'a>(env: &'a Env, v: &str) -> Result<&'a Value> {
    env.get(v).ok_or_else(|| Error::UnboundVariable(v.to_string()))
}

fn eval(f: &Formula, env: &mut Env, domains: &Domains) -> Result<bool> {
    Ok(match f {
        Formula::Eq(u, v) => lookup(env, u)? == lookup(env, v)?,
        Formula::Mem(u, v) => match (lookup(env, u)?, lookup(env, v)?) {
            (_, Value::Num(y)) => {
                return Err(Error::TypeMismatch(format!(
                    "`{v}` is the number {y}, not a set"
                )))
            }
            (Value::Num(x), Value::Set(s)) => s.contains(x),
            (Value::Set(_), Value::Set(_)) => false,
        },
        Formula::InLevel(v, a) => lookup(env, v)?.in_level(a),
        Formula::Emb {
            from,
            to,
            arg,
            value,
        } => {
            let x = lookup(env, arg)?;
            x.in_level(from) && &x.embed(from, to)? == lookup(env, value)?
        }
        Formula::Not(a) => !eval(a, env, domains)?,
        Formula::And(a, b) => eval(a, env, domains)? && eval(b, env, domains)?,
        Formula::Or(a, b) => eval(a, env, domains)? || eval(b, env, domains)?,
        Formula::Implies(a, b) => !eval(a, env, domains)? || eval(b, env, domains)?,
        Formula::Iff(a, b) => eval(a, env, domains)? == eval(b, env, domains)?,
        Formula::ForallIn(v, a, body) => {
            quantify(v, Some(a), body, env, domains, true)?
        }
        Formula::ExistsIn(v, a, body) => {
            quantify(v, Some(a), body, env, domains, false)?
        }
        Formula::UnboundedForall(v, body) => quantify(v, None, body, env, domains, true)?,
    })
}

fn quantify(
    v: &str,
    level: Option<&Label>,
    body: &Formula,
    env: &mut Env,
    domains: &Domains,
    universal: bool,
) -> Result<bool> {
    let dom = domains
        .get(v)
        .ok_or_else(|| Error::MissingDomain(v.to_string()))?;
    let saved = env.remove(v);
    let mut result = universal;
    for val in dom.iter().filter(|x| level.is_none_or(|a| x.in_level(a))) {
        env.insert(v.to_string(), val.clone());
        match eval(body, env, domains) {
            Ok(holds) if holds != universal => {
                result = !universal;
                break;
            }
            Ok(_) => {}
            Err(e) => {
                restore(env, v, saved);
                return Err(e);
            }
        }
    }
    restore(env, v, saved);
    Ok(result)
}

fn restore(env: &mut Env, v: &str, saved: Option<Value>) {
    match saved {
        Some(x) => env.insert(v.to_string(), x),
        None => env.remove(v),
    };
}
