//! Finite relational structures and their ultrapowers.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{is_ultrafilter, SetFamily, TupleSpace};
use crate::error::{Error, Result};

/// Largest universe accepted as input.
pub const MAX_UNIVERSE: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

impl Relation {
    pub fn holds(&self, tuple: &[usize]) -> bool {
        self.tuples.contains(tuple)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteStructure {
    pub universe: usize,
    pub relations: BTreeMap<String, Relation>,
}

impl FiniteStructure {
    /// Checks the size guards and that every tuple lies in the universe.
    pub fn validate(&self) -> Result<()> {
        if self.universe == 0 || self.universe > MAX_UNIVERSE {
            return Err(Error::TooLarge(format!(
                "universes must have 1 to {MAX_UNIVERSE} elements, got {}",
                self.universe
            )));
        }
        self.check_tuples()
    }

    fn check_tuples(&self) -> Result<()> {
        for (name, rel) in &self.relations {
            if rel.arity > 2 {
                return Err(Error::Invalid(format!(
                    "relation {name} has arity {}, above 2",
                    rel.arity
                )));
            }
            if let Some(t) = rel
                .tuples
                .iter()
                .find(|t| t.len() != rel.arity || t.iter().any(|x| *x >= self.universe))
            {
                return Err(Error::Invalid(format!(
                    "tuple {t:?} does not fit relation {name} over a universe of {}",
                    self.universe
                )));
            }
        }
        Ok(())
    }
}

/// Every directed graph (relation `E`, loops allowed) on `n` nodes.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = FiniteStructure> {
    let cells = n * n;
    (0u64..1 << cells).map(move |code| {
        let tuples = (0..cells)
            .filter(|c| code >> c & 1 == 1)
            .map(|c| vec![c / n, c % n])
            .collect();
        FiniteStructure {
            universe: n,
            relations: BTreeMap::from([("E".to_string(), Relation { arity: 2, tuples })]),
        }
    })
}

/// `M^I / U`, with the quotient map on functions `I → M`.
#[derive(Clone, Debug)]
pub struct Ultrapower {
    pub(crate) base: FiniteStructure,
    pub(crate) filter: SetFamily,
    /// Functions `f : I → M` coded as tuples `(f(0), …, f(k-1))`.
    pub functions: TupleSpace,
    /// Class of each function code.
    pub class_of: Vec<usize>,
    /// Least function code in each class.
    pub representatives: Vec<usize>,
    pub structure: FiniteStructure,
}

pub fn ultrapower(m: &FiniteStructure, u: &SetFamily) -> Result<Ultrapower> {
    m.check_tuples()?;
    if !is_ultrafilter(u) {
        return Err(Error::Invalid("the index family is not an ultrafilter".into()));
    }
    let k = u.ground();
    let functions = TupleSpace {
        base: m.universe,
        arity: k,
    };
    if functions.size() > 1 << 12 {
        return Err(Error::TooLarge(format!(
            "{} functions from {k} indices into {} elements",
            functions.size(),
            m.universe
        )));
    }
    let values: Vec<Vec<usize>> = (0..functions.size()).map(|c| functions.decode(c)).collect();
    let agree = |f: &[usize], g: &[usize]| {
        (0..k).fold(0u32, |acc, i| if f[i] == g[i] { acc | 1 << i } else { acc })
    };
    let mut class_of = Vec::with_capacity(values.len());
    let mut representatives: Vec<usize> = Vec::new();
    for (code, f) in values.iter().enumerate() {
        match representatives
            .iter()
            .position(|&r| u.contains(agree(f, &values[r])))
        {
            Some(c) => class_of.push(c),
            None => {
                class_of.push(representatives.len());
                representatives.push(code);
            }
        }
    }
    let classes = representatives.len();
    let mut relations = BTreeMap::new();
    for (name, rel) in &m.relations {
        let space = TupleSpace {
            base: classes,
            arity: rel.arity,
        };
        let tuples = (0..space.size())
            .map(|c| space.decode(c))
            .filter(|cls| {
                let holds = (0..k).fold(0u32, |acc, i| {
                    let point: Vec<usize> = cls.iter().map(|c| values[representatives[*c]][i]).collect();
                    if rel.holds(&point) {
                        acc | 1 << i
                    } else {
                        acc
                    }
                });
                u.contains(holds)
            })
            .collect();
        relations.insert(
            name.clone(),
            Relation {
                arity: rel.arity,
                tuples,
            },
        );
    }
    Ok(Ultrapower {
        base: m.clone(),
        filter: u.clone(),
        functions,
        class_of,
        representatives,
        structure: FiniteStructure {
            universe: classes,
            relations,
        },
    })
}

impl Ultrapower {
    pub fn class(&self, f: &[usize]) -> Result<usize> {
        if f.len() != self.functions.arity || f.iter().any(|x| *x >= self.functions.base) {
            return Err(Error::Invalid(format!(
                "{f:?} is not a function from {} indices into {} elements",
                self.functions.arity, self.functions.base
            )));
        }
        Ok(self.class_of[self.functions.encode(f)])
    }

    /// Class of the constant function with value `x`.
    pub fn diagonal(&self, x: usize) -> usize {
        self.class_of[self.functions.encode(&vec![x; self.functions.arity])]
    }
}
