//! Finite Ramsey, Banach-density and arithmetic-progression searches, and a
//! replay of the embedding bookkeeping behind the infinite Ramsey argument.

mod ap;
mod density;
mod ramsey;
mod replay;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ap::{find_k_ap, max_ap_free_subset, ApFree, MAX_AP_FREE_GROUND};
pub use density::{relative_density, upper_banach_density, Density, Window};
pub use ramsey::{
    find_homogeneous, greedy_homogeneous, is_homogeneous, Coloring, ColoringSpec, Greedy,
};
pub use replay::{replay_side_conditions, Clause, ReplayReport};

/// A finite set of naturals, sorted and without repeats.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct IntSet(Vec<usize>);

impl IntSet {
    pub fn new(items: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        IntSet(v)
    }

    pub fn range(lo: usize, hi: usize) -> Self {
        IntSet((lo..hi).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `1 + max`, or 0 for the empty set.
    pub fn bound(&self) -> usize {
        self.0.last().map_or(0, |m| m + 1)
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &IntSet) -> bool {
        self.0.iter().all(|x| other.contains(*x))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Whitespace-separated naturals, or a JSON array of naturals.
    pub fn parse_text(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('[') {
            let v: Vec<usize> = serde_json::from_str(trimmed).map_err(|e| {
                Error::parse(text.len() - trimmed.len() + e.column().saturating_sub(1), e.to_string())
            })?;
            return Ok(IntSet::new(v));
        }
        let mut out = Vec::new();
        let mut offset = 0;
        for tok in text.split_inclusive(char::is_whitespace) {
            let word = tok.trim_end();
            if !word.is_empty() {
                out.push(
                    word.parse()
                        .map_err(|_| Error::parse(offset, format!("`{word}` is not a natural number")))?,
                );
            }
            offset += tok.len();
        }
        Ok(IntSet::new(out))
    }
}

impl From<Vec<usize>> for IntSet {
    fn from(v: Vec<usize>) -> Self {
        IntSet::new(v)
    }
}

impl From<IntSet> for Vec<usize> {
    fn from(s: IntSet) -> Self {
        s.0
    }
}

impl FromIterator<usize> for IntSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        IntSet::new(iter)
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_set_text_forms() {
        assert_eq!(IntSet::parse_text("4 0  2\n2").unwrap(), IntSet::new([0, 2, 4]));
        assert_eq!(IntSet::parse_text(" [3, 1]").unwrap(), IntSet::new([1, 3]));
        assert_eq!(IntSet::parse_text("").unwrap(), IntSet::default());
        match IntSet::parse_text("1 x 3") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert_eq!(IntSet::new([0, 2, 5]).to_string(), "{0,2,5}");
        assert_eq!(IntSet::new([0, 2, 5]).bound(), 6);
        assert_eq!(IntSet::default().bound(), 0);
    }
}
