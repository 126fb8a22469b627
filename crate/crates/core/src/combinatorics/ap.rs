//! Arithmetic progressions: exhaustive search and the extremal AP-free size.

use serde::Serialize;

use super::IntSet;
use crate::error::{Error, Result};

/// Largest ground searched by [`max_ap_free_subset`].
pub const MAX_AP_FREE_GROUND: usize = 25;

/// The lexicographically least `(start, step)` with `step ≥ 1` whose `k`-term
/// progression lies in `set`.
pub fn find_k_ap(set: &IntSet, k: usize) -> Result<Option<(usize, usize)>> {
    if k == 0 {
        return Err(Error::Invalid("progressions need k ≥ 1".into()));
    }
    let Some(max) = set.iter().last() else {
        return Ok(None);
    };
    if k == 1 {
        return Ok(set.iter().next().map(|m| (m, 1)));
    }
    for start in set.iter() {
        for step in 1..=(max - start) / (k - 1) {
            if (1..k).all(|i| set.contains(start + i * step)) {
                return Ok(Some((start, step)));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApFree {
    pub size: usize,
    pub witness: IntSet,
}

/// Largest subset of `[0, ground)` with no `k`-term progression, with the
/// lexicographically least witness.
pub fn max_ap_free_subset(ground: usize, k: usize) -> Result<ApFree> {
    if k < 3 {
        return Err(Error::Invalid(format!("AP-free search needs k ≥ 3, got {k}")));
    }
    if ground > MAX_AP_FREE_GROUND {
        return Err(Error::TooLarge(format!(
            "AP-free search over [0, {ground}) exceeds the bound of {MAX_AP_FREE_GROUND}"
        )));
    }
    struct Search {
        ground: usize,
        k: usize,
        best: u32,
        best_len: usize,
    }
    impl Search {
        // closes a progression whose top term is x
        fn closes(&self, set: u32, x: usize) -> bool {
            (1..=x / (self.k - 1)).any(|step| (1..self.k).all(|i| set >> (x - i * step) & 1 == 1))
        }

        // elements are decided in increasing order, "take" before "skip", so
        // the first set of each size reached is the lexicographically least
        fn go(&mut self, x: usize, set: u32, len: usize) {
            if x == self.ground {
                if len > self.best_len {
                    self.best = set;
                    self.best_len = len;
                }
                return;
            }
            if len + (self.ground - x) <= self.best_len {
                return;
            }
            if !self.closes(set, x) {
                self.go(x + 1, set | 1 << x, len + 1);
            }
            self.go(x + 1, set, len);
        }
    }
    let mut s = Search {
        ground,
        k,
        best: 0,
        best_len: 0,
    };
    s.go(0, 0, 0);
    Ok(ApFree {
        size: s.best_len,
        witness: IntSet::new((0..ground).filter(|x| s.best >> x & 1 == 1)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn progression_examples() {
        assert_eq!(find_k_ap(&IntSet::new([0, 2, 4, 6, 8]), 5).unwrap(), Some((0, 2)));
        assert_eq!(find_k_ap(&IntSet::new([1, 2, 4, 8, 9]), 3).unwrap(), None);
        assert_eq!(find_k_ap(&IntSet::default(), 1).unwrap(), None);
        assert_eq!(find_k_ap(&IntSet::new([5, 7]), 1).unwrap(), Some((5, 1)));
        assert_eq!(find_k_ap(&IntSet::new([3, 5, 6, 7, 9]), 3).unwrap(), Some((3, 2)));
    }

    #[test]
    fn extremal_sizes() {
        assert_eq!(max_ap_free_subset(9, 3).unwrap().size, 5);
        assert_eq!(max_ap_free_subset(4, 3).unwrap().size, 3);
        let one = max_ap_free_subset(1, 3).unwrap();
        assert_eq!((one.size, one.witness), (1, IntSet::new([0])));
        assert_eq!(max_ap_free_subset(0, 3).unwrap().size, 0);
        assert_eq!(max_ap_free_subset(4, 3).unwrap().witness, IntSet::new([0, 1, 3]));
        assert!(matches!(max_ap_free_subset(26, 3), Err(Error::TooLarge(_))));
    }
}
