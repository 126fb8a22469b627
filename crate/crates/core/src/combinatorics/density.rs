//! Finite-window upper Banach densities.

use num::{BigRational, Signed, Zero};
use serde::Serialize;

use super::IntSet;
use crate::error::{Error, Result};

/// The interval `[start, start + len)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Window {
    pub start: usize,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Density {
    pub value: BigRational,
    /// Lexicographically least maximizing window; absent for an empty ground.
    pub window: Option<Window>,
}

fn prefix_counts(set: &IntSet, size: usize) -> Vec<usize> {
    let mut pre = vec![0; size + 1];
    for x in 0..size {
        pre[x + 1] = pre[x] + usize::from(set.contains(x));
    }
    pre
}

fn check_window(window_min: usize, size: usize) -> Result<()> {
    if window_min == 0 {
        return Err(Error::Invalid("window_min must be at least 1".into()));
    }
    if window_min > size {
        return Err(Error::WindowTooLarge {
            window: window_min,
            size,
        });
    }
    Ok(())
}

/// Best `count/len` over windows accepted by `qualifies`, scanning `(start,
/// len)` lexicographically and keeping the first strict maximum.
fn best_window(
    size: usize,
    window_min: usize,
    counts: &[usize],
    mut qualifies: impl FnMut(usize, usize) -> bool,
) -> Option<(usize, Window)> {
    let mut best: Option<(usize, Window)> = None;
    for start in 0..=size - window_min {
        for len in window_min..=size - start {
            if !qualifies(start, len) {
                continue;
            }
            let count = counts[start + len] - counts[start];
            let better = match best {
                None => true,
                Some((c, w)) => count * w.len > c * len,
            };
            if better {
                best = Some((count, Window { start, len }));
            }
        }
    }
    best
}

fn ratio(count: usize, len: usize) -> BigRational {
    BigRational::new(count.into(), len.into())
}

/// Maximum of `|A ∩ P| / |P|` over intervals `P ⊆ [0, N)` of length at least
/// `window_min`, where `N` is the bound of `set`.
pub fn upper_banach_density(set: &IntSet, window_min: usize) -> Result<Density> {
    let size = set.bound();
    if set.is_empty() && window_min >= 1 {
        return Ok(Density {
            value: BigRational::zero(),
            window: None,
        });
    }
    check_window(window_min, size)?;
    let counts = prefix_counts(set, size);
    let (count, window) =
        best_window(size, window_min, &counts, |_, _| true).expect("some window fits");
    Ok(Density {
        value: ratio(count, window.len),
        window: Some(window),
    })
}

/// Density of `subset` on the windows where `ambient` comes within `tol` of
/// its own upper Banach density. Windows range over `[0, N)` for the bound
/// `N` of `ambient`.
pub fn relative_density(
    subset: &IntSet,
    ambient: &IntSet,
    window_min: usize,
    tol: &BigRational,
) -> Result<Density> {
    if !subset.is_subset(ambient) {
        return Err(Error::NotSubset {
            sub: subset.to_string(),
            sup: ambient.to_string(),
        });
    }
    if tol < &BigRational::zero() {
        return Err(Error::Invalid(format!("tolerance {tol} is negative")));
    }
    let eta = upper_banach_density(ambient, window_min)?;
    if ambient.is_empty() {
        return Ok(eta);
    }
    let size = ambient.bound();
    let ambient_counts = prefix_counts(ambient, size);
    let counts = prefix_counts(subset, size);
    let (count, window) = best_window(size, window_min, &counts, |start, len| {
        let here = ratio(ambient_counts[start + len] - ambient_counts[start], len);
        (here - &eta.value).abs() <= *tol
    })
    .ok_or(Error::NoQualifyingWindow)?;
    Ok(Density {
        value: ratio(count, window.len),
        window: Some(window),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn evens() -> IntSet {
        IntSet::new((0..100).step_by(2))
    }

    #[test]
    fn evens_prefer_odd_windows() {
        let d = upper_banach_density(&evens(), 10).unwrap();
        assert_eq!(d.value, BigRational::new(6.into(), 11.into()));
        assert_eq!(d.window, Some(Window { start: 0, len: 11 }));
    }

    #[test]
    fn trivial_densities() {
        assert!(upper_banach_density(&IntSet::default(), 3).unwrap().value.is_zero());
        let full = upper_banach_density(&IntSet::range(0, 20), 5).unwrap();
        assert_eq!(full.value, BigRational::from_integer(1.into()));
        assert_eq!(full.window, Some(Window { start: 0, len: 5 }));
        assert_eq!(
            upper_banach_density(&IntSet::new([0, 4]), 6),
            Err(Error::WindowTooLarge { window: 6, size: 5 })
        );
    }

    #[test]
    fn quarter_of_the_evens() {
        let fours = IntSet::new((0..100).step_by(4));
        let d = relative_density(&fours, &evens(), 10, &BigRational::zero()).unwrap();
        assert_eq!(d.value, BigRational::new(3.into(), 11.into()));
        assert_eq!(d.window, Some(Window { start: 0, len: 11 }));

        let same = relative_density(&evens(), &evens(), 10, &BigRational::zero()).unwrap();
        assert_eq!(same, upper_banach_density(&evens(), 10).unwrap());

        let loose = relative_density(&fours, &evens(), 10, &BigRational::from_integer(1.into()));
        assert_eq!(loose.unwrap().value, upper_banach_density(&fours, 10).unwrap().value);

        assert!(matches!(
            relative_density(&IntSet::new([1]), &evens(), 10, &BigRational::zero()),
            Err(Error::NotSubset { .. })
        ));
    }
}
