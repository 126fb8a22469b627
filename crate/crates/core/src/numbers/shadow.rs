//! Shadows (standard parts) relative to the initial levels `S_r`.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use super::num::{Num, Scales};
use crate::error::{Error, Result};
use crate::labels::Label;

/// The element of `S_r = S{0,…,r-1}` infinitely close to `x`.
///
/// Takes the exact limit `w_j → ∞` for each scale `j ≥ r`, from the highest
/// occurring scale down. At each stage `x` is a rational function of `w_j`
/// over the lower scales; comparing its numerator and denominator degrees in
/// `w_j` either diverges, collapses to zero, or leaves the ratio of leading
/// coefficients for the next stage.
pub fn shadow(x: &Num, r: usize, scales: Scales) -> Result<Num> {
    if r > scales.count() {
        return Err(Error::ScaleExhausted {
            needed: r,
            available: scales.count(),
        });
    }
    let mut cur = x.clone();
    while let Some(j) = cur.highest_scale().filter(|j| *j >= r) {
        let n = cur.numer().coeffs_in(j);
        let d = cur.denom().coeffs_in(j);
        match n.len().cmp(&d.len()) {
            Ordering::Greater => return Err(Error::Unlimited(j)),
            Ordering::Less => return Ok(Num::zero()),
            Ordering::Equal => {
                let top_n = n.last().expect("nonzero numerator").clone();
                let top_d = d.last().expect("nonzero denominator").clone();
                cur = Num::new(top_n, top_d)?;
            }
        }
    }
    Ok(cur)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub limited: bool,
    pub infinitesimal: bool,
}

/// Limited means the shadow at level `r` exists; infinitesimal means a
/// nonzero element whose shadow is zero.
pub fn classify(x: &Num, r: usize, scales: Scales) -> Classification {
    match shadow(x, r, scales) {
        Ok(s) => Classification {
            limited: true,
            infinitesimal: !x.is_zero() && s.is_zero(),
        },
        Err(_) => Classification {
            limited: false,
            infinitesimal: false,
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndExtensionBranch {
    /// `x` is limited at level `min a`; nothing to compare.
    Standard,
    /// `x` is positive and unlimited at level `min a`.
    Unlimited,
    /// `x ≤ 0`; the property only speaks about positive elements.
    NonPositive,
}

impl fmt::Display for EndExtensionBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndExtensionBranch::Standard => "standard branch",
            EndExtensionBranch::Unlimited => "unlimited branch",
            EndExtensionBranch::NonPositive => "non-positive branch",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndExtensionReport {
    pub branch: EndExtensionBranch,
    /// One entry per sample: `x > y`. Empty unless the branch is `Unlimited`.
    pub passes: Vec<bool>,
}

impl EndExtensionReport {
    pub fn all_pass(&self) -> bool {
        self.passes.iter().all(|p| *p)
    }
}

/// Checks that a positive element of `S_a` unlimited at level `n = min a`
/// exceeds every sampled element of `S_n`.
pub fn end_extension_check(
    x: &Num,
    a: &Label,
    samples: &[Num],
    scales: Scales,
) -> Result<EndExtensionReport> {
    let n = a
        .min_index()
        .ok_or_else(|| Error::Invalid("end extension needs a nonempty label".into()))?;
    if !x.in_level(a) {
        return Err(Error::NotInLevel {
            value: x.to_string(),
            label: a.to_string(),
        });
    }
    let below = Label::numeral(n);
    if let Some(y) = samples.iter().find(|y| !y.in_level(&below)) {
        return Err(Error::NotInLevel {
            value: y.to_string(),
            label: below.to_string(),
        });
    }
    if x.signum() != Ordering::Greater {
        return Ok(EndExtensionReport {
            branch: EndExtensionBranch::NonPositive,
            passes: Vec::new(),
        });
    }
    if classify(x, n, scales).limited {
        return Ok(EndExtensionReport {
            branch: EndExtensionBranch::Standard,
            passes: Vec::new(),
        });
    }
    Ok(EndExtensionReport {
        branch: EndExtensionBranch::Unlimited,
        passes: samples.iter().map(|y| x > y).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Num {
        s.parse().unwrap()
    }

    fn sc() -> Scales {
        Scales::default()
    }

    #[test]
    fn shadow_examples() {
        // iterated-limit oracle, worked by hand: 1/w1 → 0 as w1 → ∞, then
        // 3/w0 → 0 as w0 → ∞
        let x = n("2 + 3/w0 + 1/w1");
        assert_eq!(shadow(&x, 1, sc()).unwrap(), n("2 + 3/w0"));
        assert_eq!(shadow(&x, 0, sc()).unwrap(), n("2"));
        assert_eq!(shadow(&n("w0"), 0, sc()).unwrap_err(), Error::Unlimited(0));
        assert_eq!(shadow(&n("5/7"), 3, sc()).unwrap(), n("5/7"));
    }

    #[test]
    fn shadow_of_balanced_ratio() {
        // (3 w1^2 + w0)/(2 w1^2 - 1) → 3/2 at level 1, then constant
        assert_eq!(
            shadow(&n("(3*w1^2 + w0)/(2*w1^2 - 1)"), 1, sc()).unwrap(),
            n("3/2")
        );
        // (w0 w1 + 1)/(w1 + w0) → w0 at level 1, unlimited at level 0
        let x = n("(w0*w1 + 1)/(w1 + w0)");
        assert_eq!(shadow(&x, 1, sc()).unwrap(), n("w0"));
        assert_eq!(shadow(&x, 0, sc()).unwrap_err(), Error::Unlimited(0));
    }

    #[test]
    fn shadow_level_out_of_range() {
        assert_eq!(shadow(&n("1"), 9, sc()).unwrap_err().kind(), "ScaleExhausted");
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(&n("1/w1"), 1, sc()),
            Classification { limited: true, infinitesimal: true }
        );
        assert_eq!(
            classify(&n("1/w0"), 1, sc()),
            Classification { limited: true, infinitesimal: false }
        );
        assert_eq!(
            classify(&n("w1/w0"), 1, sc()),
            Classification { limited: false, infinitesimal: false }
        );
        assert!(!classify(&Num::zero(), 0, sc()).infinitesimal);
    }

    #[test]
    fn end_extension_examples() {
        let r = end_extension_check(
            &n("w1"),
            &Label::new([1]),
            &[n("w0^9"), n("1000000")],
            sc(),
        )
        .unwrap();
        assert_eq!(r.branch, EndExtensionBranch::Unlimited);
        assert_eq!(r.passes, vec![true, true]);

        let r = end_extension_check(&n("5"), &Label::new([2]), &[n("w1")], sc()).unwrap();
        assert_eq!(r.branch, EndExtensionBranch::Standard);
        assert_eq!(r.branch.to_string(), "standard branch");

        let r = end_extension_check(
            &n("w1/w0"),
            &Label::new([0, 1]),
            &[n("7"), n("-3/2"), n("100000")],
            sc(),
        )
        .unwrap();
        assert_eq!(r.branch, EndExtensionBranch::Unlimited);
        assert!(r.all_pass());
    }

    #[test]
    fn end_extension_preconditions() {
        assert_eq!(
            end_extension_check(&n("w0"), &Label::new([1]), &[], sc())
                .unwrap_err()
                .kind(),
            "NotInLevel"
        );
        assert_eq!(
            end_extension_check(&n("w1"), &Label::new([1]), &[n("w1")], sc())
                .unwrap_err()
                .kind(),
            "NotInLevel"
        );
        assert!(end_extension_check(&n("w1"), &Label::empty(), &[], sc()).is_err());
    }
}
