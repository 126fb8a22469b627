//! Level labels: finite sets of natural numbers.
//!
//! A label names a level `S_a` or the source/target of an embedding `I_a^b`.
//! The numeral `n` abbreviates `{0,…,n-1}`, so `S_3` and `S{0,1,2}` are the
//! same level.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite set of level indices, kept sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", from = "Vec<usize>")]
pub struct Label(Vec<usize>);

impl Label {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Label(v)
    }

    pub fn empty() -> Self {
        Label(Vec::new())
    }

    /// The von Neumann numeral `n = {0,…,n-1}`.
    pub fn numeral(n: usize) -> Self {
        Label((0..n).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: usize) -> bool {
        self.0.binary_search(&s).is_ok()
    }

    pub fn min_index(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn is_subset(&self, other: &Label) -> bool {
        self.0.iter().all(|s| other.contains(*s))
    }

    pub fn intersection(&self, other: &Label) -> Label {
        Label(self.0.iter().copied().filter(|s| other.contains(*s)).collect())
    }

    pub fn union(&self, other: &Label) -> Label {
        Label::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Whether this label is a numeral `{0,…,n-1}`.
    pub fn as_numeral(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .all(|(i, s)| i == *s)
            .then_some(self.0.len())
    }

    /// `r ⊕ a = {r+s : s ∈ a}`.
    pub fn oplus(&self, r: usize) -> Label {
        Label(self.0.iter().map(|s| s + r).collect())
    }

    /// `r ⊞ a = {0,…,r-1} ∪ (r ⊕ a)`.
    pub fn boxplus(&self, r: usize) -> Label {
        Label((0..r).chain(self.0.iter().map(|s| s + r)).collect())
    }

    /// `a < b`: every index of `a` is below every index of `b`.
    pub fn less(&self, other: &Label) -> bool {
        match (self.max_index(), other.min_index()) {
            (Some(hi), Some(lo)) => hi < lo,
            _ => true,
        }
    }

    /// The unique order-preserving bijection from `self` onto `target`.
    pub fn order_iso(&self, target: &Label) -> Result<OrderIso> {
        if self.len() != target.len() {
            return Err(size_mismatch(self, target));
        }
        Ok(OrderIso {
            pairs: self.0.iter().copied().zip(target.0.iter().copied()).collect(),
        })
    }

    /// Image of `sub ⊆ self` under the order isomorphism `self → target`.
    pub fn restrict_image(&self, target: &Label, sub: &Label) -> Result<Label> {
        let iso = self.order_iso(target)?;
        if !sub.is_subset(self) {
            return Err(Error::NotSubset {
                sub: sub.to_string(),
                sup: self.to_string(),
            });
        }
        Ok(iso.image(sub).expect("subset checked above"))
    }

    /// All subsets of this label, in binary-counting order.
    pub fn subsets(&self) -> impl Iterator<Item = Label> + '_ {
        let n = self.len();
        (0u64..(1u64 << n)).map(move |mask| {
            Label(
                (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| self.0[i])
                    .collect(),
            )
        })
    }
}

pub(crate) fn size_mismatch(a: &Label, b: &Label) -> Error {
    Error::SizeMismatch {
        left: a.to_string(),
        left_len: a.len(),
        right: b.to_string(),
        right_len: b.len(),
    }
}

impl From<Vec<usize>> for Label {
    fn from(v: Vec<usize>) -> Self {
        Label::new(v)
    }
}

impl From<Label> for Vec<usize> {
    fn from(l: Label) -> Self {
        l.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = LabelScanner {
            src: s.as_bytes(),
            pos: 0,
        };
        let label = p.label()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(Error::parse(p.pos, "trailing input after label"));
        }
        Ok(label)
    }
}

/// Shared scanner for the `{0,2,5}` / numeral label syntax, reused by the
/// formula parser.
pub(crate) struct LabelScanner<'a> {
    pub src: &'a [u8],
    pub pos: usize,
}

impl LabelScanner<'_> {
    pub fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn nat(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::parse(start, "number too large"))
    }

    pub fn label(&mut self) -> Result<Label> {
        self.skip_ws();
        if self.src.get(self.pos) != Some(&b'{') {
            return Ok(Label::numeral(self.nat()?));
        }
        self.pos += 1;
        self.skip_ws();
        let mut out = Vec::new();
        if self.src.get(self.pos) == Some(&b'}') {
            self.pos += 1;
            return Ok(Label::empty());
        }
        loop {
            let at = self.pos;
            let n = self.nat()?;
            if out.contains(&n) {
                return Err(Error::parse(at, format!("duplicate index {n} in label")));
            }
            out.push(n);
            self.skip_ws();
            match self.src.get(self.pos) {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(Label::new(out));
                }
                _ => return Err(Error::parse(self.pos, "expected ',' or '}' in label")),
            }
        }
    }
}

/// An order-preserving bijection between two labels of equal size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderIso {
    pairs: Vec<(usize, usize)>,
}

impl OrderIso {
    pub fn apply(&self, s: usize) -> Option<usize> {
        self.pairs.iter().find(|(from, _)| *from == s).map(|(_, to)| *to)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn domain(&self) -> Label {
        Label(self.pairs.iter().map(|p| p.0).collect())
    }

    pub fn codomain(&self) -> Label {
        Label(self.pairs.iter().map(|p| p.1).collect())
    }

    /// Image of a label contained in the domain.
    pub fn image(&self, sub: &Label) -> Option<Label> {
        sub.0
            .iter()
            .map(|s| self.apply(*s))
            .collect::<Option<Vec<_>>>()
            .map(Label::new)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &OrderIso) -> Option<OrderIso> {
        self.pairs
            .iter()
            .map(|(a, b)| next.apply(*b).map(|c| (*a, c)))
            .collect::<Option<Vec<_>>>()
            .map(|pairs| OrderIso { pairs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn l(v: &[usize]) -> Label {
        Label::new(v.iter().copied())
    }

    #[test]
    fn oplus_examples() {
        assert_eq!(l(&[0, 2]).oplus(2), l(&[2, 4]));
        assert_eq!(l(&[1, 5]).oplus(0), l(&[1, 5]));
        assert_eq!(Label::empty().oplus(3), Label::empty());
    }

    #[test]
    fn boxplus_examples() {
        assert_eq!(l(&[0, 1]).boxplus(2), Label::numeral(4));
        assert_eq!(l(&[0, 2]).boxplus(0), l(&[0, 2]));
        assert_eq!(Label::empty().boxplus(3), Label::numeral(3));
    }

    #[test]
    fn boxplus_on_numerals_adds() {
        for r in 0..6 {
            for n in 0..6 {
                assert_eq!(Label::numeral(n).boxplus(r), Label::numeral(r + n));
            }
        }
    }

    #[test]
    fn less_examples() {
        assert!(l(&[0, 1]).less(&l(&[2, 3])));
        assert!(!l(&[1]).less(&l(&[1])));
        assert!(Label::empty().less(&l(&[7])));
        assert!(l(&[7]).less(&Label::empty()));
    }

    #[test]
    fn order_iso_examples() {
        let iso = l(&[0, 2]).order_iso(&l(&[1, 3])).unwrap();
        assert_eq!(iso.pairs(), &[(0, 1), (2, 3)]);
        let a = l(&[1, 4, 6]);
        let id = a.order_iso(&a).unwrap();
        assert!(id.pairs().iter().all(|(x, y)| x == y));
        let err = l(&[0]).order_iso(&l(&[1, 2])).unwrap_err();
        assert_eq!(err.kind(), "SizeMismatch");
    }

    #[test]
    fn restrict_image_examples() {
        let a = l(&[0, 1, 2]);
        let a2 = l(&[3, 4, 5]);
        assert_eq!(a.restrict_image(&a2, &l(&[0, 2])).unwrap(), l(&[3, 5]));
        assert_eq!(a.restrict_image(&a2, &Label::empty()).unwrap(), Label::empty());
        assert_eq!(a.restrict_image(&a2, &a).unwrap(), a2);
        assert_eq!(
            a.restrict_image(&a2, &l(&[7])).unwrap_err().kind(),
            "NotSubset"
        );
        assert_eq!(
            a.restrict_image(&l(&[1]), &l(&[0])).unwrap_err().kind(),
            "SizeMismatch"
        );
    }

    #[test]
    fn text_form() {
        assert_eq!(l(&[0, 2, 5]).to_string(), "{0,2,5}");
        assert_eq!(Label::empty().to_string(), "{}");
        assert_eq!("3".parse::<Label>().unwrap(), Label::numeral(3));
        assert_eq!("{ 5, 0 ,2}".parse::<Label>().unwrap(), l(&[0, 2, 5]));
        assert_eq!("{}".parse::<Label>().unwrap(), Label::empty());
        assert!("{1,1}".parse::<Label>().is_err());
        assert!("{1,".parse::<Label>().is_err());
        assert!("x".parse::<Label>().is_err());
    }

    fn label_strategy() -> impl Strategy<Value = Label> {
        proptest::collection::btree_set(0usize..10, 0..6).prop_map(Label::new)
    }

    proptest! {
        #[test]
        fn boxplus_composes(a in label_strategy(), r in 0usize..6, s in 0usize..6) {
            prop_assert_eq!(a.boxplus(r).boxplus(s), a.boxplus(s + r));
        }

        #[test]
        fn oplus_distributes_over_intersection(a in label_strategy(), b in label_strategy(), r in 0usize..6) {
            prop_assert_eq!(a.intersection(&b).oplus(r), a.oplus(r).intersection(&b.oplus(r)));
        }

        #[test]
        fn boxplus_monotone(a in label_strategy(), b in label_strategy(), r in 0usize..6) {
            let sub = a.intersection(&b);
            prop_assert!(sub.boxplus(r).is_subset(&a.boxplus(r)));
        }

        #[test]
        fn isos_compose(a in label_strategy(), shift1 in 0usize..5, shift2 in 0usize..5, mask in any::<u64>()) {
            let a2 = a.oplus(shift1);
            let a3 = a2.boxplus(shift2).indices().iter().rev().take(a.len()).copied().collect::<Vec<_>>();
            let a3 = Label::new(a3);
            let ab = a.order_iso(&a2).unwrap();
            let bc = a2.order_iso(&a3).unwrap();
            prop_assert_eq!(ab.then(&bc).unwrap(), a.order_iso(&a3).unwrap());

            let b = Label::new(a.indices().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| *s));
            let via = a2.restrict_image(&a3, &a.restrict_image(&a2, &b).unwrap()).unwrap();
            prop_assert_eq!(via, a.restrict_image(&a3, &b).unwrap());
        }

        #[test]
        fn display_parse_round_trip(a in label_strategy()) {
            prop_assert_eq!(a.to_string().parse::<Label>().unwrap(), a);
        }
    }
}
