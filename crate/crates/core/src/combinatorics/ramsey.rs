//! Colorings of `n`-subsets and homogeneous sets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::IntSet;
use crate::error::{Error, Result};

/// A color below `r` for every `n`-subset of `{0, …, size-1}`, stored by
/// colex rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    n: usize,
    r: usize,
    size: usize,
    colors: Vec<u8>,
    binom: Vec<Vec<usize>>,
}

fn binomials(size: usize, n: usize) -> Vec<Vec<usize>> {
    let mut t = vec![vec![0usize; n + 2]; size + 1];
    for row in t.iter_mut() {
        row[0] = 1;
    }
    for m in 1..=size {
        for k in 1..=n + 1 {
            t[m][k] = t[m - 1][k - 1] + t[m - 1][k];
        }
    }
    t
}

/// Every `n`-subset of `{0, …, size-1}` in colex order.
fn subsets_colex(size: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    if n > size {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance to the next subset in colex order
        let mut i = 0;
        while i < n && (i + 1 == n && cur[i] + 1 == size || i + 1 < n && cur[i] + 1 == cur[i + 1]) {
            i += 1;
        }
        if i == n {
            return out;
        }
        cur[i] += 1;
        for (j, slot) in cur.iter_mut().enumerate().take(i) {
            *slot = j;
        }
    }
}

impl Coloring {
    pub fn new(n: usize, r: usize, size: usize, mut color: impl FnMut(&[usize]) -> usize) -> Result<Self> {
        if n == 0 || r == 0 || r > 256 {
            return Err(Error::Invalid(format!(
                "colorings need n ≥ 1 and 1 ≤ r ≤ 256, got n = {n}, r = {r}"
            )));
        }
        let subsets = subsets_colex(size, n);
        if subsets.len() > 1 << 26 {
            return Err(Error::TooLarge(format!("{} subsets to color", subsets.len())));
        }
        let mut colors = Vec::with_capacity(subsets.len());
        for s in &subsets {
            let c = color(s);
            if c >= r {
                return Err(Error::Invalid(format!("color {c} of {s:?} is not below {r}")));
            }
            colors.push(c as u8);
        }
        Ok(Coloring {
            n,
            r,
            size,
            colors,
            binom: binomials(size, n),
        })
    }

    /// `c({i,j}) = (i + j) mod 2`, and in general the parity of the sum.
    pub fn parity_sum(n: usize, size: usize) -> Result<Self> {
        Coloring::new(n, 2, size, |s| s.iter().sum::<usize>() % 2)
    }

    /// Pairs colored 1 when `j - i ≡ ±1 (mod 5)`.
    pub fn pentagon(size: usize) -> Result<Self> {
        Coloring::new(2, 2, size, |s| usize::from(matches!((s[1] - s[0]) % 5, 1 | 4)))
    }

    pub fn constant(n: usize, r: usize, size: usize, c: usize) -> Result<Self> {
        Coloring::new(n, r, size, |_| c)
    }

    /// Two-coloring of pairs whose colex-ranked colors are the bits of `code`.
    pub fn from_bits(size: usize, code: u64) -> Result<Self> {
        let mut rank = 0;
        Coloring::new(2, 2, size, |_| {
            let c = (code >> rank & 1) as usize;
            rank += 1;
            c
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> usize {
        self.r
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Colex rank of a sorted subset.
    pub fn rank(&self, subset: &[usize]) -> usize {
        subset
            .iter()
            .enumerate()
            .map(|(i, s)| self.binom[*s][i + 1])
            .sum()
    }

    /// Color of a sorted `n`-subset.
    pub fn color(&self, subset: &[usize]) -> usize {
        debug_assert_eq!(subset.len(), self.n);
        self.colors[self.rank(subset)] as usize
    }
}

/// Calls `f` on every `k`-subset of `items`, in lexicographic order.
fn for_each_subset(items: &[usize], k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn go(
        items: &[usize],
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            let keep_going = go(items, k, i + 1, cur, f);
            cur.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
    go(items, k, 0, &mut Vec::with_capacity(k), f)
}

/// True when `c` is constant on the `n`-subsets of `h`.
pub fn is_homogeneous(c: &Coloring, h: &IntSet) -> bool {
    let mut seen = None;
    for_each_subset(h.as_slice(), c.n, &mut |s| {
        let col = c.color(s);
        *seen.get_or_insert(col) == col
    })
}

/// Whether adding `x` (above every element of `base`) keeps all `n`-subsets
/// through `x` at color `target`.
fn extends(c: &Coloring, base: &[usize], x: usize, target: usize) -> bool {
    let mut buf = Vec::with_capacity(c.n);
    for_each_subset(base, c.n - 1, &mut |s| {
        buf.clear();
        buf.extend_from_slice(s);
        buf.push(x);
        buf.sort_unstable();
        c.color(&buf) == target
    })
}

/// The lexicographically least `h`-subset on which `c` is constant.
pub fn find_homogeneous(c: &Coloring, h: usize) -> Option<IntSet> {
    if h > c.size {
        return None;
    }
    if h < c.n {
        return Some(IntSet::range(0, h));
    }
    fn go(c: &Coloring, h: usize, cur: &mut Vec<usize>, target: Option<usize>) -> bool {
        if cur.len() == h {
            return true;
        }
        let next = cur.last().map_or(0, |l| l + 1);
        for x in next..c.size {
            if c.size - x < h - cur.len() {
                return false;
            }
            let target_here = match target {
                Some(t) => {
                    if !extends(c, cur, x, t) {
                        continue;
                    }
                    Some(t)
                }
                None if cur.len() + 1 == c.n => {
                    let mut s = cur.clone();
                    s.push(x);
                    Some(c.color(&s))
                }
                None => None,
            };
            cur.push(x);
            if go(c, h, cur, target_here) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::with_capacity(h);
    go(c, h, &mut cur, None).then(|| IntSet::new(cur))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Greedy {
    pub set: IntSet,
    /// The top `n-1` elements.
    pub sentinels: IntSet,
    /// Color of the top `n`-set.
    pub color: usize,
}

/// Scans upward from 0, keeping each element whose addition leaves `c`
/// constant at the color of the top `n`-set on `[A ∪ sentinels]ⁿ`.
pub fn greedy_homogeneous(c: &Coloring) -> Result<Greedy> {
    let (n, size) = (c.n, c.size);
    if size <= n {
        return Err(Error::Invalid(format!(
            "the greedy construction needs more than n = {n} points, got {size}"
        )));
    }
    let sentinels: Vec<usize> = (size - n + 1..size).collect();
    let top: Vec<usize> = (size - n..size).collect();
    let color = c.color(&top);
    let mut set: Vec<usize> = Vec::new();
    for a in 0..size - n + 1 {
        let base: Vec<usize> = set.iter().chain(&sentinels).copied().collect();
        let mut ok = true;
        for_each_subset(&base, n - 1, &mut |s| {
            let mut t = s.to_vec();
            t.push(a);
            t.sort_unstable();
            ok = c.color(&t) == color;
            ok
        });
        if ok {
            set.push(a);
        }
    }
    Ok(Greedy {
        set: IntSet::new(set),
        sentinels: IntSet::new(sentinels),
        color,
    })
}

/// JSON description of a coloring: a named generator or an explicit list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringSpec {
    pub n: usize,
    pub r: usize,
    #[serde(rename = "N")]
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<SubsetColor>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetColor {
    pub subset: Vec<usize>,
    pub color: usize,
}

impl ColoringSpec {
    pub fn build(&self) -> Result<Coloring> {
        match (&self.generator, &self.colors) {
            (Some(g), None) => {
                let c = match g.as_str() {
                    "parity-sum" => Coloring::parity_sum(self.n, self.size)?,
                    "pentagon" if self.n == 2 => Coloring::pentagon(self.size)?,
                    "pentagon" => {
                        return Err(Error::Invalid("the pentagon coloring colors pairs".into()))
                    }
                    other => match other.strip_prefix("constant:").map(str::parse::<usize>) {
                        Some(Ok(k)) => Coloring::constant(self.n, self.r, self.size, k)?,
                        _ => return Err(Error::Invalid(format!("unknown generator `{other}`"))),
                    },
                };
                if c.r > self.r {
                    return Err(Error::Invalid(format!(
                        "generator `{g}` uses {} colors but r = {}",
                        c.r, self.r
                    )));
                }
                Ok(Coloring { r: self.r, ..c })
            }
            (None, Some(list)) => {
                let mut table = BTreeMap::new();
                for entry in list {
                    let mut s = entry.subset.clone();
                    s.sort_unstable();
                    s.dedup();
                    if s.len() != self.n || s.iter().any(|x| *x >= self.size) {
                        return Err(Error::Invalid(format!(
                            "{:?} is not an {}-subset of [0, {})",
                            entry.subset, self.n, self.size
                        )));
                    }
                    if table.insert(s, entry.color).is_some() {
                        return Err(Error::Invalid(format!(
                            "{:?} is colored twice",
                            entry.subset
                        )));
                    }
                }
                let mut missing = None;
                let c = Coloring::new(self.n, self.r, self.size, |s| match table.get(s) {
                    Some(col) => *col,
                    None => {
                        missing.get_or_insert_with(|| s.to_vec());
                        0
                    }
                })?;
                match missing {
                    Some(s) => Err(Error::Invalid(format!("{s:?} has no color"))),
                    None => Ok(c),
                }
            }
            _ => Err(Error::Invalid(
                "give exactly one of `generator` and `colors`".into(),
            )),
        }
    }
}
