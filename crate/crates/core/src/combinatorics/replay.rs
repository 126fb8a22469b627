//! Replays the embedding bookkeeping of the infinite Ramsey argument inside
//! the numbers module: the shift `I`, its variant `J` that fixes the first `p`
//! scales, and the side conditions relating them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gen::{self, NumShape};
use crate::labels::Label;
use crate::numbers::{Num, Scales};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub id: &'static str,
    pub description: String,
    pub checked: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub n: usize,
    pub p: usize,
    pub clauses: Vec<Clause>,
}

impl ReplayReport {
    pub fn all_passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }
}

struct ClauseCheck {
    id: &'static str,
    description: String,
    checked: usize,
    counterexample: Option<String>,
}

impl ClauseCheck {
    fn new(id: &'static str, description: String) -> Self {
        ClauseCheck {
            id,
            description,
            checked: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(witness());
        }
    }

    fn finish(self) -> Clause {
        Clause {
            id: self.id,
            description: self.description,
            checked: self.checked,
            passed: self.counterexample.is_none(),
            counterexample: self.counterexample,
        }
    }
}

/// Runs clauses (i) to (v) for `n` and `p`, drawing `samples` random elements
/// per sampled clause from `seed`.
pub fn replay_side_conditions(
    n: usize,
    p: usize,
    scales: Scales,
    samples: usize,
    seed: u64,
) -> Result<ReplayReport> {
    if n < 2 || p == 0 || p >= n {
        return Err(Error::Invalid(format!(
            "the replay needs n ≥ 2 and 1 ≤ p < n, got n = {n}, p = {p}"
        )));
    }
    scales.require(n)?;
    let mut rng = gen::rng(seed);
    let domain = Label::numeral(n);
    let shift = Label::new(1..=n);
    let skip = Label::new((0..p).chain(p + 1..=n));
    let via_i = |x: &Num| x.embed(&domain, &shift);
    let via_j = |x: &Num| x.embed(&domain, &skip);

    let mut xs = vec![Num::scale(0)];
    for _ in 1..n {
        let next = via_i(xs.last().expect("nonempty"))?;
        xs.push(next);
    }

    let mut clauses = Vec::with_capacity(5);

    let mut c = ClauseCheck::new("i", format!("x(i+1) = w(i) for 0 ≤ i < {n}"));
    for (i, x) in xs.iter().enumerate() {
        c.record(*x == Num::scale(i), || format!("x{} = {x}", i + 1));
    }
    clauses.push(c.finish());

    let mut c = ClauseCheck::new(
        "ii",
        format!("J fixes rationals and sampled elements of S{}", Label::numeral(p)),
    );
    let low = NumShape::over(0..p);
    let rationals = NumShape::over([]);
    for k in 0..2 * samples {
        let y = if k % 2 == 0 {
            gen::num(&mut rng, &low)
        } else {
            gen::num(&mut rng, &rationals)
        };
        let image = via_j(&y)?;
        c.record(image == y, || format!("J({y}) = {image}"));
    }
    clauses.push(c.finish());

    let mut c = ClauseCheck::new("iii", format!("J(x(j)) = x(j+1) for {p} < j < {n}"));
    for j in p + 1..n {
        let image = via_j(&xs[j - 1])?;
        c.record(image == xs[j], || format!("J(x{j}) = {image}"));
    }
    clauses.push(c.finish());

    let upper = Label::new(p..n);
    let mut c = ClauseCheck::new("iv", format!("I and J agree on sampled elements of S{upper}"));
    let high = NumShape::over(p..n);
    for _ in 0..samples {
        let y = gen::num(&mut rng, &high);
        let (a, b) = (via_i(&y)?, via_j(&y)?);
        c.record(a == b, || format!("I({y}) = {a} but J({y}) = {b}"));
    }
    clauses.push(c.finish());

    let mut c = ClauseCheck::new("v", "x1 exceeds sampled rational naturals".to_string());
    let mut naturals: Vec<Num> = [0i64, 1, 1_000_000, i64::MAX].map(Num::from_int).to_vec();
    naturals.extend((0..samples).map(|_| Num::from(num::BigInt::from(rand::Rng::gen::<u128>(&mut rng)))));
    for m in &naturals {
        c.record(xs[0] > *m, || format!("x1 ≤ {m}"));
    }
    clauses.push(c.finish());

    Ok(ReplayReport { n, p, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replays_pass() {
        for (n, p) in [(3, 1), (2, 1), (5, 3)] {
            let r = replay_side_conditions(n, p, Scales::default(), 16, 7).unwrap();
            assert!(r.all_passed(), "{r:?}");
            assert_eq!(r.clauses.len(), 5);
        }
        let r = replay_side_conditions(2, 1, Scales::default(), 16, 7).unwrap();
        assert_eq!(r.clauses[2].checked, 0);
    }

    #[test]
    fn replay_needs_room() {
        assert!(matches!(
            replay_side_conditions(8, 1, Scales::default(), 4, 0),
            Err(Error::ScaleExhausted { .. })
        ));
        assert!(replay_side_conditions(7, 6, Scales::default(), 4, 0).is_ok());
    }
}
