use std::cmp::Ordering;

use proptest::prelude::*;
use rand::Rng;
use strata::gen::{self, NumShape, SeededRng};
use strata::numbers::{classify, derivative, shadow, RationalFn, UniPoly};
use strata::{Label, Num, Scales};
use strata_oracles::{quotient_rule_at, separated_cmp, separated_sign, substitution_cmp};

fn num(rng: &mut SeededRng) -> Num {
    gen::num(rng, &NumShape::default())
}

fn nonzero(rng: &mut SeededRng) -> Num {
    gen::nonzero_num(rng, &NumShape::default())
}

fn n(s: &str) -> Num {
    s.parse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let (x, y, z) = (num(&mut rng), num(&mut rng), num(&mut rng));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert!((&x + &(-&x)).is_zero());
        let w = nonzero(&mut rng);
        prop_assert_eq!(&w * &w.recip().unwrap(), Num::one());
        prop_assert_eq!((&x * &w).checked_div(&w).unwrap(), x.clone());
        prop_assert_eq!(&x.checked_div(&w).unwrap() + &y.checked_div(&w).unwrap(), (&x + &y).checked_div(&w).unwrap());
    }

    #[test]
    fn order_is_total_and_compatible(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let (x, y, z) = (num(&mut rng), num(&mut rng), num(&mut rng));
        let c = x.cmp(&y);
        prop_assert_eq!(c == Ordering::Equal, (&x - &y).is_zero());
        prop_assert_eq!(y.cmp(&x), c.reverse());
        if x <= y && y <= z {
            prop_assert!(x <= z);
        }
        prop_assert_eq!(c, separated_cmp(&x, &y));
        let (px, py) = (x.abs(), y.abs());
        if !px.is_zero() && !py.is_zero() {
            prop_assert_eq!((&px + &py).signum(), Ordering::Greater);
            prop_assert_eq!((&px * &py).signum(), Ordering::Greater);
        }
    }

    #[test]
    fn support_meets_levels(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let x = num(&mut rng);
        let a = gen::label(&mut rng, 4, 3);
        let b = gen::label(&mut rng, 4, 3);
        prop_assert_eq!(x.in_level(&a) && x.in_level(&b), x.in_level(&a.intersection(&b)));
    }

    #[test]
    fn embeddings_respect_structure(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let a = Label::new(0..3);
        let b = loop {
            let l = gen::label(&mut rng, 8, 3);
            if l.len() == 3 {
                break l;
            }
        };
        let c = Label::new([2, 5, 7]);
        let (x, y) = (num(&mut rng), num(&mut rng));
        let ex = x.embed(&a, &b).unwrap();
        let ey = y.embed(&a, &b).unwrap();
        prop_assert_eq!(x.embed(&a, &a).unwrap(), x.clone());
        prop_assert_eq!(ex.embed(&b, &a).unwrap(), x.clone());
        prop_assert_eq!(ex.embed(&b, &c).unwrap(), x.embed(&a, &c).unwrap());
        prop_assert_eq!(x.cmp(&y), ex.cmp(&ey));
        prop_assert_eq!((&x + &y).embed(&a, &b).unwrap(), &ex + &ey);
        prop_assert_eq!((&x - &y).embed(&a, &b).unwrap(), &ex - &ey);
        prop_assert_eq!((&x * &y).embed(&a, &b).unwrap(), &ex * &ey);
        if !y.is_zero() {
            prop_assert_eq!(x.checked_div(&y).unwrap().embed(&a, &b).unwrap(), ex.checked_div(&ey).unwrap());
        }
        let sup = x.support();
        prop_assert_eq!(
            x.embed(&a, &b).unwrap(),
            x.embed(&sup, &a.restrict_image(&b, &sup).unwrap()).unwrap()
        );
    }

    #[test]
    fn unlimited_elements_end_extend(seed in any::<u64>(), level in 1usize..3) {
        let mut rng = gen::rng(seed);
        let above = NumShape::over(level..level + 2);
        let below = NumShape::over(0..level);
        let x = loop {
            let z = gen::num(&mut rng, &above).abs();
            if z.support().min_index() == Some(level) && !classify(&z, level, Scales::default()).limited && !z.is_zero() {
                break z;
            }
        };
        for _ in 0..8 {
            let y = gen::num(&mut rng, &below);
            prop_assert!(x > y, "{} ≤ {}", x, y);
        }
    }

    #[test]
    fn shadows_are_ring_maps(seed in any::<u64>(), r in 0usize..3) {
        let sc = Scales::default();
        let mut rng = gen::rng(seed);
        let limited = |rng: &mut SeededRng| loop {
            let z = num(rng);
            if classify(&z, r, sc).limited {
                break z;
            }
        };
        let (x, y) = (limited(&mut rng), limited(&mut rng));
        let (sx, sy) = (shadow(&x, r, sc).unwrap(), shadow(&y, r, sc).unwrap());
        prop_assert_eq!(shadow(&(&x + &y), r, sc).unwrap(), &sx + &sy);
        prop_assert_eq!(shadow(&(&x * &y), r, sc).unwrap(), &sx * &sy);
        prop_assert!(sx.in_level(&Label::numeral(r)));
        let diff = &x - &sx;
        prop_assert!(diff.is_zero() || classify(&diff, r, sc).infinitesimal);
        prop_assert_eq!(shadow(&sx, r, sc).unwrap(), sx.clone());
        if classify(&diff, r, sc).infinitesimal {
            for _ in 0..4 {
                let w = gen::nonzero_num(&mut rng, &NumShape::over(0..r));
                prop_assert!(diff.abs() < w.abs());
            }
        }
    }

    #[test]
    fn derivative_matches_quotient_rule(seed in any::<u64>()) {
        let sc = Scales::default();
        let mut rng = gen::rng(seed);
        let coeffs = NumShape { max_degree: 2, max_terms: 2, ..NumShape::over([0, 1]) };
        let uni = |rng: &mut SeededRng| {
            let deg = rng.gen_range(0..=3);
            UniPoly::new((0..=deg).map(|_| gen::poly_num(rng, &coeffs)).collect())
        };
        let p = uni(&mut rng);
        let q = loop {
            let q = uni(&mut rng);
            if !q.is_zero() {
                break q;
            }
        };
        let f = RationalFn::new(p, q).unwrap();
        let a = if rng.gen_bool(0.3) { Num::scale(0) } else { gen::num(&mut rng, &NumShape::over([0])) };
        match quotient_rule_at(&f, &a) {
            Ok(expected) => prop_assert_eq!(derivative(&f, &a, sc).unwrap(), expected),
            Err(_) => prop_assert_eq!(derivative(&f, &a, sc).unwrap_err().kind(), "PoleAtPoint"),
        }
    }
}

#[test]
fn frozen_comparisons() {
    let (big, cube) = (n("w1"), n("w0^3 + 5"));
    assert_eq!(big.cmp(&cube), Ordering::Greater);
    assert_eq!(separated_cmp(&big, &cube), Ordering::Greater);
    // the fixed point puts w1 and w0^3 on the same power of ten
    assert_eq!(substitution_cmp(&big, &cube), Ordering::Less);

    let (tiny, small) = (n("1/w0"), n("1/1000000"));
    assert_eq!(tiny.cmp(&small), Ordering::Less);
    // w0 itself is sent to 10^6
    assert_eq!(substitution_cmp(&tiny, &small), Ordering::Equal);
    assert_eq!(separated_cmp(&tiny, &small), Ordering::Less);
    assert_eq!(separated_sign(&n("w0 - 10^9")), Ordering::Greater);
}

#[test]
fn frozen_reductions_and_derivatives() {
    let sc = Scales::default();
    assert_eq!(n("(w1*w0)/w1"), n("w0"));
    assert_eq!(n("(w1^2 - 1)/(w1 - 1)"), n("w1 + 1"));
    let cube = RationalFn::parse("x^3", sc).unwrap();
    let at = n("w0");
    assert_eq!(derivative(&cube, &at, sc).unwrap(), n("3*w0^2"));
    assert_eq!(quotient_rule_at(&cube, &at).unwrap(), n("3*w0^2"));
    let f = RationalFn::parse("(x^2 + w1)/(x - w0)", sc).unwrap();
    let a = n("w0 + 1/w0");
    assert_eq!(derivative(&f, &a, sc).unwrap(), quotient_rule_at(&f, &a).unwrap());
}
