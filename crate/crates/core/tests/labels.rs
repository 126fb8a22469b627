use proptest::prelude::*;
use strata::Label;

fn label() -> impl Strategy<Value = Label> {
    proptest::collection::btree_set(0usize..8, 0..6).prop_map(Label::new)
}

/// Three labels of a common size.
fn same_size_triple() -> impl Strategy<Value = (Label, Label, Label)> {
    (0usize..6).prop_flat_map(|n| {
        let one = proptest::sample::subsequence((0..10).collect::<Vec<usize>>(), n).prop_map(Label::new);
        (one.clone(), one.clone(), one)
    })
}

proptest! {
    #[test]
    fn boxplus_composes(a in label(), r in 0usize..6, s in 0usize..6) {
        prop_assert_eq!(a.boxplus(r).boxplus(s), a.boxplus(r + s));
    }

    #[test]
    fn oplus_distributes_over_intersection(a in label(), b in label(), r in 0usize..6) {
        prop_assert_eq!(a.intersection(&b).oplus(r), a.oplus(r).intersection(&b.oplus(r)));
    }

    #[test]
    fn boxplus_is_monotone(a in label(), b in label(), r in 0usize..6) {
        let small = a.intersection(&b);
        prop_assert!(small.boxplus(r).is_subset(&a.boxplus(r)));
    }

    #[test]
    fn restrict_image_composes((a, a2, a3) in same_size_triple(), mask in any::<u64>()) {
        let sub = Label::new(a.indices().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| *s));
        let step = a.restrict_image(&a2, &sub).unwrap();
        prop_assert_eq!(a2.restrict_image(&a3, &step).unwrap(), a.restrict_image(&a3, &sub).unwrap());
    }

    #[test]
    fn order_isos_compose((a, b, c) in same_size_triple()) {
        let ab = a.order_iso(&b).unwrap();
        let bc = b.order_iso(&c).unwrap();
        prop_assert_eq!(ab.then(&bc).unwrap(), a.order_iso(&c).unwrap());
    }
}

#[test]
fn shift_examples() {
    assert_eq!(Label::new([0, 2]).oplus(3), Label::new([3, 5]));
    assert_eq!(Label::new([0, 2]).boxplus(3), Label::new([0, 1, 2, 3, 5]));
    assert_eq!(Label::numeral(3), Label::new([0, 1, 2]));
    assert!(Label::new([0, 1]).order_iso(&Label::new([4])).is_err());
}
