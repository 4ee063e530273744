mod common;

use common::{f, formula};
use fik_core::Formula;
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::config(256))]

    #[test]
    fn render_parse_roundtrip(a in formula(5)) {
        prop_assert_eq!(Formula::parse(&a.render()).unwrap(), a);
    }

    #[test]
    fn subformulas_never_exceed_parent(a in formula(5)) {
        for b in a.subformulas() {
            prop_assert!(b.modal_degree() <= a.modal_degree());
            prop_assert!(b.size() <= a.size());
            prop_assert!(b.atoms().is_subset(&a.atoms()));
        }
    }

    #[test]
    fn size_counts_children(a in formula(5)) {
        let children: usize = a.children().map(|c| c.size()).sum();
        prop_assert_eq!(a.size(), 1 + children);
    }

    #[test]
    fn split_implications_rebuilds(a in formula(5)) {
        let (premises, goal) = a.split_implications();
        let rebuilt = premises.into_iter().rev().fold(goal, |acc, p| Formula::imp(p, acc));
        prop_assert_eq!(rebuilt, a);
    }
}

#[test]
fn precedence_and_associativity() {
    assert_eq!(f("a & b \\/ c -> d"), f("((a & b) \\/ c) -> d"));
    assert_eq!(f("a -> b -> c"), f("a -> (b -> c)"));
    assert_eq!(f("a | b | c"), f("(a \\/ b) \\/ c"));
    assert_eq!(f("~[]<>a & b"), f("(~([](<>a))) & b"));
    assert_eq!(f("a <-> b"), Formula::iff(Formula::atom("a"), Formula::atom("b")));
    assert_eq!(f("~a"), Formula::imp(Formula::atom("a"), Formula::Bot));
}

#[test]
fn rendering_is_minimal() {
    for text in ["(a -> b) -> c", "a & (b \\/ c)", "~(a & b)", "[](p \\/ q) -> (<>p -> []q) -> []q"] {
        assert_eq!(f(text).render(), text);
    }
}

#[test]
fn parse_errors_report_offset() {
    let e = Formula::parse("a & -> b").unwrap_err();
    assert_eq!(e.offset, 4);
    assert!(Formula::parse("(a").is_err());
    assert!(Formula::parse("A").is_err());
}
