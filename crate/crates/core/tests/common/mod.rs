#![allow(dead_code)]

use std::sync::OnceLock;

use fik_core::{enumerate_models, Formula, Model, Sequent};
use proptest::prelude::*;

pub fn f(text: &str) -> Formula {
    Formula::parse(text).unwrap()
}

pub fn seq(text: &str) -> Sequent {
    Sequent::parse(text).unwrap()
}

/// Formulas over `p` and `q` with at most `depth` nested connectives.
pub fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        3 => Just(Formula::atom("p")),
        3 => Just(Formula::atom("q")),
        1 => Just(Formula::Bot),
        1 => Just(Formula::Top),
    ];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            inner.clone().prop_map(Formula::boxed),
            inner.prop_map(Formula::dia),
        ]
    })
}

/// Small bi-nested sequents with up to two levels of blocks.
pub fn sequent() -> impl Strategy<Value = Sequent> {
    let flat = (prop::collection::vec(formula(2), 0..3), prop::collection::vec(formula(2), 0..3))
        .prop_map(|(g, d)| Sequent::new(g, d));
    flat.prop_recursive(2, 12, 3, |inner| {
        (
            prop::collection::vec(formula(2), 0..3),
            prop::collection::vec(formula(2), 0..3),
            prop::collection::vec(inner.clone(), 0..3),
            prop::collection::vec(inner, 0..2),
        )
            .prop_map(|(g, d, modal, imp)| {
                let mut s = Sequent::new(g, d);
                for b in modal {
                    s = s.with_modal(b);
                }
                for b in imp {
                    s = s.with_imp(b);
                }
                s
            })
    })
}

/// Every valid model with up to three worlds over `p` and `q`.
pub fn small_models() -> &'static [Model] {
    static MODELS: OnceLock<Vec<Model>> = OnceLock::new();
    MODELS.get_or_init(|| enumerate_models(3, ["p", "q"]).collect())
}

/// A model and one of its worlds.
pub fn pointed_model() -> impl Strategy<Value = (&'static Model, usize)> {
    (0..small_models().len()).prop_flat_map(|i| {
        let m = &small_models()[i];
        (Just(m), 0..m.len())
    })
}

/// Proptest settings without on-disk failure persistence.
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}
