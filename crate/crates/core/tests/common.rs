#![allow(dead_code)]

use proptest::prelude::*;

use modal_succinctness::kripke::{Frame, Model};
use modal_succinctness::{Formula, Language};

pub fn formula(vars: u32, lang: Language, depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bot),
        (1..=vars).prop_map(Formula::pos),
        (1..=vars).prop_map(Formula::neg),
    ];
    leaf.prop_recursive(depth, 24, 2, move |inner| {
        let mut options: Vec<BoxedStrategy<Formula>> = vec![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::or(a, b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::and(a, b))
                .boxed(),
            inner.clone().prop_map(Formula::dia).boxed(),
            inner.clone().prop_map(Formula::boxed).boxed(),
        ];
        if lang == Language::Global {
            options.push(inner.clone().prop_map(Formula::exists).boxed());
            options.push(inner.prop_map(Formula::forall).boxed());
        }
        proptest::strategy::Union::new(options)
    })
}

pub fn model(max_states: usize, vars: u32) -> impl Strategy<Value = Model> {
    (1..=max_states).prop_flat_map(move |n| {
        (
            proptest::collection::vec(any::<bool>(), n * n),
            proptest::collection::vec(0..1u64 << vars, n),
        )
            .prop_map(move |(edges, labels)| {
                let f =
                    Frame::from_edges(n, (0..n * n).filter(|&i| edges[i]).map(|i| (i / n, i % n)));
                Model::from_labels(f, labels).unwrap()
            })
    })
}
