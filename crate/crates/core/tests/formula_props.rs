mod common;

use proptest::prelude::*;

use modal_succinctness::formula::parse_in;
use modal_succinctness::{parse, Error, Formula, Language, MeasureKind};

#[test]
fn display_examples() {
    let f = parse("[] [] ~p1 | <> p1");
    assert!(f.is_err(), "binary operators need parentheses");
    let f = parse("([] [] ~p1 | <> p1)").unwrap();
    assert_eq!(f.to_string(), "([] [] ~p1 | <> p1)");
    assert_eq!(f.len(), 6);
    assert!(matches!(
        parse_in("E p1", Language::Basic),
        Err(Error::UniversalInBasic)
    ));
}

proptest! {
    #[test]
    fn printing_round_trips(f in common::formula(3, Language::Global, 5)) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn negation_is_an_involution_preserving_length(f in common::formula(2, Language::Global, 5)) {
        let g = f.nnf_negate();
        prop_assert_eq!(g.len(), f.len());
        prop_assert_eq!(g.nnf_negate(), f);
    }

    #[test]
    fn negation_flips_truth(f in common::formula(2, Language::Global, 4), m in common::model(4, 2)) {
        let g = f.nnf_negate();
        for w in 0..m.state_count() {
            prop_assert_ne!(m.eval(w, &f), m.eval(w, &g));
        }
    }

    #[test]
    fn measure_vector_matches_single_measures(f in common::formula(3, Language::Global, 5)) {
        let all = f.measure_all();
        for kind in MeasureKind::applicable(Language::Global) {
            prop_assert_eq!(all.get(kind), f.measure(kind));
        }
        prop_assert_eq!(f.measure(MeasureKind::Length) as usize, f.len());
    }

    #[test]
    fn canonical_renaming_keeps_shape(f in common::formula(4, Language::Basic, 5)) {
        let c = f.canonical();
        prop_assert_eq!(c.len(), f.len());
        prop_assert_eq!(c.vars().len(), f.vars().len());
        prop_assert_eq!(c.canonical(), c.clone());
        let _: Formula = c;
    }
}
